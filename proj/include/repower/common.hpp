#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

namespace repower {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kHoursPerYear = 8760;

// Monsoon window used by the seasonality metric, half-open [begin, end).
inline constexpr int kMonsoonBeginHour = 4000;
inline constexpr int kMonsoonEndHour = 6000;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Shortest decimal representation that parses back to the same double.
// All file output goes through this so that load -> write -> load is
// bit-identical.
inline std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    while (first != last && (*first == ' ' || *first == '\t')) ++first;
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc()) throw Error("not a number: '" + std::string(text) + "'");
    for (const char* p = res.ptr; p != last; ++p)
        if (*p != ' ' && *p != '\t' && *p != '\r') throw Error("trailing junk after number: '" + std::string(text) + "'");
    return v;
}

inline std::int64_t parse_int(std::string_view text) {
    std::int64_t v = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    while (first != last && (*first == ' ' || *first == '\t')) ++first;
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc()) throw Error("not an integer: '" + std::string(text) + "'");
    for (const char* p = res.ptr; p != last; ++p)
        if (*p != ' ' && *p != '\t' && *p != '\r') throw Error("trailing junk after integer: '" + std::string(text) + "'");
    return v;
}

// FNV-1a, used for cache keys. Stable across platforms and runs.
inline std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

}  // namespace repower

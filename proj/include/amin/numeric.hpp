#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

namespace amin {

// Neumaier-compensated accumulator: the running sum is permutation-stable to
// well below 1e-12 for the magnitudes this library adds (probabilities).
struct NeumaierSum {
    double sum = 0.0;
    double compensation = 0.0;

    void add(double x) {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            compensation += (sum - t) + x;
        else
            compensation += (x - t) + sum;
        sum = t;
    }

    double value() const { return sum + compensation; }
};

// Shortest decimal string that round-trips to the same double.
inline std::string fmt_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    if (res.ec != std::errc{})
        throw std::runtime_error("fmt_double: to_chars failed");
    return std::string(buf, res.ptr);
}

// Fixed-point with the given number of decimals (used for timings).
inline std::string fmt_fixed(double v, int decimals) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v,
                             std::chars_format::fixed, decimals);
    if (res.ec != std::errc{})
        throw std::runtime_error("fmt_fixed: to_chars failed");
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::invalid_argument("parse_double: bad number '" +
                                    std::string(s) + "'");
    return v;
}

inline std::uint64_t parse_u64(std::string_view s) {
    std::uint64_t v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::invalid_argument("parse_u64: bad number '" +
                                    std::string(s) + "'");
    return v;
}

}  // namespace amin

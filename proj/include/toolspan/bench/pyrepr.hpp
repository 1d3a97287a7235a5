#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

namespace toolspan::bench {

// Formatting and rounding that reproduce what the question text would look
// like coming out of a Python f-string.

// repr(float): shortest round-trip digits, fixed notation for 1e-4 <= |x| <
// 1e16 (always with a fractional part), scientific with a two-digit exponent
// otherwise.
inline std::string py_float(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x < 0 ? "-inf" : "inf";
    char buf[64];
    const double ax = std::fabs(x);
    if (x == 0 || (ax >= 1e-4 && ax < 1e16)) {
        auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed);
        std::string s(buf, end);
        if (s.find('.') == std::string::npos) s += ".0";
        return s;
    }
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific);
    return std::string(buf, end);
}

inline std::string py_int(std::int64_t v) { return std::to_string(v); }

// round(x, 2): the decimal rounding of the exact binary value, halves to even.
// glibc's printf performs exactly that rounding.
inline double py_round2(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return std::strtod(buf, nullptr);
}

// round(x) with no digits: nearest integer, halves to even.
inline std::int64_t py_round(double x) { return static_cast<std::int64_t>(std::nearbyint(x)); }

// x rounded to 2 places, as an integer count of hundredths.
inline std::int64_t to_cents(double x) { return py_round(py_round2(x) * 100.0); }

inline std::string cents_to_string(std::int64_t cents) {
    std::string sign = cents < 0 ? "-" : "";
    std::uint64_t a = cents < 0 ? static_cast<std::uint64_t>(-(cents + 1)) + 1 : static_cast<std::uint64_t>(cents);
    std::string frac = std::to_string(a % 100);
    if (frac.size() < 2) frac = "0" + frac;
    if (frac.back() == '0') frac.pop_back();  // repr(round(x, 2))
    return sign + std::to_string(a / 100) + "." + frac;
}

template <class T, class Fmt>
std::string py_list(const std::vector<T>& items, Fmt fmt) {
    std::string s = "[";
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) s += ", ";
        s += fmt(items[i]);
    }
    return s + "]";
}

inline std::string py_list(const std::vector<std::int64_t>& items) {
    return py_list(items, [](std::int64_t v) { return py_int(v); });
}

inline std::string py_list(const std::vector<double>& items) {
    return py_list(items, [](double v) { return py_float(v); });
}

inline std::string py_matrix(const std::vector<std::vector<std::int64_t>>& rows) {
    return py_list(rows, [](const std::vector<std::int64_t>& r) { return py_list(r); });
}

}  // namespace toolspan::bench

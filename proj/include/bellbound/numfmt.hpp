#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

namespace bellbound {

/// Locale-independent formatting with `digits` significant digits
/// (17 round-trips a double).
inline std::string format_number(double v, int digits = 17) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
    return std::string(buf, r.ptr);
}

/// exp(log_value) written as mantissa and decimal exponent, so values beyond
/// double range still print (e.g. "4.7585391e+115").
inline std::string format_from_log(double log_value, int digits = 17) {
    const double v = std::exp(log_value);
    if (std::isfinite(v) && v != 0.0) return format_number(v, digits);
    const double log10v = log_value / std::log(10.0);
    double exponent = std::floor(log10v);
    double mantissa = std::pow(10.0, log10v - exponent);
    if (mantissa >= 10.0) {
        mantissa /= 10.0;
        exponent += 1.0;
    }
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, static_cast<long long>(exponent));
    std::string exp_text(buf, r.ptr);
    if (exponent >= 0) exp_text = "+" + exp_text;
    return format_number(mantissa, std::min(digits, 15)) + "e" + exp_text;
}

}  // namespace bellbound

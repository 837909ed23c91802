#pragma once

#include <charconv>
#include <cmath>
#include <complex>
#include <cstdio>
#include <span>
#include <string>
#include <string_view>

#include "fracdyn/error.hpp"

namespace fracdyn::fmt {

/// 17 significant digits: enough to round-trip any double.
[[nodiscard]] inline std::string real(double v) {
    if (v == 0.0) return "0";  // folds -0 into 0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

[[nodiscard]] inline std::string complex(std::complex<double> z) {
    const double im = z.imag() == 0.0 ? 0.0 : z.imag();
    std::string s = real(z.real());
    s += im < 0.0 ? "-" : "+";
    s += real(std::abs(im));
    s += "i";
    return s;
}

[[nodiscard]] inline std::string vector(std::span<const double> v, char sep = ',') {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += sep;
        s += real(v[i]);
    }
    return s;
}

/// Parses a decimal number or an exact ratio "p/q" (e.g. "2/3", "-1/8").
[[nodiscard]] inline double parse_real(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
        return s;
    };
    auto one = [](std::string_view s) {
        if (!s.empty() && s.front() == '+') s.remove_prefix(1);
        double v = 0.0;
        const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) {
            throw DomainError("not a number: '" + std::string(s) + "'");
        }
        return v;
    };
    text = trim(text);
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const double num = one(trim(text.substr(0, slash)));
        const double den = one(trim(text.substr(slash + 1)));
        if (den == 0.0) throw DomainError("zero denominator in '" + std::string(text) + "'");
        return num / den;
    }
    return one(text);
}

[[nodiscard]] inline std::vector<double> parse_list(std::string_view text) {
    std::vector<double> out;
    while (true) {
        const auto comma = text.find(',');
        out.push_back(parse_real(text.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

}  // namespace fracdyn::fmt

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <span>
#include <string>

#include "fracdyn/abm.hpp"
#include "fracdyn/error.hpp"

namespace fracdyn::io {

namespace detail {

inline std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", std::abs(v) < 1e-300 ? 0.0 : v);
    return buf;
}

}  // namespace detail

/// Single-series line chart of (n, x^i(n)) as a standalone SVG document. The
/// output depends only on the trajectory and the component index.
[[nodiscard]] inline std::string orbit_svg(const abm::Trajectory& tr, std::size_t component) {
    if (tr.states.empty()) throw DomainError("orbit_svg: empty trajectory");
    if (component >= tr.states.front().size()) throw DomainError("orbit_svg: component out of range");

    constexpr double width = 640.0, height = 400.0;
    constexpr double left = 80.0, right = 20.0, top = 40.0, bottom = 50.0;
    const double pw = width - left - right;
    const double ph = height - top - bottom;

    double lo = tr.states.front()[component];
    double hi = lo;
    for (const auto& s : tr.states) {
        lo = std::min(lo, s[component]);
        hi = std::max(hi, s[component]);
    }
    if (hi - lo <= 1e-12 * std::max(1.0, std::abs(hi))) {
        const double pad = std::max(1e-3, 0.1 * std::abs(hi));
        lo -= pad;
        hi += pad;
    }
    const double n_max = static_cast<double>(std::max<std::size_t>(tr.steps(), 1));
    auto px = [&](double n) { return left + pw * n / n_max; };
    auto py = [&](double v) { return top + ph * (hi - v) / (hi - lo); };

    const std::string idx = std::to_string(component + 1);
    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" viewBox=\"0 0 640 400\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"400\" fill=\"white\"/>\n";
    s += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">Fig. " + idx +
         "</text>\n";
    // axes
    s += "<g stroke=\"black\" stroke-width=\"1\">\n";
    s += "<line x1=\"" + detail::svg_num(left) + "\" y1=\"" + detail::svg_num(top + ph) + "\" x2=\"" +
         detail::svg_num(left + pw) + "\" y2=\"" + detail::svg_num(top + ph) + "\"/>\n";
    s += "<line x1=\"" + detail::svg_num(left) + "\" y1=\"" + detail::svg_num(top) + "\" x2=\"" +
         detail::svg_num(left) + "\" y2=\"" + detail::svg_num(top + ph) + "\"/>\n";
    s += "</g>\n";
    // ticks
    s += "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    constexpr int ticks = 5;
    for (int t = 0; t <= ticks; ++t) {
        const double n = n_max * t / ticks;
        const double x = px(n);
        s += "<line x1=\"" + detail::svg_num(x) + "\" y1=\"" + detail::svg_num(top + ph) + "\" x2=\"" +
             detail::svg_num(x) + "\" y2=\"" + detail::svg_num(top + ph + 5) + "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + detail::svg_num(x) + "\" y=\"" + detail::svg_num(top + ph + 18) +
             "\" text-anchor=\"middle\">" + detail::tick_label(std::round(n)) + "</text>\n";
        const double v = lo + (hi - lo) * t / ticks;
        const double y = py(v);
        s += "<line x1=\"" + detail::svg_num(left - 5) + "\" y1=\"" + detail::svg_num(y) + "\" x2=\"" +
             detail::svg_num(left) + "\" y2=\"" + detail::svg_num(y) + "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + detail::svg_num(left - 8) + "\" y=\"" + detail::svg_num(y + 4) +
             "\" text-anchor=\"end\">" + detail::tick_label(v) + "</text>\n";
    }
    s += "</g>\n";
    // axis labels
    s += "<text x=\"" + detail::svg_num(left + pw / 2) + "\" y=\"" + detail::svg_num(height - 10) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">n</text>\n";
    s += "<text x=\"16\" y=\"" + detail::svg_num(top + ph / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 16 " +
         detail::svg_num(top + ph / 2) + ")\">x^" + idx + "(n)</text>\n";
    // series
    s += "<path fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\" d=\"";
    for (std::size_t j = 0; j < tr.states.size(); ++j) {
        s += j == 0 ? "M" : " L";
        s += detail::svg_num(px(static_cast<double>(j)));
        s += ',';
        s += detail::svg_num(py(tr.states[j][component]));
    }
    s += "\"/>\n";
    s += "</svg>\n";
    return s;
}

}  // namespace fracdyn::io

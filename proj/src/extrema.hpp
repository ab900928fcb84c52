#pragma once

#include <algorithm>
#include <vector>

#include <boost/math/tools/minima.hpp>

namespace heatosc::detail {

struct Extrema {
    double x_min = 0.0, f_min = 0.0;
    double x_max = 0.0, f_max = 0.0;
};

// Extrema of a continuous f on [a, b]: `samples` uniform points plus `extra`,
// then Brent's method on the neighbourhood of the best samples.
template <class F>
Extrema find_extrema(const F& f, double a, double b, int samples,
                     const std::vector<double>& extra = {}, int bits = 52) {
    Extrema e;
    e.x_min = e.x_max = a;
    e.f_min = e.f_max = f(a);
    auto visit = [&](double x) {
        const double v = f(x);
        if (v < e.f_min) { e.f_min = v; e.x_min = x; }
        if (v > e.f_max) { e.f_max = v; e.x_max = x; }
    };
    const double h = (b - a) / std::max(1, samples);
    for (int i = 1; i <= samples; ++i) visit(a + h * i);
    for (double x : extra) {
        if (x >= a && x <= b) visit(x);
    }
    const auto lo = boost::math::tools::brent_find_minima(
        f, std::max(a, e.x_min - h), std::min(b, e.x_min + h), bits);
    if (lo.second < e.f_min) { e.f_min = lo.second; e.x_min = lo.first; }
    const auto neg = [&](double x) { return -f(x); };
    const auto hi = boost::math::tools::brent_find_minima(
        neg, std::max(a, e.x_max - h), std::min(b, e.x_max + h), bits);
    if (-hi.second > e.f_max) { e.f_max = -hi.second; e.x_max = hi.first; }
    return e;
}

}  // namespace heatosc::detail

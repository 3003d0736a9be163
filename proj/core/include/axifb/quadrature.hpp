#pragma once

#include <array>
#include <cstddef>

#include <boost/math/quadrature/gauss.hpp>

namespace axifb {

// Fixed n-point Gauss-Legendre rule mapped to [a, b]; nodes and weights come from boost.
template <std::size_t N, class Fn>
void gauss_panel(double a, double b, Fn&& visit) {
    using G = boost::math::quadrature::gauss<double, N>;
    const auto& x = G::abscissa();
    const auto& w = G::weights();
    double c = 0.5 * (a + b), hw = 0.5 * (b - a);
    // boost stores the nonnegative half of the symmetric rule
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) {
            visit(c, hw * w[i]);
        } else {
            visit(c - hw * x[i], hw * w[i]);
            visit(c + hw * x[i], hw * w[i]);
        }
    }
}

template <std::size_t N, class Fn>
double gauss_integrate(double a, double b, std::size_t panels, Fn&& f) {
    double sum = 0, step = (b - a) / double(panels);
    for (std::size_t p = 0; p < panels; ++p)
        gauss_panel<N>(a + p * step, a + (p + 1) * step, [&](double x, double w) { sum += w * f(x); });
    return sum;
}

}  // namespace axifb

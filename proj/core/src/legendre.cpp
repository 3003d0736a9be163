#include "axifb/legendre.hpp"

#include <cmath>

#include "axifb/errors.hpp"
#include "axifb/quadrature.hpp"

namespace axifb {

double hyp2f1(double a, double b, double c, double z) {
    if (!(std::abs(z) < 1)) throw DomainError("hyp2f1: |z| must be < 1");
    // near z = 1 convergence is slow; allow many more terms there
    const int cap = (z > 0.9) ? 200000 : 20000;
    long double term = 1, sum = 1;
    int small = 0;
    for (int k = 0; k < cap; ++k) {
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0L)) * z;
        sum += term;
        if (term == 0 || std::abs(term / sum) < 1e-16L) {
            if (++small == 3) return double(sum);
        } else {
            small = 0;
        }
    }
    throw NumericalError("hyp2f1: series did not converge", double(term));
}

namespace {
void check_arg(double s) {
    if (!(s > -1 && s <= 1)) throw DomainError("legendre: argument must lie in (-1, 1]");
}
}  // namespace

double legendre_P(double nu, double s) {
    check_arg(s);
    return hyp2f1(-nu, nu + 1, 1, 0.5 * (1 - s));
}

double legendre_P_prime(double nu, double s) {
    check_arg(s);
    return 0.5 * nu * (nu + 1) * hyp2f1(1 - nu, nu + 2, 2, 0.5 * (1 - s));
}

double legendre_P_second(double nu, double s) {
    check_arg(s);
    double a = -nu, b = nu + 1;
    return 0.25 * a * (a + 1) * b * (b + 1) / 2.0 * hyp2f1(a + 2, b + 2, 3, 0.5 * (1 - s));
}

double legendre_Q1(double s) {
    if (!(std::abs(s) < 1)) throw DomainError("legendre_Q1: |s| must be < 1");
    return 0.5 * s * std::log((1 + s) / (1 - s)) - 1;
}

namespace {

LegendreConstants compute_constants() {
    const double nu = 1.5;
    auto dp = [&](double s) { return legendre_P_prime(nu, s); };
    double lo = 0, hi = 0;
    bool found = false;
    double prev = dp(-0.999);
    for (int i = 1; i <= 999; ++i) {
        double s = -0.999 + 0.001 * i;
        double cur = dp(s);
        if (prev * cur <= 0) {
            lo = s - 0.001;
            hi = s;
            found = true;
            break;
        }
        prev = cur;
    }
    if (!found) throw NumericalError("find_theta_star: root of P'_{3/2} not bracketed in (-1,0)");
    double flo = dp(lo);
    for (int i = 0; i < 60 && hi - lo > 1e-10; ++i) {
        double m = 0.5 * (lo + hi);
        double fm = dp(m);
        if ((fm < 0) == (flo < 0)) { lo = m; flo = fm; } else { hi = m; }
    }
    double s = 0.5 * (lo + hi);
    for (int i = 0; i < 8; ++i) {
        double step = dp(s) / legendre_P_second(nu, s);
        s -= step;
        if (std::abs(step) < 1e-16) break;
    }
    if (std::abs(dp(s)) > 1e-12) throw NumericalError("find_theta_star: Newton refinement failed", dp(s));

    LegendreConstants c{};
    c.s_star = s;
    c.theta_star = std::acos(s);
    c.theta_star_deg = c.theta_star * 180.0 / M_PI;
    c.m0 = s * s / 8;

    // int over the upper half circle of x1^3 x2^2, x1 = sin(th), x2 = cos(th)
    double arc = gauss_integrate<20>(0.0, 0.5 * M_PI, 8, [](double th) {
        double a = std::sin(th), b = std::cos(th);
        return a * a * a * b * b;
    });
    c.beta = 1.0 / std::sqrt(arc);

    // with mu = -cos(th): int (1 - mu^2) P'(mu)^2 dmu over (s_star, 1)
    double norm2 = gauss_integrate<20>(s, 1.0, 16, [&](double mu) {
        double d = legendre_P_prime(nu, mu);
        return (1 - mu * mu) * d * d;
    });
    c.beta0 = 1.0 / std::sqrt(norm2);
    c.beta0_bernoulli = std::sqrt(-s) / ((1 - s * s) * std::abs(legendre_P_second(nu, s)));
    return c;
}

}  // namespace

const LegendreConstants& find_theta_star() {
    static const LegendreConstants c = compute_constants();
    return c;
}

}  // namespace axifb

#include "axifb/eos.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <sstream>

#include "axifb/errors.hpp"

namespace axifb {

namespace {

constexpr double kResidualTol = 1e-13;
constexpr double kQuadTol = 1e-11;
constexpr unsigned kQuadDepth = 20;

// Newton on an increasing function, falling back to bisection whenever the
// step leaves the bracket. f(lo) < 0 < f(hi) is assumed.
template <class Fn, class DFn>
double safeguarded_newton(Fn f, DFn df, double lo, double hi, const char* what) {
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        double fx = f(x);
        if (std::abs(fx) < kResidualTol) return x;
        if (fx < 0) lo = x; else hi = x;
        double d = df(x);
        double xn = (d > 0) ? x - fx / d : 0.5 * (lo + hi);
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
        if (hi - lo < 1e-15 * std::max(1.0, std::abs(x))) return xn;
        x = xn;
    }
    double r = f(x);
    if (std::abs(r) < 1e3 * kResidualTol) return x;
    throw NumericalError(std::string(what) + ": no convergence", r);
}

template <class Fn>
double gk15(Fn f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, kQuadDepth, kQuadTol);
}

}  // namespace

Incompressible::Incompressible(double rho_bar0) : rho0_(rho_bar0) {
    if (!(rho_bar0 > 0)) throw DomainError("rho_bar0 must be positive");
}

BernoulliState Incompressible::invert(double t, double s) const {
    if (t < 0) throw DomainError("t must be nonnegative");
    return BernoulliState{t, s, rho0_, 0.0, 0.0};
}

FValue Incompressible::F(double t, double) const {
    if (t < 0) throw DomainError("t must be nonnegative");
    return FValue{t / rho0_, 1.0 / rho0_, 0.0};
}

GammaLaw::GammaLaw(const EosParams& p) : p_(p) {
    if (!(p_.gamma > 1)) throw DomainError("gamma must exceed 1");
    if (!(p_.A > 0) || !(p_.rho_bar0 > 0) || !(p_.g > 0)) throw DomainError("A, rho_bar0, g must be positive");
    if (p_.eps0 < 0) p_.eps0 = 1e-3 * p_.rho_bar0;
    if (!(p_.eps0 > 0)) throw DomainError("eps0 must be positive");
    x2_st_ = p_.A * p_.gamma * std::pow(p_.rho_bar0, p_.gamma - 1) / (2 * p_.g);
}

double GammaLaw::pressure(double rho) const {
    if (rho < 0) throw DomainError("negative density");
    return p_.A * std::pow(rho, p_.gamma);
}

double GammaLaw::dpressure(double rho) const {
    if (rho < 0) throw DomainError("negative density");
    return p_.A * p_.gamma * std::pow(rho, p_.gamma - 1);
}

double GammaLaw::enthalpy(double rho) const {
    if (!(rho > 0)) throw DomainError("enthalpy needs positive density");
    double k = p_.A * p_.gamma / (p_.gamma - 1);
    return k * (std::pow(rho, p_.gamma - 1) - std::pow(p_.rho_bar0, p_.gamma - 1));
}

double GammaLaw::critical_density_s(double s) const {
    auto q = [&](double r) { return 0.5 * dpressure(r) + enthalpy(r) - p_.g * s; };
    auto dq = [&](double r) {
        return 0.5 * p_.A * p_.gamma * (p_.gamma - 1) * std::pow(r, p_.gamma - 2) + dpressure(r) / r;
    };
    double lo = 1e-300;
    double k = p_.A * p_.gamma / (p_.gamma - 1);
    if (-k * std::pow(p_.rho_bar0, p_.gamma - 1) - p_.g * s >= 0)
        throw DomainError("no critical density at this height");
    double hi = p_.rho_bar0;
    while (q(hi) <= 0) hi *= 2;
    lo = std::min(lo, hi);
    return safeguarded_newton(q, dq, lo, hi, "critical_density");
}

double GammaLaw::critical_density(double x2) const {
    if (x2 < 0 || x2 > x2_st_) {
        std::ostringstream os;
        os << "critical_density: x2=" << x2 << " outside [0, " << x2_st_ << "]";
        throw DomainError(os.str());
    }
    return critical_density_s(x2_st_ - x2);
}

double GammaLaw::t_critical(double s) const {
    double rc = critical_density_s(s);
    return dpressure(rc) * rc * rc / (2 * p_.g * p_.rho_bar0 * p_.rho_bar0);
}

double GammaLaw::rho_max(double s) const {
    double base = std::pow(p_.rho_bar0, p_.gamma - 1) + p_.g * s * (p_.gamma - 1) / (p_.A * p_.gamma);
    if (!(base > 0)) throw StateError("no density with h(rho) = g s");
    return std::pow(base, 1.0 / (p_.gamma - 1));
}

double GammaLaw::h_scalar(double rho, double t, double s) const {
    return p_.g * p_.rho_bar0 * p_.rho_bar0 * t / (rho * rho) + enthalpy(rho) - p_.g * s;
}

BernoulliState GammaLaw::invert(double t, double s) const {
    if (t < 0 || s < 0) {
        std::ostringstream os;
        os << "invert_density: t=" << t << ", s=" << s << " must be nonnegative";
        throw DomainError(os.str());
    }
    double rc = critical_density_s(s);
    double tc = dpressure(rc) * rc * rc / (2 * p_.g * p_.rho_bar0 * p_.rho_bar0);
    if (t > tc) {
        std::ostringstream os;
        os << "invert_density: no subsonic root at t=" << t << ", s=" << s << " (t_cr=" << tc << ")";
        throw StateError(os.str());
    }
    double lo = rc + p_.eps0;
    double hi = rho_max(s);
    auto G = [&](double r) { return h_scalar(r, t, s); };
    double gb = p_.g * p_.rho_bar0 * p_.rho_bar0;
    auto dG = [&](double r) { return dpressure(r) / r - 2 * gb * t / (r * r * r); };
    if (!(lo < hi) || G(lo) >= 0) {
        std::ostringstream os;
        os << "invert_density: root within eps0 of critical density at t=" << t << ", s=" << s;
        throw SubsonicityError(os.str());
    }
    double rho = (G(hi) <= 0) ? hi : safeguarded_newton(G, dG, lo, hi, "invert_density");
    double gr = dG(rho);
    BernoulliState st{t, s, rho, -(gb / (rho * rho)) / gr, p_.g / gr};
    return st;
}

double GammaLaw::bernoulli_residual(const BernoulliState& st) const {
    // |grad u|^2 / (2 x1^2 rho^2) + h(rho) + g x2 = p'(rho0)/2 in physical variables,
    // with |grad u|^2/x1^2 = 2 rho0^2 g t and x2 = x2_st - s.
    double q2 = 2 * p_.rho_bar0 * p_.rho_bar0 * p_.g * st.t;
    double x2 = x2_st_ - st.s;
    return q2 / (2 * st.rho * st.rho) + enthalpy(st.rho) + p_.g * x2 - 0.5 * dpressure(p_.rho_bar0);
}

FValue GammaLaw::F(double t, double s) const {
    if (t < 0) throw DomainError("F: t must be nonnegative");
    FValue out;
    BernoulliState end = invert(t, s);
    out.d1F = 1.0 / end.rho;
    if (t == 0) return out;
    out.F = gk15([&](double tau) { return 1.0 / invert(tau, s).rho; }, 0.0, t);
    out.d2F = gk15(
        [&](double tau) {
            auto st = invert(tau, s);
            return -st.d_ds / (st.rho * st.rho);
        },
        0.0, t);
    return out;
}

double GammaLaw::lambda(double x2) const {
    return 2 * x2 / p_.rho_bar0 - F(x2, x2).F;
}

double GammaLaw::lambda_prime(double x2) const {
    return 1.0 / p_.rho_bar0 - d2F_diag(x2);
}

double GammaLaw::d2F_diag(double x2) const {
    return F(x2, x2).d2F;
}

double GammaLaw::lambda_by_parts(double x2) const {
    if (x2 == 0) return 0.0;
    double integral = gk15(
        [&](double tau) {
            auto st = invert(tau, x2);
            return -tau * st.d_dt / (st.rho * st.rho);
        },
        0.0, x2);
    return x2 / p_.rho_bar0 + integral;
}

std::unique_ptr<ConstitutiveModel> make_model(const std::string& kind, const EosParams& p) {
    if (kind == "incompressible") return std::make_unique<Incompressible>(p.rho_bar0);
    if (kind == "gamma") return std::make_unique<GammaLaw>(p);
    throw DomainError("unknown eos model: " + kind);
}

}  // namespace axifb

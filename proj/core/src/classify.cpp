#include "axifb/classify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "axifb/errors.hpp"
#include "axifb/legendre.hpp"
#include "axifb/parallel.hpp"
#include "axifb/quadrature.hpp"

namespace axifb {

double HomogeneousField::value(Point x) const {
    double dx = x.x1 - c_.x1, dy = x.x2 - c_.x2, r = std::hypot(dx, dy);
    if (r == 0) return 0.0;
    return std::pow(r, d_) * f_.value({c_.x1 + dx / r, c_.x2 + dy / r});
}

Vec2 HomogeneousField::gradient(Point x) const {
    double dx = x.x1 - c_.x1, dy = x.x2 - c_.x2, r = std::hypot(dx, dy);
    if (r == 0) return {0, 0};
    Vec2 xi{dx / r, dy / r}, tau{-xi.b, xi.a};
    Point p{c_.x1 + xi.a, c_.x2 + xi.b};
    double u = f_.value(p), ut = f_.gradient(p).dot(tau);
    double rd = std::pow(r, d_ - 1);
    return {rd * (d_ * u * xi.a + ut * tau.a), rd * (d_ * u * xi.b + ut * tau.b)};
}

HomogeneousField homogeneous_replacement(const Field& f, double degree, Point c) { return HomogeneousField(f, degree, c); }

GridField blowup(const Field& f, Point c, PointKind kind, double r, int n) {
    if (n < 4) throw DomainError("blowup: need at least 4 cells per unit");
    double d = scaling_exponent(kind), h = 1.0 / n;
    f.check_ball(c, r);
    GridSpec g = kind == PointKind::Stagnation ? GridSpec::local_box(-1, 1, -1, 1, h) : GridSpec::axis_box(1, -1, 1, h);
    double s = std::pow(r, -d);
    std::vector<double> v(g.size());
    for (int j = 0; j < g.n2; ++j)
        for (int i = 0; i < g.n1; ++i) {
            Point x{g.x1(i), g.x2(j)};
            // corners of the unit box lie outside the ball; sample the nearest point inside
            double q = std::hypot(x.x1, x.x2);
            if (q > 1) x = {x.x1 / q, x.x2 / q};
            v[std::size_t(j) * g.n1 + i] = std::max(0.0, s * f.value({c.x1 + r * x.x1, c.x2 + r * x.x2}));
        }
    return GridField(g, std::move(v));
}

double blowup_distance(const GridField& a, const GridField& b) {
    if (a.grid().n1 != b.grid().n1 || a.grid().n2 != b.grid().n2) throw DomainError("blowup_distance: lattices differ");
    double s = 0, h2 = a.grid().h * a.grid().h;
    for (std::size_t k = 0; k < a.values().size(); ++k) {
        double d = a.values()[k] - b.values()[k];
        s += d * d * h2;
    }
    return std::sqrt(s);
}

double weighted_density_at(const Field& f, Point c, PointKind kind, double r) {
    switch (kind) {
        case PointKind::Stagnation:
            return integrate_ball(f, c, r, [&](const Node& n) { return n.chi ? std::max(n.x2 - c.x2, 0.0) : 0.0; }) /
                   std::pow(r, 3);
        case PointKind::Axis:
            return integrate_ball(f, c, r, [&](const Node& n) { return n.chi ? n.x1 - c.x1 : 0.0; }) / std::pow(r, 3);
        case PointKind::Origin:
            return integrate_ball(f, c, r,
                                  [&](const Node& n) { return n.chi ? (n.x1 - c.x1) * std::max(n.x2 - c.x2, 0.0) : 0.0; }) /
                   std::pow(r, 4);
    }
    return 0;
}

DensityMeasurement weighted_density(const Field& f, Point c, PointKind kind, const std::vector<double>& radii) {
    if (radii.empty()) throw DomainError("weighted_density: insufficient data (no radii)");
    DensityMeasurement out;
    out.radii = radii;
    out.values.resize(radii.size());
    parallel_for(int(radii.size()), [&](int k) { out.values[k] = weighted_density_at(f, c, kind, radii[k]); });
    double r0 = *std::min_element(radii.begin(), radii.end());
    std::vector<std::size_t> use;
    for (std::size_t k = 0; k < radii.size(); ++k)
        if (radii[k] <= 10 * r0 * (1 + 1e-12)) use.push_back(k);
    if (use.size() < 3) throw DomainError("weighted_density: insufficient data (fewer than 3 radii in the smallest decade)");
    double sr = 0, sd = 0, srr = 0, srd = 0, n = double(use.size());
    for (auto k : use) {
        sr += radii[k];
        sd += out.values[k];
        srr += radii[k] * radii[k];
        srd += radii[k] * out.values[k];
    }
    double den = n * srr - sr * sr;
    out.slope = den > 0 ? (n * srd - sr * sd) / den : 0.0;
    out.limit = (sd - out.slope * sr) / n;
    double res = 0;
    for (auto k : use) res = std::max(res, std::abs(out.values[k] - out.limit - out.slope * radii[k]));
    out.sigma = res + std::abs(out.slope) * r0;
    out.used = int(use.size());
    return out;
}

const char* to_string(Label l) {
    switch (l) {
        case Label::StokesCorner: return "StokesCorner";
        case Label::AxisParabola: return "AxisParabola";
        case Label::Garabedian: return "Garabedian";
        case Label::HorizontalFlat: return "HorizontalFlat";
        case Label::Cusp: return "Cusp";
        case Label::Ambiguous: return "Ambiguous";
    }
    return "?";
}

std::vector<Candidate> candidates(PointKind kind) {
    switch (kind) {
        case PointKind::Stagnation:
            return {{Label::StokesCorner, std::sqrt(3.0) / 3}, {Label::HorizontalFlat, 2.0 / 3}, {Label::Cusp, 0.0}};
        case PointKind::Axis:
            // the blow-up norm separates the parabola from the trivial case
            return {{Label::AxisParabola, 2.0 / 3}, {Label::Cusp, 0.0}};
        case PointKind::Origin:
            return {{Label::Garabedian, find_theta_star().m0}, {Label::HorizontalFlat, 0.125}, {Label::Cusp, 0.0}};
    }
    return {};
}

AmplitudeFit fit_amplitude(const Field& f, Point c, double r, double scale, const ProfileSpec& p, bool weighted) {
    double vp = 0, pp = 0, vv = 0;
    f.integrate_ball(c, r, [&](const Node& n, double w) {
        Point x{(n.x1 - c.x1) / r, (n.x2 - c.x2) / r};
        double wt = weighted ? w / x.x1 : w;
        if (weighted && !(x.x1 > 0)) return;
        double v = n.u / scale, q = p.value(x);
        vp += wt * v * q;
        pp += wt * q * q;
        vv += wt * v * v;
    });
    AmplitudeFit fit;
    if (pp > 0) fit.amp = vp / pp;
    double res2 = std::max(0.0, vv - 2 * fit.amp * vp + fit.amp * fit.amp * pp);
    fit.residual = vv > 0 ? std::sqrt(res2 / vv) : 0.0;
    return fit;
}

namespace {

// ||u(c + r x) / r^d|| on the unit (half) ball, weighted by 1/x1 off stagnation points.
double blowup_norm(const Field& f, Point c, PointKind kind, double r) {
    double d = scaling_exponent(kind), s = 0;
    bool weighted = kind != PointKind::Stagnation;
    f.integrate_ball(c, r, [&](const Node& n, double w) {
        double v = n.u / std::pow(r, d);
        double wt = w / (r * r);
        if (weighted) wt *= r / (n.x1 - c.x1);
        s += wt * v * v;
    });
    return std::sqrt(s);
}

std::vector<double> ray_slopes(const Field& f, Point c, double r) {
    std::vector<double> out;
    double lo, hi;
    arc_angles(c, r, lo, hi);
    if (!(hi > lo)) return out;
    lo += 1e-9;
    hi -= 1e-9;
    auto at = [&](double phi) { return Point{c.x1 + r * std::sin(phi), c.x2 + r * std::cos(phi)}; };
    const int n = 4096;
    bool prev = f.positive(at(lo));
    double aprev = lo;
    for (int k = 1; k <= n; ++k) {
        double a = lo + (hi - lo) * k / n;
        bool cur = f.positive(at(a));
        if (cur != prev) {
            double a0 = aprev, a1 = a;
            for (int it = 0; it < 60; ++it) {
                double m = 0.5 * (a0 + a1);
                if (f.positive(at(m)) == prev) a0 = m; else a1 = m;
            }
            Point x = at(0.5 * (a0 + a1));
            // crossings produced by the axis itself are not free-boundary rays
            if (std::abs(x.x1 - c.x1) > 1e-3 * r) out.push_back((x.x2 - c.x2) / (x.x1 - c.x1));
        }
        prev = cur;
        aprev = a;
    }
    return out;
}

}  // namespace

Classification classify(const Field& f, Point c, PointKind kind, const ClassifyOptions& opt) {
    Classification out;
    out.point = c;
    out.kind = kind;
    std::vector<double> radii = opt.radii.empty() ? default_radii(f, c, kind) : opt.radii;
    out.density = weighted_density(f, c, kind, radii);
    const double D = out.density.limit, sigma = out.density.sigma;

    auto cands = candidates(kind);
    std::size_t best = 0;
    for (std::size_t k = 1; k < cands.size(); ++k)
        if (std::abs(D - cands[k].density) < std::abs(D - cands[best].density)) best = k;
    out.nearest = cands[best].density;
    out.gap = std::abs(D - out.nearest);
    for (const auto& cd : cands)
        if (std::abs(D - cd.density) <= 2 * sigma) out.tied.push_back(cd.label);
    double scale = kind == PointKind::Stagnation ? c.x1 : kind == PointKind::Axis ? c.x2 : 1.0;
    out.physical_density = D * scale / opt.rho_bar0;

    double rmin = *std::min_element(radii.begin(), radii.end()), rmax = *std::max_element(radii.begin(), radii.end());
    out.r_fit = opt.r_fit > 0 ? opt.r_fit : std::min(10 * rmin, rmax);
    out.blowup_norm_small = blowup_norm(f, c, kind, out.r_fit);
    out.blowup_norm_large = blowup_norm(f, c, kind, rmax);

    if (out.tied.size() > 1) {
        out.label = Label::Ambiguous;
        return out;
    }
    out.tied.clear();
    out.label = cands[best].label;
    if (out.label == Label::AxisParabola) {
        // density 2/3 also belongs to the trivial blow-up; it decays to zero
        bool trivial = !(out.blowup_norm_small > 0) || out.blowup_norm_small < 0.5 * out.blowup_norm_large;
        if (trivial) out.label = Label::HorizontalFlat;
    }

    const double d = scaling_exponent(kind), rf = out.r_fit;
    const Point zero{0, 0};
    switch (out.label) {
        case Label::StokesCorner: {
            AmplitudeFit a = fit_amplitude(f, c, rf, std::pow(rf, d), {ProfileKind::StokesCorner, 1.0, zero}, false);
            out.fit_name = "amp";
            out.fit_param = a.amp;
            out.fit_residual = a.residual;
            out.ray_slopes = ray_slopes(f, c, rf);
            break;
        }
        case Label::AxisParabola: {
            AmplitudeFit a = fit_amplitude(f, c, rf, std::pow(rf, d), {ProfileKind::AxisParabola, 1.0, zero}, true);
            out.fit_name = "alpha";
            out.fit_param = a.amp;
            out.fit_residual = a.residual;
            break;
        }
        case Label::Garabedian: {
            AmplitudeFit a = fit_amplitude(f, c, rf, std::pow(rf, d), {ProfileKind::GarabedianBubble, 1.0, zero}, true);
            out.fit_name = "beta0";
            out.fit_param = a.amp;
            out.fit_residual = a.residual;
            out.ray_slopes = ray_slopes(f, c, rf);
            break;
        }
        case Label::HorizontalFlat:
            if (kind == PointKind::Origin) {
                // frequency normalization: u(r x) / ||u||_{L2_w(dB_r^+)} against beta x1^2 x2^+
                double J = integrate_arc(f, c, rf, [&](const Node& n) { return n.u * n.u * n.rx1; });
                if (J > 0) {
                    double beta = find_theta_star().beta;
                    AmplitudeFit a =
                        fit_amplitude(f, c, rf, std::sqrt(J), {ProfileKind::FlatOrigin, beta, zero}, true);
                    out.fit_name = "beta";
                    out.fit_param = a.amp * beta;
                    out.fit_residual = a.residual;
                }
            }
            break;
        default:
            break;
    }
    return out;
}

FrequencyBlowup frequency_blowup(const Field& f, const ConstitutiveModel& m, const std::vector<double>& radii) {
    const Point o{0, 0};
    RadialSweep sw = frequency_quantities(f, m, o, radii);
    FrequencyBlowup out;
    out.N0 = sw.rows.front().N;
    out.rows.resize(radii.size());
    const double beta = find_theta_star().beta;
    const ProfileSpec flat = flat_origin(beta);
    parallel_for(int(radii.size()), [&](int k) {
        FrequencyRow& row = out.rows[k];
        double r = radii[k];
        row.r = r;
        row.D = sw.rows[k].D;
        row.N = sw.rows[k].N;
        double J = integrate_arc(f, o, r, [&](const Node& n) { return n.u * n.u * n.rx1; });
        if (!(J > 0)) {
            std::ostringstream os;
            os << "frequency blow-up undefined: J(" << r << ") = 0";
            throw DomainError(os.str());
        }
        row.norm = std::sqrt(J);
        ScaledField v(f, o, r, 1.0 / row.norm);
        double n2 = 0, vp = 0, pp = 0;
        v.integrate_arc(o, 1.0, [&](const Node& n, double w) {
            double p = flat.value({n.x1, n.x2});
            n2 += w * n.u * n.u * n.rx1;
            vp += w * n.u * p * n.rx1;
            pp += w * p * p * n.rx1;
        });
        row.unit_norm = std::sqrt(n2);
        row.fit_coef = pp > 0 ? vp / pp : 0.0;
        row.fit_residual = std::sqrt(std::max(0.0, n2 - 2 * row.fit_coef * vp + row.fit_coef * row.fit_coef * pp));
        double g2 = 0;
        v.integrate_ball(o, 1.0, [&](const Node& n, double w) { g2 += w * n.g.norm2() * n.rx1; });
        row.grad_norm = std::sqrt(g2);
        row.deficit = gauss_integrate<8>(0.5, 1.0, 4, [&](double rho) {
            double s = 0;
            v.integrate_arc(o, rho, [&](const Node& n, double w) {
                double e = n.g.a * n.x1 + n.g.b * n.x2 - out.N0 * n.u;
                s += w * e * e * n.rx1;
            });
            return s / std::pow(rho, 6);
        });
    });
    return out;
}

}  // namespace axifb

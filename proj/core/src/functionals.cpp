#include "axifb/functionals.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>

#include "axifb/errors.hpp"
#include "axifb/parallel.hpp"

namespace axifb {

namespace {
std::atomic<int> g_threads{1};
}

void set_num_threads(int n) { g_threads = std::max(1, n); }
int num_threads() { return g_threads; }

const char* to_string(PointKind k) {
    switch (k) {
        case PointKind::Stagnation: return "stagnation";
        case PointKind::Axis: return "axis";
        case PointKind::Origin: return "origin";
    }
    return "?";
}

PointKind point_kind_from_string(const std::string& s) {
    if (s == "stagnation") return PointKind::Stagnation;
    if (s == "axis") return PointKind::Axis;
    if (s == "origin") return PointKind::Origin;
    throw DomainError("unknown point kind: " + s);
}

PointKind kind_of(Point c) {
    if (c.x1 == 0 && c.x2 == 0) return PointKind::Origin;
    if (c.x1 == 0) return PointKind::Axis;
    if (c.x2 == 0 && c.x1 > 0) return PointKind::Stagnation;
    throw DomainError("point is not degenerate: need x1 * x2 = 0 with x1 >= 0");
}

double scaling_exponent(PointKind k) {
    switch (k) {
        case PointKind::Stagnation: return 1.5;
        case PointKind::Axis: return 2.0;
        case PointKind::Origin: return 2.5;
    }
    return 0;
}

double integrate_ball(const Field& f, Point c, double r, const std::function<double(const Node&)>& integrand) {
    double s = 0;
    f.integrate_ball(c, r, [&](const Node& n, double w) { s += w * integrand(n); });
    return s;
}

double integrate_arc(const Field& f, Point c, double r, const std::function<double(const Node&)>& integrand) {
    double s = 0;
    f.integrate_arc(c, r, [&](const Node& n, double w) { s += w * integrand(n); });
    return s;
}

namespace {

// Constitutive data at one node.
struct Local {
    double G = 0, t = 0, H = 1, q = 1, f2 = 0;
    double lam = 0, lamp = 0, d2Fd = 0;
};

template <class E>
[[noreturn]] void rethrow_at(const E& e, const Node& n) {
    std::ostringstream os;
    os << e.what() << " [node x1=" << n.x1 << ", x2=" << n.x2 << "]";
    throw E(os.str());
}

Local local(const Node& n, const ConstitutiveModel& m) {
    Local L;
    double rho0 = m.rho_bar0();
    L.H = rho0;
    L.q = 1.0 / rho0;
    L.lamp = 1.0 / rho0;
    L.lam = n.x2 / rho0;
    L.G = n.g.norm2();
    if (m.incompressible()) {
        L.t = L.G / (n.x1 * n.x1);
        return L;
    }
    try {
        if (L.G > 0) {
            L.t = L.G / (n.x1 * n.x1);
            FValue fv = m.F(L.t, n.x2);
            L.H = 1.0 / fv.d1F;
            L.q = fv.F / L.t;
            L.f2 = fv.d2F;
        } else if (n.chi) {
            L.H = m.invert(0.0, n.x2).rho;
            L.q = 1.0 / L.H;
        }
        if (n.chi) {
            L.d2Fd = m.d2F_diag(n.x2);
            L.lam = m.lambda(n.x2);
            L.lamp = 1.0 / rho0 - L.d2Fd;
        }
    } catch (const SubsonicityError& e) {
        rethrow_at(e, n);
    } catch (const StateError& e) {
        rethrow_at(e, n);
    } catch (const DomainError& e) {
        rethrow_at(e, n);
    }
    return L;
}

}  // namespace

BallMoments ball_moments(const Field& f, const ConstitutiveModel& m, Point c, double r) {
    BallMoments b;
    const double rho0 = m.rho_bar0();
    f.integrate_ball(c, r, [&](const Node& n, double w) {
        b.area += w;
        double chi = n.chi ? 1.0 : 0.0;
        double dx1 = n.x1 - c.x1, dx2 = n.x2 - c.x2, dx2p = std::max(dx2, 0.0);
        b.Vplus += w * n.x1 * dx2p * (1 - chi);
        b.dens_stag += w * dx2p * chi;
        b.dens_axis += w * dx1 * chi;
        b.dens_origin += w * dx1 * dx2p * chi;
        if (!n.chi && n.g.norm2() == 0) return;
        Local L = local(n, m);
        double Fv = L.t * L.q;
        b.EF += w * (L.G * n.rx1 * L.q + n.x1 * L.lam * chi);
        b.EH += w * (L.G * n.rx1 / L.H + n.x1 * n.x2 * chi / rho0);
        b.K1x2 += w * (L.G * n.rx1 * (1.0 / L.H - L.q) - n.x1 * (L.lam - n.x2 / rho0) * chi);
        b.Dir += w * L.G * n.rx1 / L.H;
        b.K2 += w * n.x1 * n.x2 * (L.f2 - L.d2Fd * chi);
        b.K3 += w * dx1 * (Fv - 2 * L.t / L.H + L.lam * chi);
        b.Tb += w * n.x1 * dx2 * (L.f2 + L.lamp * chi);
        b.K1x1x2 += w * n.x1 * n.x2 * (L.f2 + (L.lamp - 1.0 / rho0) * chi);
    });
    return b;
}

ArcMoments arc_moments(const Field& f, const ConstitutiveModel& m, Point c, double r) {
    ArcMoments a;
    const double rho0 = m.rho_bar0();
    f.integrate_arc(c, r, [&](const Node& n, double w) {
        a.length += w;
        if (!n.chi && n.g.norm2() == 0 && n.u == 0) return;
        Local L = local(n, m);
        double chi = n.chi ? 1.0 : 0.0;
        Vec2 nu{(n.x1 - c.x1) / r, (n.x2 - c.x2) / r};
        double un = n.g.dot(nu);
        a.EF += w * (L.G * n.rx1 * L.q + n.x1 * L.lam * chi);
        a.B += w * un * un * n.rx1 / L.H;
        a.UD += w * n.u * un * n.rx1 / L.H;
        a.UD0 += w * n.u * un * n.rx1 / rho0;
        a.U2H += w * n.u * n.u * n.rx1 / L.H;
        a.J += w * n.u * n.u * n.rx1 / rho0;
        a.K6raw += w * (n.x1 - c.x1) * n.u * n.u * n.rx1 * n.rx1 / rho0;
    });
    return a;
}

double energy_EF(const Field& f, const ConstitutiveModel& m, Point c, double r) { return ball_moments(f, m, c, r).EF; }
double energy_EH(const Field& f, const ConstitutiveModel& m, Point c, double r) { return ball_moments(f, m, c, r).EH; }

namespace {

MRecord assemble(const BallMoments& b, const ArcMoments& a, double r, PointKind kind) {
    MRecord rec;
    rec.r = r;
    rec.ball = b;
    rec.arc = a;
    rec.I = b.EF;
    rec.J = a.J;
    auto sq = [&](double k) { return a.B - 2 * k / r * a.UD + k * k / (r * r) * a.U2H; };
    double L = 0, R = 0;
    switch (kind) {
        case PointKind::Stagnation:
            rec.M = rec.I / std::pow(r, 3) - 1.5 * rec.J / std::pow(r, 4);
            rec.K = {b.K1x2, b.K2, b.K3, 3 * (a.UD - a.UD0), 4.5 / r * (a.J - a.U2H), 1.5 / r * a.K6raw};
            rec.nK = 6;
            rec.square = 2 / std::pow(r, 3) * sq(1.5);
            L = 3 * b.EF - r * a.EF;
            R = 3 * b.Dir - 2 * r * a.B - (b.K1x2 + b.K2 + b.K3);
            break;
        case PointKind::Axis:
            rec.M = rec.I / std::pow(r, 3) - 2 * rec.J / std::pow(r, 4);
            rec.K = {b.Tb, 4 * (a.UD - a.UD0), 8 / r * (a.J - a.U2H), 0, 0, 0};
            rec.nK = 3;
            rec.square = 2 / std::pow(r, 3) * sq(2.0);
            L = 3 * b.EF - r * a.EF;
            R = 4 * b.Dir - 2 * r * a.B - b.Tb;
            break;
        case PointKind::Origin:
            rec.M = rec.I / std::pow(r, 4) - 2.5 * rec.J / std::pow(r, 5);
            rec.K = {b.K1x2, b.K1x1x2, 5 * (a.UD - a.UD0), 12.5 / r * (a.J - a.U2H), 0, 0};
            rec.nK = 4;
            rec.square = 2 / std::pow(r, 4) * sq(2.5);
            L = 4 * b.EF - r * a.EF;
            R = 5 * b.Dir - 2 * r * a.B - b.K1x2 - b.K1x1x2;
            break;
    }
    double ks = 0, kabs = 0;
    for (int i = 0; i < rec.nK; ++i) {
        ks += rec.K[i];
        kabs += std::abs(rec.K[i]);
    }
    double p = (kind == PointKind::Origin) ? 5 : 4;
    rec.rhs = rec.square + ks / std::pow(r, p);
    rec.pohozaev = L - R;
    rec.pohozaev_scale = std::abs(b.EF) * 4 + std::abs(r * a.EF) + 5 * std::abs(b.Dir) + 2 * std::abs(r * a.B) + kabs;
    rec.energy_identity = std::abs(b.Dir - a.UD);
    return rec;
}

}  // namespace

MRecord monotonicity_M(const Field& f, const ConstitutiveModel& m, Point c, double r, PointKind kind) {
    return assemble(ball_moments(f, m, c, r), arc_moments(f, m, c, r), r, kind);
}

PohozaevResult pohozaev_residual(const Field& f, const ConstitutiveModel& m, Point c, double r, PointKind kind) {
    MRecord rec = monotonicity_M(f, m, c, r, kind);
    return {rec.pohozaev, rec.pohozaev_scale};
}

PohozaevResult pohozaev_general(const Field& f, const ConstitutiveModel& m, Point c, double r) {
    BallMoments b = ball_moments(f, m, c, r);
    ArcMoments a = arc_moments(f, m, c, r);
    double terms[] = {2 * b.EF, -r * a.EF, -2 * b.Dir, 2 * r * a.B, b.K3, b.Tb};
    PohozaevResult out;
    for (double t : terms) {
        out.residual += t;
        out.scale += std::abs(t);
    }
    return out;
}

double energy_identity_residual(const Field& f, const ConstitutiveModel& m, Point c, double r) {
    BallMoments b = ball_moments(f, m, c, r);
    ArcMoments a = arc_moments(f, m, c, r);
    return std::abs(b.Dir - a.UD);
}

std::vector<double> log_radii(double r_min, double r_max, int per_decade) {
    if (!(r_min > 0) || !(r_max > r_min)) throw DomainError("log_radii: need 0 < r_min < r_max");
    int n = std::max(2, int(std::ceil(per_decade * std::log10(r_max / r_min))) + 1);
    std::vector<double> r(n);
    for (int k = 0; k < n; ++k) r[k] = r_min * std::pow(r_max / r_min, double(k) / (n - 1));
    return r;
}

double delta_of(const Field& f, Point c, PointKind kind) {
    double d = f.domain_distance(c);
    if (kind == PointKind::Stagnation) d = std::min(d, c.x1);
    return 0.5 * d;
}

std::vector<double> default_radii(const Field& f, Point c, PointKind kind, double r_floor) {
    double lo = r_floor;
    if (auto* g = dynamic_cast<const GridField*>(&f)) lo = 4 * g->grid().h;
    double hi = std::min(0.9 * delta_of(f, c, kind), 1.0);
    if (!(hi > lo)) throw GeometryError("default_radii: domain too small for the sweep");
    return log_radii(lo, hi, 24);
}

RadialSweep radial_sweep(const Field& f, const ConstitutiveModel& m, Point c, PointKind kind,
                         const std::vector<double>& radii, bool frequency) {
    if (radii.empty()) throw DomainError("radial_sweep: no radii");
    for (std::size_t k = 1; k < radii.size(); ++k)
        if (!(radii[k] > radii[k - 1])) throw DomainError("radial_sweep: radii must increase strictly");
    double delta = delta_of(f, c, kind);
    if (radii.back() >= delta) {
        std::ostringstream os;
        os << "radial_sweep: radius " << radii.back() << " exceeds delta = " << delta;
        throw GeometryError(os.str());
    }
    RadialSweep sw{c, kind, std::vector<SweepRow>(radii.size())};
    parallel_for(int(radii.size()), [&](int k) { sw.rows[k].rec = monotonicity_M(f, m, c, radii[k], kind); });

    const int n = int(radii.size());
    auto dlog = [&](auto get, int k) {
        if (n < 2) return 0.0;
        int a = std::max(0, k - 1), b = std::min(n - 1, k + 1);
        return (get(b) - get(a)) / (std::log(radii[b]) - std::log(radii[a])) / radii[k];
    };
    for (int k = 0; k < n; ++k) sw.rows[k].dM_fd = dlog([&](int i) { return sw.rows[i].rec.M; }, k);

    if (frequency) {
        if (kind != PointKind::Origin) throw DomainError("frequency quantities need an origin point");
        const double rho0 = m.rho_bar0();
        double c1 = 0, c2 = 0, pi = 0, prev_r = 0, g1p = 0, g2p = 0, gp = 0;
        for (int k = 0; k < n; ++k) {
            SweepRow& row = sw.rows[k];
            const MRecord& rec = row.rec;
            double r = rec.r;
            double g1 = rec.K[0] / std::pow(r, 5);
            double g2 = (rec.K[1] + rec.K[2] + rec.K[3]) / std::pow(r, 5);
            double gpi = rec.ball.Vplus / std::pow(r, 4);
            // t^{-5} K(t) extends by 0 at t = 0; t^{-4} int(...) by its first value
            c1 += 0.5 * (r - prev_r) * (g1 + g1p);
            c2 += 0.5 * (r - prev_r) * (g2 + g2p);
            pi += (k == 0) ? r * gpi : 0.5 * (r - prev_r) * (gpi + gp);
            prev_r = r;
            g1p = g1;
            g2p = g2;
            gp = gpi;
            row.e = r * rec.K[0] + std::pow(r, 5) * (c1 + c2);
            row.Pi = pi;
            row.calJ = rec.arc.U2H - rec.arc.J;
            if (rec.J > 0) {
                row.freq_defined = true;
                row.D = r * rec.ball.Dir / rec.J;
                row.Vplus = r / rho0 * rec.ball.Vplus / rec.J;
                row.Vtilde = row.e / rec.J;
                row.V = row.Vplus + row.Vtilde;
                row.N = row.D - row.V;
            }
        }
        for (int k = 0; k < n; ++k) sw.rows[k].dN_fd = dlog([&](int i) { return sw.rows[i].N; }, k);
    }
    return sw;
}

double monotonicity_derivative_check(const Field& f, const ConstitutiveModel& m, Point c, PointKind kind,
                                     const std::vector<double>& radii) {
    if (radii.size() < 5) throw DomainError("monotonicity_derivative_check: need at least 5 radii");
    RadialSweep sw = radial_sweep(f, m, c, kind, radii, false);
    double worst = 0;
    for (std::size_t k = 1; k + 1 < sw.rows.size(); ++k) {
        const SweepRow& row = sw.rows[k];
        worst = std::max(worst, row.rec.r * std::abs(row.dM_fd - row.rec.rhs));
    }
    return worst;
}

RadialSweep frequency_quantities(const Field& f, const ConstitutiveModel& m, Point c, const std::vector<double>& radii) {
    RadialSweep sw = radial_sweep(f, m, c, PointKind::Origin, radii, true);
    for (const auto& row : sw.rows)
        if (!row.freq_defined) {
            std::ostringstream os;
            os << "frequency undefined: J(" << row.rec.r << ") = 0";
            throw DomainError(os.str());
        }
    return sw;
}

}  // namespace axifb

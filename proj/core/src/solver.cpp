#include "axifb/solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include "axifb/errors.hpp"
#include "axifb/parallel.hpp"

namespace axifb {

namespace {

// Per-cell constitutive data at t.
struct CellF {
    double F, invH;
};

CellF cell_F(const ConstitutiveModel& m, double t, double x2, double x1) {
    if (m.incompressible()) return {t / m.rho_bar0(), 1.0 / m.rho_bar0()};
    try {
        FValue fv = m.F(t, x2);
        return {fv.F, fv.d1F};
    } catch (const SubsonicityError& e) {
        std::ostringstream os;
        os << e.what() << " [cell x1=" << x1 << ", x2=" << x2 << "]";
        throw SubsonicityError(os.str());
    } catch (const StateError& e) {
        std::ostringstream os;
        os << e.what() << " [cell x1=" << x1 << ", x2=" << x2 << "]";
        throw StateError(os.str());
    }
}

class Energy {
public:
    Energy(const GridSpec& g, const ConstitutiveModel& m, double eps_chi, bool pin_negative = false)
        : g_(g), m_(m), eps_(eps_chi), axis_(g.touches_axis()), pin_neg_(pin_negative), lam_(g.n2) {
        // pinned rows above the stagnation level never carry chi
        for (int j = 0; j < g.n2; ++j) lam_[j] = (pin_negative && g.x2(j) < 0) ? 0.0 : m.lambda(g.x2(j));
    }

    // Energy; with grad, also the gradient and the diagonal of the Dirichlet Hessian.
    double operator()(const std::vector<double>& v, std::vector<double>* grad, std::vector<double>* diag) const {
        const int n1 = g_.n1, n2 = g_.n2;
        const double h = g_.h, h2 = h * h;
        std::vector<double> rows(n2, 0.0);
        if (grad) {
            ah_.assign(v.size(), 0.0);
            av_.assign(v.size(), 0.0);
        }
        parallel_for(n2, [&](int j) {
            double x2 = g_.x2(j), sum = 0;
            for (int i = 0; i < n1; ++i) {
                std::size_t c = idx(i, j);
                double x1 = g_.x1(i);
                double sh = 0, sv = 0;
                int nh = 0, nv = 0;
                if (i > 0) {
                    double d = (v[c] - v[c - 1]) / h;
                    sh += d * d;
                    ++nh;
                } else if (axis_) {
                    double d = v[c] / (0.5 * h);
                    sh += d * d;
                    ++nh;
                }
                if (i + 1 < n1) {
                    double d = (v[c + 1] - v[c]) / h;
                    sh += d * d;
                    ++nh;
                }
                if (j > 0) {
                    double d = (v[c] - v[c - n1]) / h;
                    sv += d * d;
                    ++nv;
                }
                if (j + 1 < n2) {
                    double d = (v[c + n1] - v[c]) / h;
                    sv += d * d;
                    ++nv;
                }
                double t = (sh / nh + sv / nv) / (x1 * x1);
                CellF f = cell_F(m_, t, pin_neg_ && x2 < 0 ? 0.0 : x2, x1);
                sum += h2 * x1 * (f.F + lam_[j] * psi(v[c]));
                if (grad) {
                    ah_[c] = h2 * 2.0 / (nh * x1) * f.invH;
                    av_[c] = h2 * 2.0 / (nv * x1) * f.invH;
                }
            }
            rows[j] = sum;
        });
        double E = 0;
        for (double r : rows) E += r;
        if (!grad) return E;

        grad->assign(v.size(), 0.0);
        if (diag) diag->assign(v.size(), 0.0);
        parallel_for(n2, [&](int j) {
            for (int i = 0; i < n1; ++i) {
                std::size_t c = idx(i, j);
                double gsum = h2 * g_.x1(i) * lam_[j] * dpsi(v[c]);
                double dsum = 0;
                // edge to the neighbour k: d = (v[k] - v[c]) / h for k on the right or top
                auto edge = [&](std::size_t k, bool after, const std::vector<double>& a) {
                    double d = after ? (v[k] - v[c]) / h : (v[c] - v[k]) / h;
                    double w = a[c] + a[k];
                    gsum += d * w * (after ? -1.0 : 1.0) / h;
                    dsum += w / h2;
                };
                if (i > 0) edge(c - 1, false, ah_);
                else if (axis_) {
                    double d = v[c] / (0.5 * h);
                    gsum += d * ah_[c] * 2.0 / h;
                    dsum += ah_[c] * 4.0 / h2;
                }
                if (i + 1 < n1) edge(c + 1, true, ah_);
                if (j > 0) edge(c - n1, false, av_);
                if (j + 1 < n2) edge(c + n1, true, av_);
                (*grad)[c] = gsum;
                if (diag) (*diag)[c] = dsum;
            }
        });
        return E;
    }

private:
    std::size_t idx(int i, int j) const { return std::size_t(j) * g_.n1 + i; }
    double psi(double v) const {
        if (eps_ <= 0) return v > 0 ? 1.0 : 0.0;
        return std::min(v / eps_, 1.0);
    }
    double dpsi(double v) const {
        if (eps_ <= 0) return 0.0;
        return v < eps_ ? 1.0 / eps_ : 0.0;
    }

    const GridSpec& g_;
    const ConstitutiveModel& m_;
    double eps_;
    bool axis_;
    bool pin_neg_;
    std::vector<double> lam_;
    mutable std::vector<double> ah_, av_;
};

bool pinned(const GridSpec& g, int i, int j) {
    if (j == 0 || j == g.n2 - 1 || i == g.n1 - 1) return true;
    return i == 0 && !g.touches_axis();
}

// Coons patch of the boundary ring; the axis counts as zero data.
std::vector<double> coons(const GridSpec& g, const std::function<double(Point)>& b) {
    const int n1 = g.n1, n2 = g.n2;
    const bool axis = g.touches_axis();
    auto B = [&](int i, int j) -> double {
        if (i < 0) return 0.0;
        return std::max(0.0, b({g.x1(i), g.x2(j)}));
    };
    int il = axis ? -1 : 0;
    std::vector<double> v(g.size());
    for (int j = 0; j < n2; ++j) {
        for (int i = 0; i < n1; ++i) {
            double s = double(i - il) / (n1 - 1 - il), t = double(j) / (n2 - 1);
            double val = (1 - s) * B(il, j) + s * B(n1 - 1, j) + (1 - t) * B(i, 0) + t * B(i, n2 - 1) -
                         ((1 - s) * (1 - t) * B(il, 0) + s * (1 - t) * B(n1 - 1, 0) + (1 - s) * t * B(il, n2 - 1) +
                          s * t * B(n1 - 1, n2 - 1));
            v[std::size_t(j) * n1 + i] = std::max(0.0, val);
        }
    }
    return v;
}

MinimizeResult descend(const MinimizeConfig& cfg, const ConstitutiveModel& m, std::vector<double> v) {
    const GridSpec& g = cfg.grid;
    double eps = cfg.eps_chi < 0 ? 0.1 * g.h : cfg.eps_chi;
    Energy energy(g, m, eps, cfg.pin_negative_x2);
    std::vector<char> free(g.size());
    for (int j = 0; j < g.n2; ++j)
        for (int i = 0; i < g.n1; ++i) {
            std::size_t c = std::size_t(j) * g.n1 + i;
            free[c] = !pinned(g, i, j) && !(cfg.pin_negative_x2 && g.x2(j) < 0);
            if (free[c]) continue;
            v[c] = (cfg.pin_negative_x2 && g.x2(j) < 0) ? 0.0 : std::max(0.0, cfg.boundary({g.x1(i), g.x2(j)}));
        }

    MinimizeResult res{GridField(g, v), {}, false, "max_iter", 0, 0, 0, 0};
    std::vector<double> grad, diag, d(v.size()), vn(v.size());
    double E = energy(v, &grad, &diag);
    std::deque<double> hist{E};
    const double h2 = g.h * g.h;
    int it = 0;
    for (; it < cfg.max_iter; ++it) {
        double pg = 0;
        for (std::size_t c = 0; c < v.size(); ++c) {
            d[c] = 0;
            if (!free[c]) continue;
            if (v[c] <= 0 && grad[c] > 0) continue;
            d[c] = -grad[c] / std::max(diag[c], 1e-300);
            pg = std::max(pg, std::abs(grad[c]));
        }
        res.grad_norm = pg / h2;
        if (pg == 0) {
            res.converged = true;
            res.status = "converged";
            break;
        }
        double step = cfg.step0, En = E;
        bool ok = false;
        std::exception_ptr last;
        for (int k = 0; k <= cfg.max_halvings; ++k, step *= 0.5) {
            double pred = 0;
            for (std::size_t c = 0; c < v.size(); ++c) {
                vn[c] = free[c] ? std::max(0.0, v[c] + step * d[c]) : v[c];
                pred += grad[c] * (vn[c] - v[c]);
            }
            try {
                En = energy(vn, nullptr, nullptr);
            } catch (const SubsonicityError&) {
                last = std::current_exception();
                continue;
            } catch (const StateError&) {
                last = std::current_exception();
                continue;
            }
            if (En <= E + cfg.armijo * pred) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            if (last) std::rethrow_exception(last);
            res.status = "stagnated";
            break;
        }
        v.swap(vn);
        E = energy(v, &grad, &diag);
        res.log.push_back({it + 1, E, step, res.grad_norm});
        hist.push_back(E);
        if (int(hist.size()) > cfg.window + 1) hist.pop_front();
        if (int(hist.size()) == cfg.window + 1 && hist.front() - hist.back() <= cfg.tol * std::abs(hist.back())) {
            res.converged = true;
            res.status = "converged";
            ++it;
            break;
        }
    }
    res.iterations = it;
    res.total_iterations = it;
    res.energy = E;
    res.field = GridField(g, std::move(v));
    return res;
}

MinimizeResult solve_level(const MinimizeConfig& cfg, const ConstitutiveModel& m) {
    const GridSpec& g = cfg.grid;
    bool coarsen = cfg.nested && g.n1 % 2 == 0 && g.n2 % 2 == 0 && g.n1 / 2 >= cfg.coarsest && g.n2 / 2 >= cfg.coarsest;
    if (!coarsen) return descend(cfg, m, coons(g, cfg.boundary));
    MinimizeConfig cc = cfg;
    cc.grid.h = 2 * g.h;
    cc.grid.x1_min = g.x1_min + 0.5 * g.h;
    cc.grid.x2_min = g.x2_min + 0.5 * g.h;
    cc.grid.n1 = g.n1 / 2;
    cc.grid.n2 = g.n2 / 2;
    MinimizeResult coarse = solve_level(cc, m);
    std::vector<double> v(g.size());
    for (int j = 0; j < g.n2; ++j)
        for (int i = 0; i < g.n1; ++i) v[std::size_t(j) * g.n1 + i] = coarse.field.value({g.x1(i), g.x2(j)});
    MinimizeResult fine = descend(cfg, m, std::move(v));
    fine.total_iterations += coarse.total_iterations;
    return fine;
}

}  // namespace

double discrete_energy(const GridSpec& g, const std::vector<double>& v, const ConstitutiveModel& m, double eps_chi,
                       std::vector<double>* grad) {
    if (v.size() != g.size()) throw DomainError("discrete_energy: size mismatch");
    Energy e(g, m, eps_chi);
    return e(v, grad, nullptr);
}

MinimizeResult minimize_EF(const MinimizeConfig& cfg, const ConstitutiveModel& m) {
    const GridSpec& g = cfg.grid;
    if (g.n1 < 3 || g.n2 < 3) throw DomainError("minimize: grid needs at least 3 cells per direction");
    if (!(g.x1_min > 0)) throw DomainError("minimize: grid must lie in x1 > 0");
    if (!cfg.boundary) throw DomainError("minimize: no boundary data");
    if (!(cfg.tol > 0)) throw DomainError("minimize: tolerance must be positive");
    if (cfg.eps_chi == 0) throw DomainError("minimize: eps_chi must be positive");
    if (cfg.window < 1) throw DomainError("minimize: window must be positive");
    return solve_level(cfg, m);
}

VectorField bump_field(Point c, double R, Vec2 a) {
    VectorField f;
    f.center = c;
    f.radius = R;
    f.phi = [=](Point x) -> Vec2 {
        double q = ((x.x1 - c.x1) * (x.x1 - c.x1) + (x.x2 - c.x2) * (x.x2 - c.x2)) / (R * R);
        if (q >= 1) return {0, 0};
        double b = (1 - q) * (1 - q) * (1 - q);
        return {a.a * b, a.b * b};
    };
    f.dphi = [=](Point x) -> std::array<std::array<double, 2>, 2> {
        double q = ((x.x1 - c.x1) * (x.x1 - c.x1) + (x.x2 - c.x2) * (x.x2 - c.x2)) / (R * R);
        if (q >= 1) return {};
        double db = -3 * (1 - q) * (1 - q) * 2 / (R * R);
        double e1 = db * (x.x1 - c.x1), e2 = db * (x.x2 - c.x2);
        return {{{a.a * e1, a.a * e2}, {a.b * e1, a.b * e2}}};
    };
    return f;
}

namespace {

struct Density {
    double F, invH, f2, lam, lamp;
};

Density density_at(const ConstitutiveModel& m, const Node& n) {
    double rho0 = m.rho_bar0();
    double t = n.g.norm2() / (n.x1 * n.x1);
    if (m.incompressible()) return {t / rho0, 1 / rho0, 0.0, n.x2 / rho0, 1 / rho0};
    FValue fv = m.F(t, n.x2);
    Density d{fv.F, fv.d1F, fv.d2F, 0.0, 0.0};
    if (n.chi) {
        d.lam = m.lambda(n.x2);
        d.lamp = m.lambda_prime(n.x2);
    }
    return d;
}

// Energy density with the single 1/x1 factor taken from rx1.
double energy_density(const ConstitutiveModel& m, const Node& n) {
    if (!n.chi && n.g.norm2() == 0) return 0.0;
    Density d = density_at(m, n);
    double G = n.g.norm2();
    double Fq = G > 0 ? d.F * n.x1 * n.x1 / G : 0.0;  // F / t
    return G * n.rx1 * Fq + n.x1 * d.lam * (n.chi ? 1.0 : 0.0);
}

}  // namespace

double grid_energy(const GridField& u, const ConstitutiveModel& m) {
    const GridSpec& g = u.grid();
    const double h2 = g.h * g.h;
    std::vector<double> rows(g.n2, 0.0);
    parallel_for(g.n2, [&](int j) {
        double s = 0;
        for (int i = 0; i < g.n1; ++i) {
            Node n{g.x1(i), g.x2(j), u.at(i, j), u.cell_gradient(i, j), u.cell_positive(i, j), u.inv_x1(i)};
            s += h2 * energy_density(m, n);
        }
        rows[j] = s;
    });
    double E = 0;
    for (double r : rows) E += r;
    return E;
}

DomainVariation domain_variation_residual(const GridField& u, const ConstitutiveModel& m, const VectorField& phi,
                                          double eps) {
    const GridSpec& g = u.grid();
    const double h = g.h;
    u.check_ball(phi.center, phi.radius);
    if (g.touches_axis() && phi.center.x1 - phi.radius < 0) {
        for (double x2 : {phi.center.x2 - 0.5 * phi.radius, phi.center.x2, phi.center.x2 + 0.5 * phi.radius})
            if (std::abs(phi.phi({0.0, x2}).a) > 0) throw DomainError("domain variation: phi1 must vanish on the axis");
    }

    DomainVariation out;
    std::array<double, 4>& T = out.terms;
    u.integrate_ball(phi.center, phi.radius, [&](const Node& n, double w) {
        Vec2 p = phi.phi({n.x1, n.x2});
        auto D = phi.dphi({n.x1, n.x2});
        if (p.a == 0 && p.b == 0 && D[0][0] == 0 && D[0][1] == 0 && D[1][0] == 0 && D[1][1] == 0) return;
        if (!n.chi && n.g.norm2() == 0) return;
        Density d = density_at(m, n);
        double chi = n.chi ? 1.0 : 0.0;
        double G = n.g.norm2();
        double x1F = G > 0 ? G * n.rx1 * d.F * n.x1 * n.x1 / G : 0.0;
        double div = D[0][0] + D[1][1];
        double gDg = n.g.a * (D[0][0] * n.g.a + D[0][1] * n.g.b) + n.g.b * (D[1][0] * n.g.a + D[1][1] * n.g.b);
        double t = G / (n.x1 * n.x1);
        T[0] += w * (x1F + n.x1 * d.lam * chi) * div;
        T[1] += w * (-2 * d.invH * n.rx1 * gDg);
        T[2] += w * (d.F - 2 * t * d.invH + d.lam * chi) * p.a;
        T[3] += w * n.x1 * (d.f2 + d.lamp * chi) * p.b;
    });
    for (double t : T) {
        out.analytic += t;
        out.scale += std::abs(t);
    }

    // resample u(x +- eps phi) on a sub-box around the support
    const int margin = 3;
    int i0 = std::max(0, int(std::floor((phi.center.x1 - phi.radius - g.x1_min) / h)) - margin);
    int i1 = std::min(g.n1 - 1, int(std::ceil((phi.center.x1 + phi.radius - g.x1_min) / h)) + margin);
    int j0 = std::max(0, int(std::floor((phi.center.x2 - phi.radius - g.x2_min) / h)) - margin);
    int j1 = std::min(g.n2 - 1, int(std::ceil((phi.center.x2 + phi.radius - g.x2_min) / h)) + margin);
    GridSpec sub{g.x1(i0), g.x2(j0), h, i1 - i0 + 1, j1 - j0 + 1};
    // the original threshold, so chi does not depend on the box
    double theta = u.max_value() > 0 ? u.threshold() / u.max_value() : 1e-10;
    auto shifted = [&](double e) {
        std::vector<double> v(sub.size());
        double vmax = 0;
        for (int j = 0; j < sub.n2; ++j)
            for (int i = 0; i < sub.n1; ++i) {
                Point x{sub.x1(i), sub.x2(j)};
                Vec2 p = phi.phi(x);
                double val = (p.a == 0 && p.b == 0) ? u.at(i0 + i, j0 + j) : u.value({x.x1 + e * p.a, x.x2 + e * p.b});
                v[std::size_t(j) * sub.n1 + i] = val;
                vmax = std::max(vmax, val);
            }
        double th = vmax > 0 ? theta * u.max_value() / vmax : theta;
        GridField f(sub, std::move(v), th);
        double E = 0;
        Point c = phi.center;
        double R = std::min(phi.radius + 1.5 * h, f.domain_distance(c));
        f.integrate_ball(c, R, [&](const Node& n, double w) { E += w * energy_density(m, n); });
        return E;
    };
    out.flow_fd = (shifted(eps) - shifted(-eps)) / (2 * eps);
    return out;
}

}  // namespace axifb

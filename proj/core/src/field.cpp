#include "axifb/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "axifb/errors.hpp"
#include "axifb/quadrature.hpp"

namespace axifb {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kGaussArc = 16;
}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void arc_angles(Point c, double r, double& lo, double& hi) {
    if (c.x1 >= r) {
        lo = -M_PI;
        hi = M_PI;
    } else if (c.x1 <= -r) {
        lo = hi = 0;
    } else {
        double a = std::asin(c.x1 / r);
        lo = -a;
        hi = M_PI + a;
    }
}

namespace {

// Integrate over one circle; chi is constant on the sub-arcs between detected
// positivity changes, and each sub-arc gets its own Gauss panels.
void ring(const Field& f, Point c, double r, const ArcOptions& opt, double scale, const NodeVisitor& visit) {
    double lo, hi;
    arc_angles(c, r, lo, hi);
    if (!(hi > lo) || r <= 0) return;
    auto at = [&](double phi) { return Point{c.x1 + r * std::sin(phi), c.x2 + r * std::cos(phi)}; };
    // stay off the axis itself
    double pad = (hi - lo < 2 * M_PI) ? 1e-12 * (hi - lo) : 0.0;
    lo += pad;
    hi -= pad;
    int n = std::max(16, int(std::ceil(opt.n_samples * (hi - lo) / (2 * M_PI))));
    std::vector<double> cuts{lo};
    bool prev = f.positive(at(lo));
    double aprev = lo;
    for (int k = 1; k <= n; ++k) {
        double a = lo + (hi - lo) * k / n;
        bool cur = f.positive(at(a));
        if (cur != prev) {
            double a0 = aprev, a1 = a;
            for (int it = 0; it < 60 && a1 - a0 > 1e-15; ++it) {
                double m = 0.5 * (a0 + a1);
                if (f.positive(at(m)) == prev) a0 = m; else a1 = m;
            }
            cuts.push_back(0.5 * (a0 + a1));
        }
        prev = cur;
        aprev = a;
    }
    cuts.push_back(hi);
    // integrands carry (x2 - c2)^+ and similar kinks on the coordinate directions
    for (double a : {-M_PI / 2, 0.0, M_PI / 2})
        if (a > lo && a < hi) cuts.push_back(a);
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        double a = cuts[s], b = cuts[s + 1];
        if (!(b > a)) continue;
        bool chi = f.positive(at(0.5 * (a + b)));
        int panels = std::max(1, int(std::ceil(opt.panels * (b - a) / (2 * M_PI))));
        double step = (b - a) / panels;
        for (int p = 0; p < panels; ++p) {
            gauss_panel<kGaussArc>(a + p * step, a + (p + 1) * step, [&](double phi, double w) {
                Point x = at(phi);
                double u = f.value(x);
                Vec2 g = f.gradient(x);
                visit(Node{x.x1, x.x2, u, g, chi, 1.0 / x.x1}, w * r * scale);
            });
        }
    }
}

}  // namespace

void Field::integrate_arc(Point c, double r, const NodeVisitor& visit) const {
    check_ball(c, r);
    ring(*this, c, r, arc_options(), 1.0, visit);
}

void Field::integrate_ball(Point c, double r, const NodeVisitor& visit) const {
    check_ball(c, r);
    // graded radial panels: homogeneous integrands behave like rho^{k+1/2} at the centre
    const double edges[] = {0.0, 1.0 / 32, 1.0 / 16, 1.0 / 8, 0.25, 0.5, 1.0};
    ArcOptions opt = arc_options();
    for (int p = 0; p + 1 < 7; ++p) {
        gauss_panel<12>(edges[p] * r, edges[p + 1] * r, [&](double rho, double w) { ring(*this, c, rho, opt, w, visit); });
    }
}

double Field::domain_distance(Point) const { return kInf; }
void Field::check_ball(Point, double) const {}

GridSpec GridSpec::from_bounds(double x1_min, double x1_max, double x2_min, double x2_max, double h) {
    if (!(h > 0)) throw DomainError("grid spacing must be positive");
    GridSpec g;
    g.x1_min = x1_min;
    g.x2_min = x2_min;
    g.h = h;
    g.n1 = int(std::lround((x1_max - x1_min) / h)) + 1;
    g.n2 = int(std::lround((x2_max - x2_min) / h)) + 1;
    if (g.n1 < 3 || g.n2 < 3) throw DomainError("grid needs at least 3 cells per direction");
    if (!(x1_min > 0)) throw DomainError("grid must lie in x1 > 0");
    return g;
}

GridSpec GridSpec::box(double a1, double b1, double a2, double b2, double h) {
    return from_bounds(a1 + 0.5 * h, b1 - 0.5 * h, a2 + 0.5 * h, b2 - 0.5 * h, h);
}

GridSpec GridSpec::local_box(double a1, double b1, double a2, double b2, double h) {
    if (!(h > 0)) throw DomainError("grid spacing must be positive");
    GridSpec g;
    g.x1_min = a1 + 0.5 * h;
    g.x2_min = a2 + 0.5 * h;
    g.h = h;
    g.n1 = int(std::lround((b1 - a1) / h));
    g.n2 = int(std::lround((b2 - a2) / h));
    if (g.n1 < 3 || g.n2 < 3) throw DomainError("grid needs at least 3 cells per direction");
    return g;
}

GridSpec GridSpec::axis_box(double x1_max_edge, double x2_lo_edge, double x2_hi_edge, double h) {
    return box(0.0, x1_max_edge, x2_lo_edge, x2_hi_edge, h);
}

bool GridSpec::touches_axis() const { return std::abs(x1_min - 0.5 * h) <= 1e-9 * h; }

GridField::GridField(GridSpec grid, std::vector<double> values, double theta_pos)
    : grid_(grid), u_(std::move(values)) {
    if (u_.size() != grid_.size()) throw DomainError("field size does not match grid");
    for (double v : u_) {
        if (!(v >= 0)) throw DomainError("field values must be nonnegative");
        umax_ = std::max(umax_, v);
    }
    thr_ = theta_pos * umax_;
    arc_.n_samples = 4096;
    arc_.panels = 64;
    compute_gradients();
}

GridField GridField::sample(const GridSpec& grid, const std::function<double(Point)>& f, double theta_pos) {
    std::vector<double> v(grid.size());
    for (int j = 0; j < grid.n2; ++j)
        for (int i = 0; i < grid.n1; ++i) v[std::size_t(j) * grid.n1 + i] = std::max(0.0, f({grid.x1(i), grid.x2(j)}));
    return GridField(grid, std::move(v), theta_pos);
}

GridField GridField::sample(const GridSpec& grid, const Field& f, double theta_pos) {
    return sample(grid, [&](Point x) { return f.value(x); }, theta_pos);
}

void GridField::compute_gradients() {
    const int n1 = grid_.n1, n2 = grid_.n2;
    const double h = grid_.h;
    const bool axis = grid_.touches_axis();
    grad_.assign(u_.size(), Vec2{});
    // derivative along a line of n values v(k), positivity p(k); axis_left means
    // a Dirichlet zero sits half a cell to the left of k = 0
    auto deriv = [&](int k, int n, auto v, auto p, bool axis_left) -> double {
        bool L = k > 0 && p(k - 1), R = k + 1 < n && p(k + 1);
        if (k == 0 && axis_left) {
            if (R) return v(0) / h + v(1) / (3 * h);
            return v(0) / (0.5 * h);
        }
        if (L && R) return (v(k + 1) - v(k - 1)) / (2 * h);
        if (R) {
            if (k + 2 < n && p(k + 2)) return (-3 * v(k) + 4 * v(k + 1) - v(k + 2)) / (2 * h);
            return (v(k + 1) - v(k)) / h;
        }
        if (L) {
            if (k - 2 >= 0 && p(k - 2)) return (3 * v(k) - 4 * v(k - 1) + v(k - 2)) / (2 * h);
            return (v(k) - v(k - 1)) / h;
        }
        // isolated positive cell, or a domain edge: plain differences
        if (k > 0 && k + 1 < n) return (v(k + 1) - v(k - 1)) / (2 * h);
        if (k + 1 < n) return (v(k + 1) - v(k)) / h;
        return (v(k) - v(k - 1)) / h;
    };
    for (int j = 0; j < n2; ++j) {
        for (int i = 0; i < n1; ++i) {
            if (!cell_positive(i, j)) continue;
            double g1 = deriv(
                i, n1, [&](int k) { return at(k, j); }, [&](int k) { return cell_positive(k, j); }, axis);
            double g2 = deriv(
                j, n2, [&](int k) { return at(i, k); }, [&](int k) { return cell_positive(i, k); }, false);
            grad_[idx(i, j)] = {g1, g2};
        }
    }
}

template <class Fn>
double GridField::interpolate(Point x, Fn cell) const {
    const double h = grid_.h;
    double fx = (x.x1 - grid_.x1_min) / h, fy = (x.x2 - grid_.x2_min) / h;
    const double slack = 0.5 + 1e-9;
    bool axis_gap = false;
    if (fx < 0) {
        if (grid_.touches_axis() && x.x1 >= -1e-12 * h) axis_gap = true;
        else if (fx < -slack) throw GeometryError("point outside grid");
    }
    if (fx > grid_.n1 - 1 + slack || fy < -slack || fy > grid_.n2 - 1 + slack) {
        std::ostringstream os;
        os << "point (" << x.x1 << ", " << x.x2 << ") outside grid";
        throw GeometryError(os.str());
    }
    fy = std::clamp(fy, 0.0, double(grid_.n2 - 1));
    int j = std::min(int(fy), grid_.n2 - 2);
    double ty = fy - j;
    if (axis_gap) {
        // the axis carries the value returned by cell(-1, j)
        double tx = std::max(0.0, x.x1) / grid_.x1_min;
        double a0 = cell(-1, j), a1 = cell(-1, j + 1);
        double b0 = cell(0, j), b1 = cell(0, j + 1);
        return (1 - ty) * ((1 - tx) * a0 + tx * b0) + ty * ((1 - tx) * a1 + tx * b1);
    }
    fx = std::clamp(fx, 0.0, double(grid_.n1 - 1));
    int i = std::min(int(fx), grid_.n1 - 2);
    double tx = fx - i;
    return (1 - ty) * ((1 - tx) * cell(i, j) + tx * cell(i + 1, j)) + ty * ((1 - tx) * cell(i, j + 1) + tx * cell(i + 1, j + 1));
}

double GridField::value(Point x) const {
    return interpolate(x, [&](int i, int j) { return i < 0 ? 0.0 : at(i, j); });
}

Vec2 GridField::gradient(Point x) const {
    double a = interpolate(x, [&](int i, int j) { return grad_[idx(std::max(i, 0), j)].a; });
    double b = interpolate(x, [&](int i, int j) { return grad_[idx(std::max(i, 0), j)].b; });
    return {a, b};
}

double GridField::inv_x1(int i) const {
    double x = grid_.x1(i), h = grid_.h;
    if (rule_ == InvX1Rule::Midpoint || x - 0.5 * h <= 1e-12 * h) return 1.0 / x;
    return std::log((x + 0.5 * h) / (x - 0.5 * h)) / h;
}

double GridField::domain_distance(Point c) const {
    const double h = grid_.h;
    double e1lo = grid_.x1_min - 0.5 * h, e1hi = grid_.x1_max() + 0.5 * h;
    double e2lo = grid_.x2_min - 0.5 * h, e2hi = grid_.x2_max() + 0.5 * h;
    double d = std::min({e1hi - c.x1, c.x2 - e2lo, e2hi - c.x2});
    if (!grid_.touches_axis()) d = std::min(d, c.x1 - e1lo);
    return d;
}

void GridField::check_ball(Point c, double r) const {
    const double h = grid_.h, tol = 1e-9 * h;
    double e1lo = grid_.x1_min - 0.5 * h, e1hi = grid_.x1_max() + 0.5 * h;
    double e2lo = grid_.x2_min - 0.5 * h, e2hi = grid_.x2_max() + 0.5 * h;
    bool ok = c.x1 + r <= e1hi + tol && c.x2 - r >= e2lo - tol && c.x2 + r <= e2hi + tol;
    if (!grid_.touches_axis()) ok = ok && c.x1 - r >= e1lo - tol;
    if (!ok) {
        std::ostringstream os;
        os << "ball B_" << r << "(" << c.x1 << ", " << c.x2 << ") leaves the grid";
        throw GeometryError(os.str());
    }
}

void GridField::integrate_ball(Point c, double r, const NodeVisitor& visit) const {
    check_ball(c, r);
    const double h = grid_.h, h2 = h * h;
    int i0 = std::max(0, int(std::floor((c.x1 - r - grid_.x1_min) / h)) - 1);
    int i1 = std::min(grid_.n1 - 1, int(std::ceil((c.x1 + r - grid_.x1_min) / h)) + 1);
    int j0 = std::max(0, int(std::floor((c.x2 - r - grid_.x2_min) / h)) - 1);
    int j1 = std::min(grid_.n2 - 1, int(std::ceil((c.x2 + r - grid_.x2_min) / h)) + 1);
    for (int j = j0; j <= j1; ++j) {
        double y = grid_.x2(j);
        for (int i = i0; i <= i1; ++i) {
            double x = grid_.x1(i);
            double nx = std::clamp(c.x1, x - 0.5 * h, x + 0.5 * h), ny = std::clamp(c.x2, y - 0.5 * h, y + 0.5 * h);
            if (std::hypot(nx - c.x1, ny - c.x2) >= r) continue;
            double fx = std::max(std::abs(x - 0.5 * h - c.x1), std::abs(x + 0.5 * h - c.x1));
            double fy = std::max(std::abs(y - 0.5 * h - c.x2), std::abs(y + 0.5 * h - c.x2));
            std::size_t k = idx(i, j);
            bool chi = u_[k] > thr_;
            if (std::hypot(fx, fy) <= r) {
                visit(Node{x, y, u_[k], grad_[k], chi, inv_x1(i)}, h2);
                continue;
            }
            for (int b = 0; b < 4; ++b) {
                for (int a = 0; a < 4; ++a) {
                    double px = x + (a + 0.5) * 0.25 * h - 0.5 * h, py = y + (b + 0.5) * 0.25 * h - 0.5 * h;
                    if (std::hypot(px - c.x1, py - c.x2) > r) continue;
                    double us = std::max(0.0, u_[k] + grad_[k].a * (px - x) + grad_[k].b * (py - y));
                    visit(Node{px, py, us, grad_[k], chi, 1.0 / px}, h2 / 16);
                }
            }
        }
    }
}

void write_field(std::ostream& os, const GridField& f) {
    const GridSpec& g = f.grid();
    os << "grid " << format_double(g.x1_min) << ' ' << format_double(g.x1_max()) << ' ' << format_double(g.x2_min)
       << ' ' << format_double(g.x2_max()) << ' ' << format_double(g.h) << '\n';
    for (int j = 0; j < g.n2; ++j) {
        for (int i = 0; i < g.n1; ++i) {
            if (i) os << ' ';
            os << format_double(f.at(i, j));
        }
        os << '\n';
    }
}

void write_field(const std::string& path, const GridField& f) {
    std::ofstream os(path);
    if (!os) throw DomainError("cannot open " + path);
    write_field(os, f);
}

namespace {

GridField read_csv(std::istream& is) {
    std::map<double, std::map<double, double>> rows;  // x2 -> x1 -> u
    std::string line;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double a, b, u;
        if (!(ss >> a >> b >> u)) throw ParseError("field csv: bad row at line " + std::to_string(lineno));
        rows[b][a] = u;
    }
    if (rows.size() < 3) throw ParseError("field csv: too few rows");
    std::vector<double> xs;
    for (auto& kv : rows.begin()->second) xs.push_back(kv.first);
    std::vector<double> ys;
    for (auto& kv : rows) ys.push_back(kv.first);
    double h = (xs.back() - xs.front()) / double(xs.size() - 1);
    GridSpec g = GridSpec::from_bounds(xs.front(), xs.back(), ys.front(), ys.back(), h);
    if (g.n1 != int(xs.size()) || g.n2 != int(ys.size())) throw ParseError("field csv: samples are not a regular lattice");
    std::vector<double> v(g.size());
    int j = 0;
    for (auto& kv : rows) {
        if (int(kv.second.size()) != g.n1) throw ParseError("field csv: ragged rows");
        int i = 0;
        for (auto& c : kv.second) v[std::size_t(j) * g.n1 + i++] = c.second;
        ++j;
    }
    return GridField(g, std::move(v));
}

}  // namespace

GridField read_field(std::istream& is) {
    std::string first;
    if (!std::getline(is, first)) throw ParseError("field: empty input");
    if (first.rfind("x1,x2,u", 0) == 0) return read_csv(is);
    std::istringstream hs(first);
    std::string tag;
    double x1a, x1b, x2a, x2b, h;
    if (!(hs >> tag >> x1a >> x1b >> x2a >> x2b >> h) || tag != "grid")
        throw ParseError("field: line 1: expected 'grid x1_min x1_max x2_min x2_max h'");
    GridSpec g = GridSpec::from_bounds(x1a, x1b, x2a, x2b, h);
    std::vector<double> v;
    v.reserve(g.size());
    std::string line;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        int count = 0;
        double x;
        while (ss >> x) {
            v.push_back(x);
            ++count;
        }
        if (count != g.n1) throw ParseError("field: line " + std::to_string(lineno) + ": expected " + std::to_string(g.n1) + " values");
    }
    if (v.size() != g.size()) throw ParseError("field: expected " + std::to_string(g.n2) + " rows");
    return GridField(g, std::move(v));
}

GridField read_field(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw DomainError("cannot open " + path);
    return read_field(is);
}

}  // namespace axifb

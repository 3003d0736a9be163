#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "axifb/geometry.hpp"
#include "axifb/profiles.hpp"

namespace axifb {

// One quadrature node handed to integrands. rx1 is the effective 1/x1 for
// integrands carrying a single 1/x1 factor.
struct Node {
    double x1, x2;
    double u;
    Vec2 g;
    bool chi;
    double rx1;
};

using NodeVisitor = std::function<void(const Node&, double weight)>;

struct ArcOptions {
    int n_samples = 4096;  // positivity scan along the arc
    int panels = 64;       // Gauss panels per full turn
};

// Angular range of the arc c + r (sin phi, cos phi) inside {x1 > 0}.
void arc_angles(Point c, double r, double& lo, double& hi);

class Field {
public:
    virtual ~Field() = default;
    virtual double value(Point x) const = 0;
    virtual Vec2 gradient(Point x) const = 0;
    virtual double threshold() const { return 0.0; }
    bool positive(Point x) const { return value(x) > threshold(); }

    // Integrate over B_r(c) intersected with {x1 > 0}.
    virtual void integrate_ball(Point c, double r, const NodeVisitor& visit) const;
    // Integrate over the arc of the circle |x - c| = r inside {x1 > 0}, arc-length measure.
    void integrate_arc(Point c, double r, const NodeVisitor& visit) const;
    // Distance from c to the boundary of the computational domain (axis excluded).
    virtual double domain_distance(Point c) const;
    // Throws GeometryError unless B_r(c) intersected with {x1 > 0} lies in the domain.
    virtual void check_ball(Point c, double r) const;
    virtual ArcOptions arc_options() const { return {1024, 32}; }
};

class ProfileField final : public Field {
public:
    explicit ProfileField(ProfileSpec spec) : spec_(spec) {}
    double value(Point x) const override { return spec_.value(x); }
    Vec2 gradient(Point x) const override { return spec_.gradient(x); }
    const ProfileSpec& spec() const { return spec_; }

private:
    ProfileSpec spec_;
};

// Any closed-form field; sums of profiles and perturbations in tests.
class FunctionField final : public Field {
public:
    FunctionField(std::function<double(Point)> u, std::function<Vec2(Point)> g) : u_(std::move(u)), g_(std::move(g)) {}
    double value(Point x) const override { return u_(x); }
    Vec2 gradient(Point x) const override { return g_(x); }

private:
    std::function<double(Point)> u_;
    std::function<Vec2(Point)> g_;
};

// Cell-centred lattice: centres at x1_min + i h, x2_min + j h.
struct GridSpec {
    double x1_min = 0.0, x2_min = 0.0, h = 1.0;
    int n1 = 0, n2 = 0;

    static GridSpec from_bounds(double x1_min, double x1_max, double x2_min, double x2_max, double h);
    // Grid whose first column sits at h/2 next to the axis.
    static GridSpec axis_box(double x1_max_edge, double x2_lo_edge, double x2_hi_edge, double h);
    // Cells covering [a1, b1] x [a2, b2] (edges).
    static GridSpec box(double a1, double b1, double a2, double b2, double h);
    // Same, in a local frame that may cross x1 = 0 (planar blow-ups).
    static GridSpec local_box(double a1, double b1, double a2, double b2, double h);
    double x1(int i) const { return x1_min + i * h; }
    double x2(int j) const { return x2_min + j * h; }
    double x1_max() const { return x1(n1 - 1); }
    double x2_max() const { return x2(n2 - 1); }
    bool touches_axis() const;
    std::size_t size() const { return std::size_t(n1) * std::size_t(n2); }
};

enum class InvX1Rule { Midpoint, CellAverage };

class GridField final : public Field {
public:
    GridField(GridSpec grid, std::vector<double> values, double theta_pos = 1e-10);
    static GridField sample(const GridSpec& grid, const Field& f, double theta_pos = 1e-10);
    static GridField sample(const GridSpec& grid, const std::function<double(Point)>& f, double theta_pos = 1e-10);

    const GridSpec& grid() const { return grid_; }
    const std::vector<double>& values() const { return u_; }
    double at(int i, int j) const { return u_[idx(i, j)]; }
    Vec2 cell_gradient(int i, int j) const { return grad_[idx(i, j)]; }
    bool cell_positive(int i, int j) const { return at(i, j) > thr_; }
    double max_value() const { return umax_; }

    double value(Point x) const override;
    Vec2 gradient(Point x) const override;
    double threshold() const override { return thr_; }
    void integrate_ball(Point c, double r, const NodeVisitor& visit) const override;
    double domain_distance(Point c) const override;
    void check_ball(Point c, double r) const override;
    ArcOptions arc_options() const override { return arc_; }
    void set_arc_options(ArcOptions a) { arc_ = a; }
    void set_inv_x1_rule(InvX1Rule r) { rule_ = r; }

    // Cell-average of 1/x1 in column i under the current rule.
    double inv_x1(int i) const;

private:
    std::size_t idx(int i, int j) const { return std::size_t(j) * grid_.n1 + i; }
    void compute_gradients();
    template <class Fn>
    double interpolate(Point x, Fn cell) const;

    GridSpec grid_;
    std::vector<double> u_;
    std::vector<Vec2> grad_;
    double thr_ = 0.0;
    double umax_ = 0.0;
    ArcOptions arc_{};
    InvX1Rule rule_ = InvX1Rule::CellAverage;
};

// Text format: header "grid x1_min x1_max x2_min x2_max h", then one row of n1
// values per line for j = 0 .. n2-1. x1_min etc. are cell centres.
void write_field(std::ostream& os, const GridField& f);
void write_field(const std::string& path, const GridField& f);
// Accepts the field format above or a CSV with header x1,x2,u[,...] on a regular lattice.
GridField read_field(std::istream& is);
GridField read_field(const std::string& path);

std::string format_double(double v);

}  // namespace axifb

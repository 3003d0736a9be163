#pragma once

#include <string>
#include <vector>

#include "axifb/eos.hpp"
#include "axifb/field.hpp"
#include "axifb/functionals.hpp"
#include "axifb/profiles.hpp"

namespace axifb {

// x -> s * f(c + r x), in the local frame of the point c.
class ScaledField final : public Field {
public:
    ScaledField(const Field& f, Point c, double r, double s) : f_(f), c_(c), r_(r), s_(s) {}
    double value(Point x) const override { return s_ * f_.value(map(x)); }
    Vec2 gradient(Point x) const override {
        Vec2 g = f_.gradient(map(x));
        return {s_ * r_ * g.a, s_ * r_ * g.b};
    }
    double threshold() const override { return s_ * f_.threshold(); }
    double domain_distance(Point c) const override { return f_.domain_distance(map(c)) / r_; }
    void check_ball(Point c, double r) const override { f_.check_ball(map(c), r * r_); }
    ArcOptions arc_options() const override { return f_.arc_options(); }

private:
    Point map(Point x) const { return {c_.x1 + r_ * x.x1, c_.x2 + r_ * x.x2}; }
    const Field& f_;
    Point c_;
    double r_, s_;
};

// |x - c|^d u(c + (x - c)/|x - c|): the degree-d extension of the unit-circle trace.
class HomogeneousField final : public Field {
public:
    HomogeneousField(const Field& f, double degree, Point c = {0, 0}) : f_(f), d_(degree), c_(c) {}
    double value(Point x) const override;
    Vec2 gradient(Point x) const override;
    double threshold() const override { return 0.0; }

private:
    const Field& f_;
    double d_;
    Point c_;
};

HomogeneousField homogeneous_replacement(const Field& f, double degree, Point c = {0, 0});

// u(c + r x) / r^d sampled on cells of side 1/n over the unit box of the kind:
// [-1, 1]^2 in a local frame at stagnation points, (0, 1] x [-1, 1] otherwise.
GridField blowup(const Field& f, Point c, PointKind kind, double r, int n = 128);
// L2 distance between two blow-ups on the same lattice.
double blowup_distance(const GridField& a, const GridField& b);

struct DensityMeasurement {
    std::vector<double> radii;
    std::vector<double> values;  // per-radius weighted density, normalized frame
    double limit = 0;            // affine extrapolation to r = 0 over the smallest decade
    double slope = 0;
    double sigma = 0;            // max fit residual + |slope| r_min
    int used = 0;
};

// r^{-3} int (x2-c2)^+ chi, r^{-3} int (x1-c1) chi, r^{-4} int (x1-c1)(x2-c2)^+ chi.
double weighted_density_at(const Field& f, Point c, PointKind kind, double r);
DensityMeasurement weighted_density(const Field& f, Point c, PointKind kind, const std::vector<double>& radii);

enum class Label { StokesCorner, AxisParabola, Garabedian, HorizontalFlat, Cusp, Ambiguous };
const char* to_string(Label l);

struct Candidate {
    Label label;
    double density;  // normalized frame
};
// The admissible densities of each kind.
std::vector<Candidate> candidates(PointKind kind);

struct ClassifyOptions {
    double rho_bar0 = 1.0;
    std::vector<double> radii;  // empty: default_radii
    double r_fit = -1;          // negative: 10 x the smallest radius, capped by the largest
};

struct Classification {
    Point point;
    PointKind kind;
    DensityMeasurement density;
    Label label = Label::Cusp;
    std::vector<Label> tied;  // the candidates within 2 sigma when ambiguous
    double nearest = 0, gap = 0;
    double physical_density = 0;  // limit times x1/rho0, x2/rho0 or 1/rho0
    std::string fit_name;         // amp, alpha, beta0 or beta
    double fit_param = 0;
    double fit_residual = 0;      // relative weighted L2 residual on the unit (half) ball
    double r_fit = 0;
    double blowup_norm_small = 0, blowup_norm_large = 0;
    std::vector<double> ray_slopes;  // x2 / (x1 - c1) at free-boundary crossings of the fit circle
};

Classification classify(const Field& f, Point c, PointKind kind, const ClassifyOptions& opt = {});

// Least-squares amplitude a minimizing || u(c + r x)/scale - a p(x) || over the unit
// ball in the local frame, weighted by 1/x1 when asked; the residual is relative.
struct AmplitudeFit {
    double amp = 0;
    double residual = 0;
};
AmplitudeFit fit_amplitude(const Field& f, Point c, double r, double scale, const ProfileSpec& p, bool weighted);

struct FrequencyRow {
    double r = 0;
    double norm = 0;       // ||u||_{L2_w(dB_r^+)}
    double unit_norm = 0;  // ||v_r||_{L2_w(dB_1^+)}, should be 1
    double grad_norm = 0;  // ||grad v_r||_{L2_w(B_1^+)}
    double D = 0, N = 0;
    double fit_coef = 0;      // <v_r, beta x1^2 x2^+> on dB_1^+
    double fit_residual = 0;  // ||v_r - coef beta x1^2 x2^+|| on dB_1^+
    double deficit = 0;       // int_{B_1^+ \ B_1/2^+} |x|^-6 (grad v . x - N0 v)^2 / x1
};

struct FrequencyBlowup {
    std::vector<FrequencyRow> rows;
    double N0 = 0;  // N at the smallest radius
};

FrequencyBlowup frequency_blowup(const Field& f, const ConstitutiveModel& m, const std::vector<double>& radii);

}  // namespace axifb

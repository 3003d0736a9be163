#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "axifb/eos.hpp"
#include "axifb/field.hpp"

namespace axifb {

enum class PointKind { Stagnation, Axis, Origin };

const char* to_string(PointKind k);
PointKind point_kind_from_string(const std::string& s);
// Stagnation: x2 = 0 < x1; Axis: x1 = 0 != x2; Origin: both zero.
PointKind kind_of(Point c);
// Homogeneity exponent of the blow-up at this kind of point: 3/2, 2, 5/2.
double scaling_exponent(PointKind k);

double integrate_ball(const Field& f, Point c, double r, const std::function<double(const Node&)>& integrand);
double integrate_arc(const Field& f, Point c, double r, const std::function<double(const Node&)>& integrand);

// Ball integrals, all over B_r(c) in {x1 > 0}.
struct BallMoments {
    double EF = 0;      // energy E_F
    double EH = 0;      // energy E_H
    double K1x2 = 0;    // integrand x1 [t/H - F - (lambda - x2/rho0) chi]
    double Dir = 0;     // |grad u|^2 / (x1 H)
    double K2 = 0;      // x1 x2 [d2F(t;x2) - d2F(x2;x2) chi]
    double K3 = 0;      // (x1 - c1) [F - 2t/H + lambda chi]
    double Tb = 0;      // x1 (x2 - c2) [d2F + lambda' chi]; K1^{x1} at axis points
    double K1x1x2 = 0;  // x1 x2 [d2F + (lambda' - 1/rho0) chi]
    double Vplus = 0;   // x1 (x2-c2)^+ (1 - chi)
    double dens_stag = 0;    // (x2-c2)^+ chi
    double dens_axis = 0;    // (x1-c1) chi
    double dens_origin = 0;  // (x1-c1) (x2-c2)^+ chi
    double area = 0;
};

// Arc integrals over the part of |x - c| = r in {x1 > 0}; nu is the outer normal.
struct ArcMoments {
    double EF = 0;     // E_F density
    double B = 0;      // (grad u . nu)^2 / (x1 H)
    double UD = 0;     // u grad u . nu / (x1 H)
    double UD0 = 0;    // u grad u . nu / (x1 rho0)
    double U2H = 0;    // u^2 / (x1 H)
    double J = 0;      // u^2 / (x1 rho0)
    double K6raw = 0;  // (x1 - c1) u^2 / (x1^2 rho0)
    double length = 0;
};

BallMoments ball_moments(const Field& f, const ConstitutiveModel& m, Point c, double r);
ArcMoments arc_moments(const Field& f, const ConstitutiveModel& m, Point c, double r);

double energy_EF(const Field& f, const ConstitutiveModel& m, Point c, double r);
double energy_EH(const Field& f, const ConstitutiveModel& m, Point c, double r);

struct MRecord {
    double r = 0;
    double I = 0, J = 0, M = 0;
    std::array<double, 6> K{};  // K-terms of the kind, unused slots zero
    int nK = 0;
    double square = 0;  // boundary square term of the M' formula
    double rhs = 0;     // square + scaled K-terms: predicted M'(r)
    double pohozaev = 0, pohozaev_scale = 0;
    double energy_identity = 0;
    BallMoments ball;
    ArcMoments arc;
};

MRecord monotonicity_M(const Field& f, const ConstitutiveModel& m, Point c, double r, PointKind kind);

struct PohozaevResult {
    double residual = 0;
    double scale = 0;  // sum of absolute values of the terms
};

// Kind-specific identity; left side minus right side.
PohozaevResult pohozaev_residual(const Field& f, const ConstitutiveModel& m, Point c, double r, PointKind kind);
// The generic identity with the radial field (x - c) for any centre.
PohozaevResult pohozaev_general(const Field& f, const ConstitutiveModel& m, Point c, double r);
double energy_identity_residual(const Field& f, const ConstitutiveModel& m, Point c, double r);

struct SweepRow {
    MRecord rec;
    double dM_fd = 0;  // central difference of M in log r, divided by r
    double D = 0, V = 0, Vplus = 0, Vtilde = 0, N = 0, e = 0, calJ = 0, Pi = 0, dN_fd = 0;
    bool freq_defined = false;
};

struct RadialSweep {
    Point center;
    PointKind kind;
    std::vector<SweepRow> rows;
};

std::vector<double> log_radii(double r_min, double r_max, int per_decade = 24);
// delta = min(x1, dist to the domain boundary)/2 at stagnation points, dist/2 otherwise.
double delta_of(const Field& f, Point c, PointKind kind);
// 24 per decade between 4h (h = grid spacing, or r_floor for closed-form fields) and 0.9 delta.
std::vector<double> default_radii(const Field& f, Point c, PointKind kind, double r_floor = 1e-3);

RadialSweep radial_sweep(const Field& f, const ConstitutiveModel& m, Point c, PointKind kind,
                         const std::vector<double>& radii, bool frequency);
// Max over interior radii of r |M'_fd - rhs| (log-r units).
double monotonicity_derivative_check(const Field& f, const ConstitutiveModel& m, Point c, PointKind kind,
                                     const std::vector<double>& radii);
RadialSweep frequency_quantities(const Field& f, const ConstitutiveModel& m, Point c, const std::vector<double>& radii);

}  // namespace axifb

#pragma once

#include <memory>
#include <string>

namespace axifb {

struct EosParams {
    double gamma = 2.0;
    double A = 1.0;
    double rho_bar0 = 1.0;
    double g = 1.0;
    double eps0 = -1.0;  // negative means 1e-3 * rho_bar0
};

// Density and its partials at (t, s).
// t = |grad u|^2 / x1^2, s = rescaled height (distance below the stagnation level).
// d_dt = dH/dt < 0, d_ds = dH/ds > 0. d2H is the derivative with respect to the
// physical height x2 = x2_st - s, i.e. -d_ds, which is negative.
struct BernoulliState {
    double t = 0.0;
    double s = 0.0;
    double rho = 0.0;
    double d_dt = 0.0;
    double d_ds = 0.0;
    double d1H() const { return d_dt; }
    double d2H() const { return -d_ds; }
};

struct FValue {
    double F = 0.0;
    double d1F = 0.0;  // 1/H(t;s)
    double d2F = 0.0;  // integral of -dH/ds / H^2
};

// What the energy functionals need from the gas.
class ConstitutiveModel {
public:
    virtual ~ConstitutiveModel() = default;
    virtual double rho_bar0() const = 0;
    virtual bool incompressible() const = 0;
    virtual BernoulliState invert(double t, double s) const = 0;
    virtual FValue F(double t, double s) const = 0;
    virtual double lambda(double x2) const = 0;
    virtual double lambda_prime(double x2) const = 0;
    // d2F(x2; x2)
    virtual double d2F_diag(double x2) const = 0;
};

// H == rho_bar0. The limit A -> infinity of the gamma law.
class Incompressible final : public ConstitutiveModel {
public:
    explicit Incompressible(double rho_bar0 = 1.0);
    double rho_bar0() const override { return rho0_; }
    bool incompressible() const override { return true; }
    BernoulliState invert(double t, double s) const override;
    FValue F(double t, double s) const override;
    double lambda(double x2) const override { return x2 / rho0_; }
    double lambda_prime(double) const override { return 1.0 / rho0_; }
    double d2F_diag(double) const override { return 0.0; }

private:
    double rho0_;
};

// p = A rho^gamma.
class GammaLaw final : public ConstitutiveModel {
public:
    explicit GammaLaw(const EosParams& p);

    const EosParams& params() const { return p_; }
    double x2_st() const { return x2_st_; }
    double eps0() const { return p_.eps0; }

    double pressure(double rho) const;
    double dpressure(double rho) const;
    double enthalpy(double rho) const;

    // Critical density at physical height x2 in [0, x2_st].
    double critical_density(double x2) const;
    // Same, in the rescaled height s; accepts any s with a root.
    double critical_density_s(double s) const;
    // Largest admissible speed parameter at height s.
    double t_critical(double s) const;

    double rho_bar0() const override { return p_.rho_bar0; }
    bool incompressible() const override { return false; }
    BernoulliState invert(double t, double s) const override;
    FValue F(double t, double s) const override;
    double lambda(double x2) const override;
    double lambda_prime(double x2) const override;
    double d2F_diag(double x2) const override;

    // lambda = x2/rho0 + int_0^x2 tau d/dtau(1/H(tau;x2)) dtau
    double lambda_by_parts(double x2) const;
    // Residual of the rescaled Bernoulli law at a state.
    double bernoulli_residual(const BernoulliState& st) const;

private:
    double h_scalar(double rho, double t, double s) const;
    double rho_max(double s) const;

    EosParams p_;
    double x2_st_;
};

std::unique_ptr<ConstitutiveModel> make_model(const std::string& kind, const EosParams& p);

}  // namespace axifb

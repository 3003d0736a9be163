#pragma once

namespace axifb {

// Legendre functions of the first kind of real degree, via
// P_nu(s) = 2F1(-nu, nu+1; 1; (1-s)/2).
double hyp2f1(double a, double b, double c, double z);
double legendre_P(double nu, double s);
double legendre_P_prime(double nu, double s);
double legendre_P_second(double nu, double s);
double legendre_Q1(double s);

struct LegendreConstants {
    double s_star;          // root of P'_{3/2} in (-1, 0)
    double theta_star;      // arccos(s_star), radians
    double theta_star_deg;
    double m0;              // s_star^2 / 8
    double beta;            // flat-profile normalizer, sqrt(15/2)
    double beta0;           // Garabedian amplitude with unit weighted boundary norm
    double beta0_bernoulli; // Garabedian amplitude satisfying |grad u|^2 = x1^2 x2 on the free ray
};

// Computed once; thread-safe.
const LegendreConstants& find_theta_star();

}  // namespace axifb

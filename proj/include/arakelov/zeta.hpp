#pragma once

#include <map>
#include <vector>

#include "arakelov/numeric.hpp"
#include "arakelov/size.hpp"

namespace arakelov {

struct ZetaValue {
  Complex s;
  Complex value;
  Complex dirichlet;      // sum of a_k k^-s
  Complex gamma_factor;
  std::uint64_t truncation_N = 0;
  double series_tail_bound = 0;
};

// Gamma factors times the Dedekind series, Q and quadratic fields only.
// The series is summed to N and the remainder is written exactly through
// Hurwitz zeta values; series_tail_bound bounds the error of the whole
// Dirichlet part.
ZetaValue completed_zeta(const FieldPtr& field, Complex s, double tol = 1e-10);

Complex gamma_factor(const NumberField& field, Complex s);

struct PicIntegralOptions {
  double tol = 1e-10;
  int min_points = 256;  // trapezoid points on the Pic0 circle
  ThetaOptions theta = {};
};

// (1/w) * integral over Pic(F) of (k0 - 1) N^-s, folded onto degrees below
// log|disc|/2 with Riemann-Roch. Q and real quadratic fields of class number
// one. truncation_N reports the largest Pic0 grid used.
ZetaValue zeta_via_pic_integral(const FieldPtr& field, double s, const PicIntegralOptions& opts = {});

// Theta(y) = sum over n of exp(-pi n^2 y^2).
double theta_Q(double y);

// integral_0^inf Theta(x)^s Theta(1/x)^t dx/x for Re s, Re t < 0.
Complex two_variable_zeta_Q(Complex s, Complex t, double tol = 1e-12);

// A curve over F_q described by its Pic data. k0_table[d] lists k0 of the
// h classes of degree d for 0 <= d <= 2g-2; missing degrees use the generic
// value max(1, q^(d+1-g)).
struct CurveZetaSpec {
  int q = 2;
  int g = 0;
  int h = 1;
  std::map<int, std::vector<double>> k0_table;
};

void validate_curve_spec(const CurveZetaSpec& spec);
std::vector<double> curve_k0(const CurveZetaSpec& spec, int d);

// Finite middle sum plus the two geometric tails; the closed form is the
// meromorphic continuation away from q^s = 1 and q^t = 1.
double curve_two_variable_zeta(const CurveZetaSpec& spec, double s, double t);

// (q-1) q^((g-1)s) Z_X(s) from the k0 profile, continued through the
// geometric tail.
double curve_restricted_zeta(const CurveZetaSpec& spec, double s);

struct RestrictionCheck {
  double two_variable = 0;  // zeta_X(s, 1-s)
  double completed = 0;     // (q-1) q^((g-1)s) Z_X(s)
};
RestrictionCheck restriction_check(const CurveZetaSpec& spec, double s);

// Genus one, h = 1, trivial class with k0 = q.
CurveZetaSpec elliptic_profile(int q);

}  // namespace arakelov

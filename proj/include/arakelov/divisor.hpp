#pragma once

#include <vector>

#include "arakelov/field.hpp"

namespace arakelov {

// A fractional ideal I plus one real coefficient per infinite place.
struct ArakelovDivisor {
  FractionalIdeal ideal;
  std::vector<double> x;

  const FieldPtr& field() const { return ideal.field(); }
  bool operator==(const ArakelovDivisor& other) const { return ideal == other.ideal && x == other.x; }
};

ArakelovDivisor make_divisor(FractionalIdeal ideal, std::vector<double> x);
ArakelovDivisor trivial_divisor(const FieldPtr& field);

double degree(const ArakelovDivisor& d);
// degree - log sqrt|disc|
double chi(const ArakelovDivisor& d);
double chi_of_ring(const NumberField& field);
double log_abs_discriminant(const NumberField& field);

// |1|^2_D; meaningful whether or not 1 lies in I.
double unit_metric_norm(const ArakelovDivisor& d);
double effectivity(const ArakelovDivisor& d);
double metric_norm(const ArakelovDivisor& d, const FieldElement& f);
ExtReal metric_norm_ext(const ArakelovDivisor& d, const FieldElement& f);

ArakelovDivisor canonical_divisor(const FieldPtr& field);
// kappa - D: trace-dual ideal, negated coefficients.
ArakelovDivisor dual_divisor(const ArakelovDivisor& d);
ArakelovDivisor principal_divisor(const FieldPtr& field, const FieldElement& f);
ArakelovDivisor add(const ArakelovDivisor& a, const ArakelovDivisor& b);
ArakelovDivisor shift(const ArakelovDivisor& d, const std::vector<double>& dx);

// Q: (Z, d). Real quadratic with class number 1: (O_F, (d/2 - x, d/2 + x)).
ArakelovDivisor pic_point(const FieldPtr& field, double d, double x);
bool supports_pic_point(const NumberField& field);

}  // namespace arakelov

#include "arakelov/divisor.hpp"

#include <cmath>

#include "arakelov/errors.hpp"

namespace arakelov {

ArakelovDivisor make_divisor(FractionalIdeal ideal, std::vector<double> x) {
  const int places = ideal.field()->place_count();
  if (static_cast<int>(x.size()) != places)
    throw ValidationError("divisor needs " + std::to_string(places) + " infinite coefficients, got " +
                          std::to_string(x.size()));
  for (double v : x)
    if (!std::isfinite(v)) throw ValidationError("infinite coefficient is not finite");
  return {std::move(ideal), std::move(x)};
}

ArakelovDivisor trivial_divisor(const FieldPtr& field) {
  return {FractionalIdeal::ring_of_integers(field), std::vector<double>(static_cast<std::size_t>(field->place_count()), 0.0)};
}

double log_abs_discriminant(const NumberField& field) {
  return log_rational(Rational(abs(field.discriminant())));
}

double degree(const ArakelovDivisor& d) {
  double s = -log_rational(d.ideal.norm());
  for (double v : d.x) s += v;
  return s;
}

double chi_of_ring(const NumberField& field) { return -0.5 * log_abs_discriminant(field); }

double chi(const ArakelovDivisor& d) { return degree(d) + chi_of_ring(*d.field()); }

double unit_metric_norm(const ArakelovDivisor& d) {
  const auto& f = *d.field();
  double s = 0;
  for (int p = 0; p < f.place_count(); ++p) {
    const double x = d.x[static_cast<std::size_t>(p)];
    s += f.is_complex_place(p) ? 2 * std::exp(-x) : std::exp(-2 * x);
  }
  return s;
}

double effectivity(const ArakelovDivisor& d) {
  if (!d.ideal.contains_one()) return 0.0;
  return std::exp(-M_PI * unit_metric_norm(d));
}

ExtReal metric_norm_ext(const ArakelovDivisor& d, const FieldElement& f) {
  const auto& field = *d.field();
  ExtReal s = 0;
  for (int p = 0; p < field.place_count(); ++p) {
    const ExtReal x(d.x[static_cast<std::size_t>(p)]);
    const ExtComplex z = field.embed_ext(f, p);
    const ExtReal a2 = z.real() * z.real() + z.imag() * z.imag();
    s += field.is_complex_place(p) ? ExtReal(2 * exp(-x) * a2) : ExtReal(exp(-2 * x) * a2);
  }
  return s;
}

double metric_norm(const ArakelovDivisor& d, const FieldElement& f) { return static_cast<double>(metric_norm_ext(d, f)); }

ArakelovDivisor canonical_divisor(const FieldPtr& field) {
  return {codifferent(field), std::vector<double>(static_cast<std::size_t>(field->place_count()), 0.0)};
}

ArakelovDivisor dual_divisor(const ArakelovDivisor& d) {
  std::vector<double> x = d.x;
  for (auto& v : x) v = -v;
  return {trace_dual(d.ideal), std::move(x)};
}

ArakelovDivisor principal_divisor(const FieldPtr& field, const FieldElement& f) {
  if (field->is_zero(f)) throw ValidationError("principal divisor of zero");
  std::vector<double> x;
  for (int p = 0; p < field->place_count(); ++p) {
    const ExtReal l = log(abs(field->embed_ext(f, p)));
    x.push_back(static_cast<double>(field->is_complex_place(p) ? ExtReal(-2 * l) : ExtReal(-l)));
  }
  return {FractionalIdeal::principal(field, field->inv(f)), std::move(x)};
}

ArakelovDivisor add(const ArakelovDivisor& a, const ArakelovDivisor& b) {
  std::vector<double> x = a.x;
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += b.x[i];
  return {ideal_mul(a.ideal, b.ideal), std::move(x)};
}

ArakelovDivisor shift(const ArakelovDivisor& d, const std::vector<double>& dx) {
  if (dx.size() != d.x.size()) throw ValidationError("shift has the wrong number of coefficients");
  std::vector<double> x = d.x;
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += dx[i];
  return {d.ideal, std::move(x)};
}

bool supports_pic_point(const NumberField& field) {
  return field.is_rational() || (field.is_real_quadratic() && field.class_number() == 1 && field.units());
}

ArakelovDivisor pic_point(const FieldPtr& field, double d, double x) {
  if (field->is_rational()) return {FractionalIdeal::ring_of_integers(field), {d}};
  if (!supports_pic_point(*field))
    throw UnsupportedFieldError("Pic families exist only for Q and real quadratic fields of class number 1; "
                                "build the divisor explicitly with --ideal/--inf");
  return {FractionalIdeal::ring_of_integers(field), {d / 2 - x, d / 2 + x}};
}

}  // namespace arakelov

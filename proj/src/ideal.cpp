#include <algorithm>

#include "arakelov/errors.hpp"
#include "arakelov/field.hpp"

namespace arakelov {

namespace {

void require_same_field(const FractionalIdeal& a, const FractionalIdeal& b) {
  if (!a.field()->same_field(*b.field())) throw ValidationError("ideals belong to different fields");
}

}  // namespace

FractionalIdeal::FractionalIdeal(FieldPtr field, const RationalMatrix& generators) : field_(std::move(field)) {
  if (!field_) throw ValidationError("ideal without a field");
  const auto n = static_cast<std::size_t>(field_->degree());
  if (generators.cols() != n) throw ValidationError("ideal generators have the wrong number of coordinates");
  basis_ = hermite_normal_form(generators);
  norm_ = 1;
  for (std::size_t i = 0; i < n; ++i) norm_ *= basis_(i, i);
}

FractionalIdeal FractionalIdeal::ring_of_integers(const FieldPtr& field) {
  return {field, RationalMatrix::identity(static_cast<std::size_t>(field->degree()))};
}

FractionalIdeal FractionalIdeal::principal(const FieldPtr& field, const FieldElement& generator) {
  if (field->is_zero(generator)) throw ValidationError("principal ideal of zero");
  return {field, field->multiplication_matrix(generator)};
}

FractionalIdeal FractionalIdeal::generated_by(const FieldPtr& field, const std::vector<FieldElement>& generators) {
  const auto n = static_cast<std::size_t>(field->degree());
  std::vector<RationalVector> rows;
  for (const auto& g : generators) {
    const RationalMatrix m = field->multiplication_matrix(g);
    for (std::size_t i = 0; i < n; ++i) rows.push_back(m.row(i));
  }
  if (rows.empty()) throw ValidationError("ideal needs at least one generator");
  return {field, RationalMatrix::from_rows(rows)};
}

FieldElement FractionalIdeal::basis_element(std::size_t i) const { return {basis_.row(i)}; }

bool FractionalIdeal::contains(const FieldElement& x) const {
  auto c = solve_left(basis_, x.coords);
  return c && is_integral(*c);
}

bool FractionalIdeal::contains_one() const { return contains(field_->one()); }

bool FractionalIdeal::is_module_over_integers() const {
  const auto n = static_cast<std::size_t>(field_->degree());
  for (std::size_t i = 0; i < n; ++i) {
    RationalVector e(n, Rational(0));
    e[i] = 1;
    for (std::size_t j = 0; j < n; ++j)
      if (!contains(field_->mul(FieldElement{e}, basis_element(j)))) return false;
  }
  return true;
}

bool FractionalIdeal::operator==(const FractionalIdeal& other) const {
  return field_->same_field(*other.field_) && basis_ == other.basis_;
}

FractionalIdeal trace_dual(const FractionalIdeal& a) {
  // Y = M^{-T} T^{-1} pairs integrally with the rows of M.
  const auto& field = a.field();
  auto tinv = inverse(field->trace_matrix());
  auto minv = inverse(a.basis());
  if (!tinv || !minv) throw NumericError("singular trace form");
  return {field, transpose(*minv) * *tinv};
}

FractionalIdeal codifferent(const FieldPtr& field) { return trace_dual(FractionalIdeal::ring_of_integers(field)); }

FractionalIdeal ideal_mul(const FractionalIdeal& a, const FractionalIdeal& b) {
  require_same_field(a, b);
  const auto& field = a.field();
  const auto n = static_cast<std::size_t>(field->degree());
  std::vector<RationalVector> rows;
  rows.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rows.push_back(field->mul(a.basis_element(i), b.basis_element(j)).coords);
  return {field, RationalMatrix::from_rows(rows)};
}

FractionalIdeal ideal_scale(const FractionalIdeal& a, const Rational& s) {
  if (s == 0) throw ValidationError("scaling an ideal by zero");
  return {a.field(), s * a.basis()};
}

// dual(J) = codiff * J^-1, hence dual(codiff * a) = a^-1.
FractionalIdeal ideal_inverse(const FractionalIdeal& a) { return trace_dual(ideal_mul(codifferent(a.field()), a)); }

FractionalIdeal different(const FieldPtr& field) { return ideal_inverse(codifferent(field)); }

bool ideal_contains_one(const FractionalIdeal& a) { return a.contains_one(); }

}  // namespace arakelov

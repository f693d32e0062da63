#pragma once

// Number fields of small degree, their elements, and fractional ideals in
// canonical Hermite form.

#include <complex>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "arakelov/exact.hpp"

namespace arakelov {

// Coordinates with respect to the field's integral basis.
struct FieldElement {
  RationalVector coords;

  bool operator==(const FieldElement&) const = default;
};

struct UnitData {
  std::vector<FieldElement> fundamental_units;
  ExtReal regulator_ext;
  double regulator = 0.0;
};

class NumberField;
using FieldPtr = std::shared_ptr<const NumberField>;

// Everything a field needs before the derived data (roots, trace form,
// multiplication table) is computed.
struct FieldSpec {
  std::string name;
  std::vector<BigInt> polynomial;         // ascending degree, monic
  std::vector<RationalVector> basis;      // rows over the power basis; empty = power basis
  int roots_of_unity = 0;                 // 0 = derive (only possible for degree <= 2)
  std::vector<RationalVector> units;      // integral-basis coordinates
  std::vector<RationalMatrix> class_representatives;
  std::optional<int> class_number;
  std::vector<std::int64_t> dedekind_coefficients;
  std::optional<std::int64_t> quadratic_m;
};

class NumberField {
 public:
  explicit NumberField(FieldSpec spec);

  const std::string& name() const { return name_; }
  int degree() const { return degree_; }
  int r1() const { return r1_; }
  int r2() const { return r2_; }
  int place_count() const { return r1_ + r2_; }
  bool is_complex_place(int place) const { return place >= r1_; }

  const std::vector<BigInt>& polynomial() const { return polynomial_; }
  // Rows are the integral basis elements written over 1, a, ..., a^(n-1).
  const RationalMatrix& integral_basis() const { return basis_; }
  const RationalMatrix& trace_matrix() const { return trace_; }
  const BigInt& discriminant() const { return discriminant_; }
  int roots_of_unity() const { return w_; }
  // One root per infinite place: real roots first, then one of each
  // conjugate pair (positive imaginary part).
  const std::vector<ExtComplex>& roots() const { return roots_; }

  const std::optional<UnitData>& units() const { return units_; }
  std::optional<double> regulator() const;
  std::optional<int> class_number() const { return class_number_; }
  const std::vector<RationalMatrix>& class_representatives() const { return class_reps_; }
  const std::vector<std::int64_t>& supplied_dedekind_coefficients() const { return dedekind_; }
  std::optional<std::int64_t> quadratic_m() const { return quadratic_m_; }
  bool is_rational() const { return degree_ == 1; }
  bool is_real_quadratic() const { return degree_ == 2 && r1_ == 2; }
  bool is_imaginary_quadratic() const { return degree_ == 2 && r2_ == 1; }

  FieldElement zero() const;
  FieldElement one() const;
  FieldElement element(RationalVector coords) const;
  FieldElement from_power_basis(const RationalVector& power_coords) const;
  RationalVector to_power_basis(const FieldElement& a) const;

  FieldElement add(const FieldElement& a, const FieldElement& b) const;
  FieldElement sub(const FieldElement& a, const FieldElement& b) const;
  FieldElement neg(const FieldElement& a) const;
  FieldElement scale(const FieldElement& a, const Rational& s) const;
  FieldElement mul(const FieldElement& a, const FieldElement& b) const;
  FieldElement inv(const FieldElement& a) const;
  bool is_zero(const FieldElement& a) const;

  // Rows are the coordinates of a * b_i.
  RationalMatrix multiplication_matrix(const FieldElement& a) const;
  Rational norm(const FieldElement& a) const;
  Rational trace(const FieldElement& a) const;

  ExtComplex embed_ext(const FieldElement& a, int place) const;
  std::complex<double> embed(const FieldElement& a, int place) const;
  // Images of the integral basis at a place.
  const std::vector<ExtComplex>& basis_embeddings(int place) const { return basis_emb_[static_cast<std::size_t>(place)]; }

  bool same_field(const NumberField& other) const;
  nlohmann::json info() const;

 private:
  void check_coords(const FieldElement& a) const;

  std::string name_;
  int degree_ = 0;
  int r1_ = 0;
  int r2_ = 0;
  std::vector<BigInt> polynomial_;
  RationalMatrix basis_;
  RationalMatrix basis_inv_;
  RationalMatrix trace_;
  BigInt discriminant_;
  int w_ = 0;
  std::vector<ExtComplex> roots_;
  std::vector<std::vector<ExtComplex>> basis_emb_;
  // product_[i][j] = coordinates of b_i * b_j
  std::vector<std::vector<RationalVector>> product_;
  RationalVector one_coords_;
  std::optional<UnitData> units_;
  std::optional<int> class_number_;
  std::vector<RationalMatrix> class_reps_;
  std::vector<std::int64_t> dedekind_;
  std::optional<std::int64_t> quadratic_m_;
};

// Built-in constructors.
FieldPtr rational_field();
FieldPtr quadratic_field(std::int64_t m);
FieldPtr field_from_descriptor(const nlohmann::json& descriptor);
FieldPtr field_from_descriptor_file(const std::filesystem::path& path);

// Parses expressions like "(1 + x)/2" or "1/3*x^2 - 2" into power-basis
// coefficients. The variable may be spelled x, a or t.
RationalVector parse_polynomial(const std::string& text);

// Integers or "p/q" strings.
Rational rational_from_json(const nlohmann::json& v);
RationalMatrix rational_matrix_from_json(const nlohmann::json& v, std::size_t n);

class FractionalIdeal {
 public:
  // Canonicalizes the Z-span of `generators` (rows over the integral basis).
  FractionalIdeal(FieldPtr field, const RationalMatrix& generators);

  static FractionalIdeal ring_of_integers(const FieldPtr& field);
  static FractionalIdeal principal(const FieldPtr& field, const FieldElement& generator);
  // Ideal generated over O_F by a list of elements.
  static FractionalIdeal generated_by(const FieldPtr& field, const std::vector<FieldElement>& generators);

  const FieldPtr& field() const { return field_; }
  const RationalMatrix& basis() const { return basis_; }
  const Rational& norm() const { return norm_; }
  FieldElement basis_element(std::size_t i) const;

  bool contains(const FieldElement& x) const;
  bool contains_one() const;
  bool is_module_over_integers() const;

  bool operator==(const FractionalIdeal& other) const;

 private:
  FieldPtr field_;
  RationalMatrix basis_;
  Rational norm_;
};

FractionalIdeal codifferent(const FieldPtr& field);
FractionalIdeal different(const FieldPtr& field);
FractionalIdeal ideal_mul(const FractionalIdeal& a, const FractionalIdeal& b);
FractionalIdeal ideal_scale(const FractionalIdeal& a, const Rational& s);
// {y : Tr(x y) in Z for all x in a}; equals (different * a)^-1.
FractionalIdeal trace_dual(const FractionalIdeal& a);
FractionalIdeal ideal_inverse(const FractionalIdeal& a);
bool ideal_contains_one(const FractionalIdeal& a);

// Number of integral ideals of each norm 1..count (index 0 holds norm 1).
// Q and quadratic fields are computed from the Kronecker symbol; other
// fields must carry descriptor-supplied coefficients.
std::vector<std::int64_t> dedekind_coefficients(const NumberField& field, std::size_t count);

int kronecker_symbol(const BigInt& d, std::int64_t p);

// Quadratic-field helpers (exact integer arithmetic).
bool is_squarefree(std::int64_t m);
struct BinaryForm {
  BigInt a, b, c;
};
std::vector<BinaryForm> reduced_forms(const BigInt& discriminant);
// Class number of the maximal order of Q(sqrt m).
int quadratic_class_number(std::int64_t m);

}  // namespace arakelov

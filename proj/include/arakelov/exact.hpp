#pragma once

// Exact rational linear algebra used by the field and ideal layers.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <boost/multiprecision/gmp.hpp>

namespace arakelov {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

// 50 significant decimal digits; used for embeddings, regulators and the
// extended-precision theta mode.
using ExtReal = boost::multiprecision::cpp_bin_float_50;
using ExtComplex = boost::multiprecision::cpp_complex_50;

using RationalVector = std::vector<Rational>;

class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols);
  RationalMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> data);

  static RationalMatrix identity(std::size_t n);
  static RationalMatrix from_rows(const std::vector<RationalVector>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  RationalVector row(std::size_t i) const;
  void set_row(std::size_t i, const RationalVector& values);

  bool operator==(const RationalMatrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
RationalMatrix operator*(const Rational& s, const RationalMatrix& m);
RationalMatrix transpose(const RationalMatrix& m);

Rational determinant(const RationalMatrix& m);
std::optional<RationalMatrix> inverse(const RationalMatrix& m);

// Row vector times matrix.
RationalVector row_times(const RationalVector& v, const RationalMatrix& m);

// Solves x * m = b for square invertible m; nullopt when m is singular.
std::optional<RationalVector> solve_left(const RationalMatrix& m, const RationalVector& b);

// Least common multiple of all entry denominators.
BigInt common_denominator(const RationalMatrix& m);

// Row-style Hermite normal form of the lattice spanned by the rows of
// `generators`. The result is square (cols x cols), upper triangular with a
// positive diagonal and entries above the diagonal reduced into [0, diag).
// Throws ValidationError when the rows do not span a full-rank lattice.
RationalMatrix hermite_normal_form(const RationalMatrix& generators);

bool is_integral(const Rational& q);
bool is_integral(const RationalVector& v);

BigInt floor_div(const BigInt& a, const BigInt& b);
BigInt isqrt(const BigInt& n);

Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
std::string to_string(const BigInt& z);

double to_double(const Rational& q);
ExtReal to_ext(const Rational& q);
// Natural logarithm of a positive rational, without overflowing doubles.
double log_rational(const Rational& q);

}  // namespace arakelov

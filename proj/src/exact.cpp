#include "arakelov/exact.hpp"

#include <algorithm>
#include <charconv>
#include <utility>

#include "arakelov/errors.hpp"

namespace arakelov {

RationalMatrix::RationalMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

RationalMatrix::RationalMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) throw ValidationError("matrix data has the wrong size");
}

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::from_rows(const std::vector<RationalVector>& rows) {
  if (rows.empty()) return {};
  RationalMatrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) m.set_row(i, rows[i]);
  return m;
}

RationalVector RationalMatrix::row(std::size_t i) const {
  return RationalVector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                        data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

void RationalMatrix::set_row(std::size_t i, const RationalVector& values) {
  if (values.size() != cols_) throw ValidationError("row has the wrong length");
  std::copy(values.begin(), values.end(), data_.begin() + static_cast<std::ptrdiff_t>(i * cols_));
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.cols() != b.rows()) throw ValidationError("matrix shapes do not match");
  RationalMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

RationalMatrix operator*(const Rational& s, const RationalMatrix& m) {
  RationalMatrix r = m;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) *= s;
  return r;
}

RationalMatrix transpose(const RationalMatrix& m) {
  RationalMatrix t(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
  return t;
}

Rational determinant(const RationalMatrix& m) {
  if (m.rows() != m.cols()) throw ValidationError("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  RationalMatrix a = m;
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a(pivot, col) == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(pivot, j), a(col, j));
      det = -det;
    }
    det *= a(col, col);
    for (std::size_t i = col + 1; i < n; ++i) {
      if (a(i, col) == 0) continue;
      const Rational f = a(i, col) / a(col, col);
      for (std::size_t j = col; j < n; ++j) a(i, j) -= f * a(col, j);
    }
  }
  return det;
}

std::optional<RationalMatrix> inverse(const RationalMatrix& m) {
  if (m.rows() != m.cols()) throw ValidationError("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  RationalMatrix a = m;
  RationalMatrix inv = RationalMatrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a(pivot, col) == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    if (pivot != col)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(pivot, j), a(col, j));
        std::swap(inv(pivot, j), inv(col, j));
      }
    const Rational p = a(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      a(col, j) /= p;
      inv(col, j) /= p;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || a(i, col) == 0) continue;
      const Rational f = a(i, col);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(col, j);
        inv(i, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

RationalVector row_times(const RationalVector& v, const RationalMatrix& m) {
  if (v.size() != m.rows()) throw ValidationError("vector and matrix shapes do not match");
  RationalVector out(m.cols(), Rational(0));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) out[j] += v[i] * m(i, j);
  }
  return out;
}

std::optional<RationalVector> solve_left(const RationalMatrix& m, const RationalVector& b) {
  auto inv = inverse(m);
  if (!inv) return std::nullopt;
  return row_times(b, *inv);
}

BigInt common_denominator(const RationalMatrix& m) {
  BigInt l = 1;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const BigInt d = boost::multiprecision::denominator(m(i, j));
      l = boost::multiprecision::lcm(l, d);
    }
  return l;
}

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

BigInt isqrt(const BigInt& n) {
  if (n < 0) throw ValidationError("isqrt of a negative number");
  return boost::multiprecision::sqrt(n);
}

namespace {

using IntRow = std::vector<BigInt>;

void sub_multiple(IntRow& target, const IntRow& source, const BigInt& q) {
  if (q == 0) return;
  for (std::size_t j = 0; j < target.size(); ++j) target[j] -= q * source[j];
}

}  // namespace

RationalMatrix hermite_normal_form(const RationalMatrix& generators) {
  const std::size_t n = generators.cols();
  const BigInt denom = common_denominator(generators);
  std::vector<IntRow> rows;
  rows.reserve(generators.rows());
  for (std::size_t i = 0; i < generators.rows(); ++i) {
    IntRow r(n);
    for (std::size_t j = 0; j < n; ++j) {
      const Rational scaled = generators(i, j) * Rational(denom);
      r[j] = boost::multiprecision::numerator(scaled);
    }
    if (std::any_of(r.begin(), r.end(), [](const BigInt& x) { return x != 0; })) rows.push_back(std::move(r));
  }

  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < n; ++col) {
    // Euclid on column `col` across the remaining rows.
    while (true) {
      std::size_t best = rows.size();
      for (std::size_t i = pivot_row; i < rows.size(); ++i) {
        if (rows[i][col] == 0) continue;
        if (best == rows.size() || abs(rows[i][col]) < abs(rows[best][col])) best = i;
      }
      if (best == rows.size()) throw ValidationError("generators do not span a full-rank lattice");
      std::swap(rows[pivot_row], rows[best]);
      bool done = true;
      for (std::size_t i = pivot_row + 1; i < rows.size(); ++i) {
        if (rows[i][col] == 0) continue;
        sub_multiple(rows[i], rows[pivot_row], floor_div(rows[i][col], rows[pivot_row][col]));
        if (rows[i][col] != 0) done = false;
      }
      if (done) break;
    }
    if (rows[pivot_row][col] < 0)
      for (auto& x : rows[pivot_row]) x = -x;
    ++pivot_row;
  }
  rows.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) sub_multiple(rows[i], rows[j], floor_div(rows[i][j], rows[j][j]));

  RationalMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = Rational(rows[i][j], denom);
  return out;
}

bool is_integral(const Rational& q) { return boost::multiprecision::denominator(q) == 1; }

bool is_integral(const RationalVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& q) { return is_integral(q); });
}

Rational parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.empty()) throw ValidationError("empty rational literal");
  const auto slash = text.find('/');
  auto parse_int = [&](std::string_view s) {
    s = trim(s);
    std::string_view digits = s;
    if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) digits.remove_prefix(1);
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }))
      throw ValidationError("malformed rational literal '" + std::string(text) + "'");
    if (s.front() == '+') s.remove_prefix(1);
    return BigInt(std::string(s));
  };
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  const BigInt den = parse_int(text.substr(slash + 1));
  if (den == 0) throw ValidationError("zero denominator in '" + std::string(text) + "'");
  return Rational(parse_int(text.substr(0, slash)), den);
}

std::string to_string(const Rational& q) {
  if (is_integral(q)) return boost::multiprecision::numerator(q).str();
  return boost::multiprecision::numerator(q).str() + "/" + boost::multiprecision::denominator(q).str();
}

std::string to_string(const BigInt& z) { return z.str(); }

double to_double(const Rational& q) { return q.convert_to<double>(); }

ExtReal to_ext(const Rational& q) {
  return ExtReal(boost::multiprecision::numerator(q)) / ExtReal(boost::multiprecision::denominator(q));
}

double log_rational(const Rational& q) {
  if (q <= 0) throw DomainError("logarithm of a non-positive rational");
  const ExtReal num(boost::multiprecision::numerator(q));
  const ExtReal den(boost::multiprecision::denominator(q));
  return static_cast<double>(log(num) - log(den));
}

}  // namespace arakelov

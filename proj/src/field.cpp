#include "arakelov/field.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "arakelov/errors.hpp"

namespace arakelov {

namespace {

constexpr int kMaxDegree = 8;

using Poly = std::vector<Rational>;  // ascending coefficients

void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

// Remainder of a by b over Q; b nonzero and trimmed.
Poly poly_mod(Poly a, const Poly& b) {
  trim(a);
  while (a.size() >= b.size() && !a.empty()) {
    const Rational f = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    trim(a);
  }
  return a;
}

Poly poly_gcd(Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

Poly to_rational_poly(const std::vector<BigInt>& p) {
  Poly out;
  out.reserve(p.size());
  for (const auto& c : p) out.emplace_back(c);
  return out;
}

// Power sums p_k = sum of k-th powers of the roots, k = 0..count-1.
std::vector<BigInt> power_sums(const std::vector<BigInt>& poly, std::size_t count) {
  const std::size_t n = poly.size() - 1;
  std::vector<BigInt> s(count, BigInt(0));
  if (count == 0) return s;
  s[0] = BigInt(static_cast<long>(n));
  for (std::size_t k = 1; k < count; ++k) {
    BigInt acc = 0;
    for (std::size_t i = 1; i <= std::min(k, n); ++i) {
      const BigInt& c = poly[n - i];
      if (i < k || k > n)
        acc += c * s[k - i];
      else
        acc += BigInt(static_cast<long>(k)) * c;
    }
    s[k] = -acc;
  }
  return s;
}

// Product of two power-basis vectors reduced modulo the monic polynomial.
RationalVector poly_mulmod(const RationalVector& a, const RationalVector& b, const std::vector<BigInt>& poly) {
  const std::size_t n = poly.size() - 1;
  std::vector<Rational> prod(2 * n - 1, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) prod[i + j] += a[i] * b[j];
  }
  for (std::size_t k = prod.size(); k-- > n;) {
    const Rational top = prod[k];
    if (top == 0) continue;
    for (std::size_t i = 0; i < n; ++i) prod[k - n + i] -= top * Rational(poly[i]);
    prod[k] = 0;
  }
  prod.resize(n);
  return prod;
}

ExtComplex horner_ext(const std::vector<BigInt>& poly, const ExtComplex& z, ExtComplex* derivative) {
  ExtComplex p(0), dp(0);
  for (std::size_t k = poly.size(); k-- > 0;) {
    dp = dp * z + p;
    p = p * z + ExtComplex(ExtReal(poly[k]));
  }
  if (derivative) *derivative = dp;
  return p;
}

std::vector<std::complex<long double>> durand_kerner(const std::vector<BigInt>& poly) {
  using CL = std::complex<long double>;
  const int n = static_cast<int>(poly.size()) - 1;
  long double radius = 0;
  for (const auto& c : poly) radius = std::max(radius, std::fabs(c.convert_to<long double>()));
  radius += 1;
  std::vector<CL> z(static_cast<std::size_t>(n));
  const long double two_pi = 6.283185307179586476925286766559L;
  for (int k = 0; k < n; ++k) z[static_cast<std::size_t>(k)] = std::polar(radius, two_pi * k / n + 0.4L);
  auto eval = [&](const CL& x) {
    CL acc = 0;
    for (std::size_t k = poly.size(); k-- > 0;) acc = acc * x + CL(poly[k].convert_to<long double>());
    return acc;
  };
  for (int iter = 0; iter < 2000; ++iter) {
    long double change = 0;
    for (int i = 0; i < n; ++i) {
      CL denom = 1;
      for (int j = 0; j < n; ++j)
        if (i != j) denom *= z[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(j)];
      if (std::abs(denom) == 0) denom = CL(1e-30L, 0);
      const CL step = eval(z[static_cast<std::size_t>(i)]) / denom;
      z[static_cast<std::size_t>(i)] -= step;
      change = std::max(change, std::abs(step) / (1 + std::abs(z[static_cast<std::size_t>(i)])));
    }
    if (change < 1e-17L) return z;
  }
  throw NumericError("polynomial root finding did not converge");
}

ExtComplex newton_polish(const std::vector<BigInt>& poly, ExtComplex z, bool real) {
  for (int iter = 0; iter < 60; ++iter) {
    ExtComplex dp;
    const ExtComplex p = horner_ext(poly, z, &dp);
    if (abs(dp) == 0) break;
    ExtComplex step = p / dp;
    if (real) step = ExtComplex(step.real(), ExtReal(0));
    z -= step;
    if (abs(step) <= ExtReal("1e-48") * (1 + abs(z))) break;
  }
  return z;
}

// Screens for a factor of degree <= n/2 by checking whether some subset of
// the numeric roots has a near-integral product polynomial.
bool numeric_factor_found(const std::vector<std::complex<long double>>& roots) {
  using CL = std::complex<long double>;
  const int n = static_cast<int>(roots.size());
  for (int k = 1; k <= n / 2; ++k) {
    std::vector<int> idx(static_cast<std::size_t>(k));
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      std::vector<CL> coeffs{CL(1)};
      for (int i : idx) {
        std::vector<CL> next(coeffs.size() + 1, CL(0));
        for (std::size_t j = 0; j < coeffs.size(); ++j) {
          next[j + 1] += coeffs[j];
          next[j] -= coeffs[j] * roots[static_cast<std::size_t>(i)];
        }
        coeffs = std::move(next);
      }
      bool integral = true;
      for (const auto& c : coeffs) {
        const long double tol = 1e-7L * (1 + std::fabs(c.real()));
        if (std::fabs(c.imag()) > tol || std::fabs(c.real() - std::round(c.real())) > tol) {
          integral = false;
          break;
        }
      }
      if (integral) return true;
      int pos = k - 1;
      while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - k + pos) --pos;
      if (pos < 0) break;
      ++idx[static_cast<std::size_t>(pos)];
      for (int j = pos + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return false;
}

void check_irreducible_exact(const std::vector<BigInt>& poly) {
  const std::size_t n = poly.size() - 1;
  if (n == 1) return;
  // Integer roots of a monic polynomial divide the constant term.
  if (poly[0] == 0) throw ValidationError("polynomial is reducible (root 0)");
  const BigInt c0 = abs(poly[0]);
  if (c0 <= BigInt(1000000)) {
    const long bound = c0.convert_to<long>();
    for (long d = 1; d <= bound; ++d) {
      if (c0 % d != 0) continue;
      for (long sgn : {1L, -1L}) {
        BigInt acc = 0;
        for (std::size_t k = poly.size(); k-- > 0;) acc = acc * (sgn * d) + poly[k];
        if (acc == 0) throw ValidationError("polynomial is reducible (rational root " + std::to_string(sgn * d) + ")");
      }
    }
  }
  Poly p = to_rational_poly(poly);
  Poly dp(n);
  for (std::size_t k = 1; k <= n; ++k) dp[k - 1] = p[k] * Rational(static_cast<long>(k));
  if (poly_gcd(p, dp).size() > 1) throw ValidationError("polynomial has a repeated factor");
}

ExtReal ext_determinant(std::vector<std::vector<ExtReal>> a) {
  const std::size_t n = a.size();
  ExtReal det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t i = col + 1; i < n; ++i)
      if (abs(a[i][col]) > abs(a[piv][col])) piv = i;
    if (a[piv][col] == 0) return 0;
    if (piv != col) {
      std::swap(a[piv], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t i = col + 1; i < n; ++i) {
      const ExtReal f = a[i][col] / a[col][col];
      for (std::size_t j = col; j < n; ++j) a[i][j] -= f * a[col][j];
    }
  }
  return det;
}

}  // namespace

NumberField::NumberField(FieldSpec spec)
    : name_(std::move(spec.name)),
      polynomial_(std::move(spec.polynomial)),
      class_number_(spec.class_number),
      class_reps_(std::move(spec.class_representatives)),
      dedekind_(std::move(spec.dedekind_coefficients)),
      quadratic_m_(spec.quadratic_m) {
  if (polynomial_.size() < 2) throw ValidationError("defining polynomial must have degree >= 1");
  if (polynomial_.back() != 1) throw ValidationError("defining polynomial must be monic");
  degree_ = static_cast<int>(polynomial_.size()) - 1;
  if (degree_ > kMaxDegree) throw UnsupportedFieldError("degree above 8 is not supported");
  const auto n = static_cast<std::size_t>(degree_);
  check_irreducible_exact(polynomial_);

  // Roots, real first in descending order, then upper half-plane roots.
  std::vector<std::complex<long double>> approx;
  if (degree_ == 1)
    approx.emplace_back(-polynomial_[0].convert_to<long double>(), 0.0L);
  else
    approx = durand_kerner(polynomial_);
  if (degree_ > 1 && numeric_factor_found(approx)) throw ValidationError("polynomial is reducible");
  std::vector<long double> real_roots;
  std::vector<std::complex<long double>> upper;
  int lower_count = 0;
  for (const auto& z : approx) {
    if (std::fabs(z.imag()) <= 1e-9L * (1 + std::abs(z)))
      real_roots.push_back(z.real());
    else if (z.imag() > 0)
      upper.push_back(z);
    else
      ++lower_count;
  }
  if (static_cast<int>(upper.size()) != lower_count) throw NumericError("complex roots do not pair up");
  std::sort(real_roots.begin(), real_roots.end(), std::greater<>());
  std::sort(upper.begin(), upper.end(), [](const auto& a, const auto& b) {
    return a.real() != b.real() ? a.real() > b.real() : a.imag() < b.imag();
  });
  r1_ = static_cast<int>(real_roots.size());
  r2_ = static_cast<int>(upper.size());
  for (long double r : real_roots) {
    ExtComplex z(ExtReal(static_cast<double>(r)), ExtReal(0));
    if (degree_ == 1) z = ExtComplex(ExtReal(-polynomial_[0]), ExtReal(0));
    roots_.push_back(newton_polish(polynomial_, z, true));
  }
  for (const auto& u : upper)
    roots_.push_back(newton_polish(polynomial_, ExtComplex(ExtReal(static_cast<double>(u.real())), ExtReal(static_cast<double>(u.imag()))), false));
  for (const auto& z : roots_) {
    const ExtReal resid = abs(horner_ext(polynomial_, z, nullptr));
    const ExtReal bound = ExtReal("1e-12") * pow(1 + abs(z), degree_);
    if (!(resid < bound)) throw NumericError("root residual exceeds tolerance");
  }

  // Integral basis.
  if (spec.basis.empty()) {
    basis_ = RationalMatrix::identity(n);
  } else {
    if (spec.basis.size() != n) throw ValidationError("integral basis must have exactly n elements");
    for (auto& row : spec.basis) {
      if (row.size() > n) throw ValidationError("integral basis element has degree >= n");
      row.resize(n, Rational(0));
    }
    basis_ = RationalMatrix::from_rows(spec.basis);
  }
  auto binv = inverse(basis_);
  if (!binv) throw ValidationError("integral basis is linearly dependent");
  basis_inv_ = *binv;
  one_coords_ = basis_inv_.row(0);

  // Trace form: Tr(a^k a^l) = p_{k+l}.
  const auto sums = power_sums(polynomial_, 2 * n - 1);
  RationalMatrix power_trace(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) power_trace(i, j) = Rational(sums[i + j]);
  trace_ = basis_ * power_trace * transpose(basis_);
  const Rational disc = determinant(trace_);
  if (!is_integral(disc)) throw ValidationError("integral basis has non-integral discriminant");
  discriminant_ = boost::multiprecision::numerator(disc);
  if (discriminant_ == 0) throw ValidationError("discriminant is zero");

  product_.assign(n, std::vector<RationalVector>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      RationalVector c = row_times(poly_mulmod(basis_.row(i), basis_.row(j), polynomial_), basis_inv_);
      if (!is_integral(c)) throw ValidationError("integral basis is not closed under multiplication");
      product_[i][j] = c;
      product_[j][i] = std::move(c);
    }
  for (std::size_t i = 0; i < n; ++i)
    if (!is_integral(trace_.row(i))) throw ValidationError("integral basis has non-integral traces");

  basis_emb_.assign(static_cast<std::size_t>(place_count()), std::vector<ExtComplex>(n));
  for (int p = 0; p < place_count(); ++p) {
    const ExtComplex& z = roots_[static_cast<std::size_t>(p)];
    std::vector<ExtComplex> powers(n);
    powers[0] = ExtComplex(1);
    for (std::size_t k = 1; k < n; ++k) powers[k] = powers[k - 1] * z;
    for (std::size_t i = 0; i < n; ++i) {
      ExtComplex acc(0);
      for (std::size_t k = 0; k < n; ++k)
        if (basis_(i, k) != 0) acc += ExtComplex(to_ext(basis_(i, k))) * powers[k];
      if (p < r1_) acc = ExtComplex(acc.real(), ExtReal(0));
      basis_emb_[static_cast<std::size_t>(p)][i] = acc;
    }
  }

  // Roots of unity.
  if (spec.roots_of_unity > 0) {
    w_ = spec.roots_of_unity;
  } else if (degree_ <= 2 || r1_ > 0) {
    w_ = 2;
    if (degree_ == 2 && discriminant_ == -4) w_ = 4;
    if (degree_ == 2 && discriminant_ == -3) w_ = 6;
  } else {
    throw ValidationError("roots-of-unity count w is required for this field");
  }
  if (r1_ > 0 && w_ != 2) throw ValidationError("a field with a real place has w = 2");
  if (w_ % 2 != 0) throw ValidationError("w must be even");

  // Units and regulator.
  const int rank = place_count() - 1;
  if (!spec.units.empty()) {
    if (static_cast<int>(spec.units.size()) != rank)
      throw ValidationError("expected " + std::to_string(rank) + " fundamental units");
    UnitData data;
    std::vector<std::vector<ExtReal>> logs;
    for (const auto& coords : spec.units) {
      FieldElement u = element(coords);
      const Rational nu = norm(u);
      if (nu != 1 && nu != -1) throw ValidationError("unit generator does not have norm +-1");
      if (!is_integral(u.coords)) throw ValidationError("unit generator is not integral");
      std::vector<ExtReal> row;
      for (int p = 0; p < rank; ++p) {
        const ExtReal weight = is_complex_place(p) ? 2 : 1;
        row.push_back(weight * log(abs(embed_ext(u, p))));
      }
      logs.push_back(std::move(row));
      data.fundamental_units.push_back(std::move(u));
    }
    data.regulator_ext = rank == 0 ? ExtReal(1) : abs(ext_determinant(logs));
    data.regulator = static_cast<double>(data.regulator_ext);
    if (rank > 0 && !(data.regulator_ext > ExtReal("1e-30"))) throw ValidationError("unit generators are dependent");
    units_ = std::move(data);
  } else if (rank == 0) {
    units_ = UnitData{{}, ExtReal(1), 1.0};
  }

  for (const auto& rep : class_reps_)
    if (rep.rows() != n || rep.cols() != n) throw ValidationError("class representative has the wrong shape");
  if (!class_number_ && !class_reps_.empty()) class_number_ = static_cast<int>(class_reps_.size());
}

std::optional<double> NumberField::regulator() const {
  if (!units_) return std::nullopt;
  return units_->regulator;
}

void NumberField::check_coords(const FieldElement& a) const {
  if (a.coords.size() != static_cast<std::size_t>(degree_))
    throw ValidationError("element has " + std::to_string(a.coords.size()) + " coordinates, expected " +
                          std::to_string(degree_));
}

FieldElement NumberField::zero() const { return {RationalVector(static_cast<std::size_t>(degree_), Rational(0))}; }
FieldElement NumberField::one() const { return {one_coords_}; }

FieldElement NumberField::element(RationalVector coords) const {
  FieldElement e{std::move(coords)};
  check_coords(e);
  return e;
}

FieldElement NumberField::from_power_basis(const RationalVector& power_coords) const {
  RationalVector v = power_coords;
  if (v.size() > static_cast<std::size_t>(degree_)) v = poly_mod(v, to_rational_poly(polynomial_));
  v.resize(static_cast<std::size_t>(degree_), Rational(0));
  return {row_times(v, basis_inv_)};
}

RationalVector NumberField::to_power_basis(const FieldElement& a) const {
  check_coords(a);
  return row_times(a.coords, basis_);
}

FieldElement NumberField::add(const FieldElement& a, const FieldElement& b) const {
  check_coords(a);
  check_coords(b);
  FieldElement r = a;
  for (std::size_t i = 0; i < r.coords.size(); ++i) r.coords[i] += b.coords[i];
  return r;
}

FieldElement NumberField::sub(const FieldElement& a, const FieldElement& b) const { return add(a, neg(b)); }

FieldElement NumberField::neg(const FieldElement& a) const { return scale(a, Rational(-1)); }

FieldElement NumberField::scale(const FieldElement& a, const Rational& s) const {
  check_coords(a);
  FieldElement r = a;
  for (auto& c : r.coords) c *= s;
  return r;
}

FieldElement NumberField::mul(const FieldElement& a, const FieldElement& b) const {
  check_coords(a);
  check_coords(b);
  const auto n = static_cast<std::size_t>(degree_);
  RationalVector out(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    if (a.coords[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (b.coords[j] == 0) continue;
      const Rational f = a.coords[i] * b.coords[j];
      const auto& p = product_[i][j];
      for (std::size_t k = 0; k < n; ++k)
        if (p[k] != 0) out[k] += f * p[k];
    }
  }
  return {std::move(out)};
}

bool NumberField::is_zero(const FieldElement& a) const {
  return std::all_of(a.coords.begin(), a.coords.end(), [](const Rational& q) { return q == 0; });
}

FieldElement NumberField::inv(const FieldElement& a) const {
  if (is_zero(a)) throw ValidationError("inverse of zero");
  auto y = solve_left(multiplication_matrix(a), one_coords_);
  if (!y) throw ValidationError("element is not invertible");
  return {std::move(*y)};
}

RationalMatrix NumberField::multiplication_matrix(const FieldElement& a) const {
  const auto n = static_cast<std::size_t>(degree_);
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    RationalVector e(n, Rational(0));
    e[i] = 1;
    m.set_row(i, mul(a, FieldElement{e}).coords);
  }
  return m;
}

Rational NumberField::norm(const FieldElement& a) const { return determinant(multiplication_matrix(a)); }

Rational NumberField::trace(const FieldElement& a) const {
  check_coords(a);
  // Tr(b_i) = Tr(b_i * 1): row i of T against the coordinates of 1.
  Rational t = 0;
  for (std::size_t i = 0; i < a.coords.size(); ++i) {
    if (a.coords[i] == 0) continue;
    Rational tr_bi = 0;
    for (std::size_t j = 0; j < a.coords.size(); ++j) tr_bi += trace_(i, j) * one_coords_[j];
    t += a.coords[i] * tr_bi;
  }
  return t;
}

ExtComplex NumberField::embed_ext(const FieldElement& a, int place) const {
  check_coords(a);
  if (place < 0 || place >= place_count()) throw ValidationError("place index out of range");
  const auto& emb = basis_emb_[static_cast<std::size_t>(place)];
  ExtComplex acc(0);
  for (std::size_t i = 0; i < a.coords.size(); ++i)
    if (a.coords[i] != 0) acc += ExtComplex(to_ext(a.coords[i])) * emb[i];
  return acc;
}

std::complex<double> NumberField::embed(const FieldElement& a, int place) const {
  const ExtComplex z = embed_ext(a, place);
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

bool NumberField::same_field(const NumberField& other) const {
  return this == &other || (polynomial_ == other.polynomial_ && basis_ == other.basis_);
}

nlohmann::json NumberField::info() const {
  nlohmann::json j;
  j["name"] = name_;
  j["degree"] = degree_;
  j["r1"] = r1_;
  j["r2"] = r2_;
  std::vector<std::string> poly;
  for (const auto& c : polynomial_) poly.push_back(c.str());
  j["polynomial"] = poly;
  j["discriminant"] = discriminant_.str();
  j["w"] = w_;
  if (units_ && place_count() > 1)
    j["regulator"] = units_->regulator;
  else
    j["regulator"] = nullptr;
  if (class_number_)
    j["class_number"] = *class_number_;
  else
    j["class_number"] = nullptr;
  j["codifferent_norm"] = "1/" + BigInt(abs(discriminant_)).str();
  return j;
}

FieldPtr rational_field() {
  static const FieldPtr q = [] {
    FieldSpec spec;
    spec.name = "Q";
    spec.polynomial = {BigInt(0), BigInt(1)};
    spec.roots_of_unity = 2;
    spec.class_number = 1;
    spec.class_representatives = {RationalMatrix::identity(1)};
    return std::make_shared<const NumberField>(std::move(spec));
  }();
  return q;
}

}  // namespace arakelov

#include "arakelov/zeta.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "arakelov/errors.hpp"

namespace arakelov {

namespace {

constexpr int kHurwitzTerms = 6;

Complex cpow_neg(double base, Complex s) { return std::exp(-s * std::log(base)); }  // base^-s

// Kronecker character (disc / n) on residues 0..q-1, extended multiplicatively
// from primes.
std::vector<int> character_table(const NumberField& f) {
  const BigInt& disc = f.discriminant();
  const auto q = static_cast<std::int64_t>(BigInt(abs(disc)));
  std::vector<int> chi(static_cast<std::size_t>(q), 0);
  for (std::int64_t r = 1; r < q; ++r) {
    std::int64_t n = r;
    int v = 1;
    for (std::int64_t p = 2; p * p <= n && v != 0; ++p)
      while (n % p == 0) {
        v *= kronecker_symbol(disc, p);
        n /= p;
      }
    if (n > 1) v *= kronecker_symbol(disc, n);
    chi[static_cast<std::size_t>(r)] = v;
  }
  return chi;
}

struct Dirichlet {
  Complex value;
  double error = 0;
};

// zeta(s) = sum_{k<=N} k^-s + zeta(s, N+1).
Dirichlet riemann_part(Complex s, std::uint64_t n) {
  Complex p = 0;
  for (std::uint64_t k = n; k >= 1; --k) p += cpow_neg(static_cast<double>(k), s);
  double err = 0;
  const Complex h = hurwitz_zeta_em(s, static_cast<double>(n + 1), kHurwitzTerms, &err);
  return {p + h, err};
}

// L(s, chi) = sum_{d<=N} chi(d) d^-s + sum_{r=1}^{q} chi(N+r) q^-s zeta(s, (N+r)/q).
Dirichlet l_part(Complex s, std::uint64_t n, const std::vector<int>& chi) {
  const auto q = static_cast<std::uint64_t>(chi.size());
  Complex p = 0;
  for (std::uint64_t d = n; d >= 1; --d) {
    const int c = chi[d % q];
    if (c != 0) p += static_cast<double>(c) * cpow_neg(static_cast<double>(d), s);
  }
  const Complex qs = cpow_neg(static_cast<double>(q), s);
  double err = 0;
  for (std::uint64_t r = 1; r <= q; ++r) {
    const int c = chi[(n + r) % q];
    if (c == 0) continue;
    double e = 0;
    p += static_cast<double>(c) * qs * hurwitz_zeta_em(s, static_cast<double>(n + r) / static_cast<double>(q), kHurwitzTerms, &e);
    err += std::abs(qs) * e;
  }
  return {p, err};
}

Dirichlet dirichlet_at(const NumberField& f, Complex s, std::uint64_t n, const std::vector<int>& chi) {
  const Dirichlet z = riemann_part(s, n);
  if (f.is_rational()) return z;
  const Dirichlet l = l_part(s, n, chi);
  return {z.value * l.value, z.error * (std::abs(l.value) + l.error) + std::abs(z.value) * l.error};
}

}  // namespace

Complex gamma_factor(const NumberField& field, Complex s) {
  const Complex real_place = std::log(2.0) - s / 2.0 * std::log(M_PI) + lanczos_log_gamma(s / 2.0);
  const Complex complex_place = -s * std::log(2 * M_PI) + lanczos_log_gamma(s);
  return std::exp(static_cast<double>(field.r1()) * real_place + static_cast<double>(field.r2()) * complex_place);
}

ZetaValue completed_zeta(const FieldPtr& field, Complex s, double tol) {
  if (field->degree() > 2) throw UnsupportedFieldError("completed zeta is implemented for Q and quadratic fields");
  if (s.real() < 1.05) throw DomainError("completed zeta needs Re(s) >= 1.05; continuation is not implemented");
  if (!(tol > 0 && tol <= 1e-6)) throw ValidationError("tolerance must lie in (0, 1e-6]");
  const std::vector<int> chi = field->is_rational() ? std::vector<int>{} : character_table(*field);

  // Smallest N whose error bound meets tol: double, then bisect.
  std::uint64_t hi = 8;
  Dirichlet at_hi = dirichlet_at(*field, s, hi, chi);
  while (!(at_hi.error <= tol)) {
    if (hi > (1ULL << 26)) throw NumericError("Dirichlet series did not reach the tolerance");
    hi *= 2;
    at_hi = dirichlet_at(*field, s, hi, chi);
  }
  std::uint64_t lo = hi / 2;
  if (hi == 8) lo = 0;
  while (hi - lo > 1) {
    const std::uint64_t mid = (lo + hi) / 2;
    Dirichlet m = dirichlet_at(*field, s, mid, chi);
    if (m.error <= tol) {
      hi = mid;
      at_hi = m;
    } else {
      lo = mid;
    }
  }
  ZetaValue out;
  out.s = s;
  out.dirichlet = at_hi.value;
  out.gamma_factor = gamma_factor(*field, s);
  out.value = out.gamma_factor * out.dirichlet;
  out.truncation_N = hi;
  out.series_tail_bound = at_hi.error;
  return out;
}

ZetaValue zeta_via_pic_integral(const FieldPtr& field, double s, const PicIntegralOptions& opts) {
  if (!(s > 1)) throw DomainError("the Pic integral converges for s > 1");
  if (!field->is_rational() && !(field->is_real_quadratic() && supports_pic_point(*field)))
    throw UnsupportedFieldError("Pic integral needs Q or a real quadratic field of class number one");
  if (opts.min_points < 2) throw ValidationError("Pic0 grid needs at least 2 points");
  const double log_disc = log_abs_discriminant(*field);
  const double d0 = 0.5 * log_disc;
  const double reg = field->is_rational() ? 1.0 : *field->regulator();
  int max_points = 0;

  auto k0m1 = [&](double d, double x) {
    return std::exp(theta_sum(realize(pic_point(field, d, x)), opts.theta).log_k0_minus_1);
  };
  // Integral over Pic^(d) of k0 - 1.
  auto g = [&](double d) -> double {
    if (field->is_rational()) return k0m1(d, 0);
    // h(x) = h(-x): evaluate half the circle.
    std::vector<double> vals;
    int m = opts.min_points;
    auto fill = [&](int count) {
      std::vector<double> v(static_cast<std::size_t>(count));
      for (int k = 0; k <= count / 2; ++k) v[static_cast<std::size_t>(k)] = k0m1(d, k * reg / count);
      for (int k = count / 2 + 1; k < count; ++k) v[static_cast<std::size_t>(k)] = v[static_cast<std::size_t>(count - k)];
      return v;
    };
    auto trap = [&](const std::vector<double>& v) {
      double sum = 0;
      for (double y : v) sum += y;
      return sum * reg / static_cast<double>(v.size());
    };
    vals = fill(m);
    double prev = trap(vals);
    while (true) {
      m *= 2;
      if (m > (1 << 16)) throw NumericError("Pic0 quadrature did not converge");
      vals = fill(m);
      const double cur = trap(vals);
      if (std::abs(cur - prev) <= opts.tol * std::abs(cur) || cur == 0) {
        max_points = std::max(max_points, m);
        return cur;
      }
      prev = cur;
    }
  };
  const double norm_shift = (s - 0.5) * log_disc;
  auto integrand = [&](double d) {
    const double gd = g(d);
    if (gd == 0) return 0.0;
    return gd * (std::exp(-s * d) + std::exp((s - 1) * d - norm_shift));
  };

  // Left end: step down until the integrand is negligible against its peak.
  double peak = integrand(d0);
  double d_min = d0;
  for (int k = 1; k < 400; ++k) {
    const double d = d0 - 0.25 * k;
    const double v = integrand(d);
    peak = std::max(peak, v);
    d_min = d;
    if (k >= 4 && v < 1e-18 * peak) break;
  }
  double err = 0;
  const double integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, d_min, d0, 12,
                                                                                        opts.tol, &err);
  const double volume_term = reg / (s * (s - 1) * std::exp(0.5 * s * log_disc));
  ZetaValue out;
  out.s = s;
  out.value = (integral + volume_term) / field->roots_of_unity();
  out.dirichlet = std::nan("");
  out.gamma_factor = std::nan("");
  out.truncation_N = static_cast<std::uint64_t>(max_points);
  out.series_tail_bound = err / field->roots_of_unity();
  return out;
}

double theta_Q(double y) {
  if (!(y > 0)) throw DomainError("Theta needs y > 0");
  if (y < 1) return theta_Q(1 / y) / y;
  double s = 1;
  for (int n = 1;; ++n) {
    const double t = 2 * std::exp(-M_PI * n * n * y * y);
    s += t;
    if (t < 1e-18) break;
  }
  return s;
}

Complex two_variable_zeta_Q(Complex s, Complex t, double tol) {
  if (!(s.real() < 0 && t.real() < 0)) throw DomainError("the two-variable zeta integral needs Re(s), Re(t) < 0");
  constexpr double U = 3.0;
  // x = e^u; beyond |u| = U, Theta(e^|u|) = 1 to double precision, leaving
  // pure exponentials with closed-form integrals.
  auto f = [&](double u) {
    const double a = std::log(theta_Q(std::exp(u))), b = std::log(theta_Q(std::exp(-u)));
    return std::exp(s * a + t * b);
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  Complex total = 0;
  for (auto [a, b] : {std::pair{-U, 0.0}, std::pair{0.0, U}}) {
    const double re = GK::integrate([&](double u) { return f(u).real(); }, a, b, 15, tol);
    const double im = GK::integrate([&](double u) { return f(u).imag(); }, a, b, 15, tol);
    total += Complex(re, im);
  }
  total += -std::exp(t * U) / t - std::exp(s * U) / s;
  return total;
}

CurveZetaSpec elliptic_profile(int q) {
  CurveZetaSpec spec;
  spec.q = q;
  spec.g = 1;
  spec.h = 1;
  spec.k0_table[0] = {static_cast<double>(q)};
  return spec;
}

std::vector<double> curve_k0(const CurveZetaSpec& spec, int d) {
  if (d < 0) return std::vector<double>(static_cast<std::size_t>(spec.h), 1.0);
  if (d > 2 * spec.g - 2 || !spec.k0_table.count(d))
    return std::vector<double>(static_cast<std::size_t>(spec.h), std::max(1.0, std::pow(spec.q, d + 1 - spec.g)));
  return spec.k0_table.at(d);
}

void validate_curve_spec(const CurveZetaSpec& spec) {
  if (spec.q < 2) throw ValidationError("q must be a prime power >= 2");
  int base = spec.q;
  for (int p = 2; p <= base; ++p)
    if (base % p == 0) {
      while (base % p == 0) base /= p;
      if (base != 1) throw ValidationError("q must be a prime power");
      break;
    }
  if (spec.g < 0 || spec.h < 1) throw ValidationError("genus must be >= 0 and class number >= 1");
  for (const auto& [d, vals] : spec.k0_table) {
    if (d < 0 || d > 2 * spec.g - 2) throw ValidationError("k0 table entries must have 0 <= d <= 2g-2");
    if (static_cast<int>(vals.size()) != spec.h) throw ValidationError("k0 table needs one value per class");
    for (double v : vals)
      if (!(v >= 1)) throw ValidationError("k0 values must be >= 1");
  }
  // Riemann-Roch: the multiset at d is the multiset at 2g-2-d times q^(d-g+1).
  for (int d = 0; d <= 2 * spec.g - 2; ++d) {
    auto a = curve_k0(spec, d), b = curve_k0(spec, 2 * spec.g - 2 - d);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double f = std::pow(spec.q, d - spec.g + 1);
    for (std::size_t i = 0; i < a.size(); ++i)
      if (std::abs(a[i] - b[i] * f) > 1e-12 * a[i])
        throw ValidationError("k0 profile violates Riemann-Roch at degree " + std::to_string(d));
  }
}

double curve_two_variable_zeta(const CurveZetaSpec& spec, double s, double t) {
  validate_curve_spec(spec);
  const double q = spec.q, g = spec.g;
  const double qs = std::pow(q, s), qt = std::pow(q, t);
  if (std::abs(1 - qs) < 1e-12 || std::abs(1 - qt) < 1e-12) throw PoleError("q^s or q^t is 1");
  double middle = 0;
  for (int d = 0; d <= 2 * spec.g - 2; ++d)
    for (double k0 : curve_k0(spec, d)) {
      const double h0 = std::log(k0) / std::log(q);
      const double h1 = h0 - (d + 1 - g);
      middle += std::pow(q, s * h0 + t * h1);
    }
  // Genus 0: both tails contain degree -1, where h0 = h1 = 0.
  if (spec.g == 0) middle -= spec.h;
  return middle + spec.h * (std::pow(q, s * g) / (1 - qs) + std::pow(q, t * g) / (1 - qt));
}

double curve_restricted_zeta(const CurveZetaSpec& spec, double s) {
  validate_curve_spec(spec);
  const double q = spec.q, g = spec.g;
  if (std::abs(1 - std::pow(q, -s)) < 1e-12 || std::abs(1 - std::pow(q, 1 - s)) < 1e-12)
    throw PoleError("q^s or q^(1-s) is 1");
  double sum = 0;
  for (int d = 0; d <= 2 * spec.g - 2; ++d)
    for (double k0 : curve_k0(spec, d)) sum += (k0 - 1) * std::pow(q, -s * (d - g + 1));
  // d > 2g-2, m = d-g+1 >= g: h * sum (q^m - 1) q^-sm.
  const double m0 = g;
  sum += spec.h * (std::pow(q, m0 * (1 - s)) / (1 - std::pow(q, 1 - s)) - std::pow(q, -s * m0) / (1 - std::pow(q, -s)));
  return sum;
}

RestrictionCheck restriction_check(const CurveZetaSpec& spec, double s) {
  return {curve_two_variable_zeta(spec, s, 1 - s), curve_restricted_zeta(spec, s)};
}

}  // namespace arakelov

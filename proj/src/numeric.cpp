#include "arakelov/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "arakelov/errors.hpp"

namespace arakelov {

namespace {

template <class T>
T pairwise_sum(const T* v, std::size_t n) {
  if (n <= 8) {
    T s = 0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

constexpr double kLanczosG = 7.0;
constexpr double kLanczosCoeff[9] = {0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
                                     771.32342877765313,      -176.61502916214059,   12.507343278686905,
                                     -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// B_2, B_4, ..., B_20
constexpr double kBernoulli[10] = {1.0 / 6,      -1.0 / 30,        1.0 / 42,     -1.0 / 30,      5.0 / 66,
                                   -691.0 / 2730, 7.0 / 6,         -3617.0 / 510, 43867.0 / 798, -174611.0 / 330};

}  // namespace

double log_sum_exp(const std::vector<double>& terms) {
  if (terms.empty()) return -std::numeric_limits<double>::infinity();
  const double m = *std::max_element(terms.begin(), terms.end());
  if (!std::isfinite(m)) return m;
  std::vector<double> e(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) e[i] = std::exp(terms[i] - m);
  return m + std::log(pairwise_sum(e.data(), e.size()));
}

ExtReal log_sum_exp(const std::vector<ExtReal>& terms) {
  if (terms.empty()) throw NumericError("log_sum_exp of an empty extended sequence");
  const ExtReal m = *std::max_element(terms.begin(), terms.end());
  std::vector<ExtReal> e(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) e[i] = exp(terms[i] - m);
  return m + log(pairwise_sum(e.data(), e.size()));
}

double log1p_exp(double l) {
  if (l > 0) return l + std::log1p(std::exp(-l));
  return std::log1p(std::exp(l));
}

Complex lanczos_gamma(Complex z) {
  if (z.real() < 0.5) return M_PI / (std::sin(M_PI * z) * lanczos_gamma(1.0 - z));
  z -= 1.0;
  Complex x = kLanczosCoeff[0];
  for (int i = 1; i < 9; ++i) x += kLanczosCoeff[i] / (z + static_cast<double>(i));
  const Complex t = z + kLanczosG + 0.5;
  return std::sqrt(2 * M_PI) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

Complex lanczos_log_gamma(Complex z) {
  if (z.real() < 0.5) return std::log(M_PI / std::sin(M_PI * z)) - lanczos_log_gamma(1.0 - z);
  z -= 1.0;
  Complex x = kLanczosCoeff[0];
  for (int i = 1; i < 9; ++i) x += kLanczosCoeff[i] / (z + static_cast<double>(i));
  const Complex t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2 * M_PI) + (z + 0.5) * std::log(t) - t + std::log(x);
}

Complex hurwitz_zeta_em(Complex s, double a, int terms, double* error) {
  if (a <= 0) throw DomainError("Hurwitz zeta needs a > 0");
  if (std::abs(s - 1.0) < 1e-14) throw PoleError("Hurwitz zeta pole at s = 1");
  terms = std::clamp(terms, 0, 9);
  const double sigma = s.real();
  const Complex a_s = std::exp(-s * std::log(a));  // a^-s
  Complex sum = a * a_s / (s - 1.0) + 0.5 * a_s;
  Complex rising = s;  // (s)_{2j-1}
  double fact = 2.0;   // (2j)!
  double apow = a;     // a^(2j-1)
  for (int j = 1; j <= terms; ++j) {
    sum += kBernoulli[j - 1] / fact * rising * a_s / apow;
    rising *= (s + static_cast<double>(2 * j - 1)) * (s + static_cast<double>(2 * j));
    fact *= static_cast<double>((2 * j + 1) * (2 * j + 2));
    apow *= a * a;
  }
  if (error) {
    const int p = terms;
    const double next = std::abs(kBernoulli[p] / fact * rising) * std::exp(-sigma * std::log(a)) / apow;
    const double factor = std::abs(s + static_cast<double>(2 * p + 1)) / (sigma + 2 * p + 1);
    *error = 2 * next * std::max(1.0, factor);
  }
  return sum;
}

Complex riemann_zeta(Complex s, double tol) {
  const std::size_t shift = static_cast<std::size_t>(std::max(12.0, 2 * std::abs(s)));
  for (std::size_t m = shift;; m *= 2) {
    Complex partial = 0;
    for (std::size_t k = m; k >= 1; --k) partial += std::exp(-s * std::log(static_cast<double>(k)));
    double err = 0;
    const Complex tail = hurwitz_zeta_em(s, static_cast<double>(m + 1), 8, &err);
    if (err <= tol || m > (1u << 20)) return partial + tail;
  }
}

}  // namespace arakelov

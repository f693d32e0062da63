#pragma once

#include <complex>
#include <vector>

#include "arakelov/exact.hpp"

namespace arakelov {

using Complex = std::complex<double>;

// log(sum exp(t_i)) with a max shift and pairwise (tree) summation, so the
// result depends only on the order of `terms`. Empty input gives -inf.
double log_sum_exp(const std::vector<double>& terms);
ExtReal log_sum_exp(const std::vector<ExtReal>& terms);

// log(1 + e^l) without overflow or cancellation.
double log1p_exp(double l);

// Complex Gamma by the Lanczos approximation (g = 7, nine coefficients),
// relative accuracy around 1e-15 on Re z >= 1/2; reflection below.
Complex lanczos_gamma(Complex z);
Complex lanczos_log_gamma(Complex z);

// Hurwitz zeta(s, a) for a > 0 by Euler-Maclaurin with `terms` Bernoulli
// corrections at the point a itself (no forward shift). `error` receives a
// remainder bound, doubled for safety.
Complex hurwitz_zeta_em(Complex s, double a, int terms, double* error);

// Riemann zeta via hurwitz_zeta_em with a forward shift large enough for the
// requested absolute tolerance.
Complex riemann_zeta(Complex s, double tol = 1e-15);

}  // namespace arakelov

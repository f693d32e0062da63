#include "arakelov/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "arakelov/errors.hpp"
#include "arakelov/numeric.hpp"

namespace arakelov {

namespace {

constexpr double kLllDelta = 0.99;
constexpr double kMaxCondition = 1e14;

using LRow = std::vector<long double>;

long double dot(const LRow& a, const LRow& b) {
  long double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// In-place LLL on the rows of b; u records the same row operations.
void lll(std::vector<LRow>& b, IntMatrix& u) {
  const std::size_t n = b.size();
  u = IntMatrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  if (n < 2) return;
  std::vector<LRow> star(n);
  std::vector<long double> B(n, 0);
  auto compute_star = [&](std::size_t i) {
    star[i] = b[i];
    for (std::size_t j = 0; j < i; ++j) {
      const long double mu = dot(b[i], star[j]) / B[j];
      for (std::size_t c = 0; c < n; ++c) star[i][c] -= mu * star[j][c];
    }
    B[i] = dot(star[i], star[i]);
    if (!(B[i] > 0)) throw IllConditionedError("lattice basis is numerically dependent");
  };
  auto sub_row = [&](std::size_t k, std::size_t j, long double q) {
    if (std::fabs(q) > 9e15L) throw IllConditionedError("basis reduction coefficient overflow");
    const auto qi = static_cast<std::int64_t>(q);
    for (std::size_t c = 0; c < n; ++c) b[k][c] -= q * b[j][c];
    u.row(static_cast<Eigen::Index>(k)) -= qi * u.row(static_cast<Eigen::Index>(j));
  };
  compute_star(0);
  std::size_t valid = 1;
  std::size_t k = 1;
  std::size_t guard = 0;
  while (k < n) {
    if (++guard > 200000) throw NumericError("basis reduction did not terminate");
    while (valid < k) compute_star(valid++);
    // Size reduction, repeated because huge multipliers lose precision.
    for (int pass = 0; pass < 64; ++pass) {
      bool changed = false;
      for (std::size_t j = k; j-- > 0;) {
        const long double mu = dot(b[k], star[j]) / B[j];
        if (std::fabs(mu) > 0.51L) {
          sub_row(k, j, std::nearbyint(mu));
          changed = true;
        }
      }
      if (!changed) break;
    }
    compute_star(k);
    const long double mu = dot(b[k], star[k - 1]) / B[k - 1];
    if (B[k] >= (kLllDelta - mu * mu) * B[k - 1]) {
      ++k;
      valid = k;
    } else {
      std::swap(b[k], b[k - 1]);
      u.row(static_cast<Eigen::Index>(k)).swap(u.row(static_cast<Eigen::Index>(k - 1)));
      valid = k - 1;
      k = std::max<std::size_t>(k - 1, 1);
      if (valid == 0) {
        compute_star(0);
        valid = 1;
      }
    }
  }
}

ExtMatrix apply_transform(const IntMatrix& u, const ExtMatrix& rows) {
  const std::size_t n = rows.size();
  ExtMatrix out(n, std::vector<ExtReal>(n, ExtReal(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::int64_t c = u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (c == 0) continue;
      const ExtReal ce(c);
      for (std::size_t k = 0; k < n; ++k) out[i][k] += ce * rows[j][k];
    }
  return out;
}

std::vector<LRow> to_long_double(const ExtMatrix& rows) {
  std::vector<LRow> out(rows.size(), LRow(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.size(); ++j) out[i][j] = static_cast<long double>(rows[i][j]);
  return out;
}

ExtMatrix ext_inverse(ExtMatrix a) {
  const std::size_t n = a.size();
  ExtMatrix inv(n, std::vector<ExtReal>(n, ExtReal(0)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t i = col + 1; i < n; ++i)
      if (abs(a[i][col]) > abs(a[piv][col])) piv = i;
    if (a[piv][col] == 0) throw IllConditionedError("singular lattice basis");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    const ExtReal p = a[col][col];
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] /= p;
      inv[col][j] /= p;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || a[i][col] == 0) continue;
      const ExtReal f = a[i][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[i][j] -= f * a[col][j];
        inv[i][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

double log_unit_ball_volume(int n) { return 0.5 * n * std::log(M_PI) - std::lgamma(0.5 * n + 1); }

}  // namespace

DivisorLattice lattice_from_ext_rows(const ExtMatrix& rows) {
  const std::size_t n = rows.size();
  if (n == 0) throw ValidationError("empty lattice basis");
  for (const auto& r : rows)
    if (r.size() != n) throw ValidationError("lattice basis must be square");

  DivisorLattice lat;
  lat.dim = static_cast<int>(n);
  const auto N = static_cast<Eigen::Index>(n);
  lat.input_basis.resize(N, N);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      lat.input_basis(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = static_cast<double>(rows[i][j]);
      if (!isfinite(rows[i][j])) throw IllConditionedError("lattice basis has non-finite entries");
    }

  // Reduce in long double, then rebuild the rows from the extended input and
  // repeat until the reduction is stable.
  IntMatrix total = IntMatrix::Identity(N, N);
  ExtMatrix cur = rows;
  for (int round = 0; round < 6; ++round) {
    auto ld = to_long_double(cur);
    IntMatrix step;
    lll(ld, step);
    if (step == IntMatrix::Identity(N, N)) break;
    total = (step * total).eval();
    cur = apply_transform(total, rows);
  }
  lat.transform = total;
  lat.ext_basis = cur;

  lat.basis.resize(N, N);
  lat.gram.resize(N, N);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) lat.basis(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = static_cast<double>(cur[i][j]);
    for (std::size_t j = 0; j <= i; ++j) {
      ExtReal s = 0;
      for (std::size_t k = 0; k < n; ++k) s += cur[i][k] * cur[j][k];
      const double v = static_cast<double>(s);
      lat.gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      lat.gram(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(lat.gram, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff(), hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0) || hi / lo > kMaxCondition) {
    std::ostringstream msg;
    msg << "ill-conditioned lattice: reduced Gram eigenvalues in [" << lo << ", " << hi << "], condition "
        << (lo > 0 ? hi / lo : std::numeric_limits<double>::infinity()) << " > " << kMaxCondition;
    throw IllConditionedError(msg.str());
  }
  Eigen::LLT<Eigen::MatrixXd> llt(lat.gram);
  if (llt.info() != Eigen::Success) throw IllConditionedError("Cholesky factorization of the Gram matrix failed");
  lat.cholesky = llt.matrixL();
  lat.log_covolume = 0;
  for (Eigen::Index i = 0; i < N; ++i) lat.log_covolume += std::log(lat.cholesky(i, i));
  lat.covolume = std::exp(lat.log_covolume);
  return lat;
}

DivisorLattice lattice_from_basis(const Eigen::MatrixXd& rows) {
  if (rows.rows() != rows.cols()) throw ValidationError("lattice basis must be square");
  ExtMatrix ext(static_cast<std::size_t>(rows.rows()), std::vector<ExtReal>(static_cast<std::size_t>(rows.cols())));
  for (Eigen::Index i = 0; i < rows.rows(); ++i)
    for (Eigen::Index j = 0; j < rows.cols(); ++j) ext[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = rows(i, j);
  return lattice_from_ext_rows(ext);
}

ExtMatrix divisor_rows(const ArakelovDivisor& d) {
  const auto& field = *d.field();
  const auto n = static_cast<std::size_t>(field.degree());
  const ExtReal sqrt2 = sqrt(ExtReal(2));
  std::vector<ExtReal> scale(static_cast<std::size_t>(field.place_count()));
  for (int p = 0; p < field.place_count(); ++p) {
    const ExtReal x(d.x[static_cast<std::size_t>(p)]);
    scale[static_cast<std::size_t>(p)] = field.is_complex_place(p) ? ExtReal(sqrt2 * exp(-x / 2)) : ExtReal(exp(-x));
  }
  ExtMatrix rows(n, std::vector<ExtReal>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const FieldElement e = d.ideal.basis_element(i);
    std::size_t col = 0;
    for (int p = 0; p < field.place_count(); ++p) {
      const ExtComplex z = field.embed_ext(e, p);
      const ExtReal& s = scale[static_cast<std::size_t>(p)];
      rows[i][col++] = s * z.real();
      if (field.is_complex_place(p)) rows[i][col++] = s * z.imag();
    }
  }
  return rows;
}

DivisorLattice realize(const ArakelovDivisor& d) { return lattice_from_ext_rows(divisor_rows(d)); }

std::uint64_t for_each_below(const DivisorLattice& lat, double r_sq, std::uint64_t budget,
                             const std::function<void(const std::vector<std::int64_t>&, double)>& visit) {
  if (!(r_sq > 0)) throw ValidationError("enumeration radius must be positive");
  const int n = lat.dim;
  const double log_estimate = log_unit_ball_volume(n) + 0.5 * n * std::log(r_sq) - lat.log_covolume;
  if (log_estimate > std::log(static_cast<double>(budget)))
    throw BudgetExceededError("projected enumeration count " + std::to_string(std::exp(log_estimate)) +
                              " exceeds the budget of " + std::to_string(budget));
  const auto& L = lat.cholesky;
  std::vector<double> diag(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) diag[static_cast<std::size_t>(k)] = L(k, k) * L(k, k);
  const double slack = r_sq * (1 + 1e-10) + 1e-300;

  std::vector<std::int64_t> y(static_cast<std::size_t>(n), 0);
  std::vector<double> partial(static_cast<std::size_t>(n) + 1, 0.0);
  std::uint64_t nodes = 0;
  Eigen::VectorXd v(n);

  std::function<void(int, bool)> level = [&](int k, bool zero_above) {
    double center = 0;
    for (int i = k + 1; i < n; ++i) center -= L(i, k) / L(k, k) * static_cast<double>(y[static_cast<std::size_t>(i)]);
    const double rem = slack - partial[static_cast<std::size_t>(k) + 1];
    if (rem < 0) return;
    const double half = std::sqrt(rem / diag[static_cast<std::size_t>(k)]);
    double lo = std::ceil(center - half), hi = std::floor(center + half);
    if (zero_above) lo = std::max(lo, 0.0);
    if (hi - lo > 9e15) throw BudgetExceededError("enumeration range overflow");
    for (double t = lo; t <= hi; t += 1) {
      if (++nodes > budget)
        throw BudgetExceededError("enumeration exceeded the budget of " + std::to_string(budget) + " nodes");
      y[static_cast<std::size_t>(k)] = static_cast<std::int64_t>(t);
      const double dlt = t - center;
      partial[static_cast<std::size_t>(k)] = partial[static_cast<std::size_t>(k) + 1] + diag[static_cast<std::size_t>(k)] * dlt * dlt;
      const bool zero = zero_above && t == 0;
      if (k > 0) {
        level(k - 1, zero);
      } else if (!zero) {
        v.setZero();
        for (int i = 0; i < n; ++i)
          if (y[static_cast<std::size_t>(i)] != 0) v += static_cast<double>(y[static_cast<std::size_t>(i)]) * lat.basis.row(i).transpose();
        const double norm = v.squaredNorm();
        if (norm <= r_sq) visit(y, norm);
      }
    }
    y[static_cast<std::size_t>(k)] = 0;
  };
  level(n - 1, true);
  return nodes;
}

std::vector<LatticeVector> enumerate_below(const DivisorLattice& lat, double r_sq, std::uint64_t budget) {
  std::vector<LatticeVector> out;
  const int n = lat.dim;
  for_each_below(lat, r_sq, budget, [&](const std::vector<std::int64_t>& y, double norm) {
    LatticeVector lv;
    lv.coeffs.assign(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) lv.coeffs[static_cast<std::size_t>(j)] += y[static_cast<std::size_t>(i)] * lat.transform(i, j);
    auto first = std::find_if(lv.coeffs.begin(), lv.coeffs.end(), [](std::int64_t c) { return c != 0; });
    if (first != lv.coeffs.end() && *first < 0)
      for (auto& c : lv.coeffs) c = -c;
    lv.norm_sq = norm;
    out.push_back(std::move(lv));
  });
  std::sort(out.begin(), out.end(), [](const LatticeVector& a, const LatticeVector& b) { return a.coeffs < b.coeffs; });
  return out;
}

std::pair<LatticeVector, double> shortest_vector(const DivisorLattice& lat, std::uint64_t budget) {
  const double r_sq = lat.gram.diagonal().minCoeff() * (1 + 1e-9);
  const auto vecs = enumerate_below(lat, r_sq, budget);
  if (vecs.empty()) throw NumericError("shortest vector search found nothing");
  const LatticeVector* best = &vecs.front();
  for (const auto& v : vecs)
    if (v.norm_sq < best->norm_sq * (1 - 1e-12)) best = &v;
  return {*best, best->norm_sq};
}

double hermite_constant(const DivisorLattice& lat, std::uint64_t budget) {
  const double l1 = shortest_vector(lat, budget).second;
  return l1 / std::exp(2 * lat.log_covolume / lat.dim);
}

DivisorLattice dual_lattice(const DivisorLattice& lat) {
  const ExtMatrix inv = ext_inverse(lat.ext_basis);
  const std::size_t n = inv.size();
  ExtMatrix dual(n, std::vector<ExtReal>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) dual[i][j] = inv[j][i];
  return lattice_from_ext_rows(dual);
}

double log_tail_bound(const DivisorLattice& lat, double lambda1, double r) {
  const int n = lat.dim;
  constexpr double delta = 0.05;
  auto log_count = [&](double rho) {
    const double packing = n * std::log1p(2 * rho / lambda1);
    double gs = 0;
    for (int i = 0; i < n; ++i) gs += std::log1p(2 * rho / lat.cholesky(i, i));
    return std::min(packing, gs);
  };
  std::vector<double> terms;
  for (int k = 0; k < 1000000; ++k) {
    const double a = r + k * delta;
    const double t = log_count(a + delta) - M_PI * a * a;
    terms.push_back(t);
    if (k > 4 && t < terms.front() - 60 && t < terms[terms.size() - 2]) break;
  }
  return log_sum_exp(terms);
}

void finish_theta(ThetaResult& r) {
  const double l = r.log_k0_minus_1;
  if (l == -std::numeric_limits<double>::infinity()) {
    r.k0 = 1;
    r.h0 = 0;
    r.log_h0 = l;
    return;
  }
  r.k0 = l > 709 ? std::numeric_limits<double>::max() : 1 + std::exp(l);
  r.h0 = log1p_exp(l);
  r.log_h0 = l < -20 ? l - std::exp(l) / 2 : std::log(r.h0);
}

namespace {

ThetaResult accumulate(const DivisorLattice& lat, double r_sq, const ThetaOptions& opts) {
  std::vector<double> terms;
  std::vector<ExtReal> ext_terms;
  const double log2 = std::log(2.0);
  const ExtReal ext_log2 = log(ExtReal(2));
  const ExtReal ext_pi = boost::math::constants::pi<ExtReal>();
  const int n = lat.dim;
  for_each_below(lat, r_sq, opts.budget, [&](const std::vector<std::int64_t>& y, double norm) {
    if (opts.extended) {
      ExtReal s = 0;
      for (int k = 0; k < n; ++k) {
        ExtReal c = 0;
        for (int i = 0; i < n; ++i)
          if (y[static_cast<std::size_t>(i)] != 0) c += ExtReal(y[static_cast<std::size_t>(i)]) * lat.ext_basis[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
        s += c * c;
      }
      ext_terms.push_back(ext_log2 - ext_pi * s);
    } else {
      terms.push_back(log2 - M_PI * norm);
    }
  });
  ThetaResult r;
  r.radius_sq = r_sq;
  if (opts.extended) {
    r.vectors_counted = 2 * ext_terms.size();
    r.log_k0_minus_1 = ext_terms.empty() ? -std::numeric_limits<double>::infinity()
                                         : static_cast<double>(log_sum_exp(ext_terms));
  } else {
    r.vectors_counted = 2 * terms.size();
    r.log_k0_minus_1 = log_sum_exp(terms);
  }
  return r;
}

void check_tol(double tol) {
  if (!(tol > 0 && tol <= 1e-6)) throw ValidationError("tolerance must lie in (0, 1e-6]");
}

}  // namespace

ThetaResult theta_sum(const DivisorLattice& lat, const ThetaOptions& opts) {
  check_tol(opts.tol);
  const double l1_sq = shortest_vector(lat, opts.budget).second;
  const double l1 = std::sqrt(l1_sq);
  // Target: omitted mass <= tol * exp(-pi l1^2), at most tol/2 of the sum.
  const double log_target = std::log(opts.tol) - M_PI * l1_sq;
  double r = l1;
  while (log_tail_bound(lat, l1, r) > log_target) r += 0.05;
  ThetaResult res = accumulate(lat, r * r, opts);
  res.lambda1_sq = l1_sq;
  res.tail_bound = std::exp(log_tail_bound(lat, l1, r) - res.log_k0_minus_1);
  finish_theta(res);
  return res;
}

ThetaResult theta_sum_at_radius(const DivisorLattice& lat, double r_sq, const ThetaOptions& opts) {
  const double l1_sq = shortest_vector(lat, opts.budget).second;
  ThetaResult res = accumulate(lat, r_sq, opts);
  res.lambda1_sq = l1_sq;
  res.tail_bound = std::exp(log_tail_bound(lat, std::sqrt(l1_sq), std::sqrt(r_sq)) - res.log_k0_minus_1);
  finish_theta(res);
  return res;
}

}  // namespace arakelov

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "arakelov/divisor.hpp"

namespace arakelov {

using ExtMatrix = std::vector<std::vector<ExtReal>>;
using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr std::uint64_t kDefaultBudget = 100000000ULL;

// A full-rank lattice in R^n. `basis` holds an LLL-reduced basis (rows);
// `transform` maps the basis it was built from onto it:
// basis = transform * input_basis.
struct DivisorLattice {
  int dim = 0;
  Eigen::MatrixXd basis;
  Eigen::MatrixXd gram;
  Eigen::MatrixXd cholesky;  // lower triangular, gram = L L^T
  double covolume = 0;
  double log_covolume = 0;
  Eigen::MatrixXd input_basis;
  IntMatrix transform;
  ExtMatrix ext_basis;  // reduced rows, 50 digits
};

struct LatticeVector {
  std::vector<std::int64_t> coeffs;  // input-basis coordinates, first nonzero entry positive
  double norm_sq = 0;
  int multiplicity = 2;  // the +- pair
};

struct ThetaOptions {
  double tol = 1e-10;
  std::uint64_t budget = kDefaultBudget;
  bool extended = false;
};

struct ThetaResult {
  double log_k0_minus_1 = 0;
  double k0 = 1;
  double h0 = 0;
  double log_h0 = 0;  // log h0, finite even when h0 underflows
  double radius_sq = 0;
  double tail_bound = 0;  // bound on omitted / included mass
  std::uint64_t vectors_counted = 0;
  double lambda1_sq = 0;
};

// Builders.
DivisorLattice lattice_from_ext_rows(const ExtMatrix& rows);
DivisorLattice lattice_from_basis(const Eigen::MatrixXd& rows);
ExtMatrix divisor_rows(const ArakelovDivisor& d);
DivisorLattice realize(const ArakelovDivisor& d);

// Lattice vectors with 0 < |v|^2 <= r_sq, one per +- pair, sorted
// lexicographically by input-basis coordinates.
std::vector<LatticeVector> enumerate_below(const DivisorLattice& lat, double r_sq,
                                           std::uint64_t budget = kDefaultBudget);
// Visits every y (reduced coordinates) with 0 < |v|^2 <= r_sq once per pair.
// Returns the number of enumeration nodes.
std::uint64_t for_each_below(const DivisorLattice& lat, double r_sq, std::uint64_t budget,
                             const std::function<void(const std::vector<std::int64_t>&, double)>& visit);

std::pair<LatticeVector, double> shortest_vector(const DivisorLattice& lat, std::uint64_t budget = kDefaultBudget);
double hermite_constant(const DivisorLattice& lat, std::uint64_t budget = kDefaultBudget);
DivisorLattice dual_lattice(const DivisorLattice& lat);

ThetaResult theta_sum(const DivisorLattice& lat, const ThetaOptions& opts = {});
// Fixed truncation radius; no tail certification.
ThetaResult theta_sum_at_radius(const DivisorLattice& lat, double r_sq, const ThetaOptions& opts = {});
// Upper bound on sum over |v| > r of exp(-pi |v|^2), as a natural log.
double log_tail_bound(const DivisorLattice& lat, double lambda1, double r);

// Fills k0, h0, log_h0 from log_k0_minus_1.
void finish_theta(ThetaResult& r);

}  // namespace arakelov

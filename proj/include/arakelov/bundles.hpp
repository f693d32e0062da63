#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "arakelov/lattice.hpp"

namespace arakelov {

// A projective O_F-module I_1 + ... + I_r with one positive definite
// Hermitian r x r matrix per infinite place. A vector m has squared length
//   sum_real s(m)^T H s(m) + sum_complex 2 s(m)^* H s(m).
// The usual shape O_F^(r-1) + I is what `make_bundle` builds; duals and
// twists may leave other component ideals.
struct ArakelovBundle {
  FieldPtr field;
  std::vector<FractionalIdeal> components;
  std::vector<Eigen::MatrixXcd> place_metrics;
  std::optional<ArakelovDivisor> twist;
  bool admissible = false;

  int rank() const { return static_cast<int>(components.size()); }
  // Product of the component ideals (the Steinitz class representative).
  FractionalIdeal steinitz_ideal() const;
};

// Validates shapes, positive definiteness, and det = 1 when admissible.
ArakelovBundle make_bundle(FractionalIdeal steinitz, std::vector<Eigen::MatrixXcd> metrics,
                           std::optional<ArakelovDivisor> twist = std::nullopt, bool admissible = false);
ArakelovBundle make_bundle(const FieldPtr& field, std::vector<FractionalIdeal> components,
                           std::vector<Eigen::MatrixXcd> metrics, std::optional<ArakelovDivisor> twist = std::nullopt,
                           bool admissible = false);
// O_F^r, identity metrics.
ArakelovBundle trivial_bundle(const FieldPtr& field, int rank);
// Rank one bundle carrying the same lattice as d.
ArakelovBundle line_bundle(const ArakelovDivisor& d);

void validate_bundle(const ArakelovBundle& m);

// The twist folded into the components and metrics.
ArakelovBundle untwisted(const ArakelovBundle& m);

double bundle_degree(const ArakelovBundle& m);
double bundle_chi(const ArakelovBundle& m);

inline constexpr int kMaxBundleDimension = 12;

ExtMatrix bundle_rows(const ArakelovBundle& m);
DivisorLattice realize(const ArakelovBundle& m);

ThetaResult bundle_h0(const ArakelovBundle& m, const ThetaOptions& opts = {});
// kappa tensor the dual: trace-dual components, metrics H^-T.
ArakelovBundle bundle_dual(const ArakelovBundle& m);
double bundle_rr_defect(const ArakelovBundle& m, const ThetaOptions& opts = {});

// Simultaneous change of basis m -> g m by g in GL(r, O_F): the metrics
// become s(g)^* H s(g). Components must all be O_F. Admissibility is kept
// when |s(det g)| = 1 everywhere.
ArakelovBundle transform_bundle(const ArakelovBundle& m, const std::vector<std::vector<FieldElement>>& g);

// {"rank", "ideal" (optional matrix), "components" (optional list of
// matrices), "metrics": per place, rows of numbers, "p/q" strings or
// [re, im] pairs, "twist": {"ideal", "x"}, "admissible"}.
ArakelovBundle bundle_from_json(const FieldPtr& field, const nlohmann::json& j);
nlohmann::json bundle_to_json(const ArakelovBundle& m);

}  // namespace arakelov

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "arakelov/lattice.hpp"

namespace arakelov {

struct SizeEvaluation {
  ArakelovDivisor divisor;
  ThetaResult theta;
  double degree = 0;
  double chi = 0;
};

SizeEvaluation h0(const ArakelovDivisor& d, const ThetaOptions& opts = {});

// h0(D) - h0(kappa - D) - chi(D), computed from log-space theta values.
double rr_defect(const ArakelovDivisor& d, const ThetaOptions& opts = {});

// -(log h0(D_x) - log 2) / (2 pi e^-d) for the real quadratic family.
double b0(const FieldPtr& field, double d, double x, const ThetaOptions& opts = {});

struct ScanSample {
  double x = 0;
  double h0 = 0;
  double log_k0_minus_1 = 0;
  int class_index = 0;
};

struct ScanResult {
  std::string field;
  double d = 0;
  double step = 0;     // effective spacing, period / count
  double period = 0;   // R for real quadratic, 0 otherwise
  double tol = 0;
  std::vector<ScanSample> samples;
  double argmax_x = 0;
  double max_h0 = 0;
  nlohmann::json metadata;
};

// The divisor of class `cls` (index into the class representatives; 0 is
// the trivial class) at degree d and unit-torus position x.
ArakelovDivisor pic_family_point(const FieldPtr& field, int cls, double d, double x);
bool supports_pic_scan(const NumberField& field);

// Real quadratic: x on a grid over [0, R) for every class. Imaginary
// quadratic: one sample per class. Q: a single sample.
ScanResult pic0_scan(const FieldPtr& field, double d, double step, const ThetaOptions& opts = {});

struct ArgmaxResult {
  double x_star = 0;
  int class_star = 0;
  double h0_star = 0;
  double h0_at_zero = 0;
  bool zero_dominates_grid = false;
  std::vector<ScanSample> grid;
  std::vector<std::string> warnings;
};

ArgmaxResult pic0_argmax(const FieldPtr& field, const ThetaOptions& opts = {}, int grid_points = 2048);

struct BoundReport {
  double degree = 0;
  int n = 0;
  double log_k0_minus_1 = 0;
  double log_h0 = 0;
  bool cor1_applies = false;
  double log_beta = 0;          // log((k0-1) e^{pi n e^{-2 deg/n}})
  bool h0_below_k0_minus_1 = false;
  bool prop3_applies = false;
  double prop3_rhs = 0;         // deg + h0(O_F)
  bool prop3_holds = false;
  std::optional<bool> hypothesis_confirmed;  // trivial class maximizes h0 on Pic0
  std::vector<std::string> violations;
};

BoundReport bound_check(const ArakelovDivisor& d, const ThetaOptions& opts = {}, bool check_hypothesis = true);

struct OmegaConstants {
  double omega = 0;
  double omega0 = 0;
};
OmegaConstants omega_constants();

struct EtaReport {
  std::string field;
  double eta = 0;
  double omega_power = 0;
  double algebraic_factor = 0;
  std::optional<double> closed_form_value;
  std::optional<double> abs_error;
  double eta_codifferent = 0;  // k0 of the codifferent with the trivial metric
  double tail_bound = 0;
};

// Closed form for eta when the field is one of the tabulated examples.
std::optional<double> eta_closed_form(const NumberField& field);
EtaReport eta_invariant(const FieldPtr& field, const ThetaOptions& opts = {});

}  // namespace arakelov

#include "arakelov/size.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>

#include "arakelov/errors.hpp"

namespace arakelov {

SizeEvaluation h0(const ArakelovDivisor& d, const ThetaOptions& opts) {
  SizeEvaluation out{d, theta_sum(realize(d), opts), degree(d), chi(d)};
  return out;
}

double rr_defect(const ArakelovDivisor& d, const ThetaOptions& opts) {
  const auto a = theta_sum(realize(d), opts);
  const auto b = theta_sum(realize(dual_divisor(d)), opts);
  return a.h0 - b.h0 - chi(d);
}

double b0(const FieldPtr& field, double d, double x, const ThetaOptions& opts) {
  if (!field->is_real_quadratic()) throw UnsupportedFieldError("B0 is defined for real quadratic fields");
  const auto t = theta_sum(realize(pic_point(field, d, x)), opts);
  return -(t.log_h0 - std::log(2.0)) / (2 * M_PI * std::exp(-d));
}

bool supports_pic_scan(const NumberField& field) {
  if (field.is_rational() || field.is_imaginary_quadratic()) return true;
  return field.is_real_quadratic() && field.units() && !field.class_representatives().empty();
}

ArakelovDivisor pic_family_point(const FieldPtr& field, int cls, double d, double x) {
  if (!supports_pic_scan(*field))
    throw UnsupportedFieldError("Pic scans need Q or a quadratic field with class data; "
                                "build the divisor explicitly with --ideal/--inf");
  if (field->is_rational()) return pic_point(field, d, x);
  const auto& reps = field->class_representatives();
  if (cls < 0 || cls >= static_cast<int>(reps.size())) throw ValidationError("class index out of range");
  FractionalIdeal ideal(field, reps[static_cast<std::size_t>(cls)]);
  const double log_norm = log_rational(ideal.norm());
  if (field->is_imaginary_quadratic()) return make_divisor(std::move(ideal), {d + log_norm});
  const double c = d / 2 + log_norm / 2;
  return make_divisor(std::move(ideal), {c - x, c + x});
}

namespace {

int class_count(const NumberField& f) {
  return f.is_rational() ? 1 : static_cast<int>(f.class_representatives().size());
}

ScanSample sample(const FieldPtr& field, int cls, double d, double x, const ThetaOptions& opts) {
  const auto t = theta_sum(realize(pic_family_point(field, cls, d, x)), opts);
  return {x, t.h0, t.log_k0_minus_1, cls};
}

bool better(const ScanSample& a, const ScanSample& b) { return a.log_k0_minus_1 > b.log_k0_minus_1; }

}  // namespace

ScanResult pic0_scan(const FieldPtr& field, double d, double step, const ThetaOptions& opts) {
  if (!(step > 0)) throw ValidationError("scan step must be positive");
  if (!supports_pic_scan(*field))
    throw UnsupportedFieldError("Pic scans need Q or a quadratic field with class data");
  ScanResult out;
  out.field = field->name();
  out.d = d;
  out.tol = opts.tol;
  const int classes = class_count(*field);
  if (field->is_real_quadratic()) {
    out.period = *field->regulator();
    const int count = std::max(1, static_cast<int>(std::lround(out.period / step)));
    out.step = out.period / count;
    for (int c = 0; c < classes; ++c)
      for (int k = 0; k < count; ++k) out.samples.push_back(sample(field, c, d, k * out.step, opts));
  } else {
    out.step = 0;
    for (int c = 0; c < classes; ++c) out.samples.push_back(sample(field, c, d, 0.0, opts));
  }
  const auto best = std::max_element(out.samples.begin(), out.samples.end(),
                                     [](const ScanSample& a, const ScanSample& b) { return better(b, a); });
  out.argmax_x = best->x;
  out.max_h0 = best->h0;
  out.metadata = {{"field", out.field}, {"d", d}, {"R", out.period}, {"step", out.step}, {"tolerance", opts.tol},
                  {"classes", classes}};
  if (classes > 1)
    out.metadata["class_representatives"] =
        "each class sampled through its stored representative I, with x shifted by log N(I)/2 so the degree is d";
  return out;
}

ArgmaxResult pic0_argmax(const FieldPtr& field, const ThetaOptions& opts, int grid_points) {
  if (grid_points < 8) throw ValidationError("argmax grid needs at least 8 points");
  ArgmaxResult out;
  if (!field->is_rational() && field->degree() != 2)
    out.warnings.push_back("the maximum conjecture is stated for Galois or imaginary quadratic fields");
  ScanResult scan;
  if (field->is_real_quadratic()) {
    const double r = field->regulator().value_or(0);
    scan = pic0_scan(field, 0.0, r / grid_points, opts);
  } else {
    scan = pic0_scan(field, 0.0, 1.0, opts);
  }
  out.grid = scan.samples;
  const ScanSample zero = sample(field, 0, 0.0, 0.0, opts);
  out.h0_at_zero = zero.h0;
  out.zero_dominates_grid = std::all_of(out.grid.begin(), out.grid.end(), [&](const ScanSample& s) {
    return s.log_k0_minus_1 <= zero.log_k0_minus_1 + 1e-13 * std::max(1.0, std::abs(zero.log_k0_minus_1));
  });

  ScanSample best = *std::max_element(out.grid.begin(), out.grid.end(),
                                      [](const ScanSample& a, const ScanSample& b) { return better(b, a); });
  if (field->is_real_quadratic()) {
    const double r = scan.period, h = scan.step;
    std::vector<std::size_t> order(out.grid.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return better(out.grid[a], out.grid[b]); });
    const double g = (std::sqrt(5.0) - 1) / 2;
    for (std::size_t k = 0; k < std::min<std::size_t>(5, order.size()); ++k) {
      const ScanSample& start = out.grid[order[k]];
      auto f = [&](double x) { return sample(field, start.class_index, 0.0, x, opts); };
      double a = start.x - h, b = start.x + h;
      double c = b - g * (b - a), e = a + g * (b - a);
      ScanSample fc = f(c), fe = f(e);
      while (b - a > 1e-8) {
        if (better(fc, fe) || fc.log_k0_minus_1 == fe.log_k0_minus_1) {
          b = e;
          e = c;
          fe = fc;
          c = b - g * (b - a);
          fc = f(c);
        } else {
          a = c;
          c = e;
          fc = fe;
          e = a + g * (b - a);
          fe = f(e);
        }
      }
      ScanSample cand = better(fc, fe) ? fc : fe;
      if (better(start, cand)) cand = start;
      if (better(cand, best)) best = cand;
    }
    double x = std::fmod(best.x, r);
    if (x > r / 2) x -= r;
    if (x <= -r / 2) x += r;
    best.x = x;
  }
  out.x_star = best.x;
  out.class_star = best.class_index;
  out.h0_star = best.h0;
  return out;
}

BoundReport bound_check(const ArakelovDivisor& d, const ThetaOptions& opts, bool check_hypothesis) {
  const auto& field = d.field();
  BoundReport r;
  r.degree = degree(d);
  r.n = field->degree();
  const auto t = theta_sum(realize(d), opts);
  r.log_k0_minus_1 = t.log_k0_minus_1;
  r.log_h0 = t.log_h0;
  const double half_log_disc = 0.5 * log_abs_discriminant(*field);
  r.cor1_applies = r.degree <= half_log_disc;
  r.log_beta = t.log_k0_minus_1 + M_PI * r.n * std::exp(-2 * r.degree / r.n);
  // log(1+y) < y; below e^-30 the gap y^2/2 is under double resolution.
  r.h0_below_k0_minus_1 = t.log_h0 < t.log_k0_minus_1 || (t.log_k0_minus_1 < -30 && t.log_h0 <= t.log_k0_minus_1);
  if (!r.h0_below_k0_minus_1) r.violations.push_back("h0 < k0 - 1 fails");

  r.prop3_applies = r.degree >= 0;
  const double h0_trivial = theta_sum(realize(trivial_divisor(field)), opts).h0;
  r.prop3_rhs = r.degree + h0_trivial;
  r.prop3_holds = t.h0 <= r.prop3_rhs + 1e-12;
  if (check_hypothesis && supports_pic_scan(*field)) {
    const auto am = pic0_argmax(field, opts);
    r.hypothesis_confirmed = am.zero_dominates_grid && am.class_star == 0 && std::abs(am.x_star) < 1e-6;
  }
  if (r.prop3_applies && !r.prop3_holds && r.hypothesis_confirmed.value_or(false))
    r.violations.push_back("h0(D) <= deg(D) + h0(O_F) fails although the trivial class maximizes h0");
  return r;
}

OmegaConstants omega_constants() {
  using boost::math::tgamma;
  const ExtReal pi = boost::math::constants::pi<ExtReal>();
  const ExtReal omega = pow(pi, ExtReal(0.25)) / tgamma(ExtReal(3) / 4);
  const ExtReal g14 = tgamma(ExtReal(1) / 4);
  const ExtReal omega0 = g14 * g14 / (4 * sqrt(2 * pi));
  return {static_cast<double>(omega), static_cast<double>(omega0)};
}

std::optional<double> eta_closed_form(const NumberField& f) {
  const double w = omega_constants().omega;
  const BigInt& disc = f.discriminant();
  const int n = f.degree();
  if (n == 1) return w;
  if (n == 2 && disc == -4) return w * w * (2 + std::sqrt(2.0)) / 4;
  if (n == 2 && disc == -3) return w * w * std::pow((2 + std::sqrt(3.0)) / (4 * std::sqrt(3.0)), 0.25);
  if (n == 3 && disc == 49)
    return std::pow(w, 3) * (7 + 3 * std::sqrt(7.0) + 3 * std::sqrt(2 * std::sqrt(7.0))) / 28;
  if (n == 4 && disc == 125 && f.r2() == 2)
    return std::pow(w, 4) * (23 + std::sqrt(5.0)) / 20 * std::sqrt((1 + std::sqrt(5.0)) / 10);
  return std::nullopt;
}

EtaReport eta_invariant(const FieldPtr& field, const ThetaOptions& opts) {
  EtaReport r;
  r.field = field->name();
  const auto t = theta_sum(realize(trivial_divisor(field)), opts);
  r.eta = t.k0;
  r.tail_bound = t.tail_bound;
  r.omega_power = std::pow(omega_constants().omega, field->degree());
  r.algebraic_factor = r.eta / r.omega_power;
  r.closed_form_value = eta_closed_form(*field);
  if (r.closed_form_value) r.abs_error = std::abs(r.eta - *r.closed_form_value);
  r.eta_codifferent = theta_sum(realize(canonical_divisor(field)), opts).k0;
  return r;
}

}  // namespace arakelov

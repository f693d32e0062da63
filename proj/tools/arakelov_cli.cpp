#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "arakelov/bundles.hpp"
#include "arakelov/errors.hpp"
#include "arakelov/io.hpp"
#include "arakelov/size.hpp"
#include "arakelov/zeta.hpp"
#include "selfcheck.hpp"

using namespace arakelov;
using nlohmann::json;

namespace {

struct RunConfig {
  std::string quadratic, field_name, descriptor;
  double tol = 1e-10;
  std::string precision = "std";
  std::string format = "json";
  std::string out;
  std::uint64_t budget = kDefaultBudget;

  std::optional<double> deg;
  std::string deg_list;
  std::optional<double> x;
  std::string ideal, inf;
  bool pic0 = false;
  int cls = 0;

  double s = 2, s_imag = 0, t = -1, t_imag = 0;
  std::string method = "dirichlet";
  int grid = 2048;
  std::string bundle_path;
  std::optional<int> curve_q;
  int genus = 0;
  std::string curve_spec;

  std::string kind = "h0";
  double step = 0.05;
  std::optional<double> xmin, xmax;

  bool inject_fault = false;
};

void validate(const RunConfig& c) {
  if (!(c.tol > 0 && c.tol <= 1e-6)) throw ValidationError("--tol must lie in (0, 1e-6]");
  if (c.budget < 10000) throw ValidationError("--budget must be at least 1e4");
  const int chosen = !c.quadratic.empty() + !c.field_name.empty() + !c.descriptor.empty();
  if (chosen > 1) throw ValidationError("give only one of --quadratic, --field, --descriptor");
}

ThetaOptions theta_options(const RunConfig& c) { return {c.tol, c.budget, c.precision == "ext"}; }

FieldPtr load_field(const RunConfig& c) {
  if (!c.descriptor.empty()) return field_from_descriptor_file(c.descriptor);
  if (!c.quadratic.empty()) return field_from_name(c.quadratic);
  if (!c.field_name.empty()) return field_from_name(c.field_name);
  throw ValidationError("choose a field with --quadratic m, --field Q or --descriptor path");
}

json base_record(const RunConfig& c, const NumberField& f) {
  return {{"field", f.name()}, {"tolerance", c.tol}, {"precision", c.precision}};
}

std::vector<double> degrees(const RunConfig& c) {
  if (!c.deg_list.empty()) return parse_real_list(c.deg_list);
  if (c.deg) return {*c.deg};
  return {};
}

// Divisor of degree d with the metric of O_F scaled uniformly, or the
// real quadratic family point (d, x).
ArakelovDivisor divisor_at(const FieldPtr& f, double d, const RunConfig& c) {
  if (c.pic0 || (c.x && f->is_real_quadratic())) return pic_family_point(f, c.cls, d, c.x.value_or(0.0));
  if (c.x && !f->is_rational()) throw ValidationError("--x needs --pic0 or a real quadratic field");
  std::vector<double> xs;
  for (int p = 0; p < f->place_count(); ++p) xs.push_back((f->is_complex_place(p) ? 2.0 : 1.0) * d / f->degree());
  if (f->is_rational() && c.x) xs[0] += *c.x;
  return make_divisor(FractionalIdeal::ring_of_integers(f), xs);
}

std::vector<ArakelovDivisor> divisors(const FieldPtr& f, const RunConfig& c) {
  if (!c.ideal.empty() || !c.inf.empty()) {
    FractionalIdeal ideal = c.ideal.empty() ? FractionalIdeal::ring_of_integers(f) : parse_ideal(f, c.ideal);
    std::vector<double> xs = c.inf.empty() ? std::vector<double>(static_cast<std::size_t>(f->place_count()), 0.0)
                                           : parse_real_list(c.inf);
    return {make_divisor(std::move(ideal), xs)};
  }
  auto ds = degrees(c);
  if (ds.empty()) {
    if (!c.pic0) throw ValidationError("give --deg, --deg-list, --pic0 or --ideal/--inf");
    ds = {0.0};
  }
  std::vector<ArakelovDivisor> out;
  for (double d : ds) out.push_back(divisor_at(f, d, c));
  return out;
}

json complex_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

std::vector<json> cmd_field_info(const RunConfig& c) {
  const auto f = load_field(c);
  json r = f->info();
  r["label"] = field_label(*f);
  return {r};
}

std::vector<json> cmd_h0(const RunConfig& c) {
  const auto f = load_field(c);
  std::vector<json> out;
  for (const auto& d : divisors(f, c)) {
    const auto e = h0(d, theta_options(c));
    json r = base_record(c, *f);
    r["divisor"] = divisor_json(d);
    r.update(theta_json(e.theta));
    out.push_back(r);
  }
  return out;
}

std::vector<json> cmd_rr(const RunConfig& c) {
  const auto f = load_field(c);
  std::vector<json> out;
  for (const auto& d : divisors(f, c)) {
    const auto a = h0(d, theta_options(c)), b = h0(dual_divisor(d), theta_options(c));
    json r = base_record(c, *f);
    r["divisor"] = divisor_json(d);
    r["h0"] = a.theta.h0;
    r["h0_dual"] = b.theta.h0;
    r["chi"] = a.chi;
    r["defect"] = a.theta.h0 - b.theta.h0 - a.chi;
    r["tail_bound"] = std::max(a.theta.tail_bound, b.theta.tail_bound);
    out.push_back(r);
  }
  return out;
}

std::vector<json> cmd_bound(const RunConfig& c) {
  const auto f = load_field(c);
  std::vector<json> out;
  for (const auto& d : divisors(f, c)) {
    const auto b = bound_check(d, theta_options(c));
    json r = base_record(c, *f);
    r["divisor"] = divisor_json(d);
    r.update({{"log_k0_minus_1", b.log_k0_minus_1}, {"log_h0", b.log_h0}, {"cor1_applies", b.cor1_applies},
              {"log_beta", b.log_beta}, {"h0_below_k0_minus_1", b.h0_below_k0_minus_1},
              {"prop3_applies", b.prop3_applies}, {"prop3_rhs", b.prop3_rhs}, {"prop3_holds", b.prop3_holds},
              {"violations", b.violations}});
    r["hypothesis_confirmed"] = b.hypothesis_confirmed ? json(*b.hypothesis_confirmed) : json(nullptr);
    out.push_back(r);
  }
  return out;
}

std::vector<json> cmd_eta(const RunConfig& c) {
  const auto f = load_field(c);
  const auto e = eta_invariant(f, theta_options(c));
  json r = base_record(c, *f);
  r.update({{"eta", e.eta}, {"omega_power", e.omega_power}, {"algebraic_factor", e.algebraic_factor},
            {"eta_codifferent", e.eta_codifferent}, {"tail_bound", e.tail_bound}});
  r["closed_form"] = e.closed_form_value ? json(*e.closed_form_value) : json(nullptr);
  r["abs_error"] = e.abs_error ? json(*e.abs_error) : json(nullptr);
  return {r};
}

std::vector<json> cmd_zeta(const RunConfig& c) {
  const auto f = load_field(c);
  json r = base_record(c, *f);
  const Complex s(c.s, c.s_imag);
  r["s"] = complex_json(s);
  r["method"] = c.method;
  if (c.method == "dirichlet") {
    const auto z = completed_zeta(f, s, c.tol);
    r.update({{"value", complex_json(z.value)}, {"dirichlet", complex_json(z.dirichlet)},
              {"gamma_factor", complex_json(z.gamma_factor)}, {"truncation_N", z.truncation_N},
              {"tail_bound", z.series_tail_bound}});
  } else if (c.method == "pic") {
    if (c.s_imag != 0) throw ValidationError("the Pic integral is evaluated for real s only");
    PicIntegralOptions po;
    po.tol = std::max(c.tol, 1e-9);
    po.theta = theta_options(c);
    const auto z = zeta_via_pic_integral(f, c.s, po);
    const auto ref = completed_zeta(f, s, c.tol);
    r.update({{"value", complex_json(z.value)}, {"completed", complex_json(ref.value)},
              {"ratio", (z.value / ref.value).real()}, {"max_pic0_points", z.truncation_N},
              {"tail_bound", z.series_tail_bound}});
  } else {
    throw ValidationError("--method is dirichlet or pic");
  }
  return {r};
}

std::vector<json> cmd_b0(const RunConfig& c) {
  const auto f = load_field(c);
  auto ds = degrees(c);
  if (ds.empty()) ds = {0.0};
  std::vector<json> out;
  for (double d : ds) {
    json r = base_record(c, *f);
    r.update({{"d", d}, {"x", c.x.value_or(0.0)}, {"B0", b0(f, d, c.x.value_or(0.0), theta_options(c))}});
    out.push_back(r);
  }
  return out;
}

std::vector<json> cmd_argmax(const RunConfig& c) {
  const auto f = load_field(c);
  const auto a = pic0_argmax(f, theta_options(c), c.grid);
  json r = base_record(c, *f);
  r.update({{"x_star", a.x_star}, {"class_star", a.class_star}, {"h0_star", a.h0_star}, {"h0_at_zero", a.h0_at_zero},
            {"zero_dominates_grid", a.zero_dominates_grid}, {"grid_points", a.grid.size()}, {"warnings", a.warnings}});
  if (f->regulator()) r["regulator"] = *f->regulator();
  return {r};
}

CurveZetaSpec curve_spec_from(const RunConfig& c) {
  if (!c.curve_spec.empty()) {
    std::ifstream in(c.curve_spec);
    if (!in) throw ValidationError("cannot open " + c.curve_spec);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw ValidationError(std::string("malformed curve spec: ") + e.what());
    }
    CurveZetaSpec spec{j.at("q").get<int>(), j.at("g").get<int>(), j.value("h", 1), {}};
    if (j.contains("k0_table"))
      for (auto it = j["k0_table"].begin(); it != j["k0_table"].end(); ++it)
        spec.k0_table[std::stoi(it.key())] = it.value().get<std::vector<double>>();
    validate_curve_spec(spec);
    return spec;
  }
  if (c.genus == 0) {
    CurveZetaSpec spec{*c.curve_q, 0, 1, {}};
    validate_curve_spec(spec);
    return spec;
  }
  if (c.genus == 1) return elliptic_profile(*c.curve_q);
  throw ValidationError("curves of genus >= 2 need --curve-spec");
}

std::vector<json> cmd_twovar(const RunConfig& c) {
  json r{{"tolerance", c.tol}, {"s", complex_json({c.s, c.s_imag})}, {"t", complex_json({c.t, c.t_imag})}};
  if (c.curve_q || !c.curve_spec.empty()) {
    if (c.s_imag != 0 || c.t_imag != 0) throw ValidationError("curve zeta values are evaluated at real s, t");
    const auto spec = curve_spec_from(c);
    r.update({{"curve", {{"q", spec.q}, {"g", spec.g}, {"h", spec.h}}},
              {"value", curve_two_variable_zeta(spec, c.s, c.t)}});
    if (std::abs(c.s + c.t - 1) < 1e-15) r["restricted"] = curve_restricted_zeta(spec, c.s);
    return {r};
  }
  const auto f = load_field(c);
  if (!f->is_rational()) throw UnsupportedFieldError("the two-variable zeta is evaluated over Q or for curves");
  r["field"] = f->name();
  r["value"] = complex_json(two_variable_zeta_Q({c.s, c.s_imag}, {c.t, c.t_imag}, std::min(c.tol, 1e-12)));
  return {r};
}

std::vector<json> cmd_bundle(const RunConfig& c) {
  const auto f = load_field(c);
  std::ifstream in(c.bundle_path);
  if (!in) throw ValidationError("cannot open bundle descriptor " + c.bundle_path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed bundle descriptor: ") + e.what());
  }
  const auto m = bundle_from_json(f, j);
  const auto a = bundle_h0(m, theta_options(c)), b = bundle_h0(bundle_dual(m), theta_options(c));
  json r = base_record(c, *f);
  r.update({{"rank", m.rank()}, {"admissible", m.admissible}, {"degree", bundle_degree(m)}, {"chi", bundle_chi(m)},
            {"h0_dual", b.h0}, {"defect", a.h0 - b.h0 - bundle_chi(m)}});
  r.update(theta_json(a));
  r["tail_bound"] = std::max(a.tail_bound, b.tail_bound);
  return {r};
}

// Sample grid on [lo, hi] with spacing close to step, endpoints included.
std::vector<double> grid(double lo, double hi, double step) {
  if (!(step > 0) || !(hi > lo)) throw ValidationError("scan needs step > 0 and xmax > xmin");
  const int n = std::max(1, static_cast<int>(std::lround((hi - lo) / step)));
  std::vector<double> xs;
  for (int k = 0; k <= n; ++k) xs.push_back(lo + (hi - lo) * k / n);
  return xs;
}

std::vector<json> cmd_scan(const RunConfig& c) {
  const auto f = load_field(c);
  const auto opts = theta_options(c);
  auto ds = degrees(c);
  if (ds.empty()) ds = {0.0};
  const std::string label = field_label(*f);
  const std::filesystem::path dir = c.out.empty() ? "." : c.out;
  std::vector<json> out;
  for (double d : ds) {
    ScanTable table;
    table.sidecar = {{"field", f->name()}, {"d", d}, {"kind", c.kind}, {"tolerance", c.tol}, {"precision", c.precision}};
    if (f->regulator()) table.sidecar["R"] = *f->regulator();
    if (c.kind == "h0" && f->is_real_quadratic()) {
      const auto scan = pic0_scan(f, d, c.step, opts);
      const bool classes = f->class_representatives().size() > 1;
      table.columns = {"x", "h0", "log_k0_minus_1"};
      if (classes) table.columns.push_back("class");
      for (const auto& s : scan.samples) {
        table.rows.push_back({s.x, s.h0, s.log_k0_minus_1});
        if (classes) table.rows.back().push_back(s.class_index);
      }
      table.sidecar.update(scan.metadata);
    } else if (c.kind == "h0" || c.kind == "effectivity") {
      const bool line = !f->is_real_quadratic();
      std::vector<double> xs;
      if (line) {
        xs = grid(c.xmin.value_or(-3), c.xmax.value_or(3), c.step);
        table.sidecar["parametrization"] = "divisor of degree d + x with the uniformly scaled metric of O_F";
      } else {
        const double r = *f->regulator();
        xs = grid(c.xmin.value_or(-r / 2), c.xmax.value_or(r / 2), c.step);
        table.sidecar["parametrization"] = "real quadratic family (d/2 - x, d/2 + x)";
      }
      table.columns = {"x", c.kind == "h0" ? "h0" : "effectivity"};
      if (c.kind == "h0") table.columns.push_back("log_k0_minus_1");
      RunConfig at = c;
      at.x.reset();
      at.pic0 = false;
      for (double x : xs) {
        ArakelovDivisor dv = line ? divisor_at(f, d + x, at) : pic_point(f, d, x);
        if (c.kind == "h0") {
          const auto t = theta_sum(realize(dv), opts);
          table.rows.push_back({x, t.h0, t.log_k0_minus_1});
        } else {
          table.rows.push_back({x, effectivity(dv)});
        }
      }
    } else if (c.kind == "b0") {
      if (!f->is_real_quadratic()) throw UnsupportedFieldError("B0 scans need a real quadratic field");
      const double r = *f->regulator();
      table.columns = {"x", "B0"};
      for (double x : grid(c.xmin.value_or(-r / 2), c.xmax.value_or(r / 2), c.step))
        table.rows.push_back({x, b0(f, d, x, opts)});
    } else {
      throw ValidationError("--kind is h0, b0 or effectivity");
    }
    table.sidecar["rows"] = table.rows.size();
    // h0 scans keep the bare name; the other kinds get a suffix so a shared
    // output directory never mixes them up.
    const auto path = write_scan(dir, label, d, table, c.kind == "h0" ? "" : c.kind == "b0" ? "B0" : c.kind);
    out.push_back({{"file", path.string()}, {"d", d}, {"rows", table.rows.size()}, {"kind", c.kind}});
  }
  return out;
}

void emit(const RunConfig& c, const std::vector<json>& records, bool to_file) {
  std::string text;
  if (c.format == "csv") {
    text = records_to_csv(records);
  } else {
    text = (records.size() == 1 ? records.front() : json(records)).dump(2) + "\n";
  }
  if (to_file && !c.out.empty()) {
    std::ofstream f(c.out);
    if (!f) throw ValidationError("cannot write " + c.out);
    f << text;
  } else {
    std::cout << text;
  }
}

void add_field_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--quadratic", c.quadratic, "Q(sqrt m) for squarefree m");
  sub->add_option("--field", c.field_name, "Q");
  sub->add_option("--descriptor", c.descriptor, "field descriptor JSON file");
}

void add_run_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--tol", c.tol, "target tolerance in (0, 1e-6]");
  sub->add_option("--precision", c.precision, "std or ext")->check(CLI::IsMember({"std", "ext"}));
  sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--out", c.out, "output file (scan: directory)");
  sub->add_option("--budget", c.budget, "enumeration node cap (>= 1e4)");
}

void add_divisor_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--deg", c.deg, "degree");
  sub->add_option("--deg-list", c.deg_list, "comma separated degrees");
  sub->add_option("--x", c.x, "position on the Pic0 family");
  sub->add_option("--ideal", c.ideal, "ideal as a JSON matrix or a generator expression");
  sub->add_option("--inf", c.inf, "comma separated infinite coefficients");
  sub->add_flag("--pic0", c.pic0, "use the Pic0 family point (degree 0 unless --deg)");
  sub->add_option("--class", c.cls, "class representative index for --pic0");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Arakelov divisors: sizes h0, theta sums, zeta functions"};
  app.require_subcommand(1);
  RunConfig c;

  using Handler = std::vector<json> (*)(const RunConfig&);
  std::vector<std::pair<CLI::App*, Handler>> handlers;
  auto sub = [&](const char* name, const char* help, Handler h) {
    CLI::App* s = app.add_subcommand(name, help);
    add_field_options(s, c);
    add_run_options(s, c);
    handlers.emplace_back(s, h);
    return s;
  };

  sub("field-info", "field invariants", cmd_field_info);
  add_divisor_options(sub("h0", "size of a divisor", cmd_h0), c);
  add_divisor_options(sub("rr", "Riemann-Roch defect", cmd_rr), c);
  add_divisor_options(sub("bound", "h0 bounds and the trivial-class hypothesis", cmd_bound), c);
  sub("eta", "theta sum over O_F and its closed form", cmd_eta);
  {
    auto* s = sub("zeta", "completed Dedekind zeta", cmd_zeta);
    s->add_option("--s", c.s, "real part of s");
    s->add_option("--s-imag", c.s_imag, "imaginary part of s");
    s->add_option("--method", c.method, "dirichlet or pic");
  }
  {
    auto* s = sub("b0", "normalized B0(d, x) for real quadratic fields", cmd_b0);
    s->add_option("--deg", c.deg, "degree");
    s->add_option("--deg-list", c.deg_list, "comma separated degrees");
    s->add_option("--x", c.x, "position on the Pic0 family");
  }
  sub("argmax", "maximum of h0 on Pic0", cmd_argmax)->add_option("--grid", c.grid, "grid points");
  {
    auto* s = sub("twovar", "two-variable zeta over Q or for a curve", cmd_twovar);
    s->add_option("--s", c.s, "s");
    s->add_option("--t", c.t, "t");
    s->add_option("--s-imag", c.s_imag, "imaginary part of s");
    s->add_option("--t-imag", c.t_imag, "imaginary part of t");
    s->add_option("--curve-q", c.curve_q, "curve over F_q (genus 0 or 1 profile)");
    s->add_option("--genus", c.genus, "0 (projective line) or 1 (elliptic, h = 1)");
    s->add_option("--curve-spec", c.curve_spec, "JSON {q, g, h, k0_table}");
  }
  sub("bundle", "rank r bundle h0 and Riemann-Roch", cmd_bundle)
      ->add_option("--bundle", c.bundle_path, "bundle descriptor JSON")
      ->required();
  {
    auto* s = sub("scan", "write figure data as CSV", cmd_scan);
    s->add_option("--kind", c.kind, "h0, b0 or effectivity");
    s->add_option("--deg-list", c.deg_list, "comma separated degrees");
    s->add_option("--deg", c.deg, "degree");
    s->add_option("--step", c.step, "grid spacing");
    s->add_option("--xmin", c.xmin, "grid start");
    s->add_option("--xmax", c.xmax, "grid end");
  }
  auto* check = app.add_subcommand("selfcheck", "run the identity suites at reduced size");
  check->add_flag("--inject-fault", c.inject_fault, "perturb the dual metric in the Riemann-Roch check");
  check->add_option("--budget", c.budget, "enumeration cap for the budget guard");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (check->parsed()) return run_selfcheck(std::cout, c.inject_fault, c.budget);
    validate(c);
    for (const auto& [s, h] : handlers) {
      if (!s->parsed()) continue;
      const auto records = h(c);
      emit(c, records, s->get_name() != "scan");
    }
  } catch (const BudgetExceededError& e) {
    std::cerr << "budget error: " << e.what() << "\n";
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

#include "selfcheck.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "arakelov/bundles.hpp"
#include "arakelov/errors.hpp"
#include "arakelov/size.hpp"
#include "arakelov/zeta.hpp"

using namespace arakelov;

namespace {

constexpr double kOmega = 1.086434811213308014575316121;

FieldPtr zeta5() { return field_from_descriptor({{"name", "Q(zeta5)"}, {"polynomial", {1, 1, 1, 1, 1}}, {"w", 10}}); }
FieldPtr zeta7plus() { return field_from_descriptor({{"name", "Q(zeta7+1/zeta7)"}, {"polynomial", {-1, -2, 1, 1}}, {"w", 2}}); }

struct Row {
  std::string name;
  bool pass = false;
  std::string detail;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

ArakelovDivisor random_divisor(const FieldPtr& f, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.5, 1.5), dg(-5, 5);
  std::vector<double> x;
  double s = 0;
  for (int p = 0; p < f->place_count(); ++p) {
    x.push_back(u(rng));
    s += x.back();
  }
  const double target = dg(rng);
  for (auto& v : x) v += (target - s) / f->place_count();
  return make_divisor(FractionalIdeal::ring_of_integers(f), x);
}

}  // namespace

int run_selfcheck(std::ostream& out, bool inject_fault, std::uint64_t budget) {
  const ThetaOptions opts{1e-10, budget, false};
  std::vector<Row> rows;
  auto run = [&](const std::string& name, const std::function<Row()>& body) {
    Row r;
    try {
      r = body();
    } catch (const std::exception& e) {
      r = {name, false, std::string("error: ") + e.what()};
    }
    r.name = name;
    rows.push_back(r);
  };

  run("omega", [&] {
    const double k0 = theta_sum(realize(trivial_divisor(rational_field())), opts).k0;
    const double err = std::abs(k0 - kOmega);
    return Row{"", err < 1e-12, "|k0 - omega| = " + sci(err)};
  });

  run("riemann-roch", [&] {
    std::mt19937 rng(2024);
    double worst = 0;
    for (auto f : {rational_field(), quadratic_field(41), quadratic_field(73), quadratic_field(-1), quadratic_field(-3), zeta5()})
      for (int t = 0; t < 4; ++t) {
        const auto d = random_divisor(f, rng);
        auto dual = dual_divisor(d);
        if (inject_fault) dual.x[0] += 1e-3;
        const double defect = h0(d, opts).theta.h0 - h0(dual, opts).theta.h0 - chi(d);
        worst = std::max(worst, std::abs(defect));
      }
    return Row{"", worst < 1e-9, "max |defect| = " + sci(worst) + (inject_fault ? " (fault injected)" : "")};
  });

  run("Q antisymmetry", [&] {
    auto q = rational_field();
    double worst = 0;
    for (int k = -6; k <= 6; ++k) {
      const double x = 0.5 * k;
      const double a = h0(pic_point(q, x, 0), opts).theta.h0, b = h0(pic_point(q, -x, 0), opts).theta.h0;
      worst = std::max(worst, std::abs(a - b - x));
    }
    return Row{"", worst < 1e-9, "max error " + sci(worst)};
  });

  run("deep negative degree", [&] {
    const double l10 = h0(pic_point(rational_field(), -3, 0), opts).theta.log_h0 / std::log(10.0);
    return Row{"", l10 < -500, "log10 h0(D_-3) = " + sci(l10)};
  });

  run("eta closed forms", [&] {
    double worst = 0;
    for (auto f : {quadratic_field(-1), quadratic_field(-3), zeta7plus(), zeta5()})
      worst = std::max(worst, *eta_invariant(f, opts).abs_error);
    return Row{"", worst < 1e-9, "max |eta - closed form| = " + sci(worst)};
  });

  run("regulators", [&] {
    const double r73 = *quadratic_field(73)->regulator(), r41 = *quadratic_field(41)->regulator();
    const double e = std::max(std::abs(r73 - std::log(1068 + 125 * std::sqrt(73.0))), std::abs(r41 - 4.159127134626180));
    auto f = quadratic_field(41);
    const double p = std::abs(h0(pic_point(f, 0, 0.7), opts).theta.h0 - h0(pic_point(f, 0, 0.7 + r41), opts).theta.h0);
    return Row{"", e < 1e-12 && p < 1e-9, "regulator error " + sci(e) + ", period error " + sci(p)};
  });

  run("trivial class maximum", [&] {
    const auto a = pic0_argmax(quadratic_field(41), opts, 256);
    return Row{"", a.zero_dominates_grid && std::abs(a.x_star) < 1e-6, "x* = " + sci(a.x_star)};
  });

  run("B0 near norms", [&] {
    auto f = quadratic_field(73);
    const double d = -0.5 * std::log(73.0);
    double worst = 0;
    const std::vector<std::pair<RationalVector, double>> cases{{{4, 1}, 2}, {{15, 4}, 3}, {{34, 9}, 4}};
    for (const auto& [c, n] : cases) {
      const auto e = f->element(c);
      const double x = 0.5 * std::log(std::abs(f->embed(e, 1).real() / f->embed(e, 0).real()));
      worst = std::max(worst, std::abs(b0(f, d, x, opts) - n) / n);
    }
    return Row{"", worst < 0.02, "max relative gap " + sci(worst)};
  });

  run("zeta Q(i) at s=2", [&] {
    auto f = quadratic_field(-1);
    const std::size_t n = 20000;
    const auto a = dedekind_coefficients(*f, n);
    double s = 0;
    for (std::size_t k = n; k-- > 0;) s += static_cast<double>(a[k]) / (double(k + 1) * double(k + 1));
    s += M_PI / (4.0 * n);
    const double z = completed_zeta(f, 2.0).dirichlet.real();
    return Row{"", std::abs(s - z) < 1e-5, "|partial sum - value| = " + sci(std::abs(s - z))};
  });

  run("two-variable zeta", [&] {
    const Complex a = two_variable_zeta_Q(-1.0, -2.0), b = two_variable_zeta_Q(-2.0, -1.0);
    double worst = std::abs(a - b) / std::abs(a);
    for (int q : {2, 3}) {
      const auto r = restriction_check(CurveZetaSpec{q, 0, 1, {}}, -0.7);
      worst = std::max(worst, std::abs(r.two_variable - r.completed));
    }
    return Row{"", worst < 1e-10, "max error " + sci(worst)};
  });

  run("poisson", [&] {
    std::mt19937 rng(7);
    std::normal_distribution<double> g(0, 1);
    double worst = 0;
    for (int t = 0; t < 10; ++t) {
      const int n = 1 + t % 4;
      Eigen::MatrixXd b(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b(i, j) = (i == j ? 1.2 : 0.0) + 0.3 * g(rng);
      const auto lat = lattice_from_basis(b);
      const double lhs = theta_sum(lat, opts).k0;
      const double rhs = theta_sum(dual_lattice(lat), opts).k0 / lat.covolume;
      worst = std::max(worst, std::abs(lhs - rhs) / lhs);
    }
    return Row{"", worst < 1e-10, "max relative error " + sci(worst)};
  });

  run("rank 2 riemann-roch", [&] {
    double worst = 0;
    for (auto f : {rational_field(), quadratic_field(-1)}) {
      std::vector<Eigen::MatrixXcd> ms;
      for (int p = 0; p < f->place_count(); ++p) {
        Eigen::MatrixXcd h(2, 2);
        h << 2.0, 0.5, 0.5, 0.625;
        ms.push_back(h);
      }
      auto m = make_bundle(FractionalIdeal::ring_of_integers(f), ms, std::nullopt, true);
      const double defect =
          bundle_h0(m, opts).h0 - bundle_h0(bundle_dual(m), opts).h0 - bundle_chi(m);
      worst = std::max(worst, std::abs(defect));
    }
    return Row{"", worst < 1e-9, "max |defect| = " + sci(worst)};
  });

  run("budget guard", [&] {
    // Degree 10 over Q(zeta5) needs ~1.5e6 lattice points; 1e4 must refuse.
    auto f = zeta5();
    try {
      theta_sum(realize(make_divisor(FractionalIdeal::ring_of_integers(f), {5.0, 5.0})), {1e-10, 10000, false});
    } catch (const BudgetExceededError& e) {
      return Row{"", true, std::string("refused: ") + e.what()};
    }
    return Row{"", false, "budget of 1e4 was not enforced"};
  });

  int failures = 0;
  for (const auto& r : rows) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-24s %-5s ", r.name.c_str(), r.pass ? "PASS" : "FAIL");
    out << buf << r.detail << "\n";
    failures += !r.pass;
  }
  out << (failures ? std::to_string(failures) + " check(s) failed" : std::string("all checks passed")) << "\n";
  return failures ? 4 : 0;
}

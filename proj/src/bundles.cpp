#include "arakelov/bundles.hpp"

#include <cmath>
#include <functional>
#include <numeric>

#include "arakelov/errors.hpp"

namespace arakelov {

namespace {

using Eigen::MatrixXcd;

bool is_hermitian(const MatrixXcd& h) { return (h - h.adjoint()).norm() <= 1e-12 * std::max(1.0, h.norm()); }

MatrixXcd cholesky_factor(const MatrixXcd& h) {
  Eigen::LLT<MatrixXcd> llt(h);
  if (llt.info() != Eigen::Success) throw ValidationError("place metric is not positive definite");
  return llt.matrixL();
}

double log_det(const MatrixXcd& h) {
  const MatrixXcd l = cholesky_factor(h);
  double s = 0;
  for (Eigen::Index i = 0; i < l.rows(); ++i) s += 2 * std::log(l(i, i).real());
  return s;
}

std::complex<double> metric_entry(const nlohmann::json& v) {
  if (v.is_array()) {
    if (v.size() != 2) throw ValidationError("complex metric entries are [re, im] pairs");
    return {metric_entry(v[0]).real(), metric_entry(v[1]).real()};
  }
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return static_cast<double>(rational_from_json(v));
  throw ValidationError("bad metric entry " + v.dump());
}

}  // namespace

FractionalIdeal ArakelovBundle::steinitz_ideal() const {
  FractionalIdeal out = FractionalIdeal::ring_of_integers(field);
  for (const auto& c : components) out = ideal_mul(out, c);
  return out;
}

void validate_bundle(const ArakelovBundle& m) {
  if (!m.field) throw ValidationError("bundle has no field");
  const int r = m.rank();
  if (r < 1) throw ValidationError("bundle rank must be positive");
  for (const auto& c : m.components)
    if (!c.field()->same_field(*m.field)) throw ValidationError("bundle components live in another field");
  if (static_cast<int>(m.place_metrics.size()) != m.field->place_count())
    throw ValidationError("bundle needs one metric per infinite place (" + std::to_string(m.field->place_count()) + ")");
  for (int p = 0; p < m.field->place_count(); ++p) {
    const MatrixXcd& h = m.place_metrics[static_cast<std::size_t>(p)];
    if (h.rows() != r || h.cols() != r) throw ValidationError("place metrics must be rank x rank");
    if (!h.allFinite()) throw ValidationError("place metric has non-finite entries");
    if (!m.field->is_complex_place(p) && h.imag().norm() != 0)
      throw ValidationError("metrics at real places must be real symmetric");
    if (!is_hermitian(h)) throw ValidationError("place metric is not Hermitian");
    const double ld = log_det(h);
    // A double matrix only knows its determinant to about cond * eps.
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<MatrixXcd>(h).eigenvalues();
    const double cond = ev.maxCoeff() / ev.minCoeff();
    if (m.admissible && std::abs(ld) > 1e-12 * std::max(1.0, cond))
      throw ValidationError("admissible bundle needs det = 1 at every place (place " + std::to_string(p) + ")");
  }
  if (m.twist && !m.twist->field()->same_field(*m.field)) throw ValidationError("twist divisor lives in another field");
}

ArakelovBundle make_bundle(const FieldPtr& field, std::vector<FractionalIdeal> components, std::vector<MatrixXcd> metrics,
                           std::optional<ArakelovDivisor> twist, bool admissible) {
  ArakelovBundle m{field, std::move(components), std::move(metrics), std::move(twist), admissible};
  validate_bundle(m);
  return m;
}

ArakelovBundle make_bundle(FractionalIdeal steinitz, std::vector<MatrixXcd> metrics, std::optional<ArakelovDivisor> twist,
                           bool admissible) {
  const FieldPtr field = steinitz.field();
  const auto r = metrics.empty() ? 1 : static_cast<std::size_t>(metrics.front().rows());
  std::vector<FractionalIdeal> comps(r - 1, FractionalIdeal::ring_of_integers(field));
  comps.push_back(std::move(steinitz));
  return make_bundle(field, std::move(comps), std::move(metrics), std::move(twist), admissible);
}

ArakelovBundle trivial_bundle(const FieldPtr& field, int rank) {
  if (rank < 1) throw ValidationError("bundle rank must be positive");
  std::vector<MatrixXcd> metrics(static_cast<std::size_t>(field->place_count()), MatrixXcd::Identity(rank, rank));
  return make_bundle(field, std::vector<FractionalIdeal>(static_cast<std::size_t>(rank), FractionalIdeal::ring_of_integers(field)),
                     std::move(metrics), std::nullopt, true);
}

ArakelovBundle line_bundle(const ArakelovDivisor& d) {
  const auto& f = d.field();
  std::vector<MatrixXcd> metrics;
  for (int p = 0; p < f->place_count(); ++p) {
    const double x = d.x[static_cast<std::size_t>(p)];
    metrics.push_back(MatrixXcd::Constant(1, 1, f->is_complex_place(p) ? std::exp(-x) : std::exp(-2 * x)));
  }
  return make_bundle(f, {d.ideal}, std::move(metrics));
}

ArakelovBundle untwisted(const ArakelovBundle& m) {
  if (!m.twist) return m;
  ArakelovBundle out = m;
  out.twist.reset();
  for (auto& c : out.components) c = ideal_mul(c, m.twist->ideal);
  for (int p = 0; p < m.field->place_count(); ++p) {
    const double x = m.twist->x[static_cast<std::size_t>(p)];
    out.place_metrics[static_cast<std::size_t>(p)] *= m.field->is_complex_place(p) ? std::exp(-x) : std::exp(-2 * x);
  }
  out.admissible = false;
  return out;
}

double bundle_degree(const ArakelovBundle& m0) {
  const ArakelovBundle m = untwisted(m0);
  double s = 0;
  for (const auto& c : m.components) s -= log_rational(c.norm());
  for (int p = 0; p < m.field->place_count(); ++p) {
    const double ld = log_det(m.place_metrics[static_cast<std::size_t>(p)]);
    s -= m.field->is_complex_place(p) ? ld : 0.5 * ld;
  }
  return s;
}

double bundle_chi(const ArakelovBundle& m) { return bundle_degree(m) + m.rank() * chi_of_ring(*m.field); }

ExtMatrix bundle_rows(const ArakelovBundle& m0) {
  validate_bundle(m0);
  const ArakelovBundle m = untwisted(m0);
  const auto& f = *m.field;
  const int r = m.rank(), n = f.degree();
  if (r * n > kMaxBundleDimension)
    throw BudgetExceededError("bundle lattice dimension " + std::to_string(r * n) + " exceeds " +
                              std::to_string(kMaxBundleDimension));
  const ExtReal sqrt2 = sqrt(ExtReal(2));
  std::vector<MatrixXcd> chol;
  for (const auto& h : m.place_metrics) chol.push_back(cholesky_factor(h));

  ExtMatrix rows;
  for (int j = 0; j < r; ++j) {
    const auto& ideal = m.components[static_cast<std::size_t>(j)];
    for (int i = 0; i < n; ++i) {
      const FieldElement b = ideal.basis_element(static_cast<std::size_t>(i));
      std::vector<ExtReal> row;
      row.reserve(static_cast<std::size_t>(r * n));
      for (int p = 0; p < f.place_count(); ++p) {
        const ExtComplex z = f.embed_ext(b, p);
        const MatrixXcd& l = chol[static_cast<std::size_t>(p)];
        for (int k = 0; k < r; ++k) {
          const std::complex<double> e = l(j, k);
          if (f.is_complex_place(p)) {
            // sqrt2 * z * conj(L_jk)
            const ExtComplex c(ExtReal(e.real()), ExtReal(-e.imag()));
            const ExtComplex v = z * c;
            row.push_back(sqrt2 * v.real());
            row.push_back(sqrt2 * v.imag());
          } else {
            row.push_back(z.real() * ExtReal(e.real()));
          }
        }
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

DivisorLattice realize(const ArakelovBundle& m) { return lattice_from_ext_rows(bundle_rows(m)); }

ThetaResult bundle_h0(const ArakelovBundle& m, const ThetaOptions& opts) { return theta_sum(realize(m), opts); }

ArakelovBundle bundle_dual(const ArakelovBundle& m0) {
  validate_bundle(m0);
  ArakelovBundle m = untwisted(m0);
  for (auto& c : m.components) c = trace_dual(c);
  for (auto& h : m.place_metrics) {
    MatrixXcd inv = h.inverse().transpose();
    h = 0.5 * (inv + inv.adjoint());
  }
  m.admissible = m0.admissible && !m0.twist;
  return m;
}

double bundle_rr_defect(const ArakelovBundle& m, const ThetaOptions& opts) {
  const double a = bundle_h0(m, opts).h0;
  const double b = bundle_h0(bundle_dual(m), opts).h0;
  return a - b - bundle_chi(m);
}

ArakelovBundle transform_bundle(const ArakelovBundle& m, const std::vector<std::vector<FieldElement>>& g) {
  validate_bundle(m);
  const int r = m.rank();
  const auto& f = *m.field;
  const auto one = FractionalIdeal::ring_of_integers(m.field);
  for (const auto& c : m.components)
    if (!(c == one)) throw ValidationError("basis change needs all components equal to O_F");
  if (static_cast<int>(g.size()) != r) throw ValidationError("basis change must be rank x rank");
  for (const auto& row : g) {
    if (static_cast<int>(row.size()) != r) throw ValidationError("basis change must be rank x rank");
    for (const auto& e : row)
      if (!one.contains(e)) throw ValidationError("basis change entries must be integral");
  }
  // exact determinant by cofactor expansion; r is at most 12 / n
  std::function<FieldElement(const std::vector<int>&, int)> det = [&](const std::vector<int>& cols, int row) {
    if (row == r) return f.one();
    FieldElement acc = f.zero();
    for (std::size_t k = 0; k < cols.size(); ++k) {
      std::vector<int> rest = cols;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(k));
      FieldElement t = f.mul(g[static_cast<std::size_t>(row)][static_cast<std::size_t>(cols[k])], det(rest, row + 1));
      acc = k % 2 ? f.sub(acc, t) : f.add(acc, t);
    }
    return acc;
  };
  std::vector<int> all(static_cast<std::size_t>(r));
  std::iota(all.begin(), all.end(), 0);
  const FieldElement dg = det(all, 0);
  if (abs(f.norm(dg)) != 1) throw ValidationError("basis change is not invertible over O_F");

  ArakelovBundle out = m;
  bool unimodular = true;
  for (int p = 0; p < f.place_count(); ++p) {
    MatrixXcd s(r, r);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) s(i, j) = f.embed(g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], p);
    MatrixXcd h = s.adjoint() * m.place_metrics[static_cast<std::size_t>(p)] * s;
    if (!f.is_complex_place(p)) h = h.real().cast<std::complex<double>>();
    out.place_metrics[static_cast<std::size_t>(p)] = 0.5 * (h + h.adjoint());
    unimodular = unimodular && std::abs(std::abs(f.embed(dg, p)) - 1) < 1e-9;
  }
  // det H' = |det s|^2 det H exactly; strip the rounding so the flag survives
  out.admissible = m.admissible && unimodular;
  if (out.admissible)
    for (auto& h : out.place_metrics) h *= std::exp(-log_det(h) / r);
  return out;
}

ArakelovBundle bundle_from_json(const FieldPtr& field, const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("bundle descriptor must be a JSON object");
  if (!j.contains("rank") || !j["rank"].is_number_integer()) throw ValidationError("bundle descriptor needs an integer 'rank'");
  const int r = j["rank"].get<int>();
  if (r < 1) throw ValidationError("bundle rank must be positive");
  const auto n = static_cast<std::size_t>(field->degree());

  std::vector<FractionalIdeal> comps;
  if (j.contains("components")) {
    for (const auto& c : j["components"]) comps.emplace_back(field, rational_matrix_from_json(c, n));
    if (static_cast<int>(comps.size()) != r) throw ValidationError("'components' must list rank ideals");
  } else {
    comps.assign(static_cast<std::size_t>(r - 1), FractionalIdeal::ring_of_integers(field));
    comps.push_back(j.contains("ideal") ? FractionalIdeal(field, rational_matrix_from_json(j["ideal"], n))
                                        : FractionalIdeal::ring_of_integers(field));
  }

  std::vector<MatrixXcd> metrics;
  if (j.contains("metrics")) {
    const auto& ms = j["metrics"];
    if (!ms.is_array() || static_cast<int>(ms.size()) != field->place_count())
      throw ValidationError("'metrics' needs one matrix per infinite place");
    for (const auto& mj : ms) {
      if (!mj.is_array() || static_cast<int>(mj.size()) != r) throw ValidationError("metric matrices must be rank x rank");
      MatrixXcd h(r, r);
      for (int a = 0; a < r; ++a) {
        if (!mj[static_cast<std::size_t>(a)].is_array() || static_cast<int>(mj[static_cast<std::size_t>(a)].size()) != r)
          throw ValidationError("metric matrices must be rank x rank");
        for (int b = 0; b < r; ++b) h(a, b) = metric_entry(mj[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]);
      }
      metrics.push_back(std::move(h));
    }
  } else {
    metrics.assign(static_cast<std::size_t>(field->place_count()), MatrixXcd::Identity(r, r));
  }

  std::optional<ArakelovDivisor> twist;
  if (j.contains("twist")) {
    const auto& t = j["twist"];
    FractionalIdeal ideal = t.contains("ideal") ? FractionalIdeal(field, rational_matrix_from_json(t["ideal"], n))
                                                : FractionalIdeal::ring_of_integers(field);
    if (!t.contains("x") || !t["x"].is_array()) throw ValidationError("twist needs an 'x' array");
    twist = make_divisor(std::move(ideal), t["x"].get<std::vector<double>>());
  }
  return make_bundle(field, std::move(comps), std::move(metrics), std::move(twist), j.value("admissible", false));
}

nlohmann::json bundle_to_json(const ArakelovBundle& m) {
  auto matrix_json = [](const RationalMatrix& a) {
    nlohmann::json out = nlohmann::json::array();
    for (std::size_t i = 0; i < a.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (std::size_t k = 0; k < a.cols(); ++k) row.push_back(a(i, k).str());
      out.push_back(row);
    }
    return out;
  };
  nlohmann::json j;
  j["rank"] = m.rank();
  j["components"] = nlohmann::json::array();
  for (const auto& c : m.components) j["components"].push_back(matrix_json(c.basis()));
  j["metrics"] = nlohmann::json::array();
  for (int p = 0; p < m.field->place_count(); ++p) {
    const auto& h = m.place_metrics[static_cast<std::size_t>(p)];
    nlohmann::json mj = nlohmann::json::array();
    for (Eigen::Index a = 0; a < h.rows(); ++a) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index b = 0; b < h.cols(); ++b) {
        if (m.field->is_complex_place(p))
          row.push_back({h(a, b).real(), h(a, b).imag()});
        else
          row.push_back(h(a, b).real());
      }
      mj.push_back(row);
    }
    j["metrics"].push_back(mj);
  }
  if (m.twist) j["twist"] = {{"ideal", matrix_json(m.twist->ideal.basis())}, {"x", m.twist->x}};
  j["admissible"] = m.admissible;
  return j;
}

}  // namespace arakelov

#include "arakelov/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "arakelov/errors.hpp"

namespace arakelov {

FieldPtr field_from_name(const std::string& name) {
  if (name == "Q" || name == "q") return rational_field();
  std::int64_t m = 0;
  const char* end = name.data() + name.size();
  auto [p, ec] = std::from_chars(name.data(), end, m);
  if (ec != std::errc() || p != end) throw ValidationError("unknown field '" + name + "' (use Q or a squarefree integer)");
  return quadratic_field(m);
}

std::string field_label(const NumberField& field) {
  if (field.is_rational()) return "Q";
  if (field.quadratic_m()) return "Qsqrt" + std::to_string(*field.quadratic_m());
  std::string out;
  for (char c : field.name())
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') out += c;
  return out.empty() ? "field" : out;
}

FractionalIdeal parse_ideal(const FieldPtr& field, const std::string& text) {
  const auto first = text.find_first_not_of(" \t");
  if (first != std::string::npos && text[first] == '[') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("malformed ideal matrix: ") + e.what());
    }
    return FractionalIdeal(field, rational_matrix_from_json(j, static_cast<std::size_t>(field->degree())));
  }
  RationalVector c = parse_polynomial(text);
  if (c.size() > static_cast<std::size_t>(field->degree())) throw ValidationError("generator has degree >= n");
  c.resize(static_cast<std::size_t>(field->degree()), Rational(0));
  const FieldElement g = field->from_power_basis(c);
  if (field->is_zero(g)) throw ValidationError("the zero element does not generate a fractional ideal");
  return FractionalIdeal::principal(field, g);
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto a = item.find_first_not_of(" \t"), b = item.find_last_not_of(" \t");
    if (a == std::string::npos) throw ValidationError("empty entry in list '" + text + "'");
    item = item.substr(a, b - a + 1);
    double v = 0;
    auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || p != item.data() + item.size() || !std::isfinite(v))
      throw ValidationError("not a real number: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ValidationError("empty list");
  return out;
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

nlohmann::json theta_json(const ThetaResult& t) {
  return {{"h0", t.h0},
          {"k0", t.k0},
          {"log_k0_minus_1", t.log_k0_minus_1},
          {"log_h0", t.log_h0},
          {"log10_h0", t.log_h0 / std::log(10.0)},
          {"radius_sq", t.radius_sq},
          {"tail_bound", t.tail_bound},
          {"vectors_counted", t.vectors_counted}};
}

nlohmann::json divisor_json(const ArakelovDivisor& d) {
  nlohmann::json ideal = nlohmann::json::array();
  const auto& b = d.ideal.basis();
  for (std::size_t i = 0; i < b.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < b.cols(); ++j) row.push_back(b(i, j).str());
    ideal.push_back(row);
  }
  return {{"ideal", ideal}, {"x", d.x}, {"degree", degree(d)}, {"chi", chi(d)}};
}

namespace {

std::string csv_cell(const nlohmann::json& v) {
  if (v.is_number_float()) return format_real(v.get<double>());
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  if (v.is_null()) return "";
  if (v.is_primitive()) return v.dump();
  return csv_cell(nlohmann::json(v.dump()));
}

}  // namespace

std::string records_to_csv(const std::vector<nlohmann::json>& records) {
  if (records.empty()) return "";
  std::vector<std::string> keys;
  for (auto it = records.front().begin(); it != records.front().end(); ++it) keys.push_back(it.key());
  std::ostringstream out;
  for (std::size_t k = 0; k < keys.size(); ++k) out << (k ? "," : "") << keys[k];
  out << "\n";
  for (const auto& r : records) {
    for (std::size_t k = 0; k < keys.size(); ++k) out << (k ? "," : "") << (r.contains(keys[k]) ? csv_cell(r[keys[k]]) : "");
    out << "\n";
  }
  return out.str();
}

std::string scan_file_stem(const std::string& label, double d, const std::string& suffix) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", d == 0 ? 0.0 : d);
  return "scan_" + label + "_" + buf + (suffix.empty() ? "" : "_" + suffix);
}

std::filesystem::path write_scan(const std::filesystem::path& dir, const std::string& label, double d,
                                 const ScanTable& table, const std::string& suffix) {
  std::filesystem::create_directories(dir);
  const std::string stem = scan_file_stem(label, d, suffix);
  const auto csv = dir / (stem + ".csv");
  std::ofstream out(csv);
  if (!out) throw ValidationError("cannot write " + csv.string());
  for (std::size_t k = 0; k < table.columns.size(); ++k) out << (k ? "," : "") << table.columns[k];
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << format_real(row[k]);
    out << "\n";
  }
  std::ofstream side(dir / (stem + ".json"));
  nlohmann::json meta = table.sidecar;
  meta["code_version"] = kCodeVersion;
  meta["csv"] = csv.filename().string();
  side << meta.dump(2) << "\n";
  return csv;
}

}  // namespace arakelov

#pragma once

// Input parsing and record output shared by the CLI and the Python module.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "arakelov/divisor.hpp"
#include "arakelov/lattice.hpp"
#include "arakelov/size.hpp"

namespace arakelov {

inline constexpr const char* kCodeVersion = "0.3.0";

// "Q", or a squarefree integer m for Q(sqrt m).
FieldPtr field_from_name(const std::string& name);
// File-name friendly label: Q, Qsqrt73, Qsqrt-1, or the sanitized descriptor name.
std::string field_label(const NumberField& field);

// A JSON matrix "[[1,0],[0,2]]" of rows over the integral basis, or an
// element expression such as "(1+x)/2" whose principal ideal is taken.
FractionalIdeal parse_ideal(const FieldPtr& field, const std::string& text);
std::vector<double> parse_real_list(const std::string& text);

// Shortest round-trip decimal form.
std::string format_real(double v);

nlohmann::json theta_json(const ThetaResult& t);
nlohmann::json divisor_json(const ArakelovDivisor& d);

// One header row, then one row per record; keys taken from the first record.
// Nested values are written as compact JSON.
std::string records_to_csv(const std::vector<nlohmann::json>& records);

struct ScanTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  nlohmann::json sidecar;
};
// Writes <dir>/scan_<label>_<d>[_<suffix>].csv and the .json sidecar next
// to it; returns the CSV path.
std::filesystem::path write_scan(const std::filesystem::path& dir, const std::string& label, double d,
                                 const ScanTable& table, const std::string& suffix = "");
std::string scan_file_stem(const std::string& label, double d, const std::string& suffix = "");

}  // namespace arakelov

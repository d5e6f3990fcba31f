#pragma once

// Scenario and scheme files. Both are JSON documents; see docs/file_formats.md.
//
// Physical quantities may be written as bare numbers in canonical units or as
// strings carrying a unit, e.g. "12.5 GHz", "64GB", "1 Gbps", "7.2 M cycles".
// Sizes use decimal prefixes (1 KB = 1000 bytes). Rendering always writes the
// canonical unit with 17 significant digits so a file parses back to the
// exact same values.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "edgeplace/latency.hpp"
#include "edgeplace/model.hpp"

namespace edgeplace {

enum class Dimension { frequency, bytes, bandwidth, cycles };

/// Malformed input. what() names the line or the JSON field at fault.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses "12.5 GHz" style text into canonical units for `dim`.
double parse_quantity(std::string_view text, Dimension dim);
/// Accepts a JSON number (canonical units) or a quantity string. `field` is
/// used in error messages.
double quantity_from_json(const nlohmann::json& j, Dimension dim, const std::string& field);
nlohmann::json quantity_to_json(double canonical, Dimension dim);

nlohmann::json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& j);

std::string render_scenario(const Scenario& s);
/// Parses and validates. Validation failures are reported as ParseError.
Scenario parse_scenario(std::string_view text);

nlohmann::json scheme_to_json(const DeploymentScheme& d);
DeploymentScheme scheme_from_json(const nlohmann::json& j, const Scenario& s);

std::string render_scheme(const DeploymentScheme& d);
DeploymentScheme parse_scheme(std::string_view text, const Scenario& s);

/// Parses JSON text, turning syntax errors into ParseError with a line number.
nlohmann::json parse_json_text(std::string_view text, const std::string& origin);

std::string read_file(const std::filesystem::path& path);
/// Writes atomically enough for our purposes; creates parent directories.
void write_file(const std::filesystem::path& path, std::string_view contents);

Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const std::filesystem::path& path, const Scenario& s);
DeploymentScheme load_scheme(const std::filesystem::path& path, const Scenario& s);
void save_scheme(const std::filesystem::path& path, const DeploymentScheme& d);

/// "%.9g" formatting used for every float in CSV output.
std::string format_float(double x);

/// Column names of report_csv_row, comma-separated.
std::string report_csv_header();
/// objective,per_app_latency,servable,capacity_ok,cpu_violation_total,mem_violation_total
/// per_app_latency joins applications with ';' and leaves unservable ones empty.
std::string report_csv_row(const LatencyReport& r);

}  // namespace edgeplace

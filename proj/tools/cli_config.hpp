#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace bbscli {

// Sampling axis with inclusive endpoints.
struct Axis {
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;

  bool operator==(const Axis&) const = default;

  std::vector<double> points() const;
};

/// Everything a run needs; JSON (de)serialization is lossless so a dumped
/// config reproduces the run exactly.
struct RunConfig {
  // market + bubble
  double r = 0.2;
  double alpha = 0.8;
  double sigma = 0.4;
  double strike = 100.0;
  double maturity = 1.0;
  double f0 = 0.0;
  double tau1 = 0.25;
  double tau2 = 0.75;

  // pricing request
  std::string method = "exact";
  int n_max = 12;
  double spot = 100.0;
  std::optional<double> tau;         // time-to-maturity
  std::optional<double> t_calendar;  // calendar time, converted to tau

  // oracle grid
  int grid_ns = 400;
  int grid_nt = 400;
  double s_min = 0.0;
  double s_max = 0.0;  // 0 -> 4 * strike
  bool log_space = false;

  // output
  std::string out;
  std::string format = "json";
  bool allow_near_pole = false;
  bool oracle = false;

  // sweeps
  std::vector<double> h_list;  // empty -> default sweep
  Axis s_axis{0.0, 300.0, 61};
  Axis tau_axis{0.0, -1.0, 41};  // hi < 0 -> maturity
  std::vector<std::string> methods;  // compare; empty -> exact,trunc3,perturb3
  int coeff_rows = 7;

  bool operator==(const RunConfig&) const = default;
};

void to_json(nlohmann::json& j, const RunConfig& config);
void from_json(const nlohmann::json& j, RunConfig& config);

// Default sweep of bubble-to-volatility ratios for surface/compare.
const std::vector<double>& default_h_sweep();

// Ratios this close to the pole h = 1 need --allow-near-pole.
inline constexpr double kNearPoleWindow = 0.01;

// "MIN:MAX:COUNT" -> Axis; throws std::invalid_argument on bad syntax.
Axis parse_axis(const std::string& text);

// "NSxNT" -> pair; throws std::invalid_argument on bad syntax.
std::pair<int, int> parse_grid(const std::string& text);

// Deterministic 12-significant-digit rendering used for every CSV number.
std::string format_number(double value);

// RFC-4180: quote the field when it contains a comma, quote, or newline.
std::string csv_field(const std::string& raw);

// Compact label for sweep file names ("0.95", "1.8").
std::string h_label(double h);

// Write with a temp-file rename so partial output is never visible.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace bbscli

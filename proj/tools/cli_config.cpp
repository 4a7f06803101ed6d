#include "cli_config.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace bbscli {

std::vector<double> Axis::points() const {
  std::vector<double> out;
  if (count <= 0) return out;
  if (count == 1) return {lo};
  out.reserve(count);
  for (int i = 0; i < count; ++i)
    out.push_back(lo + (hi - lo) * i / (count - 1));
  out.back() = hi;
  return out;
}

namespace {

nlohmann::json optional_to_json(const std::optional<double>& value) {
  if (value) return *value;
  return nullptr;
}

std::optional<double> optional_from_json(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

}  // namespace

void to_json(nlohmann::json& j, const RunConfig& c) {
  j = nlohmann::json{
      {"r", c.r},
      {"alpha", c.alpha},
      {"sigma", c.sigma},
      {"strike", c.strike},
      {"maturity", c.maturity},
      {"f0", c.f0},
      {"tau1", c.tau1},
      {"tau2", c.tau2},
      {"method", c.method},
      {"n_max", c.n_max},
      {"spot", c.spot},
      {"tau", optional_to_json(c.tau)},
      {"t", optional_to_json(c.t_calendar)},
      {"grid_ns", c.grid_ns},
      {"grid_nt", c.grid_nt},
      {"s_min", c.s_min},
      {"s_max", c.s_max},
      {"log_space", c.log_space},
      {"out", c.out},
      {"format", c.format},
      {"allow_near_pole", c.allow_near_pole},
      {"oracle", c.oracle},
      {"h_list", c.h_list},
      {"s_axis", {{"lo", c.s_axis.lo}, {"hi", c.s_axis.hi}, {"count", c.s_axis.count}}},
      {"tau_axis",
       {{"lo", c.tau_axis.lo}, {"hi", c.tau_axis.hi}, {"count", c.tau_axis.count}}},
      {"methods", c.methods},
      {"coeff_rows", c.coeff_rows},
  };
}

void from_json(const nlohmann::json& j, RunConfig& c) {
  RunConfig defaults;
  c.r = j.value("r", defaults.r);
  c.alpha = j.value("alpha", defaults.alpha);
  c.sigma = j.value("sigma", defaults.sigma);
  c.strike = j.value("strike", defaults.strike);
  c.maturity = j.value("maturity", defaults.maturity);
  c.f0 = j.value("f0", defaults.f0);
  c.tau1 = j.value("tau1", defaults.tau1);
  c.tau2 = j.value("tau2", defaults.tau2);
  c.method = j.value("method", defaults.method);
  c.n_max = j.value("n_max", defaults.n_max);
  c.spot = j.value("spot", defaults.spot);
  c.tau = j.contains("tau") ? optional_from_json(j.at("tau")) : defaults.tau;
  c.t_calendar =
      j.contains("t") ? optional_from_json(j.at("t")) : defaults.t_calendar;
  c.grid_ns = j.value("grid_ns", defaults.grid_ns);
  c.grid_nt = j.value("grid_nt", defaults.grid_nt);
  c.s_min = j.value("s_min", defaults.s_min);
  c.s_max = j.value("s_max", defaults.s_max);
  c.log_space = j.value("log_space", defaults.log_space);
  c.out = j.value("out", defaults.out);
  c.format = j.value("format", defaults.format);
  c.allow_near_pole = j.value("allow_near_pole", defaults.allow_near_pole);
  c.oracle = j.value("oracle", defaults.oracle);
  c.h_list = j.value("h_list", defaults.h_list);
  if (j.contains("s_axis")) {
    const auto& a = j.at("s_axis");
    c.s_axis = {a.at("lo").get<double>(), a.at("hi").get<double>(),
                a.at("count").get<int>()};
  }
  if (j.contains("tau_axis")) {
    const auto& a = j.at("tau_axis");
    c.tau_axis = {a.at("lo").get<double>(), a.at("hi").get<double>(),
                  a.at("count").get<int>()};
  }
  c.methods = j.value("methods", defaults.methods);
  c.coeff_rows = j.value("coeff_rows", defaults.coeff_rows);
}

const std::vector<double>& default_h_sweep() {
  static const std::vector<double> sweep{0.0,  0.1,  0.2,  0.4,  0.6,  0.8,
                                         0.9,  0.95, 1.10, 1.20, 1.40, 1.80};
  return sweep;
}

Axis parse_axis(const std::string& text) {
  Axis axis;
  char extra = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%d%c", &axis.lo, &axis.hi,
                  &axis.count, &extra) != 3 ||
      axis.count < 1)
    throw std::invalid_argument("axis must be MIN:MAX:COUNT with COUNT >= 1");
  return axis;
}

std::pair<int, int> parse_grid(const std::string& text) {
  int ns = 0, nt = 0;
  char extra = 0;
  if (std::sscanf(text.c_str(), "%dx%d%c", &ns, &nt, &extra) != 2 || ns < 1 ||
      nt < 1)
    throw std::invalid_argument("grid must be NSxNT");
  return {ns, nt};
}

std::string format_number(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

std::string csv_field(const std::string& raw) {
  if (raw.find_first_of(",\"\n\r") == std::string::npos) return raw;
  std::string quoted = "\"";
  for (char ch : raw) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  quoted += '"';
  return quoted;
}

std::string h_label(double h) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%g", h);
  return buffer;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  std::filesystem::path target(path);
  if (target.has_parent_path())
    std::filesystem::create_directories(target.parent_path());
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out << contents;
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

}  // namespace bbscli

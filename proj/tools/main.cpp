// bubblebs command line: price / surface / compare / coeffs.
// Everything numerical goes through the shared-library C API.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bubblebs/bubblebs.h"
#include "cli_config.hpp"

using bbscli::RunConfig;
using nlohmann::json;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumericalGuard = 3;

class CliError : public std::runtime_error {
 public:
  CliError(int exit_code, const std::string& message)
      : std::runtime_error(message), exit_code_(exit_code) {}
  int exit_code() const { return exit_code_; }

 private:
  int exit_code_;
};

[[noreturn]] void fail_validation(const std::string& field,
                                  const std::string& detail) {
  throw CliError(kExitValidation, field + ": " + detail);
}

int exit_code_for(bbs_status status) {
  switch (status) {
    case BBS_ERR_SINGULAR_BUBBLE:
    case BBS_ERR_STIFF_REGIME:
    case BBS_ERR_OVERFLOW:
    case BBS_ERR_OUT_OF_GRID:
    case BBS_ERR_INTERNAL:
      return kExitNumericalGuard;
    default:
      return kExitValidation;
  }
}

void check(bbs_status status, const std::string& context) {
  if (status == BBS_OK) return;
  std::string detail = bbs_last_error();
  throw CliError(exit_code_for(status),
                 context + ": " + bbs_status_message(status) +
                     (detail.empty() ? "" : " (" + detail + ")"));
}

struct ModelDeleter {
  void operator()(bbs_model* m) const { bbs_model_destroy(m); }
};
struct QuoteDeleter {
  void operator()(bbs_quote* q) const { bbs_quote_destroy(q); }
};
struct GridDeleter {
  void operator()(bbs_grid* g) const { bbs_grid_destroy(g); }
};
using ModelPtr = std::unique_ptr<bbs_model, ModelDeleter>;
using QuotePtr = std::unique_ptr<bbs_quote, QuoteDeleter>;
using GridPtr = std::unique_ptr<bbs_grid, GridDeleter>;

const std::vector<std::string>& method_names() {
  static const std::vector<std::string> names{"perturb3", "exact", "trunc3",
                                              "dual-exact", "dual-trunc3"};
  return names;
}

bbs_method parse_method(const std::string& name) {
  const auto& names = method_names();
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end())
    fail_validation("method", "expected one of perturb3|exact|trunc3|"
                              "dual-exact|dual-trunc3, got '" + name + "'");
  return static_cast<bbs_method>(it - names.begin());
}

bool is_dual(bbs_method method) {
  return method == BBS_METHOD_DUAL_EXACT || method == BBS_METHOD_DUAL_TRUNC3;
}

const char* regime_name(bbs_regime regime) {
  switch (regime) {
    case BBS_REGIME_PRE_BUBBLE: return "PreBubble";
    case BBS_REGIME_IN_BUBBLE: return "InBubble";
    case BBS_REGIME_POST_BUBBLE: return "PostBubble";
  }
  return "Unknown";
}

void validate_market_fields(const RunConfig& c) {
  if (!(c.sigma > 0.0)) fail_validation("sigma", "must be > 0");
  if (!(c.strike > 0.0)) fail_validation("strike", "must be > 0");
  if (!(c.maturity > 0.0)) fail_validation("maturity", "must be > 0");
  if (!std::isfinite(c.r)) fail_validation("r", "must be finite");
  if (!std::isfinite(c.alpha)) fail_validation("alpha", "must be finite");
  if (!(c.tau1 >= 0.0)) fail_validation("tau1", "must be >= 0");
  if (!(c.tau2 >= c.tau1)) fail_validation("tau2", "must be >= tau1");
  if (!(c.tau2 <= c.maturity)) fail_validation("tau2", "must be <= maturity");
}

void check_near_pole(const RunConfig& c, double h, const std::string& field) {
  if (c.allow_near_pole) return;
  if (std::fabs(h - 1.0) < bbscli::kNearPoleWindow)
    fail_validation(field,
                    "SingularBubble guard: bubble ratio h = " +
                        bbscli::format_number(h) +
                        " is within " + bbscli::format_number(bbscli::kNearPoleWindow) +
                        " of the pole h = 1; pass --allow-near-pole to proceed");
}

int env_max_order() {
  const char* raw = std::getenv("BUBBLE_BS_MAX_ORDER");
  if (raw == nullptr || *raw == '\0') return 0;
  char* end = nullptr;
  long value = std::strtol(raw, &end, 10);
  if (end == raw || *end != '\0' || value < 3 || value > 32)
    fail_validation("BUBBLE_BS_MAX_ORDER",
                    "must be an integer in [3, 32], got '" + std::string(raw) +
                        "'");
  return static_cast<int>(value);
}

ModelPtr make_model(const RunConfig& c, double f0) {
  bbs_model* raw = nullptr;
  check(bbs_model_create(c.r, c.alpha, c.sigma, c.strike, c.maturity, f0,
                         c.tau1, c.tau2, &raw),
        "model");
  ModelPtr model(raw);
  if (int cap = env_max_order())
    check(bbs_model_set_max_order(model.get(), cap), "BUBBLE_BS_MAX_ORDER");
  return model;
}

double resolve_tau(const RunConfig& c) {
  if (c.tau && c.t_calendar)
    fail_validation("tau", "pass either --tau or --t, not both");
  if (c.tau) return *c.tau;
  if (c.t_calendar) return c.maturity - *c.t_calendar;
  fail_validation("tau", "one of --tau or --t is required");
}

double oracle_s_max(const RunConfig& c) {
  return c.s_max > 0.0 ? c.s_max : 4.0 * c.strike;
}

bbscli::Axis resolved_tau_axis(const RunConfig& c) {
  bbscli::Axis axis = c.tau_axis;
  if (axis.hi < 0.0) axis.hi = c.maturity;
  return axis;
}

double quote_price(const bbs_model* model, double spot, double tau,
                   bbs_method method, int n_max) {
  bbs_quote* raw = nullptr;
  check(bbs_price(model, spot, tau, method, n_max, &raw), "price");
  QuotePtr quote(raw);
  return bbs_quote_value(quote.get());
}

// ---------------------------------------------------------------------------
// price
// ---------------------------------------------------------------------------

int run_price(const RunConfig& c) {
  validate_market_fields(c);
  if (c.format != "json")
    fail_validation("format", "price emits JSON; pass --format json");
  check_near_pole(c, c.f0 / c.sigma, "f0");
  double tau = resolve_tau(c);
  ModelPtr model = make_model(c, c.f0);
  bbs_method method = parse_method(c.method);

  bbs_quote* raw_quote = nullptr;
  check(bbs_price(model.get(), c.spot, tau, method, c.n_max, &raw_quote),
        "price");
  QuotePtr quote(raw_quote);

  json terms = json::array();
  for (int i = 0; i < bbs_quote_num_terms(quote.get()); ++i) {
    int order = 0;
    double weight = 0.0, contribution = 0.0;
    check(bbs_quote_term(quote.get(), i, &order, &weight, &contribution),
          "term");
    terms.push_back(
        {{"order", order}, {"weight", weight}, {"contribution", contribution}});
  }

  json out{
      {"price", bbs_quote_value(quote.get())},
      {"regime", regime_name(bbs_quote_regime(quote.get()))},
      {"method", c.method},
      {"rate_basis",
       bbs_quote_rate_basis(quote.get()) == BBS_RATE_DRIFT ? "alpha" : "r"},
      {"terms", terms},
      {"params",
       {{"r", c.r},
        {"alpha", c.alpha},
        {"sigma", c.sigma},
        {"strike", c.strike},
        {"maturity", c.maturity},
        {"f0", c.f0},
        {"tau1", c.tau1},
        {"tau2", c.tau2},
        {"h", c.f0 / c.sigma},
        {"spot", c.spot},
        {"tau", tau},
        {"n_max", c.n_max}}},
  };

  if (c.oracle) {
    if (c.grid_ns < 100 || c.grid_nt < 100)
      fail_validation("grid", "--oracle needs at least a 100x100 grid");
    bbs_grid* fine_raw = nullptr;
    check(bbs_pde_solve(model.get(), c.s_min, oracle_s_max(c), c.grid_ns,
                        c.grid_nt, BBS_PDE_LOW_ENERGY, c.log_space ? 1 : 0,
                        &fine_raw),
          "oracle");
    GridPtr fine(fine_raw);
    bbs_grid* coarse_raw = nullptr;
    check(bbs_pde_solve(model.get(), c.s_min, oracle_s_max(c), c.grid_ns / 2,
                        c.grid_nt / 2, BBS_PDE_LOW_ENERGY,
                        c.log_space ? 1 : 0, &coarse_raw),
          "oracle");
    GridPtr coarse(coarse_raw);
    double fine_value = 0.0, coarse_value = 0.0;
    check(bbs_pde_sample(fine.get(), c.spot, tau, &fine_value), "oracle");
    check(bbs_pde_sample(coarse.get(), c.spot, tau, &coarse_value), "oracle");
    double price = bbs_quote_value(quote.get());
    double scale = std::max(std::fabs(fine_value), 1e-12);
    out["oracle"] = {
        {"value", fine_value},
        {"relative_gap", std::fabs(price - fine_value) / scale},
        {"error_estimate", std::fabs(fine_value - coarse_value) / 3.0 / scale},
        {"grid", std::to_string(c.grid_ns) + "x" + std::to_string(c.grid_nt)},
    };
  }

  std::string text = out.dump(2) + "\n";
  if (c.out.empty())
    std::cout << text;
  else
    bbscli::write_file_atomic(c.out, text);
  return 0;
}

// ---------------------------------------------------------------------------
// surface
// ---------------------------------------------------------------------------

// One panel: CSV over the (S, tau) grid at a fixed bubble ratio. For dual
// methods the ratio is the dual one (h* = sigma / f0); h* = 0 is the free
// drift-rate call.
std::string surface_csv(const RunConfig& c, double h, bbs_method method) {
  std::ostringstream csv;
  csv << "S,tau,price,method,h\n";

  ModelPtr model;
  bool free_dual_panel = false;
  if (is_dual(method)) {
    if (h == 0.0)
      free_dual_panel = true;  // f0 -> infinity; quote collapses to C*
    else
      model = make_model(c, c.sigma / h);
  } else {
    model = make_model(c, h * c.sigma);
  }
  if (free_dual_panel) model = make_model(c, 0.0);

  for (double tau : resolved_tau_axis(c).points()) {
    for (double spot : c.s_axis.points()) {
      double price = 0.0;
      if (spot > 0.0) {
        if (free_dual_panel)
          check(bbs_call_price(model.get(), spot, tau, BBS_RATE_DRIFT, &price),
                "surface");
        else
          price = quote_price(model.get(), spot, tau, method, c.n_max);
      }
      csv << bbscli::format_number(spot) << ',' << bbscli::format_number(tau)
          << ',' << bbscli::format_number(price) << ','
          << bbscli::csv_field(c.method) << ',' << bbscli::format_number(h)
          << '\n';
    }
  }
  return csv.str();
}

int run_surface(const RunConfig& c) {
  validate_market_fields(c);
  if (c.format != "csv")
    fail_validation("format", "surface emits CSV; pass --format csv");
  bbs_method method = parse_method(c.method);
  std::vector<double> sweep =
      c.h_list.empty() ? bbscli::default_h_sweep() : c.h_list;
  for (double h : sweep) check_near_pole(c, h, "h_list");

  std::string prefix = c.out.empty() ? "surface" : c.out;
  for (double h : sweep) {
    std::string path = prefix + "_h" + bbscli::h_label(h) + ".csv";
    bbscli::write_file_atomic(path, surface_csv(c, h, method));
    std::cout << path << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// compare
// ---------------------------------------------------------------------------

int run_compare(const RunConfig& c) {
  validate_market_fields(c);
  if (c.format != "csv")
    fail_validation("format", "compare emits CSV; pass --format csv");
  std::vector<double> sweep =
      c.h_list.empty() ? bbscli::default_h_sweep() : c.h_list;
  for (double h : sweep) check_near_pole(c, h, "h_list");
  std::vector<std::string> methods = c.methods;
  if (methods.empty()) methods = {"exact", "trunc3", "perturb3"};
  for (const std::string& name : methods) parse_method(name);
  if (c.grid_ns < 100 || c.grid_nt < 100)
    fail_validation("grid", "compare needs at least a 100x100 grid");

  const double tau_mid = 0.5 * (c.tau1 + c.tau2);
  const double s_hi = oracle_s_max(c);
  bbscli::Axis tau_axis = resolved_tau_axis(c);

  std::ostringstream csv;
  csv << "h,method,max_abs_err,atm_rel_err,oracle_err_est,status\n";
  for (double h : sweep) {
    ModelPtr model = make_model(c, h * c.sigma);
    bbs_grid* fine_raw = nullptr;
    bbs_status solve_status =
        bbs_pde_solve(model.get(), c.s_min, s_hi, c.grid_ns, c.grid_nt,
                      BBS_PDE_LOW_ENERGY, c.log_space ? 1 : 0, &fine_raw);
    if (solve_status != BBS_OK) {
      // surfaced per h value; the sweep continues
      for (const std::string& name : methods)
        csv << bbscli::format_number(h) << ',' << bbscli::csv_field(name)
            << ",,,,"
            << bbscli::csv_field(bbs_status_message(solve_status)) << '\n';
      continue;
    }
    GridPtr fine(fine_raw);
    bbs_grid* coarse_raw = nullptr;
    check(bbs_pde_solve(model.get(), c.s_min, s_hi, c.grid_ns / 2,
                        c.grid_nt / 2, BBS_PDE_LOW_ENERGY,
                        c.log_space ? 1 : 0, &coarse_raw),
          "compare");
    GridPtr coarse(coarse_raw);

    double atm_fine = 0.0, atm_coarse = 0.0;
    check(bbs_pde_sample(fine.get(), c.strike, tau_mid, &atm_fine), "compare");
    check(bbs_pde_sample(coarse.get(), c.strike, tau_mid, &atm_coarse),
          "compare");
    double est =
        std::fabs(atm_fine - atm_coarse) / 3.0 / std::max(atm_fine, 1e-12);

    for (const std::string& name : methods) {
      bbs_method method = parse_method(name);
      std::string status = "ok";
      double max_abs = 0.0, atm_rel = 0.0;
      try {
        for (double tau : tau_axis.points()) {
          if (tau == 0.0) continue;  // both sides are the payoff identically
          for (double spot : c.s_axis.points()) {
            if (!(spot > 0.0) || spot > s_hi) continue;
            double series = quote_price(model.get(), spot, tau, method, c.n_max);
            double reference = 0.0;
            check(bbs_pde_sample(fine.get(), spot, tau, &reference), "compare");
            max_abs = std::max(max_abs, std::fabs(series - reference));
          }
        }
        double series_atm =
            quote_price(model.get(), c.strike, tau_mid, method, c.n_max);
        atm_rel = std::fabs(series_atm - atm_fine) / std::max(atm_fine, 1e-12);
      } catch (const CliError& err) {
        status = err.what();
      }
      csv << bbscli::format_number(h) << ',' << bbscli::csv_field(name) << ',';
      if (status == "ok")
        csv << bbscli::format_number(max_abs) << ','
            << bbscli::format_number(atm_rel) << ','
            << bbscli::format_number(est) << ",ok\n";
      else
        csv << ",,," << bbscli::csv_field(status) << '\n';
    }
  }

  if (c.out.empty())
    std::cout << csv.str();
  else
    bbscli::write_file_atomic(c.out, csv.str());
  return 0;
}

// ---------------------------------------------------------------------------
// coeffs
// ---------------------------------------------------------------------------

int run_coeffs(const RunConfig& c) {
  if (c.coeff_rows < 1) fail_validation("rows", "must be >= 1");
  std::ostringstream out;
  std::vector<char> buffer(static_cast<std::size_t>(c.coeff_rows) * 48 + 64);
  for (int n = 1; n <= c.coeff_rows; ++n) {
    check(bbs_triangle_row(n, buffer.data(), buffer.size()), "coeffs");
    out << buffer.data() << "\n";
  }
  if (c.out.empty())
    std::cout << out.str();
  else
    bbscli::write_file_atomic(c.out, out.str());
  return 0;
}

// ---------------------------------------------------------------------------
// wiring
// ---------------------------------------------------------------------------

void add_market_options(CLI::App* cmd, RunConfig& c) {
  cmd->add_option("--r", c.r, "risk-free interest rate");
  cmd->add_option("--alpha", c.alpha, "mean return of the underlying");
  cmd->add_option("--sigma", c.sigma, "volatility (artifact default 0.4)");
  cmd->add_option("--strike", c.strike, "strike (artifact default 100)");
  cmd->add_option("--maturity", c.maturity, "horizon T (artifact default 1)");
  cmd->add_option("--f0", c.f0, "bubble amplitude");
  cmd->add_option("--tau1", c.tau1,
                  "bubble activation, time-to-maturity (artifact default 0.25)");
  cmd->add_option("--tau2", c.tau2,
                  "bubble deactivation, time-to-maturity (artifact default 0.75)");
  cmd->add_flag("--allow-near-pole", c.allow_near_pole,
                "permit bubble ratios within the pole guard band");
}

void add_grid_options(CLI::App* cmd, RunConfig& c) {
  cmd->add_option_function<std::string>(
         "--grid",
         [&c](const std::string& text) {
           auto [ns, nt] = bbscli::parse_grid(text);
           c.grid_ns = ns;
           c.grid_nt = nt;
         },
         "oracle grid as NSxNT (default 400x400)")
      ->type_name("NSxNT");
  cmd->add_option("--s-min", c.s_min, "lower price bound of the oracle grid");
  cmd->add_option("--s-max", c.s_max,
                  "upper price bound of the oracle grid (default 4*strike)");
  cmd->add_flag("--log-space", c.log_space,
                "geometric spacing in S (needs --s-min > 0)");
}

void add_axis_options(CLI::App* cmd, RunConfig& c) {
  cmd->add_option_function<std::string>(
         "--s-axis",
         [&c](const std::string& text) { c.s_axis = bbscli::parse_axis(text); },
         "sample axis in S as MIN:MAX:COUNT (default 0:300:61)")
      ->type_name("MIN:MAX:COUNT");
  cmd->add_option_function<std::string>(
         "--tau-axis",
         [&c](const std::string& text) {
           c.tau_axis = bbscli::parse_axis(text);
         },
         "sample axis in tau as MIN:MAX:COUNT (default 0:T:41)")
      ->type_name("MIN:MAX:COUNT");
}

std::optional<std::string> find_config_path(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) return std::string(argv[i + 1]);
    if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
  }
  return std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig config;
  try {
    if (auto path = find_config_path(argc, argv)) {
      std::ifstream in(*path);
      if (!in) fail_validation("config", "cannot read '" + *path + "'");
      json j;
      in >> j;
      config = j.get<RunConfig>();
    }
  } catch (const CliError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return err.exit_code();
  } catch (const std::exception& err) {
    std::cerr << "error: config: " << err.what() << "\n";
    return kExitValidation;
  }

  CLI::App app{"European call pricing under a square arbitrage bubble"};
  app.require_subcommand(1);
  std::string config_path;  // consumed above; registered so parsing accepts it
  app.add_option("--config", config_path,
                 "JSON config file (flags override its values)")
      ->expected(1);
  bool dump_config = false;
  app.add_flag("--dump-config", dump_config,
               "print the effective config as JSON and exit");

  CLI::App* price = app.add_subcommand("price", "price one contract");
  price->fallthrough();  // --config / --dump-config after the verb
  add_market_options(price, config);
  add_grid_options(price, config);
  price->add_option("--method", config.method,
                    "perturb3|exact|trunc3|dual-exact|dual-trunc3");
  price->add_option("--n-max", config.n_max, "series order for exact methods");
  price->add_option("-S,--spot", config.spot, "underlying price");
  price->add_option_function<double>(
      "--tau", [&config](double v) { config.tau = v; }, "time to maturity");
  price->add_option_function<double>(
      "--t", [&config](double v) { config.t_calendar = v; },
      "calendar time (converted to tau = T - t)");
  price->add_flag("--oracle", config.oracle,
                  "also report the finite-difference value and gap");
  price->add_option("--out", config.out, "write JSON here instead of stdout");
  price->add_option("--format", config.format, "json");

  CLI::App* surface =
      app.add_subcommand("surface", "CSV price surfaces, one file per ratio");
  surface->fallthrough();
  add_market_options(surface, config);
  add_axis_options(surface, config);
  CLI::Option* surface_method =
      surface->add_option("--method", config.method,
                          "perturb3|exact|trunc3|dual-exact|dual-trunc3");
  surface->add_option("--n-max", config.n_max, "series order for exact methods");
  surface->add_option("--h-list", config.h_list,
                      "bubble ratios f0/sigma (dual: sigma/f0)")
      ->delimiter(',');
  surface->add_option("--out", config.out, "output prefix (default 'surface')");
  CLI::Option* surface_format = surface->add_option("--format", config.format, "csv");

  CLI::App* compare = app.add_subcommand(
      "compare", "CSV error report of series methods against the oracle");
  compare->fallthrough();
  add_market_options(compare, config);
  add_grid_options(compare, config);
  add_axis_options(compare, config);
  compare->add_option("--methods", config.methods,
                      "methods to compare (default exact,trunc3,perturb3)")
      ->delimiter(',');
  compare->add_option("--n-max", config.n_max, "series order for exact methods");
  compare->add_option("--h-list", config.h_list, "bubble ratios f0/sigma")
      ->delimiter(',');
  compare->add_option("--out", config.out, "write CSV here instead of stdout");
  CLI::Option* compare_format = compare->add_option("--format", config.format, "csv");

  CLI::App* coeffs =
      app.add_subcommand("coeffs", "print the operator coefficient triangle");
  coeffs->fallthrough();
  coeffs->add_option("--rows,--n-max", config.coeff_rows,
                     "number of rows (default 7)");
  coeffs->add_option("--out", config.out, "write rows here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (surface->parsed() && surface_method->count() == 0 &&
        config.method == "exact")
      config.method = "perturb3";  // panel-sweep default
    bool wants_csv = (surface->parsed() && surface_format->count() == 0) ||
                     (compare->parsed() && compare_format->count() == 0);
    if (wants_csv && config.format == "json") config.format = "csv";
    if (dump_config) {
      std::cout << json(config).dump(2) << "\n";
      return 0;
    }
    if (price->parsed()) return run_price(config);
    if (surface->parsed()) return run_surface(config);
    if (compare->parsed()) return run_compare(config);
    if (coeffs->parsed()) return run_coeffs(config);
  } catch (const CliError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return err.exit_code();
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitNumericalGuard;
  }
  return 0;
}

#include "bubblebs/bubblebs.h"

#include <cstring>
#include <string>

#include "bubblebs/black_scholes.hpp"
#include "bubblebs/model.hpp"
#include "bubblebs/operator_algebra.hpp"
#include "bubblebs/pde_oracle.hpp"
#include "bubblebs/series_pricer.hpp"

struct bbs_model {
  bubblebs::MarketParams market;
  bubblebs::SquareBubble bubble;
  int max_order = bubblebs::kDefaultMaxOrder;
};

struct bbs_quote {
  bubblebs::SeriesQuote quote;
};

struct bbs_grid {
  bubblebs::PdeGrid grid;
};

namespace {

thread_local std::string g_last_error;

bbs_status map_errc(bubblebs::Errc code) {
  using bubblebs::Errc;
  switch (code) {
    case Errc::InvalidArgument: return BBS_ERR_INVALID_ARGUMENT;
    case Errc::SingularBubble: return BBS_ERR_SINGULAR_BUBBLE;
    case Errc::ZeroBubble: return BBS_ERR_ZERO_BUBBLE;
    case Errc::OutOfHorizon: return BBS_ERR_OUT_OF_HORIZON;
    case Errc::OrderTooHigh: return BBS_ERR_ORDER_TOO_HIGH;
    case Errc::Overflow: return BBS_ERR_OVERFLOW;
    case Errc::RangeError: return BBS_ERR_RANGE;
    case Errc::GridTooCoarse: return BBS_ERR_GRID_TOO_COARSE;
    case Errc::StiffRegime: return BBS_ERR_STIFF_REGIME;
    case Errc::OutOfGrid: return BBS_ERR_OUT_OF_GRID;
  }
  return BBS_ERR_INTERNAL;
}

template <typename Fn>
bbs_status guarded(Fn&& fn) {
  try {
    fn();
    return BBS_OK;
  } catch (const bubblebs::Error& err) {
    g_last_error = err.what();
    return map_errc(err.code());
  } catch (const std::exception& err) {
    g_last_error = err.what();
    return BBS_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return BBS_ERR_INTERNAL;
  }
}

bbs_status require(bool ok, const char* message) {
  if (ok) return BBS_OK;
  g_last_error = message;
  return BBS_ERR_INVALID_ARGUMENT;
}

bbs_status copy_string(const std::string& text, char* buffer, size_t length) {
  if (buffer == nullptr || length == 0 || text.size() + 1 > length) {
    g_last_error = "output buffer too small";
    return BBS_ERR_BUFFER_TOO_SMALL;
  }
  std::memcpy(buffer, text.c_str(), text.size() + 1);
  return BBS_OK;
}

bubblebs::Method to_method(bbs_method method) {
  switch (method) {
    case BBS_METHOD_PERTURB3: return bubblebs::Method::Perturb3;
    case BBS_METHOD_EXACT: return bubblebs::Method::Exact;
    case BBS_METHOD_TRUNC3: return bubblebs::Method::Trunc3;
    case BBS_METHOD_DUAL_EXACT: return bubblebs::Method::DualExact;
    case BBS_METHOD_DUAL_TRUNC3: return bubblebs::Method::DualTrunc3;
  }
  throw bubblebs::Error(bubblebs::Errc::InvalidArgument, "unknown method");
}

}  // namespace

extern "C" {

const char* bbs_status_message(bbs_status status) {
  switch (status) {
    case BBS_OK: return "ok";
    case BBS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case BBS_ERR_SINGULAR_BUBBLE: return "SingularBubble: amplitude at the pole f0 = sigma";
    case BBS_ERR_ZERO_BUBBLE: return "ZeroBubble: dual description undefined for f0 = 0";
    case BBS_ERR_OUT_OF_HORIZON: return "OutOfHorizon: tau outside [0, maturity]";
    case BBS_ERR_ORDER_TOO_HIGH: return "OrderTooHigh: order exceeds the configured cap";
    case BBS_ERR_OVERFLOW: return "Overflow: exact integer capacity exceeded";
    case BBS_ERR_RANGE: return "RangeError: argument outside the supported range";
    case BBS_ERR_GRID_TOO_COARSE: return "GridTooCoarse: need at least 50x50";
    case BBS_ERR_STIFF_REGIME: return "StiffRegime: |v0| * dtau too large";
    case BBS_ERR_OUT_OF_GRID: return "OutOfGrid: point outside the solved surface";
    case BBS_ERR_BUFFER_TOO_SMALL: return "output buffer too small";
    case BBS_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* bbs_last_error(void) { return g_last_error.c_str(); }

bbs_status bbs_model_create(double r, double alpha, double sigma,
                            double strike, double maturity, double f0,
                            double tau1, double tau2, bbs_model** out) {
  if (bbs_status s = require(out != nullptr, "out must not be null")) return s;
  return guarded([&] {
    bbs_model model;
    model.market = {r, alpha, sigma, strike, maturity};
    model.bubble = {f0, tau1, tau2};
    bubblebs::validate(model.market);
    bubblebs::validate(model.bubble, model.market);
    *out = new bbs_model(model);
  });
}

void bbs_model_destroy(bbs_model* model) { delete model; }

bbs_status bbs_model_set_max_order(bbs_model* model, int max_order) {
  if (bbs_status s = require(model != nullptr, "model must not be null"))
    return s;
  if (bbs_status s = require(max_order >= 3, "max_order must be >= 3"))
    return s;
  if (max_order > bubblebs::kHardMaxOrder) {
    g_last_error = "max_order beyond hard cap";
    return BBS_ERR_ORDER_TOO_HIGH;
  }
  model->max_order = max_order;
  return BBS_OK;
}

int bbs_model_max_order(const bbs_model* model) {
  return model ? model->max_order : 0;
}

bbs_status bbs_model_potential(const bbs_model* model, double* v0,
                               double* v0_star, double* h, double* h_star) {
  if (bbs_status s = require(model != nullptr, "model must not be null"))
    return s;
  return guarded([&] {
    bubblebs::Potential p = bubblebs::potential(model->market, model->bubble);
    if (v0) *v0 = p.v0;
    if (v0_star) *v0_star = p.v0_star;
    if (h) *h = p.h;
    if (h_star) *h_star = p.h_star;
  });
}

bbs_status bbs_model_regime(const bbs_model* model, double tau,
                            bbs_regime* out) {
  if (bbs_status s = require(model != nullptr && out != nullptr,
                             "model and out must not be null"))
    return s;
  return guarded([&] {
    *out = static_cast<bbs_regime>(bubblebs::classify_regime(
        tau, model->bubble, model->market.maturity));
  });
}

bbs_status bbs_model_interaction_clock(const bbs_model* model, double tau,
                                       double* out) {
  if (bbs_status s = require(model != nullptr && out != nullptr,
                             "model and out must not be null"))
    return s;
  return guarded([&] {
    *out = bubblebs::interaction_clock(tau, model->bubble,
                                       model->market.maturity);
  });
}

bbs_status bbs_model_dual(const bbs_model* model, bbs_model** out) {
  if (bbs_status s = require(model != nullptr && out != nullptr,
                             "model and out must not be null"))
    return s;
  return guarded([&] {
    bubblebs::DualParams dual =
        bubblebs::dual_params(model->market, model->bubble);
    bbs_model twin;
    twin.market = dual.market;
    twin.bubble = dual.bubble;
    twin.max_order = model->max_order;
    *out = new bbs_model(twin);
  });
}

bbs_status bbs_call_price(const bbs_model* model, double spot, double tau,
                          bbs_rate_basis basis, double* out) {
  if (bbs_status s = require(model != nullptr && out != nullptr,
                             "model and out must not be null"))
    return s;
  return guarded([&] {
    *out = bubblebs::call_price(spot, tau, model->market,
                                basis == BBS_RATE_INTEREST
                                    ? bubblebs::RateBasis::Interest
                                    : bubblebs::RateBasis::Drift);
  });
}

bbs_status bbs_call_derivative(const bbs_model* model, int order, double spot,
                               double tau, bbs_rate_basis basis, double* out) {
  if (bbs_status s = require(model != nullptr && out != nullptr,
                             "model and out must not be null"))
    return s;
  return guarded([&] {
    *out = bubblebs::call_s_derivative(order, spot, tau, model->market,
                                       basis == BBS_RATE_INTEREST
                                           ? bubblebs::RateBasis::Interest
                                           : bubblebs::RateBasis::Drift,
                                       model->max_order);
  });
}

bbs_status bbs_price(const bbs_model* model, double spot, double tau,
                     bbs_method method, int n_max, bbs_quote** out) {
  if (bbs_status s = require(model != nullptr && out != nullptr,
                             "model and out must not be null"))
    return s;
  return guarded([&] {
    bubblebs::SeriesQuote quote =
        bubblebs::price_quote(spot, tau, model->market, model->bubble,
                              to_method(method), n_max, model->max_order);
    *out = new bbs_quote{std::move(quote)};
  });
}

double bbs_quote_value(const bbs_quote* quote) {
  return quote ? quote->quote.price : 0.0;
}

bbs_regime bbs_quote_regime(const bbs_quote* quote) {
  return quote ? static_cast<bbs_regime>(quote->quote.regime)
               : BBS_REGIME_PRE_BUBBLE;
}

bbs_method bbs_quote_method(const bbs_quote* quote) {
  return quote ? static_cast<bbs_method>(quote->quote.method)
               : BBS_METHOD_EXACT;
}

bbs_rate_basis bbs_quote_rate_basis(const bbs_quote* quote) {
  return quote && quote->quote.rate_basis == bubblebs::RateBasis::Drift
             ? BBS_RATE_DRIFT
             : BBS_RATE_INTEREST;
}

double bbs_quote_interaction_x(const bbs_quote* quote) {
  return quote ? quote->quote.interaction_x : 0.0;
}

int bbs_quote_num_terms(const bbs_quote* quote) {
  return quote ? static_cast<int>(quote->quote.terms.size()) : 0;
}

bbs_status bbs_quote_term(const bbs_quote* quote, int index, int* order,
                          double* weight, double* contribution) {
  if (bbs_status s = require(quote != nullptr, "quote must not be null"))
    return s;
  if (bbs_status s =
          require(index >= 0 &&
                      index < static_cast<int>(quote->quote.terms.size()),
                  "term index out of range"))
    return s;
  const bubblebs::SeriesTerm& term = quote->quote.terms[index];
  if (order) *order = term.order;
  if (weight) *weight = term.weight;
  if (contribution) *contribution = term.contribution;
  return BBS_OK;
}

void bbs_quote_destroy(bbs_quote* quote) { delete quote; }

bbs_status bbs_pde_solve(const bbs_model* model, double s_min, double s_max,
                         int n_s, int n_tau, bbs_pde_form form, int log_space,
                         bbs_grid** out) {
  if (bbs_status s = require(model != nullptr && out != nullptr,
                             "model and out must not be null"))
    return s;
  return guarded([&] {
    bubblebs::GridConfig config;
    config.s_min = s_min;
    config.s_max = s_max;
    config.n_s = n_s;
    config.n_tau = n_tau;
    config.log_space = log_space != 0;
    config.form = form == BBS_PDE_HIGH_ENERGY ? bubblebs::PdeForm::HighEnergy
                                              : bubblebs::PdeForm::LowEnergy;
    *out = new bbs_grid{bubblebs::solve_pde(model->market, model->bubble,
                                            config)};
  });
}

bbs_status bbs_pde_sample(const bbs_grid* grid, double spot, double tau,
                          double* out) {
  if (bbs_status s = require(grid != nullptr && out != nullptr,
                             "grid and out must not be null"))
    return s;
  return guarded([&] { *out = grid->grid.sample(spot, tau); });
}

int bbs_grid_num_s(const bbs_grid* grid) {
  return grid ? static_cast<int>(grid->grid.s_nodes().size()) : 0;
}

int bbs_grid_num_tau(const bbs_grid* grid) {
  return grid ? static_cast<int>(grid->grid.tau_nodes().size()) : 0;
}

bbs_status bbs_grid_node(const bbs_grid* grid, int i_tau, int i_s, double* s,
                         double* tau, double* value) {
  if (bbs_status st = require(grid != nullptr, "grid must not be null"))
    return st;
  return guarded([&] {
    double v = grid->grid.value(i_tau, i_s);
    if (s) *s = grid->grid.s_nodes()[i_s];
    if (tau) *tau = grid->grid.tau_nodes()[i_tau];
    if (value) *value = v;
  });
}

void bbs_grid_destroy(bbs_grid* grid) { delete grid; }

bbs_status bbs_triangle_entry(int n, int m, char* buffer, size_t length) {
  bbs_status status = BBS_OK;
  bbs_status guard = guarded([&] {
    bubblebs::CoeffTriangle triangle(n);
    status = copy_string(bubblebs::to_decimal(triangle.at(n, m)), buffer,
                         length);
  });
  return guard != BBS_OK ? guard : status;
}

bbs_status bbs_triangle_row(int n, char* buffer, size_t length) {
  bbs_status status = BBS_OK;
  bbs_status guard = guarded([&] {
    bubblebs::CoeffTriangle triangle(n);
    std::string text;
    for (const bubblebs::uint128& entry : triangle.row(n)) {
      if (!text.empty()) text += ' ';
      text += bubblebs::to_decimal(entry);
    }
    status = copy_string(text, buffer, length);
  });
  return guard != BBS_OK ? guard : status;
}

}  // extern "C"

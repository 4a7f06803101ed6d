#include "bubblebs/series_pricer.hpp"

#include <algorithm>
#include <cmath>

#include "bubblebs/operator_algebra.hpp"

namespace bubblebs {

const char* to_string(Method method) {
  switch (method) {
    case Method::Perturb3: return "perturb3";
    case Method::Exact: return "exact";
    case Method::Trunc3: return "trunc3";
    case Method::DualExact: return "dual-exact";
    case Method::DualTrunc3: return "dual-trunc3";
  }
  return "unknown";
}

double interaction_clock(double tau, const SquareBubble& bubble,
                         double maturity) {
  switch (classify_regime(tau, bubble, maturity)) {
    case Regime::PreBubble: return 0.0;
    case Regime::InBubble: return tau - bubble.tau1;
    case Regime::PostBubble: return bubble.tau2 - bubble.tau1;
  }
  return 0.0;
}

namespace {

SeriesQuote single_call_quote(double spot, double tau, const MarketParams& mp,
                              Regime regime, Method method, RateBasis basis) {
  SeriesQuote q;
  q.regime = regime;
  q.method = method;
  q.rate_basis = basis;
  double call = call_price(spot, tau, mp, basis);
  q.terms.push_back({0, 1.0, call});
  q.price = call;
  return q;
}

// Sum weighted S^n d^nC blocks, highest order first to limit cancellation
// with alternating-sign weights.
SeriesQuote assemble(double spot, double tau, const MarketParams& mp,
                     Regime regime, Method method, RateBasis basis, double x,
                     const std::vector<double>& weights, int max_order) {
  SeriesQuote q;
  q.regime = regime;
  q.method = method;
  q.rate_basis = basis;
  q.interaction_x = x;
  const int n_max = static_cast<int>(weights.size()) - 1;
  GreekVector greeks = greek_vector(n_max, spot, tau, mp, basis, max_order);
  q.terms.reserve(weights.size());
  double s_pow = 1.0;
  for (int n = 0; n <= n_max; ++n) {
    q.terms.push_back({n, weights[n], weights[n] * s_pow * greeks.values[n]});
    s_pow *= spot;
  }
  double sum = 0.0;
  for (int n = n_max; n >= 0; --n) sum += q.terms[n].contribution;
  q.price = sum;
  return q;
}

std::vector<double> exact_weights(double x, int n_max) {
  std::vector<double> w(n_max + 1);
  const double decay = std::exp(-x);
  w[0] = decay;
  if (n_max >= 1) w[1] = -std::expm1(-x);  // 1 - e^{-x}
  for (int n = 2; n <= n_max; ++n) w[n] = decay * q_function(n, x);
  return w;
}

std::vector<double> trunc3_weights(double x) {
  static const int kAlpha32 =
      static_cast<int>(CoeffTriangle(3).at(3, 2));  // = 3
  const double decay = std::exp(-x);
  const double x2 = x * x;
  const double x3 = x2 * x;
  return {decay, -std::expm1(-x), decay * (0.5 * x2 + kAlpha32 * x3 / 6.0),
          decay * x3 / 6.0};
}

std::vector<double> perturb3_weights(double x) {
  const double x2 = x * x;
  const double x3 = x2 * x;
  const double odd = x - 0.5 * x2 + x3 / 6.0;
  return {1.0 - odd, odd, 0.5 * x2, x3 / 6.0};
}

}  // namespace

SeriesQuote perturbative_order3(double spot, double tau, const MarketParams& mp,
                                const SquareBubble& bubble) {
  validate(mp);
  validate(bubble, mp);
  Regime regime = classify_regime(tau, bubble, mp.maturity);
  double x = potential_v0(mp, bubble.f0) * interaction_clock(tau, bubble, mp.maturity);
  if (x == 0.0)
    return single_call_quote(spot, tau, mp, regime, Method::Perturb3,
                             RateBasis::Interest);
  return assemble(spot, tau, mp, regime, Method::Perturb3, RateBasis::Interest,
                  x, perturb3_weights(x), kDefaultMaxOrder);
}

namespace {

void check_series_order(int n_max, int max_order) {
  if (n_max < 1)
    throw Error(Errc::InvalidArgument, "series order must be >= 1");
  int cap = std::min(max_order, kHardMaxOrder);
  if (n_max > cap)
    throw Error(Errc::OrderTooHigh, "series order " + std::to_string(n_max) +
                                        " exceeds cap " + std::to_string(cap));
}

}  // namespace

SeriesQuote exact_series(double spot, double tau, const MarketParams& mp,
                         const SquareBubble& bubble, int n_max, int max_order) {
  validate(mp);
  validate(bubble, mp);
  check_series_order(n_max, max_order);
  Regime regime = classify_regime(tau, bubble, mp.maturity);
  double x = potential_v0(mp, bubble.f0) * interaction_clock(tau, bubble, mp.maturity);
  if (x == 0.0)
    return single_call_quote(spot, tau, mp, regime, Method::Exact,
                             RateBasis::Interest);
  return assemble(spot, tau, mp, regime, Method::Exact, RateBasis::Interest, x,
                  exact_weights(x, n_max), max_order);
}

SeriesQuote truncated_order3(double spot, double tau, const MarketParams& mp,
                             const SquareBubble& bubble) {
  validate(mp);
  validate(bubble, mp);
  Regime regime = classify_regime(tau, bubble, mp.maturity);
  double x = potential_v0(mp, bubble.f0) * interaction_clock(tau, bubble, mp.maturity);
  if (x == 0.0)
    return single_call_quote(spot, tau, mp, regime, Method::Trunc3,
                             RateBasis::Interest);
  return assemble(spot, tau, mp, regime, Method::Trunc3, RateBasis::Interest,
                  x, trunc3_weights(x), kDefaultMaxOrder);
}

SeriesQuote dual_quote(double spot, double tau, const MarketParams& mp,
                       const SquareBubble& bubble, Method method, int n_max,
                       int max_order) {
  validate(mp);
  validate(bubble, mp);
  if (method != Method::DualExact && method != Method::DualTrunc3)
    throw Error(Errc::InvalidArgument, "dual_quote expects a dual method");
  if (bubble.f0 == 0.0)
    throw Error(Errc::ZeroBubble, "dual ratio sigma/f0 is infinite for f0 = 0");
  if (method == Method::DualExact) check_series_order(n_max, max_order);
  Regime regime = classify_regime(tau, bubble, mp.maturity);
  double x = potential_v0_star(mp, bubble.f0) *
             interaction_clock(tau, bubble, mp.maturity);
  if (x == 0.0)
    return single_call_quote(spot, tau, mp, regime, method, RateBasis::Drift);
  std::vector<double> weights = method == Method::DualExact
                                    ? exact_weights(x, n_max)
                                    : trunc3_weights(x);
  return assemble(spot, tau, mp, regime, method, RateBasis::Drift, x, weights,
                  max_order);
}

SeriesQuote price_quote(double spot, double tau, const MarketParams& mp,
                        const SquareBubble& bubble, Method method, int n_max,
                        int max_order) {
  switch (method) {
    case Method::Perturb3: return perturbative_order3(spot, tau, mp, bubble);
    case Method::Exact: return exact_series(spot, tau, mp, bubble, n_max, max_order);
    case Method::Trunc3: return truncated_order3(spot, tau, mp, bubble);
    case Method::DualExact:
    case Method::DualTrunc3:
      return dual_quote(spot, tau, mp, bubble, method, n_max, max_order);
  }
  throw Error(Errc::InvalidArgument, "unknown pricing method");
}

}  // namespace bubblebs

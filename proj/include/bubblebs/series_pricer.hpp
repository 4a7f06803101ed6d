#pragma once

#include <vector>

#include "bubblebs/black_scholes.hpp"
#include "bubblebs/model.hpp"

namespace bubblebs {

enum class Method { Perturb3, Exact, Trunc3, DualExact, DualTrunc3 };

const char* to_string(Method method);

struct SeriesTerm {
  int order = 0;        // n of the S^n d^n C / dS^n building block
  double weight = 0.0;  // series weight multiplying that block
  double contribution = 0.0;
};

/// A price with its per-order breakdown. `price` is the sum of the recorded
/// contributions (summed highest order first). When the elapsed interaction
/// x is zero (pre-bubble, zero bubble, or r = alpha) the quote collapses to
/// a single plain-call term.
struct SeriesQuote {
  double price = 0.0;
  Regime regime = Regime::PreBubble;
  Method method = Method::Exact;
  RateBasis rate_basis = RateBasis::Interest;
  double interaction_x = 0.0;  // v0 * elapsed interaction time
  std::vector<SeriesTerm> terms;
};

/// Elapsed interaction time: 0 before the bubble, tau - tau1 inside,
/// frozen at tau2 - tau1 after.
double interaction_clock(double tau, const SquareBubble& bubble,
                         double maturity);

/// Order-3 iterated-series price: polynomial weights in x = v0 * clock on
/// the C, S Delta, S^2 Gamma, S^3 Speed blocks.
SeriesQuote perturbative_order3(double spot, double tau, const MarketParams& mp,
                                const SquareBubble& bubble);

/// Resummed price e^{-x} sum_{n<=n_max} Q_n(x) S^n d^nC/dS^n.
SeriesQuote exact_series(double spot, double tau, const MarketParams& mp,
                         const SquareBubble& bubble, int n_max,
                         int max_order = kDefaultMaxOrder);

/// Resummed form cut at order 3: exponential prefactor kept exact, Q_2 and
/// Q_3 replaced by their cubic truncations.
SeriesQuote truncated_order3(double spot, double tau, const MarketParams& mp,
                             const SquareBubble& bubble);

/// High-energy version of Exact/Trunc3: v0* in place of v0 and drift-rate
/// Greeks in place of interest-rate ones. Requires f0 > 0.
SeriesQuote dual_quote(double spot, double tau, const MarketParams& mp,
                       const SquareBubble& bubble, Method method, int n_max,
                       int max_order = kDefaultMaxOrder);

/// Dispatch on any Method value.
SeriesQuote price_quote(double spot, double tau, const MarketParams& mp,
                        const SquareBubble& bubble, Method method, int n_max,
                        int max_order = kDefaultMaxOrder);

}  // namespace bubblebs

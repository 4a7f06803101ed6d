#pragma once

#include <vector>

#include "bubblebs/model.hpp"

namespace bubblebs {

// Default cap on the derivative order; runtime-configurable up to the hard cap.
inline constexpr int kDefaultMaxOrder = 16;
inline constexpr int kHardMaxOrder = 32;

double norm_pdf(double x);
double norm_cdf(double x);

/// Closed-form European call. At tau = 0 returns the payoff max(S - K, 0)
/// exactly; the rate is selected by `basis` (Interest = r, Drift = alpha).
double call_price(double spot, double tau, const MarketParams& mp,
                  RateBasis basis = RateBasis::Interest);

/// n-th S-derivative of the call. n = 0 is the price, n = 1 Delta,
/// n = 2 Gamma, n = 3 Speed. Orders >= 2 are evaluated analytically through
/// a polynomial recursion on the Gamma kernel, so arbitrary orders up to the
/// cap keep full double precision. Requires tau > 0 for n >= 1.
double call_s_derivative(int order, double spot, double tau,
                         const MarketParams& mp,
                         RateBasis basis = RateBasis::Interest,
                         int max_order = kDefaultMaxOrder);

/// Derivatives 0..order evaluated in one pass over shared d1/d2.
struct GreekVector {
  int order = 0;
  std::vector<double> values;  // values[k] = d^k C / dS^k
  RateBasis rate_used = RateBasis::Interest;
};

GreekVector greek_vector(int order, double spot, double tau,
                         const MarketParams& mp,
                         RateBasis basis = RateBasis::Interest,
                         int max_order = kDefaultMaxOrder);

}  // namespace bubblebs

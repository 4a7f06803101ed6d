#include "bubblebs/black_scholes.hpp"

#include <algorithm>
#include <cmath>

namespace bubblebs {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779;
constexpr double kInvSqrt2 = 0.7071067811865475244;

struct CallInputs {
  double rate;
  double a;   // sigma * sqrt(tau)
  double d1;
  double d2;
};

CallInputs make_inputs(double spot, double tau, const MarketParams& mp,
                       RateBasis basis) {
  CallInputs in;
  in.rate = rate_for(mp, basis);
  in.a = mp.sigma * std::sqrt(tau);
  in.d1 = (std::log(spot / mp.strike) +
           (in.rate + 0.5 * mp.sigma * mp.sigma) * tau) /
          in.a;
  in.d2 = in.d1 - in.a;
  return in;
}

void check_spot_tau(double spot, double tau) {
  if (!(spot > 0.0) || !std::isfinite(spot))
    throw Error(Errc::InvalidArgument, "spot must be positive and finite");
  if (!(tau >= 0.0) || !std::isfinite(tau))
    throw Error(Errc::InvalidArgument, "tau must be >= 0 and finite");
}

void check_order_cap(int order, int max_order) {
  if (order < 0) throw Error(Errc::InvalidArgument, "order must be >= 0");
  int cap = std::min(max_order, kHardMaxOrder);
  if (order > cap)
    throw Error(Errc::OrderTooHigh,
                "derivative order " + std::to_string(order) +
                    " exceeds cap " + std::to_string(cap));
}

double price_from_inputs(double spot, double tau, const MarketParams& mp,
                         const CallInputs& in) {
  return spot * norm_cdf(in.d1) -
         mp.strike * std::exp(-in.rate * tau) * norm_cdf(in.d2);
}

// Coefficients (ascending powers of d1) of the polynomial factor p_n with
//   d^n C / dS^n = phi(d1) * p_n(d1) / (S * a)^(n-1) * S^(n-2)...
// normalized so that d^n C/dS^n = Gamma * p_n(d1) / (S a)^(n-2), p_2 = 1.
// Differentiating once more gives the recursion
//   p_{n+1}(u) = p_n'(u) - (u + (n-1) a) * p_n(u).
std::vector<std::vector<double>> gamma_kernel_polys(int n_max, double a) {
  std::vector<std::vector<double>> polys;
  if (n_max < 2) return polys;
  polys.push_back({1.0});  // p_2
  for (int n = 2; n < n_max; ++n) {
    const std::vector<double>& p = polys.back();
    std::vector<double> next(p.size() + 1, 0.0);
    for (std::size_t i = 0; i + 1 < p.size(); ++i)
      next[i] += static_cast<double>(i + 1) * p[i + 1];  // p'
    for (std::size_t i = 0; i < p.size(); ++i) {
      next[i + 1] -= p[i];                                   // -u * p
      next[i] -= (static_cast<double>(n) - 1.0) * a * p[i];  // -(n-1) a * p
    }
    polys.push_back(std::move(next));
  }
  return polys;
}

double eval_poly(const std::vector<double>& coeffs, double u) {
  double acc = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * u + coeffs[i];
  return acc;
}

}  // namespace

double norm_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double norm_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double call_price(double spot, double tau, const MarketParams& mp,
                  RateBasis basis) {
  validate(mp);
  check_spot_tau(spot, tau);
  if (tau == 0.0) return std::max(spot - mp.strike, 0.0);
  CallInputs in = make_inputs(spot, tau, mp, basis);
  return price_from_inputs(spot, tau, mp, in);
}

double call_s_derivative(int order, double spot, double tau,
                         const MarketParams& mp, RateBasis basis,
                         int max_order) {
  check_order_cap(order, max_order);
  if (order == 0) return call_price(spot, tau, mp, basis);
  validate(mp);
  check_spot_tau(spot, tau);
  if (tau == 0.0)
    throw Error(Errc::InvalidArgument,
                "derivatives of order >= 1 need tau > 0");
  CallInputs in = make_inputs(spot, tau, mp, basis);
  if (order == 1) return norm_cdf(in.d1);
  double gamma = norm_pdf(in.d1) / (spot * in.a);
  if (order == 2) return gamma;
  auto polys = gamma_kernel_polys(order, in.a);
  // same incremental scaling as greek_vector, so the two paths agree bitwise
  double scale = 1.0;
  for (int n = 3; n <= order; ++n) scale /= spot * in.a;
  return gamma * eval_poly(polys[order - 2], in.d1) * scale;
}

GreekVector greek_vector(int order, double spot, double tau,
                         const MarketParams& mp, RateBasis basis,
                         int max_order) {
  check_order_cap(order, max_order);
  validate(mp);
  check_spot_tau(spot, tau);
  GreekVector gv;
  gv.order = order;
  gv.rate_used = basis;
  gv.values.resize(order + 1);
  if (tau == 0.0) {
    if (order >= 1)
      throw Error(Errc::InvalidArgument,
                  "derivatives of order >= 1 need tau > 0");
    gv.values[0] = std::max(spot - mp.strike, 0.0);
    return gv;
  }
  CallInputs in = make_inputs(spot, tau, mp, basis);
  gv.values[0] = price_from_inputs(spot, tau, mp, in);
  if (order >= 1) gv.values[1] = norm_cdf(in.d1);
  if (order >= 2) {
    double gamma = norm_pdf(in.d1) / (spot * in.a);
    gv.values[2] = gamma;
    auto polys = gamma_kernel_polys(order, in.a);
    double scale = 1.0;
    for (int n = 3; n <= order; ++n) {
      scale /= spot * in.a;
      gv.values[n] = gamma * eval_poly(polys[n - 2], in.d1) * scale;
    }
  }
  return gv;
}

}  // namespace bubblebs

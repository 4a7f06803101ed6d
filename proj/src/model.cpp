#include "bubblebs/model.hpp"

#include <cmath>

namespace bubblebs {

const char* to_string(Errc code) {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::SingularBubble: return "SingularBubble";
    case Errc::ZeroBubble: return "ZeroBubble";
    case Errc::OutOfHorizon: return "OutOfHorizon";
    case Errc::OrderTooHigh: return "OrderTooHigh";
    case Errc::Overflow: return "Overflow";
    case Errc::RangeError: return "RangeError";
    case Errc::GridTooCoarse: return "GridTooCoarse";
    case Errc::StiffRegime: return "StiffRegime";
    case Errc::OutOfGrid: return "OutOfGrid";
  }
  return "UnknownError";
}

const char* to_string(Regime regime) {
  switch (regime) {
    case Regime::PreBubble: return "PreBubble";
    case Regime::InBubble: return "InBubble";
    case Regime::PostBubble: return "PostBubble";
  }
  return "UnknownRegime";
}

void validate(const MarketParams& mp) {
  if (!std::isfinite(mp.r)) throw Error(Errc::InvalidArgument, "r must be finite");
  if (!std::isfinite(mp.alpha)) throw Error(Errc::InvalidArgument, "alpha must be finite");
  if (!(mp.sigma > 0.0) || !std::isfinite(mp.sigma))
    throw Error(Errc::InvalidArgument, "sigma must be positive and finite");
  if (!(mp.strike > 0.0) || !std::isfinite(mp.strike))
    throw Error(Errc::InvalidArgument, "strike must be positive and finite");
  if (!(mp.maturity > 0.0) || !std::isfinite(mp.maturity))
    throw Error(Errc::InvalidArgument, "maturity must be positive and finite");
}

void validate(const SquareBubble& bubble, const MarketParams& mp) {
  if (!std::isfinite(bubble.f0))
    throw Error(Errc::InvalidArgument, "f0 must be finite");
  if (!(bubble.tau1 >= 0.0))
    throw Error(Errc::InvalidArgument, "tau1 must be >= 0");
  if (!(bubble.tau2 >= bubble.tau1))
    throw Error(Errc::InvalidArgument, "tau2 must be >= tau1");
  if (!(bubble.tau2 <= mp.maturity))
    throw Error(Errc::InvalidArgument, "tau2 must be <= maturity");
}

namespace {

void check_pole(double f0, double sigma) {
  if (std::fabs(f0 - sigma) < kSingularBubbleEps * sigma)
    throw Error(Errc::SingularBubble,
                "bubble amplitude within guard band of the pole f0 = sigma");
}

}  // namespace

double potential_v0(const MarketParams& mp, double f0) {
  check_pole(f0, mp.sigma);
  return (mp.r - mp.alpha) * f0 / (mp.sigma - f0);
}

double potential_v0_star(const MarketParams& mp, double f0) {
  check_pole(f0, mp.sigma);
  return (mp.r - mp.alpha) * mp.sigma / (mp.sigma - f0);
}

Potential potential(const MarketParams& mp, const SquareBubble& bubble) {
  Potential p;
  p.v0 = potential_v0(mp, bubble.f0);
  p.v0_star = potential_v0_star(mp, bubble.f0);
  p.h = bubble.f0 / mp.sigma;
  p.h_star = mp.sigma / bubble.f0;  // +inf for f0 = 0
  return p;
}

Regime classify_regime(double tau, const SquareBubble& bubble, double maturity) {
  if (!(tau >= 0.0) || !(tau <= maturity))
    throw Error(Errc::OutOfHorizon, "tau outside [0, maturity]");
  if (tau < bubble.tau1) return Regime::PreBubble;
  if (tau < bubble.tau2) return Regime::InBubble;
  return Regime::PostBubble;
}

DualParams dual_params(const MarketParams& mp, const SquareBubble& bubble) {
  validate(mp);
  validate(bubble, mp);
  if (bubble.f0 == 0.0)
    throw Error(Errc::ZeroBubble, "dual ratio sigma/f0 is infinite for f0 = 0");
  DualParams dual;
  dual.market = mp;
  dual.market.r = mp.alpha;
  dual.market.alpha = mp.r;
  dual.h_star = mp.sigma / bubble.f0;
  dual.bubble = bubble;
  dual.bubble.f0 = dual.h_star * mp.sigma;  // amplitude of the dual bubble
  return dual;
}

double rate_for(const MarketParams& mp, RateBasis basis) {
  return basis == RateBasis::Interest ? mp.r : mp.alpha;
}

}  // namespace bubblebs

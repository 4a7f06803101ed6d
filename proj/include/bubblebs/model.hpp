#pragma once

#include <stdexcept>
#include <string>

namespace bubblebs {

// ============================================================================
// Error model
// ============================================================================

enum class Errc {
  InvalidArgument,
  SingularBubble,  // bubble amplitude at the volatility pole f0 = sigma
  ZeroBubble,      // dual description undefined for f0 = 0
  OutOfHorizon,    // tau outside [0, T]
  OrderTooHigh,    // derivative / series order beyond the configured cap
  Overflow,        // exact integer capacity exceeded
  RangeError,      // argument outside the supported numeric range
  GridTooCoarse,
  StiffRegime,     // |v0| * dtau too large for a trustworthy march
  OutOfGrid,
};

const char* to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// ============================================================================
// Domain types
// ============================================================================

/// Fixed economic environment. Rates are continuously compounded per unit
/// time; `maturity` is the horizon T of the contract.
struct MarketParams {
  double r = 0.0;         // risk-free interest rate
  double alpha = 0.0;     // mean return of the underlying
  double sigma = 0.0;     // volatility, > 0
  double strike = 0.0;    // > 0
  double maturity = 0.0;  // T, > 0
};

/// Piecewise-constant bubble: amplitude f0 on the time-to-maturity window
/// [tau1, tau2), zero elsewhere. All times are time-to-maturity.
struct SquareBubble {
  double f0 = 0.0;
  double tau1 = 0.0;
  double tau2 = 0.0;
};

/// Position of a time-to-maturity point relative to the bubble window.
/// Windows are left-closed: tau == tau1 is InBubble, tau == tau2 is
/// PostBubble, which keeps the piecewise price continuous.
enum class Regime { PreBubble, InBubble, PostBubble };

/// Which rate parameterizes a closed-form quantity: the interest rate r or
/// the underlying drift alpha (the "starred" family).
enum class RateBasis { Interest, Drift };

/// Potential levels of both parametrizations and the dimensionless bubble
/// ratios. Satisfies r + v0 == alpha + v0_star.
struct Potential {
  double v0 = 0.0;       // (r - alpha) * f0 / (sigma - f0)
  double v0_star = 0.0;  // (r - alpha) * sigma / (sigma - f0)
  double h = 0.0;        // f0 / sigma
  double h_star = 0.0;   // sigma / f0
};

/// r <-> alpha swapped market plus the bubble re-expressed through
/// h* = sigma / f0.
struct DualParams {
  MarketParams market;
  SquareBubble bubble;
  double h_star = 0.0;
};

// Relative width of the guard band around the pole f0 = sigma.
inline constexpr double kSingularBubbleEps = 1e-9;

// ============================================================================
// Operations
// ============================================================================

void validate(const MarketParams& mp);
void validate(const SquareBubble& bubble, const MarketParams& mp);

/// Low-energy potential level (r - alpha) * f0 / (sigma - f0).
/// Throws SingularBubble within kSingularBubbleEps of the pole.
double potential_v0(const MarketParams& mp, double f0);

/// High-energy dual level (r - alpha) * sigma / (sigma - f0);
/// equals (r - alpha) + potential_v0 identically.
double potential_v0_star(const MarketParams& mp, double f0);

Potential potential(const MarketParams& mp, const SquareBubble& bubble);

Regime classify_regime(double tau, const SquareBubble& bubble, double maturity);

/// Swap r and alpha and re-express the bubble through its dual ratio.
/// Involutive on the rates; requires f0 > 0.
DualParams dual_params(const MarketParams& mp, const SquareBubble& bubble);

double rate_for(const MarketParams& mp, RateBasis basis);

const char* to_string(Regime regime);

}  // namespace bubblebs

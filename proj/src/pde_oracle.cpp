#include "bubblebs/pde_oracle.hpp"

#include <algorithm>
#include <cmath>

namespace bubblebs {

namespace {

struct Segment {
  double t_begin = 0.0;
  double t_end = 0.0;
  double potential = 0.0;  // constant v on this stretch of tau
  int steps = 0;

  double length() const { return t_end - t_begin; }
};

void validate_grid(const GridConfig& grid, const MarketParams& mp) {
  if (!(grid.s_min >= 0.0))
    throw Error(Errc::InvalidArgument, "s_min must be >= 0");
  if (!(grid.s_min < 0.5 * mp.strike))
    throw Error(Errc::InvalidArgument,
                "s_min must sit well below the strike (value-0 boundary)");
  if (!(grid.s_max > 3.0 * mp.strike))
    throw Error(Errc::InvalidArgument, "s_max must exceed 3 * strike");
  if (grid.n_s < 50 || grid.n_tau < 50)
    throw Error(Errc::GridTooCoarse, "need at least 50 nodes in S and tau");
  if (!(grid.theta >= 0.0 && grid.theta <= 1.0))
    throw Error(Errc::InvalidArgument, "theta must lie in [0, 1]");
  if (grid.rannacher_steps < 0)
    throw Error(Errc::InvalidArgument, "rannacher_steps must be >= 0");
  if (grid.log_space && !(grid.s_min > 0.0))
    throw Error(Errc::InvalidArgument, "log-spaced grid needs s_min > 0");
}

std::vector<double> build_s_nodes(const GridConfig& grid) {
  std::vector<double> s(grid.n_s);
  if (grid.log_space) {
    double ratio = std::log(grid.s_max / grid.s_min) / (grid.n_s - 1);
    for (int i = 0; i < grid.n_s; ++i)
      s[i] = grid.s_min * std::exp(ratio * i);
  } else {
    double ds = (grid.s_max - grid.s_min) / (grid.n_s - 1);
    for (int i = 0; i < grid.n_s; ++i) s[i] = grid.s_min + ds * i;
  }
  s.back() = grid.s_max;
  return s;
}

// Split [0, T] at the bubble switches so tau1 and tau2 land exactly on step
// boundaries; per-segment step counts are rounded up from the global target.
std::vector<Segment> build_segments(const MarketParams& mp,
                                    const SquareBubble& bubble,
                                    const GridConfig& grid, double pot_in,
                                    double pot_out) {
  const double T = mp.maturity;
  std::vector<Segment> segments;
  auto push = [&](double from, double to, double pot) {
    if (to - from <= 0.0) return;
    Segment seg;
    seg.t_begin = from;
    seg.t_end = to;
    seg.potential = pot;
    seg.steps = static_cast<int>(
        std::ceil(static_cast<double>(grid.n_tau) * seg.length() / T));
    seg.steps = std::max(seg.steps, 1);
    segments.push_back(seg);
  };
  push(0.0, bubble.tau1, pot_out);
  push(bubble.tau1, bubble.tau2, pot_in);
  push(bubble.tau2, T, pot_out);
  return segments;
}

// Thomas solve; sub/diag/super and rhs are overwritten.
void solve_tridiagonal(std::vector<double>& sub, std::vector<double>& diag,
                       std::vector<double>& super, std::vector<double>& rhs,
                       std::vector<double>& out) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    double m = sub[i] / diag[i - 1];
    diag[i] -= m * super[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  out[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;)
    out[i] = (rhs[i] - super[i] * out[i + 1]) / diag[i];
}

}  // namespace

PdeGrid::PdeGrid(std::vector<double> s_nodes, std::vector<double> tau_nodes,
                 std::vector<double> surface)
    : s_(std::move(s_nodes)), tau_(std::move(tau_nodes)),
      surface_(std::move(surface)) {}

double PdeGrid::value(int i_tau, int i_s) const {
  if (i_tau < 0 || i_tau >= static_cast<int>(tau_.size()) || i_s < 0 ||
      i_s >= static_cast<int>(s_.size()))
    throw Error(Errc::OutOfGrid, "node index outside grid");
  return surface_[static_cast<std::size_t>(i_tau) * s_.size() + i_s];
}

double PdeGrid::sample(double spot, double tau) const {
  if (!(spot >= s_.front() && spot <= s_.back()) ||
      !(tau >= tau_.front() && tau <= tau_.back()))
    throw Error(Errc::OutOfGrid, "(S, tau) outside grid bounds");
  auto locate = [](const std::vector<double>& nodes, double v) {
    auto it = std::upper_bound(nodes.begin(), nodes.end(), v);
    std::size_t hi = std::min<std::size_t>(it - nodes.begin(), nodes.size() - 1);
    return std::max<std::size_t>(hi, 1) - 1;
  };
  std::size_t i = locate(s_, spot);
  std::size_t k = locate(tau_, tau);
  double ws = (spot - s_[i]) / (s_[i + 1] - s_[i]);
  double wt = (tau - tau_[k]) / (tau_[k + 1] - tau_[k]);
  double lo = (1.0 - ws) * value(k, i) + ws * value(k, i + 1);
  double hi = (1.0 - ws) * value(k + 1, i) + ws * value(k + 1, i + 1);
  return (1.0 - wt) * lo + wt * hi;
}

double sample(const PdeGrid& grid, double spot, double tau) {
  return grid.sample(spot, tau);
}

double richardson_error_estimate(double fine, double coarse) {
  return std::fabs(fine - coarse) / 3.0;
}

PdeGrid solve_pde(const MarketParams& mp, const SquareBubble& bubble,
                  const GridConfig& grid) {
  validate(mp);
  validate(bubble, mp);
  validate_grid(grid, mp);

  double base_rate, pot_in, pot_out;
  if (grid.form == PdeForm::LowEnergy) {
    base_rate = mp.r;
    pot_in = potential_v0(mp, bubble.f0);
    pot_out = 0.0;
  } else {
    base_rate = mp.alpha;
    pot_in = potential_v0_star(mp, bubble.f0);
    pot_out = mp.r - mp.alpha;
  }

  std::vector<Segment> segments =
      build_segments(mp, bubble, grid, pot_in, pot_out);
  for (const Segment& seg : segments) {
    double dt = seg.length() / seg.steps;
    if (std::fabs(seg.potential) * dt > 0.5)
      throw Error(Errc::StiffRegime,
                  "|v| * dtau > 0.5; refine the grid or move off the pole");
  }

  const std::vector<double> s = build_s_nodes(grid);
  const int n_s = grid.n_s;

  int total_steps = 0;
  for (const Segment& seg : segments) total_steps += seg.steps;

  std::vector<double> tau_nodes;
  tau_nodes.reserve(total_steps + 1);
  tau_nodes.push_back(0.0);

  std::vector<double> surface(
      static_cast<std::size_t>(total_steps + 1) * n_s);
  for (int i = 0; i < n_s; ++i)
    surface[i] = std::max(s[i] - mp.strike, 0.0);

  // Per-node first/second difference weights (general non-uniform stencil).
  const int n_int = n_s - 2;
  std::vector<double> lo1(n_int), mid1(n_int), hi1(n_int);
  std::vector<double> lo2(n_int), mid2(n_int), hi2(n_int);
  for (int i = 1; i <= n_int; ++i) {
    double hm = s[i] - s[i - 1];
    double hp = s[i + 1] - s[i];
    double denom = hm * hp * (hm + hp);
    lo1[i - 1] = -hp * hp / denom;
    hi1[i - 1] = hm * hm / denom;
    mid1[i - 1] = (hp * hp - hm * hm) / denom;
    lo2[i - 1] = 2.0 * hp / denom;
    hi2[i - 1] = 2.0 * hm / denom;
    mid2[i - 1] = -2.0 * (hm + hp) / denom;
  }

  std::vector<double> prev(s.size()), next(s.size());
  std::vector<double> sub(n_int), diag(n_int), super(n_int), rhs(n_int),
      sol(n_int);
  std::copy(surface.begin(), surface.begin() + n_s, prev.begin());

  int global_step = 0;
  std::size_t row = 1;
  for (const Segment& seg : segments) {
    const double dt = seg.length() / seg.steps;
    const double c = base_rate + seg.potential;  // coefficient on (S dS - I)
    for (int step = 0; step < seg.steps; ++step, ++global_step, ++row) {
      const double theta =
          global_step < grid.rannacher_steps ? 1.0 : grid.theta;

      // Row i of L: a*d2 + b*d1 - c*I with a = sigma^2 S^2 / 2, b = c S.
      for (int i = 1; i <= n_int; ++i) {
        double a = 0.5 * mp.sigma * mp.sigma * s[i] * s[i];
        double b = c * s[i];
        double L_lo = a * lo2[i - 1] + b * lo1[i - 1];
        double L_mid = a * mid2[i - 1] + b * mid1[i - 1] - c;
        double L_hi = a * hi2[i - 1] + b * hi1[i - 1];

        double expl = prev[i] + (1.0 - theta) * dt *
                                    (L_lo * prev[i - 1] + L_mid * prev[i] +
                                     L_hi * prev[i + 1]);
        sub[i - 1] = -theta * dt * L_lo;
        diag[i - 1] = 1.0 - theta * dt * L_mid;
        super[i - 1] = -theta * dt * L_hi;
        rhs[i - 1] = expl;
      }

      // Left boundary: value 0, already absent from row 0 of the system.
      // Right boundary: zero curvature; eliminate the ghost value
      // u_N = u_{N-1} + (u_{N-1} - u_{N-2}) * h_N / h_{N-1}.
      {
        double g = (s[n_s - 1] - s[n_s - 2]) / (s[n_s - 2] - s[n_s - 3]);
        diag[n_int - 1] += super[n_int - 1] * (1.0 + g);
        sub[n_int - 1] -= super[n_int - 1] * g;
        super[n_int - 1] = 0.0;
      }

      solve_tridiagonal(sub, diag, super, rhs, sol);
      next[0] = 0.0;
      for (int i = 1; i <= n_int; ++i) next[i] = sol[i - 1];
      {
        double g = (s[n_s - 1] - s[n_s - 2]) / (s[n_s - 2] - s[n_s - 3]);
        next[n_s - 1] = next[n_s - 2] + g * (next[n_s - 2] - next[n_s - 3]);
      }

      double tau_here = step + 1 == seg.steps ? seg.t_end
                                              : seg.t_begin + dt * (step + 1);
      tau_nodes.push_back(tau_here);
      std::copy(next.begin(), next.end(), surface.begin() + row * n_s);
      prev.swap(next);
    }
  }

  return PdeGrid(std::vector<double>(s), std::move(tau_nodes),
                 std::move(surface));
}

}  // namespace bubblebs

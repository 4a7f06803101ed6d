#pragma once

#include <vector>

#include "bubblebs/model.hpp"

namespace bubblebs {

/// Which parametrization drives the march. Both describe the same equation
/// (r + v = alpha + v*), so the two surfaces agree node-wise up to rounding.
enum class PdeForm { LowEnergy, HighEnergy };

struct GridConfig {
  double s_min = 0.0;
  double s_max = 0.0;  // must exceed 3 * strike
  int n_s = 0;         // spatial nodes, >= 50
  int n_tau = 0;       // target number of time steps over [0, T], >= 50
  double theta = 0.5;  // implicit weight; 0.5 = Crank-Nicolson
  int rannacher_steps = 4;
  bool log_space = false;  // geometric spacing in S (needs s_min > 0)
  PdeForm form = PdeForm::LowEnergy;
};

/// Numerically solved option surface over (S, tau). Row 0 is the payoff.
class PdeGrid {
 public:
  PdeGrid(std::vector<double> s_nodes, std::vector<double> tau_nodes,
          std::vector<double> surface);

  const std::vector<double>& s_nodes() const { return s_; }
  const std::vector<double>& tau_nodes() const { return tau_; }

  double value(int i_tau, int i_s) const;

  /// Bilinear interpolation of the stored surface.
  double sample(double spot, double tau) const;

 private:
  std::vector<double> s_;
  std::vector<double> tau_;
  std::vector<double> surface_;  // surface_[i_tau * n_s + i_s]
};

/// March the payoff forward in tau with the theta-scheme, Rannacher
/// start-up, regime-aligned time steps, and a Thomas tridiagonal solve per
/// step. Boundary conditions: value 0 at s_min, zero curvature at s_max.
PdeGrid solve_pde(const MarketParams& mp, const SquareBubble& bubble,
                  const GridConfig& grid);

double sample(const PdeGrid& grid, double spot, double tau);

/// Error estimate for a second-order scheme from two resolutions.
double richardson_error_estimate(double fine, double coarse);

}  // namespace bubblebs

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "bubblebs/model.hpp"

namespace bubblebs {

using uint128 = unsigned __int128;

std::string to_decimal(uint128 value);

// ============================================================================
// Coefficient triangle for powers of the Euler operator K = S d/dS
// ============================================================================

/// Exact integer coefficients a(n,m) expanding K^n = sum_m a(n,m) S^m D^m,
/// 1 <= m <= n. Unit borders, Pascal-like recursion
/// a(n,m) = m * a(n-1,m) + a(n-1,m-1). Entries are 128-bit exact; building a
/// row that would not fit throws Overflow.
class CoeffTriangle {
 public:
  explicit CoeffTriangle(int n_max);

  int n_max() const { return n_max_; }
  uint128 at(int n, int m) const;
  const std::vector<uint128>& row(int n) const;

 private:
  int n_max_;
  std::vector<std::vector<uint128>> rows_;  // rows_[n-1] has n entries
};

// ============================================================================
// Resummation weights Q_j of exp(x K) = sum_j Q_j(x) S^j D^j
// ============================================================================

inline constexpr double kQFunctionMaxAbsX = 30.0;

/// Q_0 = 1, Q_1 = e^x - 1 (expm1, cancellation-safe), and for j >= 2 the
/// closed form (e^x - 1)^j / j!, which resums the defining series
/// sum_{m>=j} a(m,j) x^m / m!. Throws RangeError for |x| beyond the cap.
double q_function(int j, double x);

// ============================================================================
// Operator identities on monomials S^p
// ============================================================================

/// K^n S^p = p^n S^p, evaluated two ways: directly as p^n and through the
/// triangle expansion sum_j a(n,j) * p (p-1) ... (p-j+1). Both are exact
/// 128-bit integers and must agree.
struct KPowerResult {
  uint128 direct = 0;
  uint128 expanded = 0;
};

KPowerResult apply_K_power_to_monomial(int n, int p);

/// Coefficients of P^n over {I, S D, S^2 D^2, S^3 D^3} for n in {1, 2, 3};
/// index j holds the coefficient of S^j D^j (j = 0 is the identity).
std::array<int, 4> p_power_coeffs(int n);

// Eigen-multipliers of the generator pieces on S^p.
long long apply_T_to_monomial(long long p);  // S^2 D^2 -> p (p - 1)
long long apply_P_to_monomial(long long p);  // S D - I  -> p - 1
long long apply_K_to_monomial(long long p);  // S D      -> p

}  // namespace bubblebs

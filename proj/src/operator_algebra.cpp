#include "bubblebs/operator_algebra.hpp"

#include <cmath>

namespace bubblebs {

namespace {

uint128 checked_add(uint128 a, uint128 b) {
  uint128 out;
  if (__builtin_add_overflow(a, b, &out))
    throw Error(Errc::Overflow, "128-bit coefficient overflow");
  return out;
}

uint128 checked_mul(uint128 a, uint128 b) {
  uint128 out;
  if (__builtin_mul_overflow(a, b, &out))
    throw Error(Errc::Overflow, "128-bit coefficient overflow");
  return out;
}

// Falling factorial p (p-1) ... (p-j+1); zero once the chain crosses zero.
uint128 falling_factorial(int p, int j) {
  uint128 acc = 1;
  for (int k = 0; k < j; ++k) {
    int factor = p - k;
    if (factor <= 0) return 0;
    acc = checked_mul(acc, static_cast<uint128>(factor));
  }
  return acc;
}

}  // namespace

std::string to_decimal(uint128 value) {
  if (value == 0) return "0";
  std::string digits;
  while (value > 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  return {digits.rbegin(), digits.rend()};
}

CoeffTriangle::CoeffTriangle(int n_max) : n_max_(n_max) {
  if (n_max < 1)
    throw Error(Errc::InvalidArgument, "triangle order must be >= 1");
  rows_.reserve(n_max);
  rows_.push_back({1});
  for (int n = 2; n <= n_max; ++n) {
    const std::vector<uint128>& prev = rows_.back();
    std::vector<uint128> row(n);
    row[0] = 1;
    row[n - 1] = 1;
    for (int m = 2; m < n; ++m)
      row[m - 1] = checked_add(checked_mul(static_cast<uint128>(m), prev[m - 1]),
                               prev[m - 2]);
    rows_.push_back(std::move(row));
  }
}

uint128 CoeffTriangle::at(int n, int m) const {
  if (n < 1 || n > n_max_ || m < 1 || m > n)
    throw Error(Errc::InvalidArgument, "triangle index out of range");
  return rows_[n - 1][m - 1];
}

const std::vector<uint128>& CoeffTriangle::row(int n) const {
  if (n < 1 || n > n_max_)
    throw Error(Errc::InvalidArgument, "triangle row out of range");
  return rows_[n - 1];
}

double q_function(int j, double x) {
  if (j < 0) throw Error(Errc::InvalidArgument, "Q index must be >= 0");
  if (!(std::fabs(x) <= kQFunctionMaxAbsX))
    throw Error(Errc::RangeError, "Q argument outside configured |x| range");
  if (j == 0) return 1.0;
  double t = std::expm1(x);
  if (j == 1) return t;
  if (t == 0.0) return 0.0;
  // (e^x - 1)^j / j!, in log form once the direct power could overflow.
  if (j * std::log10(std::fabs(t)) < 280.0) {
    double acc = 1.0;
    for (int k = 1; k <= j; ++k) acc *= t / static_cast<double>(k);
    return acc;
  }
  double magnitude =
      std::exp(j * std::log(std::fabs(t)) - std::lgamma(j + 1.0));
  bool negative = t < 0.0 && (j % 2 == 1);
  return negative ? -magnitude : magnitude;
}

KPowerResult apply_K_power_to_monomial(int n, int p) {
  if (n < 0 || p < 0)
    throw Error(Errc::InvalidArgument, "power and exponent must be >= 0");
  KPowerResult result;
  result.direct = 1;
  for (int k = 0; k < n; ++k)
    result.direct = checked_mul(result.direct, static_cast<uint128>(p));
  if (n == 0) {
    result.expanded = 1;  // K^0 = I
    return result;
  }
  CoeffTriangle triangle(n);
  uint128 acc = falling_factorial(p, 1);  // the K term, coefficient 1
  for (int j = 2; j <= n; ++j)
    acc = checked_add(acc, checked_mul(triangle.at(n, j), falling_factorial(p, j)));
  result.expanded = acc;
  return result;
}

std::array<int, 4> p_power_coeffs(int n) {
  switch (n) {
    case 1: return {-1, 1, 0, 0};   // S D - I
    case 2: return {1, -1, 1, 0};   // S^2 D^2 - S D + I
    case 3: return {-1, 1, 0, 1};   // S^3 D^3 + S D - I
    default:
      throw Error(Errc::InvalidArgument, "P^n expansion tabulated for n <= 3");
  }
}

long long apply_T_to_monomial(long long p) { return p * (p - 1); }
long long apply_P_to_monomial(long long p) { return p - 1; }
long long apply_K_to_monomial(long long p) { return p; }

}  // namespace bubblebs

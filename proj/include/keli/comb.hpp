#pragma once

// Exact combinatorial layer: Stirling numbers of the first kind, the
// interpolation-node product omega_k, the closed-form inverse of the
// triangular interpolation system, and the integer coefficient rows chi_k
// that turn the double binomial sum for beta_{nk} into an odd polynomial
// in n. Everything here is integer or rational arithmetic; no rounding.

#include "keli/mp.hpp"

#include <vector>

namespace keli {

// Signed Stirling numbers of the first kind. rows[k][i] = S_k^{(i)},
// 0 <= i <= k, built from S_{k+1}^{(i)} = S_k^{(i-1)} - k S_k^{(i)}.
struct StirlingTriangle {
  int k_max = 0;
  std::vector<std::vector<BigInt>> rows;

  const BigInt& at(int k, int i) const;
};

StirlingTriangle stirling_triangle(int k_max);

// omega_k(s) = prod_{i=1..k} (s - 1/i)(1 - s - 1/i), the node product that
// vanishes at the first k interpolation nodes and their reflections.
BigRational omega_eval(int k, const BigRational& s);
BigReal omega_eval(int k, const BigReal& s);

// Entry (k, j) of the exact inverse of the interpolation system, so that
// alpha_k = sum_{j<=k} c_coeff(k,j) f(j/(j+1)). Canonical rational.
BigRational c_coeff(int k, int j);

// The lower-triangular system itself, A[m-1][k-1] = (-1)^k omega_k(m/(m+1)),
// and its exact inverse by forward substitution. The inverse must equal the
// closed form entry for entry; tests and the acceptance gate assert this.
std::vector<std::vector<BigRational>> omega_system_matrix(int k_max);
std::vector<std::vector<BigRational>> omega_system_inverse(int k_max);

// Row k of the chi table: chi[t] = chi_{k, 2t+1}, t = 0..k-1, defined by
//   sum_q chi_{kq} x^q = sum_d T_d W(x + d)
// with W(y) = y prod_{u=1..k-1} (y^2 - u^2) and T_d the autocorrelation of
// the unsigned Stirling row. Only odd powers survive; the top coefficient
// satisfies chi_{k,2k-1} = (k!)^2 and the row is refused if it does not.
struct ChiRow {
  int k = 0;
  std::vector<BigInt> chi;

  const BigInt& at_q(int q) const;
};

// Fast route: autocorrelation + moments, O(k^2) big-integer products.
ChiRow chi_row(int k, const StirlingTriangle& tri);
// Reference route: expand W(x + (i-j)) binomially for every Stirling pair
// (i, j). Identical output, quadratic in k per pair; for cross-checks.
ChiRow chi_row_reference(int k, const StirlingTriangle& tri);

// beta_{nk} = n/((k!)^2 (2k-1)!) sum_t chi_{k,2t+1} n^{2t+1} as an exact
// polynomial: coeff[t] multiplies n^{2t+2}.
struct BetaPolynomial {
  int k = 0;
  std::vector<BigRational> coeff;
};

BetaPolynomial beta_poly(int k, const ChiRow& chi);
BigRational beta_eval(const BetaPolynomial& bp, long n);

// Direct double binomial sum
//   beta_{nk} = n/(k!)^2 sum_{i,j} |S_k^{(i)}| |S_k^{(j)}| C(n+k+i-j-1, 2k-1),
// the definition beta_poly must reproduce for every integer n.
BigRational beta_direct(long n, int k, const StirlingTriangle& tri);

}  // namespace keli

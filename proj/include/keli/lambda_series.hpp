#pragma once

// Core series machinery: solving the triangular interpolation system for the
// alpha coefficients, turning them into the even power series
// lambda(s) = sum_q nu_{2q} s^{2q}, and evaluating the entire function and
// its derivative anywhere in the plane through two independent routes:
//
//   polynomial route  lambda(s) = sum_k beta_k(s) alpha_k
//   series route      lambda(s) = sum_q nu_{2q} s^{2q}
//
// plus closed-form, contour-integral, and zero-sum cross-checks that do not
// depend on the alpha pipeline at all.

#include "keli/comb.hpp"
#include "keli/mp.hpp"
#include "keli/nodes.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>

namespace keli {

// Contour-sampling result failed its sample-doubling stability check.
struct AliasingError : Error {
  using Error::Error;
};
// Phase unwrapping along the contour saw a jump too large to repair.
struct UnwrapError : Error {
  using Error::Error;
};

struct AlphaSeries {
  std::vector<BigReal> a;          // a[k-1] = alpha_k
  std::vector<int> significance;   // certified digits, monotone nonincreasing
  int source_digits = 0;

  int k_max() const { return static_cast<int>(a.size()); }
};

// Solves alpha_k = sum_j c(k,j) f(j/(j+1)) with exact inverse rows.
/// Certification: a parallel solve with inputs rounded to (digits - 50)
// counts agreement digits per coefficient; the counts are monotonized
// downward, trailing entries certifying <= 0 digits are dropped, and a
// first coefficient under 10 digits raises PrecisionError.
AlphaSeries solve_alphas(const NodeValueTable& table, int k_max);

// F_m(s) = sum_{k<=m} (-1)^k alpha_k omega_k(s); reproduces the node values
// f(j/(j+1)) for j <= m by construction.
BigReal interpolant_eval(const AlphaSeries& alphas, int m, const BigReal& s);

struct NuSeries {
  std::vector<BigReal> nu;  // nu[t] = nu_{2(t+1)}
  std::vector<std::string> warnings;

  int q_max() const { return 2 * static_cast<int>(nu.size()); }
  // value of nu_m for even m >= 2
  const BigReal& at(int m) const;
};

// nu_{2q} = sum_k chi_{k,2q-1} alpha_k / ((k!)^2 (2k-1)!), summed over
// ascending k. A warning is recorded when the last retained term is still
// large relative to the partial sum (the alpha supply ended too early).
NuSeries nu_coeffs(const AlphaSeries& alphas, int q_max);

struct ZeroDeviation {
  long index = -1;  // 1-based position in the ordinate list; -1 disables
  double delta = 0.0;
};

// Partial zero-sum for lambda_n over conjugate pairs 1/2 +- i gamma_j:
// each on-line pair contributes 2 - 2 cos(n theta_j) with
// theta_j = arg(1 - 1/rho_j). With a deviation the selected pair moves to
// Re = 1/2 + delta and contributes together with its mirror pair
// 2 (2 - Re w1^n - Re w2^n), w1 = 1 - 1/rho, w2 = 1 - 1/(1 - rho).
BigReal lambda_sum_zeros(long n, const std::vector<BigReal>& gammas,
                         const ZeroDeviation& dev, const PrecisionContext& ctx);

// lambda_1 = (2 + gamma - ln 4 pi)/2 with the Euler constant cross-checked
// between two independent methods.
BigReal lambda1_closed(const PrecisionContext& ctx);

// Contour-integral oracle: lambda_n = n c_n where c_n are Taylor
// coefficients of f(1/(1-z)) at 0, sampled on |z| = radius. Requires
// radius <= 0.6 and samples a power of two >= 256. Phases are unwrapped
// along the contour (UnwrapError on an unrepairable jump or nonzero
// winding); every run is repeated with doubled samples and must be stable
// (AliasingError otherwise).
std::vector<BigReal> lambda_cauchy_oracle(long n_max, const BigReal& radius,
                                          long samples,
                                          const PrecisionContext& ctx,
                                          int threads = 1);

class LambdaEvaluator {
public:
  // Builds chi rows, beta polynomials, and the nu series for the given
  // alpha supply. target_digits governs output precision and term
  // truncation; q_max bounds the stored even powers (clamped to 2 k_max).
  LambdaEvaluator(AlphaSeries alphas, int q_max, int target_digits);

  const AlphaSeries& alphas() const { return alphas_; }
  const NuSeries& nus() const { return nus_; }
  int target_digits() const { return target_digits_; }

  // Polynomial route; even in s by construction (only s^2 enters) and
  // real on both the real and imaginary axes. Intermediate precision is
  // auto-elevated until it covers the largest term plus the target.
  BigComplex lambda_at(const BigComplex& s) const;
  BigReal lambda_at(const BigReal& s) const;

  // Series route, the cross-check; same elevation policy.
  BigComplex lambda_series_at(const BigComplex& s) const;
  BigReal lambda_series_at(const BigReal& s) const;

  // d lambda / ds = sum_q 2q nu_{2q} s^{2q-1}.
  BigComplex lambda_prime(const BigComplex& s) const;

  // lambda_n at integer n through exact beta_{nk} rationals.
  BigReal lambda_int(long n) const;

private:
  struct RealCoeffs;
  std::shared_ptr<const RealCoeffs> coeffs_at(mpfr_prec_t prec) const;

  AlphaSeries alphas_;
  std::vector<BetaPolynomial> betas_;
  NuSeries nus_;
  int target_digits_ = 0;

  mutable std::mutex cache_mu_;
  mutable std::map<mpfr_prec_t, std::shared_ptr<const RealCoeffs>> cache_;
};

}  // namespace keli

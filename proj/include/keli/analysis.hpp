#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "keli/mp.hpp"
#include "keli/zeros.hpp"

namespace keli {

// Ordinates of zeta zeros on the critical line, read from a text file with
// one decimal value per line ('#' starts a comment). The list must be
// ascending and the first ordinate must exceed 14 (the true first zero sits
// at 14.13...; anything smaller means the file is not what it claims to be).
// These are consumed as external data, never computed here.
std::vector<BigReal> load_zeta_zeros(const std::string& path);

enum class DiffNormalization { none, pow2 };

// Result of an order-m forward difference. values.size() equals the input
// length minus m. With DiffNormalization::pow2 every entry carries an exact
// factor 2^-m so that orders of different m stay on comparable scales.
struct DiffSeries {
  int order = 0;
  DiffNormalization normalization = DiffNormalization::none;
  std::vector<BigComplex> values;
};

// (Delta^m x)_i = sum_{r=0..m} (-1)^r C(m,r) x_{i+m-r}, binomials exact.
// Internally each entry is accumulated at (input precision + m + 64) bits so
// that a degree-(m-1) polynomial sequence with exactly representable entries
// is annihilated to exact zeros rather than to rounding dust.
// Requires seq.size() > order and order >= 1.
DiffSeries finite_difference(const std::vector<BigComplex>& seq, int order,
                             DiffNormalization normalization);

// Every stride-th element of seq starting from the first. stride >= 1.
// Differencing "every second zero" is differencing stride_sequence(seq, 2).
std::vector<BigComplex> stride_sequence(const std::vector<BigComplex>& seq,
                                        int stride);

// Zero table entries as complex points Re + i Im, in table order.
std::vector<BigComplex> table_to_sequence(const ZeroTable& table);

// Root-mean-square modulus of the entries; zero for an empty series.
BigReal diff_norm(const DiffSeries& diff);

// Adds to each entry an independent uniform sample from the closed disk of
// the given radius. Driven by a seeded mt19937_64, so equal seeds reproduce
// equal output bit for bit; amplitude 0 returns the input unchanged.
std::vector<BigComplex> perturb_zeros(const std::vector<BigComplex>& seq,
                                      const BigReal& amplitude,
                                      unsigned long rng_seed);

// Least-squares slope c minimizing sum (Im sigma_k - c ln Re sigma_k)^2 over
// the entries with k >= k_min, i.e. c = sum(Im ln Re) / sum((ln Re)^2).
// Throws InsufficientDataError when fewer than 50 entries qualify.
BigReal fit_log_factor(const ZeroTable& table, long k_min);

// Rows (Re sigma_k, exp(Im sigma_k / 16)). Under the empirical growth law
// Im = 16 ln Re the second column reproduces the first, so the scatter of
// column2/column1 around 1 is the visual test of the law.
std::vector<std::pair<BigReal, BigReal>> rescale_for_plot(
    const ZeroTable& table);

// Smallest n in [1, n_max] with a negative partial zero-sum lambda_n, or
// nullopt if none occurs. Terms match lambda_sum_zeros exactly: deviate_index
// (1-based, -1 disables) moves that ordinate's pair to Re = 1/2 + delta.
// With delta = 0 every term is nonnegative, so the scan returns nullopt.
// Requires 0 <= delta < 1/2 and deviate_index <= gammas.size().
// The scan is split into fixed blocks of 1024 values of n; each block starts
// from exact powers, so the result does not depend on the thread count.
std::optional<long> rh_first_negative(const std::vector<BigReal>& gammas,
                                      long deviate_index, double delta,
                                      long n_max, int threads = 1);

}  // namespace keli

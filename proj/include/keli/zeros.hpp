#pragma once

// Complex zeros sigma_k of the entire function: seeding from the empirical
// spacing law, Newton refinement against a LambdaEvaluator, tabulation, the
// partial Weierstrass-style product over grouped quartic factors, and
// comparison against the shipped reference table.
//
// Only the canonical quadrant (re > 0, im >= 0) is stored; each entry stands
// for the four zeros +-re +- i*im.

#include "keli/lambda_series.hpp"
#include "keli/mp.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace keli {

struct ComplexZero {
  long k = 0;           // 1-based position in ascending re order
  BigReal re, im;       // canonical representative
  BigReal residual;     // |lambda(sigma)| at the refining evaluator
  int newton_steps = 0;
  // Set when |lambda'| < 1e-8 at the converged point; only the double zero
  // at the origin is expected to trip this.
  bool derivative_underflow = false;

  ComplexZero() : re(64), im(64), residual(64) {}
};

enum class Provenance { computed, fixture };

struct ZeroTable {
  std::vector<ComplexZero> entries;  // ascending re
  Provenance provenance = Provenance::computed;

  std::size_t count() const { return entries.size(); }
};

// Checks canonical-quadrant signs, strictly ascending k and re, and spacing
// above the duplicate tolerance (1e-9 relative). Throws Error on violation.
void validate_zero_table(const ZeroTable& table);

// Seed for the k-th zero. With two or more prior entries, a least-squares
// line through (k, re) extrapolates; with one, the mean-spacing slope 88.7
// continues from it; with none, re = 88.7 k - 12. Im = 16 ln re always.
BigComplex seed_zero(long k, const ZeroTable& prior = {});

// Newton iteration sigma <- sigma - lambda/lambda' from the seed.
// Requirements and checks:
//   - the seed (and every iterate) stays inside the reliable radius
//     k_max/2 of the evaluator's coefficient supply;
//   - at most 60 steps; convergence means |lambda(sigma)| < tol;
//   - ev_cert must carry >= 30 more target digits; the converged point must
//     keep |lambda| < 10 tol there (PrecisionError otherwise);
//   - conjugate symmetry lambda(conj sigma) = conj lambda(sigma) is asserted
//     bit-exactly at the converged point.
// The caller assigns the index k.
ComplexZero refine_zero(const BigComplex& seed, const LambdaEvaluator& ev,
                        const LambdaEvaluator& ev_cert, const BigReal& tol);

// Seeds and refines indices k_from..k_to (inclusive) in parallel, then
// merges in ascending re and validates the result.
ZeroTable compute_zeros(long k_from, long k_to, const LambdaEvaluator& ev,
                        const LambdaEvaluator& ev_cert, const BigReal& tol,
                        int threads = 1);

// constant * s^2 * prod_{k <= n_factors} of the grouped quartic factor
//   1 + (s^4 - 2 s^2 ((re sigma_k)^2 - (im sigma_k)^2)) / |sigma_k|^4,
// which multiplies out the four mirror zeros of entry k at once.
BigComplex product_partial(const BigComplex& s, const ZeroTable& table,
                           long n_factors, const BigReal& constant);

struct VerifyRow {
  long k = 0;
  double rel_re = 0;
  double rel_im = 0;
  bool index_matched = true;  // false when nearest-re matching stepped in
};

struct VerifyReport {
  std::vector<VerifyRow> rows;
  std::size_t compared = 0;
  double max_rel = 0;
  bool index_mismatch = false;
  bool empty_overlap = false;
  bool pass = false;  // compared > 0, aligned, and max_rel <= 5e-14
};

VerifyReport verify_against_fixture(const ZeroTable& computed,
                                    const ZeroTable& fixture);

// CSV with header `k,re,im,residual` (computed) or `k,re,im` (fixture);
// the loader infers provenance from the header. Values use the exact
// decimal serialization of the number kernel and parse at a fixed 120-digit
// precision, so saving a loaded table reproduces the file byte for byte.
ZeroTable load_zero_table(const std::string& path);
void save_zero_table(const ZeroTable& table, const std::string& path);

}  // namespace keli

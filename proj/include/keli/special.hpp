#pragma once

// Completed-zeta building blocks: Euler-Maclaurin zeta, Stirling-series
// log-gamma with upward shifting, and the normalized log of the completed
// function,
//   xi_log(s) = ln 2 - (s/2) ln pi + lnGamma(1 + s/2) + Log((s-1) zeta(s)),
// normalized so xi_log(0) = xi_log(1) = 0 and symmetric under s -> 1-s.
//
// Real overloads stay in real arithmetic end to end; their results carry an
// imaginary part of exactly zero by construction, not by truncation.

#include "keli/mp.hpp"

namespace keli {

// Requested point sits on the logarithm's cut.
struct BranchError : Error {
  using Error::Error;
};

// Euler-Maclaurin cutoffs: direct_terms many n^{-s} summed explicitly,
// then `corrections` Bernoulli correction terms. Both grow linearly with
// the digit target and with |Im s|.
struct ZetaCutoffs {
  long direct_terms;
  long corrections;
  static ZetaCutoffs for_target(int digits, double im_abs);
};

// zeta(s) for s != 1. Every call runs a second pass with enlarged cutoffs
// (N+8, M+4) sharing the direct sum and throws PrecisionError unless the two
// agree to the context's working digits. Tuned for Re s > -1/2.
BigReal zeta_em(const BigReal& s, const PrecisionContext& ctx);
BigComplex zeta_em(const BigComplex& s, const PrecisionContext& ctx);

// lnGamma: principal branch, analytic continuation of the real function
// along Re s > 0. The argument is shifted upward until the Stirling series
// reaches the digit target; the shift logs are subtracted afterwards.
// Real overload requires s > 0; complex overload rejects nonpositive
// integer arguments (poles).
BigReal log_gamma(const BigReal& s, const PrecisionContext& ctx);
BigComplex log_gamma(const BigComplex& s, const PrecisionContext& ctx);

BigReal xi_log(const BigReal& s, const PrecisionContext& ctx);
BigComplex xi_log(const BigComplex& s, const PrecisionContext& ctx);

}  // namespace keli

#include "keli/special.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace keli {
namespace {

// Shared store of Bernoulli-derived series coefficients. Exact rationals are
// grown once and handed out as immutable snapshots, so concurrent evaluations
// never observe a vector mid-growth.
class CoefficientStore {
public:
  // B_{2m}/(2m)! at `prec`, m = 1..m_max (at least).
  std::shared_ptr<const std::vector<BigReal>> zeta_coeffs(int m_max,
                                                          mpfr_prec_t prec) {
    std::lock_guard<std::mutex> lk(mu_);
    grow(m_max);
    auto& slot = real_cache_[prec];
    if (!slot || static_cast<int>(slot->size()) < m_max) {
      auto fresh = std::make_shared<std::vector<BigReal>>();
      fresh->reserve(over_fact_->size());
      for (const auto& q : *over_fact_) fresh->emplace_back(q, prec);
      slot = std::move(fresh);
    }
    return slot;
  }

  // B_{2m}/(2m(2m-1)) exact, m = 1..m_max (at least).
  std::shared_ptr<const std::vector<BigRational>> stirling_coeffs(int m_max) {
    std::lock_guard<std::mutex> lk(mu_);
    grow(m_max);
    return stirling_;
  }

private:
  void grow(int m_max) {
    if (over_fact_ && static_cast<int>(over_fact_->size()) >= m_max) return;
    const int target = ((m_max + 255) / 256) * 256;
    auto bern = bernoulli_even(target);
    auto of = std::make_shared<std::vector<BigRational>>();
    auto st = std::make_shared<std::vector<BigRational>>();
    of->reserve(target);
    st->reserve(target);
    BigInt fact = 1;  // (2m)!
    for (int m = 1; m <= target; ++m) {
      fact *= 2 * m - 1;
      fact *= 2 * m;
      of->push_back(bern[m] / BigRational(fact));
      st->push_back(bern[m] / BigRational(static_cast<long>(2 * m) * (2 * m - 1)));
    }
    over_fact_ = std::move(of);
    stirling_ = std::move(st);
    real_cache_.clear();
  }

  std::mutex mu_;
  std::shared_ptr<std::vector<BigRational>> over_fact_;
  std::shared_ptr<std::vector<BigRational>> stirling_;
  std::map<mpfr_prec_t, std::shared_ptr<const std::vector<BigReal>>> real_cache_;
};

CoefficientStore& store() {
  static CoefficientStore s;
  return s;
}

// Generic scalar helpers so the real and complex paths share one template.
inline BigReal inv_of(const BigReal& x) { return BigReal(1L, x.prec()) / x; }
inline BigComplex inv_of(const BigComplex& z) { return inv(z); }
inline BigReal abs_of(const BigReal& x) { return abs(x); }
inline BigReal abs_of(const BigComplex& z) { return abs(z); }
inline long mag10(const BigReal& x) { return x.exponent10(); }
inline long mag10(const BigComplex& z) {
  return std::max(z.re.exponent10(), z.im.exponent10());
}
inline double im_magnitude(const BigReal&) { return 0.0; }
inline double im_magnitude(const BigComplex& z) {
  return std::fabs(z.im.to_double());
}
inline bool exactly(const BigReal& x, long v) {
  return mpfr_cmp_si(x.get(), v) == 0;
}
inline bool exactly(const BigComplex& z, long v) {
  return z.im.is_zero() && mpfr_cmp_si(z.re.get(), v) == 0;
}
inline int real_cmp_si(const BigReal& x, long v) {
  return mpfr_cmp_si(x.get(), v);
}
inline int real_cmp_si(const BigComplex& z, long v) {
  return mpfr_cmp_si(z.re.get(), v);
}

template <typename T>
T from_long(long v, mpfr_prec_t prec);
template <>
BigReal from_long<BigReal>(long v, mpfr_prec_t prec) {
  return BigReal(v, prec);
}
template <>
BigComplex from_long<BigComplex>(long v, mpfr_prec_t prec) {
  return BigComplex(v, 0, prec);
}

template <typename T>
T widen(const T& x, mpfr_prec_t prec);
template <>
BigReal widen<BigReal>(const BigReal& x, mpfr_prec_t prec) {
  BigReal r(prec);
  mpfr_set(r.get(), x.get(), MPFR_RNDN);
  return r;
}
template <>
BigComplex widen<BigComplex>(const BigComplex& z, mpfr_prec_t prec) {
  return {widen(z.re, prec), widen(z.im, prec)};
}

template <typename T>
T zeta_impl(const T& s_in, const PrecisionContext& ctx) {
  if (exactly(s_in, 1)) throw DomainError("zeta pole at s = 1");
  const int digits = ctx.total_digits();
  const mpfr_prec_t prec = ctx.bits() + 32;
  const T s = widen(s_in, prec);

  const auto cut = ZetaCutoffs::for_target(digits, im_magnitude(s));
  const long n1 = cut.direct_terms, m1 = cut.corrections;
  const long n2 = n1 + 8, m2 = m1 + 4;
  auto coeffs = store().zeta_coeffs(static_cast<int>(m2), prec);

  // n^{-s} for n < n2; exponentials only at primes, the rest by
  // multiplicativity over the smallest prime factor.
  std::vector<long> spf(n2, 0);
  for (long p = 2; p < n2; ++p)
    if (!spf[p])
      for (long q = p; q < n2; q += p)
        if (!spf[q]) spf[q] = p;
  const T minus_s = -s;
  std::vector<T> val;
  val.reserve(n2);
  val.push_back(from_long<T>(0, prec));
  val.push_back(from_long<T>(1, prec));
  for (long n = 2; n < n2; ++n) {
    if (spf[n] == n) {
      BigReal ln_n(prec);
      mpfr_log_ui(ln_n.get(), static_cast<unsigned long>(n), MPFR_RNDN);
      val.push_back(exp(minus_s * ln_n));
    } else {
      val.push_back(val[spf[n]] * val[n / spf[n]]);
    }
  }
  T direct_a = from_long<T>(0, prec);
  for (long n = 1; n < n1; ++n) direct_a = direct_a + val[n];
  T direct_b = direct_a;
  for (long n = n1; n < n2; ++n) direct_b = direct_b + val[n];

  const auto tail = [&](long nn, long mm) {
    BigReal ln_nn(prec);
    mpfr_log_ui(ln_nn.get(), static_cast<unsigned long>(nn), MPFR_RNDN);
    const T nn_pow = exp(minus_s * ln_nn);  // nn^{-s}
    T out = (nn_pow * nn) / (s - 1L) + nn_pow / 2L;
    T rf = s;                 // rising factorial (s)_{2m-1}
    T npow = nn_pow / nn;     // nn^{-s-2m+1}
    const long nn_sq = nn * nn;
    T acc = from_long<T>(0, prec);
    for (long m = 1; m <= mm; ++m) {
      acc = acc + npow * (*coeffs)[m - 1] * rf;
      if (m < mm) {
        rf = rf * (s + (2 * m - 1)) * (s + 2 * m);
        npow = npow / nn_sq;
      }
    }
    return out + acc;
  };

  const T za = direct_a + tail(n1, m1);
  const T zb = direct_b + tail(n2, m2);
  const BigReal diff = abs_of(za - zb);
  if (!diff.is_zero()) {
    const long rel = diff.exponent10() - abs_of(zb).exponent10();
    if (rel > -static_cast<long>(ctx.working_digits) + 2)
      throw PrecisionError("zeta cutoff-doubling validation disagreed");
  }
  return zb;
}

template <typename T>
T log_gamma_impl(const T& s, const PrecisionContext& ctx) {
  const int digits = ctx.total_digits();
  const mpfr_prec_t prec = ctx.bits() + 32;
  const long sigma_min = static_cast<long>(std::ceil(0.37 * digits)) + 5;

  T z = widen(s, prec);
  T shift_logs = from_long<T>(0, prec);
  long shifts = 0;
  while (real_cmp_si(z, sigma_min) < 0) {
    if (++shifts > sigma_min + (1L << 22))
      throw DomainError("log_gamma argument too far left of the shift window");
    shift_logs = shift_logs + log(z);
    z = z + 1L;
  }

  const BigReal half = BigReal(1L, prec) / 2L;
  const BigReal half_ln_2pi = (const_log2(prec) + log(const_pi(prec))) / 2L;
  T acc = (z - half) * log(z) - z + half_ln_2pi;

  const int m_cap = static_cast<int>(std::ceil(1.3 * (digits + 20))) + 32;
  auto st = store().stirling_coeffs(m_cap);
  T zpow = inv_of(z);
  const T z2inv = inv_of(z * z);
  long prev_mag = LONG_MAX;
  bool reached = false;
  for (int m = 1; m <= m_cap; ++m) {
    const T term = zpow * BigReal((*st)[m - 1], prec);
    acc = acc + term;
    const long tm = mag10(term);
    if (tm < -(digits + 5)) {
      reached = true;
      break;
    }
    if (tm > prev_mag)
      throw ConvergenceError(
          "stirling tail started growing before reaching the digit target");
    prev_mag = tm;
    zpow = zpow * z2inv;
  }
  if (!reached)
    throw ConvergenceError("stirling tail did not reach the digit target");
  return acc - shift_logs;
}

}  // namespace

ZetaCutoffs ZetaCutoffs::for_target(int digits, double im_abs) {
  long n = static_cast<long>(std::ceil(0.7 * digits + 0.5 * std::fabs(im_abs))) + 2;
  n = std::max(n, 16L);
  return {n, n};
}

BigReal zeta_em(const BigReal& s, const PrecisionContext& ctx) {
  return zeta_impl(s, ctx);
}
BigComplex zeta_em(const BigComplex& s, const PrecisionContext& ctx) {
  return zeta_impl(s, ctx);
}

BigReal log_gamma(const BigReal& s, const PrecisionContext& ctx) {
  if (s.sign() <= 0)
    throw DomainError("real log_gamma requires s > 0; use the complex overload");
  return log_gamma_impl(s, ctx);
}

BigComplex log_gamma(const BigComplex& s, const PrecisionContext& ctx) {
  if (s.im.is_zero() && mpfr_integer_p(s.re.get()) && s.re.sign() <= 0)
    throw DomainError("log_gamma pole at a nonpositive integer");
  return log_gamma_impl(s, ctx);
}

BigReal xi_log(const BigReal& s, const PrecisionContext& ctx) {
  if (exactly(s, 0) || exactly(s, 1)) return BigReal(ctx.bits());
  const mpfr_prec_t prec = ctx.bits() + 32;
  const BigReal ws = widen(s, prec);
  const BigReal w = (ws - 1L) * zeta_em(ws, ctx);
  if (w.sign() <= 0)
    throw BranchError("(s-1) zeta(s) is not positive; use the complex overload");
  return const_log2(prec) - ws / 2L * log(const_pi(prec)) +
         log_gamma(BigReal(1L, prec) + ws / 2L, ctx) + log(w);
}

BigComplex xi_log(const BigComplex& s, const PrecisionContext& ctx) {
  if (exactly(s, 0) || exactly(s, 1)) return BigComplex(ctx.bits());
  const mpfr_prec_t prec = ctx.bits() + 32;
  const BigComplex ws = widen(s, prec);
  const BigComplex w = (ws - 1L) * zeta_em(ws, ctx);
  if (w.is_zero()) throw DomainError("xi_log at a zero of the completed function");
  if (w.im.is_zero() && w.re.sign() < 0)
    throw BranchError("(s-1) zeta(s) sits on the logarithm cut");
  return log(w) - (ws * log(const_pi(prec))) / 2L +
         log_gamma(BigComplex(1, 0, prec) + ws / 2L, ctx) + const_log2(prec);
}

}  // namespace keli

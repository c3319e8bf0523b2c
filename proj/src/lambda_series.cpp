#include "keli/lambda_series.hpp"
#include "keli/special.hpp"

#include <algorithm>
#include <climits>
#include <cmath>

namespace keli {
namespace {

inline long mag10(const BigReal& x) { return x.exponent10(); }
inline long mag10(const BigComplex& z) {
  return std::max(z.re.exponent10(), z.im.exponent10());
}

template <typename T>
T from_zero(mpfr_prec_t prec);
template <>
BigReal from_zero<BigReal>(mpfr_prec_t prec) {
  return BigReal(prec);
}
template <>
BigComplex from_zero<BigComplex>(mpfr_prec_t prec) {
  return BigComplex(prec);
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

NuSeries nu_from_chis(const AlphaSeries& alphas, const std::vector<ChiRow>& chis,
                      int q_max) {
  const int kmax = alphas.k_max();
  const mpfr_prec_t prec = bits_for_digits(alphas.source_digits);

  // F_k = alpha_k / ((k!)^2 (2k-1)!)
  std::vector<BigReal> factor;
  factor.reserve(kmax);
  for (int k = 1; k <= kmax; ++k)
    factor.push_back(
        div(alphas.a[k - 1], factorial(k) * factorial(k) * factorial(2 * k - 1)));

  NuSeries out;
  const int sig_last = alphas.significance.back();
  for (int m = 2; m <= q_max; m += 2) {
    const int q = m - 1;
    BigReal acc(prec), last(prec);
    for (int k = (q + 1) / 2; k <= kmax; ++k) {
      last = mul(factor[k - 1], chis[k - 1].at_q(q));
      acc = acc + last;
    }
    if (!last.is_zero() && !acc.is_zero() &&
        mag10(last) - mag10(acc) > -sig_last)
      out.warnings.push_back("nu_" + std::to_string(m) +
                             ": k-sum still moving at the last retained term");
    out.nu.push_back(std::move(acc));
  }
  return out;
}

}  // namespace

AlphaSeries solve_alphas(const NodeValueTable& table, int k_max) {
  if (k_max < 1) throw DomainError("solve_alphas needs k_max >= 1");
  if (k_max > table.count())
    throw DomainError("k_max exceeds the node supply");
  if (table.digits < 61)
    throw DomainError("node table too coarse to certify (needs > 60 digits)");

  const int digits = table.digits;
  const int red_digits = digits - 50;
  const mpfr_prec_t full = bits_for_digits(digits);
  const mpfr_prec_t red = bits_for_digits(red_digits);

  std::vector<BigReal> f_red;
  f_red.reserve(k_max);
  for (int j = 0; j < k_max; ++j)
    f_red.push_back(round_to_digits(table.values[j], red_digits));

  AlphaSeries out;
  out.source_digits = digits;
  std::vector<int> sig;
  for (int k = 1; k <= k_max; ++k) {
    BigReal acc(full), acc_r(red);
    for (int j = 1; j <= k; ++j) {
      const BigRational c = c_coeff(k, j);
      acc = acc + div(mul(table.values[j - 1], c.get_num()), c.get_den());
      acc_r = acc_r + div(mul(f_red[j - 1], c.get_num()), c.get_den());
    }
    sig.push_back(std::min(agreement_digits(acc, acc_r), red_digits));
    out.a.push_back(std::move(acc));
  }
  for (size_t i = 1; i < sig.size(); ++i) sig[i] = std::min(sig[i], sig[i - 1]);
  if (sig[0] < 10)
    throw PrecisionError("first coefficient certifies fewer than 10 digits");
  size_t keep = sig.size();
  for (size_t i = 0; i < sig.size(); ++i)
    if (sig[i] <= 0) {
      keep = i;
      break;
    }
  out.a.resize(keep);
  sig.resize(keep);
  out.significance = std::move(sig);
  return out;
}

BigReal interpolant_eval(const AlphaSeries& alphas, int m, const BigReal& s) {
  if (m < 1 || m > alphas.k_max())
    throw DomainError("interpolant order outside the alpha supply");
  const mpfr_prec_t prec =
      std::max(s.prec(), bits_for_digits(alphas.source_digits));
  const BigReal ws = widen(s, prec);
  const BigReal one(1L, prec);
  BigReal acc(prec), om(1L, prec);
  for (int k = 1; k <= m; ++k) {
    const BigReal node = one / k;
    om = om * (ws - node) * (one - ws - node);
    const BigReal term = om * alphas.a[k - 1];
    acc = (k % 2 == 1) ? acc - term : acc + term;
  }
  return acc;
}

const BigReal& NuSeries::at(int m) const {
  if (m < 2 || m % 2 != 0 || m > q_max())
    throw DomainError("nu index must be even and within the series");
  return nu[m / 2 - 1];
}

NuSeries nu_coeffs(const AlphaSeries& alphas, int q_max) {
  if (alphas.k_max() < 1) throw DomainError("empty alpha series");
  if (q_max < 2) throw DomainError("nu_coeffs needs q_max >= 2");
  const int kmax = alphas.k_max();
  NuSeries out;
  int q = q_max;
  if (q > 2 * kmax) {
    q = 2 * kmax;
    out.warnings.push_back("q_max clamped to twice the alpha supply");
  }
  auto tri = stirling_triangle(kmax);
  std::vector<ChiRow> chis;
  chis.reserve(kmax);
  for (int k = 1; k <= kmax; ++k) chis.push_back(chi_row(k, tri));
  NuSeries body = nu_from_chis(alphas, chis, q);
  body.warnings.insert(body.warnings.begin(), out.warnings.begin(),
                       out.warnings.end());
  return body;
}

BigReal lambda1_closed(const PrecisionContext& ctx) {
  const mpfr_prec_t prec = ctx.bits() + 32;
  const BigReal g = euler_gamma(ctx);
  const BigReal ln4pi = log(const_pi(prec) * 4L);
  return (g - ln4pi + 2L) / 2L;
}

BigReal lambda_sum_zeros(long n, const std::vector<BigReal>& gammas,
                         const ZeroDeviation& dev,
                         const PrecisionContext& ctx) {
  if (n < 1) throw DomainError("lambda_sum_zeros needs n >= 1");
  if (dev.index != -1 &&
      (dev.index < 1 || dev.index > static_cast<long>(gammas.size())))
    throw DomainError("deviation index outside the ordinate list");
  const mpfr_prec_t prec = ctx.bits() + 32;
  const BigReal half = BigReal(1L, prec) / 2L;
  BigReal acc(prec);
  for (size_t j = 1; j <= gammas.size(); ++j) {
    const BigReal g = widen(gammas[j - 1], prec);
    if (static_cast<long>(j) == dev.index) {
      BigReal re(prec);
      mpfr_set_d(re.get(), dev.delta, MPFR_RNDN);
      re = re + half;
      const BigComplex rho(re, g);
      const BigComplex mirror(BigReal(1L, prec) - re, -g);
      const BigComplex one(1, 0, prec);
      const BigComplex w1 = one - inv(rho);
      const BigComplex w2 = one - inv(mirror);
      const BigReal quad =
          BigReal(2L, prec) - pow(w1, n).re - pow(w2, n).re;
      acc = acc + quad * 2L;
    } else {
      const BigReal theta = atan2(g, -half) - atan2(g, half);
      acc = acc + (BigReal(2L, prec) - cos(theta * n) * 2L);
    }
  }
  return acc;
}

namespace {

std::vector<BigReal> cauchy_run(long n_max, const BigReal& radius, long samples,
                                const PrecisionContext& ctx, int threads) {
  const mpfr_prec_t prec = ctx.bits() + 64;
  const long half_s = samples / 2;
  const BigReal two_pi = const_pi(prec) * 2L;

  std::vector<BigComplex> g(half_s + 1, BigComplex(prec));
  parallel_for(static_cast<std::size_t>(half_s + 1), threads,
               [&](std::size_t i) {
                 const BigReal ang = two_pi * static_cast<long>(i) / samples;
                 BigReal c(prec), s(prec);
                 mpfr_sin_cos(s.get(), c.get(), ang.get(), MPFR_RNDN);
                 const BigComplex z(radius * c, radius * s);
                 const BigComplex point =
                     inv(BigComplex(1, 0, prec) - z);
                 g[i] = xi_log(point, ctx);
               });

  // The logarithm branch must vary continuously along the contour; repair
  // principal-branch jumps and verify the total winding returns to zero.
  const BigReal pi_b = const_pi(prec);
  BigReal offset(prec);
  BigReal prev = g[0].im;
  for (long m = 1; m <= half_s; ++m) {
    const BigReal cand = g[m].im + offset;
    BigReal d = cand - prev;
    const double laps = d.to_double() / (2.0 * 3.141592653589793);
    const long k = std::lround(laps);
    if (k != 0) {
      offset = offset - two_pi * k;
      d = g[m].im + offset - prev;
    }
    if (!(abs(d) < pi_b - BigReal(1L, 64) / 10L))
      throw UnwrapError("phase jump too large to repair on the contour");
    prev = g[m].im + offset;
    g[m].im = prev;
  }
  if (!(abs(g[half_s].im) < BigReal(1L, 64) / 2L))
    throw UnwrapError("contour phase failed to close (nonzero winding)");

  std::vector<BigReal> cost, sint;
  cost.reserve(samples);
  sint.reserve(samples);
  for (long t = 0; t < samples; ++t) {
    const BigReal ang = two_pi * t / samples;
    BigReal c(prec), s(prec);
    mpfr_sin_cos(s.get(), c.get(), ang.get(), MPFR_RNDN);
    cost.push_back(std::move(c));
    sint.push_back(std::move(s));
  }

  const BigReal inv_r = BigReal(1L, prec) / radius;
  BigReal r_pow = inv_r;
  std::vector<BigReal> out;
  out.reserve(n_max);
  for (long n = 1; n <= n_max; ++n) {
    BigReal acc = (n % 2 == 0) ? g[0].re + g[half_s].re : g[0].re - g[half_s].re;
    for (long m = 1; m < half_s; ++m) {
      const long t = (n * m) % samples;
      acc = acc + (g[m].re * cost[t] + g[m].im * sint[t]) * 2L;
    }
    out.push_back(acc / samples * r_pow * n);
    r_pow = r_pow * inv_r;
  }
  return out;
}

}  // namespace

std::vector<BigReal> lambda_cauchy_oracle(long n_max, const BigReal& radius,
                                          long samples,
                                          const PrecisionContext& ctx,
                                          int threads) {
  if (n_max < 1) throw DomainError("lambda_cauchy_oracle needs n_max >= 1");
  if (!(radius.sign() > 0) || mpfr_cmp_d(radius.get(), 0.6) > 0)
    throw DomainError("contour radius must lie in (0, 0.6]");
  if (samples < 256 || (samples & (samples - 1)) != 0)
    throw DomainError("sample count must be a power of two, at least 256");
  if (n_max >= samples / 2)
    throw DomainError("n_max must stay below half the sample count");

  const auto base = cauchy_run(n_max, radius, samples, ctx, threads);
  const auto fine = cauchy_run(n_max, radius, 2 * samples, ctx, threads);
  const mpfr_prec_t prec = ctx.bits();
  const BigReal tol = pow(BigReal(10L, prec), -ctx.working_digits);
  const BigReal one(1L, prec);
  for (long n = 1; n <= n_max; ++n) {
    const BigReal scale = abs(fine[n - 1]) < one ? one : abs(fine[n - 1]);
    if (!(abs(base[n - 1] - fine[n - 1]) <= tol * scale))
      throw AliasingError("sample doubling moved coefficient " +
                          std::to_string(n));
  }
  return fine;
}

// ---- LambdaEvaluator ----

struct LambdaEvaluator::RealCoeffs {
  std::vector<std::vector<BigReal>> beta;  // [k-1][t] multiplies (s^2)^{t+1}
};

LambdaEvaluator::LambdaEvaluator(AlphaSeries alphas, int q_max,
                                 int target_digits)
    : alphas_(std::move(alphas)), target_digits_(target_digits) {
  if (alphas_.k_max() < 1) throw DomainError("empty alpha series");
  if (target_digits_ < 10) throw DomainError("target digits below 10");
  if (q_max < 2) throw DomainError("q_max must be at least 2");
  const int kmax = alphas_.k_max();
  const int q = std::min<long>(q_max, 2L * kmax);
  auto tri = stirling_triangle(kmax);
  std::vector<ChiRow> chis;
  chis.reserve(kmax);
  betas_.reserve(kmax);
  for (int k = 1; k <= kmax; ++k) {
    chis.push_back(chi_row(k, tri));
    betas_.push_back(beta_poly(k, chis.back()));
  }
  nus_ = nu_from_chis(alphas_, chis, q);
}

std::shared_ptr<const LambdaEvaluator::RealCoeffs> LambdaEvaluator::coeffs_at(
    mpfr_prec_t prec) const {
  std::lock_guard<std::mutex> lk(cache_mu_);
  auto& slot = cache_[prec];
  if (!slot) {
    auto rc = std::make_shared<RealCoeffs>();
    rc->beta.reserve(betas_.size());
    for (const auto& bp : betas_) {
      std::vector<BigReal> row;
      row.reserve(bp.coeff.size());
      for (const auto& qc : bp.coeff) row.emplace_back(qc, prec);
      rc->beta.push_back(std::move(row));
    }
    slot = std::move(rc);
  }
  return slot;
}

namespace {

template <typename T>
struct PassResult {
  T sum;
  long e_max = LONG_MIN;
  long sum_exp = LONG_MIN;
  bool converged = false;
};

// Elevation driver: rerun the summation until the working precision covers
// the gap between the largest intermediate term and the final sum. Precision
// requests are rounded up to 32-digit steps so repeated evaluations share
// coefficient caches.
template <typename T, typename Body>
T run_elevated(int target, Body body) {
  long elev = 0;
  for (int round = 0; round < 6; ++round) {
    const int digits = static_cast<int>(
        ((target + elev + 25 + 31) / 32) * 32);
    PassResult<T> r = body(bits_for_digits(digits));
    if (!r.converged)
      throw ConvergenceError(
          "term supply exhausted before the truncation rule fired");
    if (r.sum_exp == LONG_MIN) r.sum_exp = r.e_max - digits;
    const long need = std::max(0L, r.e_max - r.sum_exp);
    if (need <= elev) return r.sum;
    elev = need;
  }
  throw ConvergenceError("precision elevation failed to settle");
}

}  // namespace

BigComplex LambdaEvaluator::lambda_at(const BigComplex& s) const {
  if (s.re.is_zero() && s.im.is_zero())
    return BigComplex(bits_for_digits(target_digits_));
  return run_elevated<BigComplex>(
      target_digits_, [&](mpfr_prec_t prec) {
        PassResult<BigComplex> r{BigComplex(prec)};
        auto cf = coeffs_at(prec);
        const BigComplex ws = widen(s, prec);
        const BigComplex s2 = ws * ws;
        int consec = 0;
        long last_te = LONG_MIN;
        const int kmax = alphas_.k_max();
        for (int k = 1; k <= kmax; ++k) {
          const auto& row = cf->beta[k - 1];
          BigComplex b(prec);
          b = b + row.back();
          for (int t = static_cast<int>(row.size()) - 2; t >= 0; --t)
            b = b * s2 + row[t];
          b = b * s2;
          const BigComplex term = b * alphas_.a[k - 1];
          r.sum = r.sum + term;
          last_te = mag10(term);
          r.e_max = std::max(r.e_max, last_te);
          if (last_te < r.e_max - (target_digits_ + 5)) {
            if (++consec >= 3) {
              r.converged = true;
              break;
            }
          } else {
            consec = 0;
          }
        }
        r.sum_exp = r.sum.is_zero() ? LONG_MIN : mag10(r.sum);
        if (!r.converged)
          r.converged = (r.sum_exp != LONG_MIN &&
                         last_te < r.sum_exp - target_digits_);
        return r;
      });
}

BigReal LambdaEvaluator::lambda_at(const BigReal& s) const {
  if (s.is_zero()) return BigReal(bits_for_digits(target_digits_));
  return run_elevated<BigReal>(
      target_digits_, [&](mpfr_prec_t prec) {
        PassResult<BigReal> r{BigReal(prec)};
        auto cf = coeffs_at(prec);
        const BigReal ws = widen(s, prec);
        const BigReal s2 = ws * ws;
        int consec = 0;
        long last_te = LONG_MIN;
        const int kmax = alphas_.k_max();
        for (int k = 1; k <= kmax; ++k) {
          const auto& row = cf->beta[k - 1];
          BigReal b = row.back();
          for (int t = static_cast<int>(row.size()) - 2; t >= 0; --t)
            b = b * s2 + row[t];
          b = b * s2;
          const BigReal term = b * alphas_.a[k - 1];
          r.sum = r.sum + term;
          last_te = mag10(term);
          r.e_max = std::max(r.e_max, last_te);
          if (last_te < r.e_max - (target_digits_ + 5)) {
            if (++consec >= 3) {
              r.converged = true;
              break;
            }
          } else {
            consec = 0;
          }
        }
        r.sum_exp = r.sum.is_zero() ? LONG_MIN : mag10(r.sum);
        if (!r.converged)
          r.converged = (r.sum_exp != LONG_MIN &&
                         last_te < r.sum_exp - target_digits_);
        return r;
      });
}

namespace {

template <typename T>
PassResult<T> series_pass(const NuSeries& nus, int target, const T& s,
                          mpfr_prec_t prec, bool derivative) {
  PassResult<T> r{from_zero<T>(prec)};
  const T ws = widen(s, prec);
  const T s2 = ws * ws;
  T p = derivative ? ws : s2;  // s^{2q-1} or s^{2q} at q = 1
  int consec = 0;
  long last_te = LONG_MIN;
  const int qn = static_cast<int>(nus.nu.size());
  for (int q = 1; q <= qn; ++q) {
    T term = p * nus.nu[q - 1];
    if (derivative) term = term * (2L * q);
    r.sum = r.sum + term;
    last_te = mag10(term);
    r.e_max = std::max(r.e_max, last_te);
    if (last_te < r.e_max - (target + 5)) {
      if (++consec >= 3) {
        r.converged = true;
        break;
      }
    } else {
      consec = 0;
    }
    p = p * s2;
  }
  r.sum_exp = r.sum.is_zero() ? LONG_MIN : mag10(r.sum);
  if (!r.converged)
    r.converged = (r.sum_exp != LONG_MIN && last_te < r.sum_exp - target);
  return r;
}

}  // namespace

BigComplex LambdaEvaluator::lambda_series_at(const BigComplex& s) const {
  if (s.re.is_zero() && s.im.is_zero())
    return BigComplex(bits_for_digits(target_digits_));
  return run_elevated<BigComplex>(target_digits_, [&](mpfr_prec_t prec) {
    return series_pass(nus_, target_digits_, s, prec, false);
  });
}

BigReal LambdaEvaluator::lambda_series_at(const BigReal& s) const {
  if (s.is_zero()) return BigReal(bits_for_digits(target_digits_));
  return run_elevated<BigReal>(target_digits_, [&](mpfr_prec_t prec) {
    return series_pass(nus_, target_digits_, s, prec, false);
  });
}

BigComplex LambdaEvaluator::lambda_prime(const BigComplex& s) const {
  if (s.re.is_zero() && s.im.is_zero())
    return BigComplex(bits_for_digits(target_digits_));
  return run_elevated<BigComplex>(target_digits_, [&](mpfr_prec_t prec) {
    return series_pass(nus_, target_digits_, s, prec, true);
  });
}

BigReal LambdaEvaluator::lambda_int(long n) const {
  if (n < 1) throw DomainError("lambda_int needs n >= 1");
  // Exact beta_{nk} values; their decimal sizes drive the elevation directly.
  std::vector<BigRational> beta_n;
  beta_n.reserve(betas_.size());
  long e_max = LONG_MIN;
  std::vector<long> exps;
  exps.reserve(betas_.size());
  for (size_t k = 1; k <= betas_.size(); ++k) {
    beta_n.push_back(beta_eval(betas_[k - 1], n));
    const auto& q = beta_n.back();
    const long esz =
        static_cast<long>(mpz_sizeinbase(q.get_num().get_mpz_t(), 10)) -
        static_cast<long>(mpz_sizeinbase(q.get_den().get_mpz_t(), 10));
    const long te = esz + alphas_.a[k - 1].exponent10();
    exps.push_back(te);
    e_max = std::max(e_max, te);
  }
  const int digits = static_cast<int>(target_digits_ + std::max(0L, e_max) + 25);
  const mpfr_prec_t prec = bits_for_digits(digits);
  BigReal acc(prec);
  int consec = 0;
  for (size_t k = 1; k <= beta_n.size(); ++k) {
    acc = acc + BigReal(beta_n[k - 1], prec) * alphas_.a[k - 1];
    if (exps[k - 1] < e_max - (target_digits_ + 5)) {
      if (++consec >= 3) break;
    } else {
      consec = 0;
    }
  }
  return acc;
}

}  // namespace keli

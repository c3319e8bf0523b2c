#include "keli/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace keli {

namespace {

BigReal widen_to(const BigReal& x, mpfr_prec_t prec) {
  if (x.prec() >= prec) return x;
  BigReal out(prec);
  mpfr_set(out.get(), x.get(), MPFR_RNDN);
  return out;
}

BigReal from_double(double x, mpfr_prec_t prec) {
  BigReal out(prec);
  mpfr_set_d(out.get(), x, MPFR_RNDN);
  return out;
}

// Uniform in [0, 1) with exactly 53 random mantissa bits.
double unit_double(std::mt19937_64& eng) {
  return std::ldexp(static_cast<double>(eng() >> 11), -53);
}

}  // namespace

std::vector<BigReal> load_zeta_zeros(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open ordinate file: " + path);

  // Published ordinate tables carry a few dozen digits; a fixed parse
  // precision keeps reloads independent of incidental field widths.
  const mpfr_prec_t prec = bits_for_digits(40);

  std::vector<BigReal> out;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto last = line.find_last_not_of(" \t\r");
    std::string field = line.substr(first, last - first + 1);
    BigReal g = [&] {
      try {
        return from_string(field, prec);
      } catch (const ParseError&) {
        throw ParseError("ordinate file line " + std::to_string(lineno) +
                         ": bad number \"" + field + "\"");
      }
    }();
    if (!out.empty() && !(out.back() < g))
      throw ParseError("ordinate file line " + std::to_string(lineno) +
                       ": ordinates must be strictly ascending");
    out.push_back(std::move(g));
  }
  if (out.empty()) throw ParseError("ordinate file has no data: " + path);
  if (!(out.front() > BigReal(14, prec)))
    throw ParseError("first ordinate is below 14; not a zeta ordinate list");
  return out;
}

DiffSeries finite_difference(const std::vector<BigComplex>& seq, int order,
                             DiffNormalization normalization) {
  if (order < 1) throw DomainError("difference order must be positive");
  if (seq.size() <= static_cast<std::size_t>(order))
    throw DomainError("difference order " + std::to_string(order) +
                      " needs more than " + std::to_string(order) +
                      " input values");

  mpfr_prec_t in_prec = 2;
  for (const auto& z : seq) in_prec = std::max(in_prec, z.prec());
  const mpfr_prec_t work = in_prec + order + 64;

  std::vector<BigInt> weight(order + 1);
  for (int r = 0; r <= order; ++r)
    weight[r] = binomial(static_cast<unsigned long>(order),
                         static_cast<unsigned long>(r));

  DiffSeries out;
  out.order = order;
  out.normalization = normalization;
  out.values.reserve(seq.size() - order);

  const BigInt two_m = BigInt(1) << order;
  const std::size_t count = seq.size() - order;
  for (std::size_t i = 0; i < count; ++i) {
    BigReal re(work), im(work);
    for (int r = 0; r <= order; ++r) {
      const BigComplex& x = seq[i + order - r];
      BigReal tre = mul(widen_to(x.re, work), weight[r]);
      BigReal tim = mul(widen_to(x.im, work), weight[r]);
      if (r % 2 == 0) {
        re = re + tre;
        im = im + tim;
      } else {
        re = re - tre;
        im = im - tim;
      }
    }
    if (normalization == DiffNormalization::pow2) {
      re = div(re, two_m);
      im = div(im, two_m);
    }
    out.values.emplace_back(std::move(re), std::move(im));
  }
  return out;
}

std::vector<BigComplex> stride_sequence(const std::vector<BigComplex>& seq,
                                        int stride) {
  if (stride < 1) throw DomainError("stride must be positive");
  std::vector<BigComplex> out;
  out.reserve(seq.size() / stride + 1);
  for (std::size_t i = 0; i < seq.size(); i += stride) out.push_back(seq[i]);
  return out;
}

std::vector<BigComplex> table_to_sequence(const ZeroTable& table) {
  std::vector<BigComplex> out;
  out.reserve(table.entries.size());
  for (const auto& e : table.entries) out.emplace_back(e.re, e.im);
  return out;
}

BigReal diff_norm(const DiffSeries& diff) {
  if (diff.values.empty()) return BigReal(64);
  mpfr_prec_t prec = 2;
  for (const auto& z : diff.values) prec = std::max(prec, z.prec());
  BigReal acc(prec);
  for (const auto& z : diff.values) acc = acc + norm(z);
  return sqrt(acc / static_cast<long>(diff.values.size()));
}

std::vector<BigComplex> perturb_zeros(const std::vector<BigComplex>& seq,
                                      const BigReal& amplitude,
                                      unsigned long rng_seed) {
  if (amplitude.sign() < 0)
    throw DomainError("perturbation amplitude must be nonnegative");
  if (amplitude.is_zero()) return seq;

  std::mt19937_64 eng(rng_seed);
  std::vector<BigComplex> out;
  out.reserve(seq.size());
  for (const auto& z : seq) {
    double x = 0.0, y = 0.0;
    // Rejection sampling keeps the disk uniform without trig, and consumes
    // a reproducible number of engine draws for a given seed.
    for (;;) {
      x = 2.0 * unit_double(eng) - 1.0;
      y = 2.0 * unit_double(eng) - 1.0;
      if (x * x + y * y <= 1.0) break;
    }
    const mpfr_prec_t prec = std::max<mpfr_prec_t>(amplitude.prec(), 64);
    out.emplace_back(z.re + amplitude * from_double(x, prec),
                     z.im + amplitude * from_double(y, prec));
  }
  return out;
}

BigReal fit_log_factor(const ZeroTable& table, long k_min) {
  mpfr_prec_t prec = bits_for_digits(40);
  long used = 0;
  for (const auto& e : table.entries)
    if (e.k >= k_min) {
      ++used;
      prec = std::max(prec, std::max(e.re.prec(), e.im.prec()));
    }
  if (used < 50)
    throw InsufficientDataError(
        "log-growth fit needs at least 50 zeros with k >= " +
        std::to_string(k_min) + ", found " + std::to_string(used));

  BigReal num(prec), den(prec);
  for (const auto& e : table.entries) {
    if (e.k < k_min) continue;
    BigReal lr = log(widen_to(e.re, prec));
    num = num + e.im * lr;
    den = den + lr * lr;
  }
  if (den.is_zero())
    throw DomainError("log-growth fit is degenerate: every ln Re vanishes");
  return num / den;
}

std::vector<std::pair<BigReal, BigReal>> rescale_for_plot(
    const ZeroTable& table) {
  std::vector<std::pair<BigReal, BigReal>> out;
  out.reserve(table.entries.size());
  for (const auto& e : table.entries)
    out.emplace_back(e.re, exp(e.im / 16));
  return out;
}

std::optional<long> rh_first_negative(const std::vector<BigReal>& gammas,
                                      long deviate_index, double delta,
                                      long n_max, int threads) {
  if (n_max < 1) throw DomainError("scan bound must be positive");
  if (!(delta >= 0.0 && delta < 0.5))
    throw DomainError("deviation must sit in [0, 1/2)");
  const long count = static_cast<long>(gammas.size());
  if (deviate_index != -1 && (deviate_index < 1 || deviate_index > count))
    throw DomainError("deviation index out of range");
  if (gammas.empty()) return std::nullopt;

  const mpfr_prec_t prec = bits_for_digits(48);
  const BigReal one(1, prec);
  const BigReal two(2, prec);
  const BigReal half = one / 2;

  // Per-ordinate step data. The scan advances cos/sin(n theta) by one
  // rotation per n; the deviated pair advances w1^n, w2^n by one complex
  // multiply. Matches the term definitions in lambda_sum_zeros.
  std::vector<BigReal> theta, ct, st;
  theta.reserve(gammas.size());
  ct.reserve(gammas.size());
  st.reserve(gammas.size());
  for (const auto& g : gammas) {
    BigReal gw = widen_to(g, prec);
    theta.push_back(atan2(gw, -half) - atan2(gw, half));
    ct.push_back(cos(theta.back()));
    st.push_back(sin(theta.back()));
  }

  BigComplex w1(prec), w2(prec);
  if (deviate_index != -1) {
    BigReal gw = widen_to(gammas[deviate_index - 1], prec);
    BigComplex rho(half + from_double(delta, prec), gw);
    BigComplex cone(1, 0, prec);
    w1 = cone - inv(rho);
    w2 = cone - inv(cone - rho);
  }

  constexpr long kBlock = 1024;
  const long blocks = (n_max + kBlock - 1) / kBlock;
  std::vector<long> hit(static_cast<std::size_t>(blocks), 0);

  parallel_for(static_cast<std::size_t>(blocks), threads,
               [&](std::size_t b) {
    const long n0 = 1 + static_cast<long>(b) * kBlock;
    const long n1 = std::min(n_max, n0 + kBlock - 1);

    // Exact-start state for this block: no drift crosses block boundaries,
    // so the outcome is independent of how blocks land on threads.
    std::vector<BigReal> c, s;
    c.reserve(theta.size());
    s.reserve(theta.size());
    for (const auto& th : theta) {
      BigReal a = th * n0;
      c.push_back(cos(a));
      s.push_back(sin(a));
    }
    BigComplex w1p(prec), w2p(prec);
    if (deviate_index != -1) {
      w1p = pow(w1, n0);
      w2p = pow(w2, n0);
    }

    for (long n = n0; n <= n1; ++n) {
      BigReal value(prec);
      for (std::size_t j = 0; j < theta.size(); ++j) {
        if (static_cast<long>(j) + 1 == deviate_index) {
          value = value + two * (two - w1p.re - w2p.re);
        } else {
          value = value + (two - two * c[j]);
        }
      }
      if (value.sign() < 0) {
        hit[b] = n;
        return;
      }
      if (n == n1) break;
      for (std::size_t j = 0; j < theta.size(); ++j) {
        BigReal cn = c[j] * ct[j] - s[j] * st[j];
        BigReal sn = s[j] * ct[j] + c[j] * st[j];
        c[j] = std::move(cn);
        s[j] = std::move(sn);
      }
      if (deviate_index != -1) {
        w1p = w1p * w1;
        w2p = w2p * w2;
      }
    }
  });

  for (long b = 0; b < blocks; ++b)
    if (hit[b] != 0) return hit[b];
  return std::nullopt;
}

}  // namespace keli

#include "keli/mp.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace keli {

mpfr_prec_t bits_for_digits(int digits) {
  if (digits < 1) throw DomainError("precision must be at least one digit");
  return static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873626)) + 32;
}

int digits_for_bits(mpfr_prec_t bits) {
  return static_cast<int>(static_cast<double>(bits) * 0.30102999566398119);
}

PrecisionContext make_context(int working_digits) {
  return make_context(working_digits, std::max(10, working_digits / 20));
}

PrecisionContext make_context(int working_digits, int guard_digits) {
  if (working_digits < 30)
    throw DomainError("working precision below 30 digits is refused");
  if (guard_digits < 0) throw DomainError("guard digits must be nonnegative");
  return PrecisionContext{working_digits, guard_digits};
}

long BigReal::exponent10() const {
  if (mpfr_zero_p(v_)) return -(1L << 40);
  if (!mpfr_number_p(v_)) throw DomainError("exponent of non-finite value");
  return static_cast<long>(
      std::floor(static_cast<double>(mpfr_get_exp(v_)) * 0.30102999566398119));
}

static mpfr_prec_t pmax(const BigReal& a, const BigReal& b) {
  return std::max(a.prec(), b.prec());
}

BigReal operator+(const BigReal& a, const BigReal& b) {
  BigReal r(pmax(a, b));
  mpfr_add(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
BigReal operator-(const BigReal& a, const BigReal& b) {
  BigReal r(pmax(a, b));
  mpfr_sub(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
BigReal operator*(const BigReal& a, const BigReal& b) {
  BigReal r(pmax(a, b));
  mpfr_mul(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
BigReal operator/(const BigReal& a, const BigReal& b) {
  BigReal r(pmax(a, b));
  mpfr_div(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
BigReal operator-(const BigReal& a) {
  BigReal r(a.prec());
  mpfr_neg(r.get(), a.get(), MPFR_RNDN);
  return r;
}
BigReal operator+(const BigReal& a, long b) {
  BigReal r(a.prec());
  mpfr_add_si(r.get(), a.get(), b, MPFR_RNDN);
  return r;
}
BigReal operator-(const BigReal& a, long b) {
  BigReal r(a.prec());
  mpfr_sub_si(r.get(), a.get(), b, MPFR_RNDN);
  return r;
}
BigReal operator*(const BigReal& a, long b) {
  BigReal r(a.prec());
  mpfr_mul_si(r.get(), a.get(), b, MPFR_RNDN);
  return r;
}
BigReal operator/(const BigReal& a, long b) {
  BigReal r(a.prec());
  mpfr_div_si(r.get(), a.get(), b, MPFR_RNDN);
  return r;
}
BigReal operator*(long a, const BigReal& b) { return b * a; }

int cmp(const BigReal& a, const BigReal& b) { return mpfr_cmp(a.get(), b.get()); }

BigReal abs(const BigReal& a) {
  BigReal r(a.prec());
  mpfr_abs(r.get(), a.get(), MPFR_RNDN);
  return r;
}
BigReal sqrt(const BigReal& a) {
  BigReal r(a.prec());
  mpfr_sqrt(r.get(), a.get(), MPFR_RNDN);
  return r;
}
BigReal log(const BigReal& a) {
  BigReal r(a.prec());
  mpfr_log(r.get(), a.get(), MPFR_RNDN);
  return r;
}
BigReal exp(const BigReal& a) {
  BigReal r(a.prec());
  mpfr_exp(r.get(), a.get(), MPFR_RNDN);
  return r;
}
BigReal sin(const BigReal& a) {
  BigReal r(a.prec());
  mpfr_sin(r.get(), a.get(), MPFR_RNDN);
  return r;
}
BigReal cos(const BigReal& a) {
  BigReal r(a.prec());
  mpfr_cos(r.get(), a.get(), MPFR_RNDN);
  return r;
}
BigReal atan2(const BigReal& y, const BigReal& x) {
  BigReal r(pmax(y, x));
  mpfr_atan2(r.get(), y.get(), x.get(), MPFR_RNDN);
  return r;
}
BigReal pow(const BigReal& a, long n) {
  BigReal r(a.prec());
  mpfr_pow_si(r.get(), a.get(), n, MPFR_RNDN);
  return r;
}
BigReal mul(const BigReal& a, const BigInt& b) {
  BigReal r(a.prec());
  mpfr_mul_z(r.get(), a.get(), b.get_mpz_t(), MPFR_RNDN);
  return r;
}
BigReal div(const BigReal& a, const BigInt& b) {
  BigReal r(a.prec());
  mpfr_div_z(r.get(), a.get(), b.get_mpz_t(), MPFR_RNDN);
  return r;
}

BigReal const_pi(mpfr_prec_t prec) {
  BigReal r(prec);
  mpfr_const_pi(r.get(), MPFR_RNDN);
  return r;
}
BigReal const_log2(mpfr_prec_t prec) {
  BigReal r(prec);
  mpfr_const_log2(r.get(), MPFR_RNDN);
  return r;
}
BigReal euler_gamma_mpfr(mpfr_prec_t prec) {
  BigReal r(prec);
  mpfr_const_euler(r.get(), MPFR_RNDN);
  return r;
}

// Bessel-ratio iteration: gamma = A/B - ln n + O(e^{-4n}) with
// A = sum t_j H_j, B = sum t_j, t_j = (n^j / j!)^2. The tail criterion
// t_j (H_j + 1) < eps B keeps the truncation below the target. Terms peak
// near j = 2n, so the loop budget 8n + 64 can only trip on a logic error.
BigReal euler_gamma_bessel(int digits) {
  if (digits < 1) throw DomainError("euler_gamma_bessel needs digits >= 1");
  const long n = static_cast<long>(std::ceil(0.25 * 2.302585092994046 * (digits + 10))) + 2;
  const mpfr_prec_t prec = bits_for_digits(digits + 15);

  BigReal t(1L, prec), h(prec), a(prec), b(1L, prec);
  BigReal eps(1L, prec);
  mpfr_mul_2si(eps.get(), eps.get(), 0, MPFR_RNDN);
  {
    BigReal ten(10L, prec);
    eps = pow(ten, -(digits + 12));
  }
  const long budget = 8 * n + 64;
  for (long j = 1;; ++j) {
    if (j > budget)
      throw ConvergenceError("euler constant iteration exceeded its budget");
    t = t * (n * n);
    t = t / (j * j);
    h = h + BigReal(1L, prec) / j;
    a = a + t * h;
    b = b + t;
    if (j > n) {
      BigReal gate = t * (h + 1L);
      if (gate < eps * b) break;
    }
  }
  BigReal ln_n(prec);
  mpfr_log_ui(ln_n.get(), static_cast<unsigned long>(n), MPFR_RNDN);
  return a / b - ln_n;
}

BigReal euler_gamma(const PrecisionContext& ctx) {
  const int d = ctx.total_digits();
  BigReal a = euler_gamma_mpfr(bits_for_digits(d + 5));
  BigReal b = euler_gamma_bessel(d + 5);
  if (agreement_digits(a, b) < d)
    throw PrecisionError("euler constant cross-check disagreed");
  BigReal out(ctx.bits());
  mpfr_set(out.get(), a.get(), MPFR_RNDN);
  return out;
}

namespace {

std::string format_digits(mpfr_srcptr v, size_t request) {
  if (mpfr_nan_p(v) || mpfr_inf_p(v))
    throw DomainError("cannot serialize a non-finite value");
  if (mpfr_zero_p(v)) return "0";
  mpfr_exp_t e;
  char* raw = mpfr_get_str(nullptr, &e, 10, request, v, MPFR_RNDN);
  if (!raw) throw Error("mpfr_get_str failed");
  std::string digits(raw);
  mpfr_free_str(raw);
  const bool neg = !digits.empty() && digits[0] == '-';
  std::string mant = neg ? digits.substr(1) : digits;
  const size_t last = mant.find_last_not_of('0');
  mant = mant.substr(0, last == std::string::npos ? 1 : last + 1);
  std::string out = neg ? "-" : "";
  out += mant[0];
  if (mant.size() > 1) {
    out += '.';
    out += mant.substr(1);
  }
  out += 'e';
  const long ee = static_cast<long>(e) - 1;
  if (ee >= 0) out += '+';
  out += std::to_string(ee);
  return out;
}

}  // namespace

std::string to_string(const BigReal& v) { return format_digits(v.get(), 0); }

std::string to_string_digits(const BigReal& v, int digits) {
  if (digits < 2) throw DomainError("decimal rendering needs >= 2 digits");
  return format_digits(v.get(), static_cast<size_t>(digits));
}

BigReal from_string(const std::string& text, mpfr_prec_t prec) {
  if (text.empty()) throw ParseError("empty numeric field");
  BigReal r(prec);
  if (mpfr_set_str(r.get(), text.c_str(), 10, MPFR_RNDN) != 0)
    throw ParseError("unparseable numeric field: '" + text + "'");
  return r;
}

BigReal round_to_digits(const BigReal& v, int digits) {
  if (v.is_zero()) return BigReal(bits_for_digits(digits));
  return from_string(to_string_digits(v, digits), bits_for_digits(digits));
}

int agreement_digits(const BigReal& a, const BigReal& b) {
  const int cap = digits_for_bits(std::min(a.prec(), b.prec()));
  BigReal d = abs(a - b);
  if (d.is_zero()) return cap;
  BigReal sa = abs(a), sb = abs(b);
  const BigReal& scale = sa < sb ? sb : sa;
  BigReal q(64);
  mpfr_div(q.get(), scale.get(), d.get(), MPFR_RNDN);
  mpfr_log10(q.get(), q.get(), MPFR_RNDN);
  const double lg = q.to_double();
  const int est = static_cast<int>(std::floor(lg));
  return std::min(est, cap);
}

BigComplex operator+(const BigComplex& a, const BigComplex& b) {
  return {a.re + b.re, a.im + b.im};
}
BigComplex operator-(const BigComplex& a, const BigComplex& b) {
  return {a.re - b.re, a.im - b.im};
}
BigComplex operator*(const BigComplex& a, const BigComplex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
BigComplex operator/(const BigComplex& a, const BigComplex& b) {
  BigReal n = norm(b);
  BigComplex t = a * conj(b);
  return {t.re / n, t.im / n};
}
BigComplex operator-(const BigComplex& a) { return {-a.re, -a.im}; }
BigComplex operator+(const BigComplex& a, const BigReal& b) {
  return {a.re + b, a.im};
}
BigComplex operator-(const BigComplex& a, const BigReal& b) {
  return {a.re - b, a.im};
}
BigComplex operator*(const BigComplex& a, const BigReal& b) {
  return {a.re * b, a.im * b};
}
BigComplex operator/(const BigComplex& a, const BigReal& b) {
  return {a.re / b, a.im / b};
}
BigComplex operator+(const BigComplex& a, long b) { return {a.re + b, a.im}; }
BigComplex operator-(const BigComplex& a, long b) { return {a.re - b, a.im}; }
BigComplex operator*(const BigComplex& a, long b) { return {a.re * b, a.im * b}; }
BigComplex operator/(const BigComplex& a, long b) { return {a.re / b, a.im / b}; }

BigComplex conj(const BigComplex& a) { return {a.re, -a.im}; }
BigReal norm(const BigComplex& a) { return a.re * a.re + a.im * a.im; }
BigReal abs(const BigComplex& a) {
  BigReal r(a.prec());
  mpfr_hypot(r.get(), a.re.get(), a.im.get(), MPFR_RNDN);
  return r;
}
BigReal arg(const BigComplex& a) { return atan2(a.im, a.re); }
BigComplex exp(const BigComplex& a) {
  BigReal m = exp(a.re);
  BigReal c(a.prec()), s(a.prec());
  mpfr_sin_cos(s.get(), c.get(), a.im.get(), MPFR_RNDN);
  return {m * c, m * s};
}
BigComplex log(const BigComplex& a) {
  if (a.is_zero()) throw DomainError("log of zero");
  return {log(abs(a)), arg(a)};
}
BigComplex inv(const BigComplex& a) {
  BigReal n = norm(a);
  return {a.re / n, -a.im / n};
}
BigComplex pow(const BigComplex& a, long n) {
  if (n < 0) return inv(pow(a, -n));
  BigComplex acc(1, 0, a.prec());
  BigComplex base = a;
  unsigned long e = static_cast<unsigned long>(n);
  while (e) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

std::string to_string(const BigComplex& v) {
  std::string out = to_string(v.re);
  if (v.im.is_zero()) return out;
  out += (v.im.sign() < 0) ? "-" : "+";
  out += to_string(abs(v.im));
  out += 'i';
  return out;
}

BigComplex from_string_complex(const std::string& text, mpfr_prec_t prec) {
  if (text.empty()) throw ParseError("empty complex field");
  // Split at the last top-level +/- that is not an exponent sign.
  size_t split = std::string::npos;
  for (size_t i = 1; i < text.size(); ++i) {
    const char c = text[i];
    if ((c == '+' || c == '-') && text[i - 1] != 'e' && text[i - 1] != 'E')
      split = i;
  }
  auto parse_part = [prec](std::string part, bool imag) {
    if (imag) {
      if (part.empty() || part.back() != 'i')
        throw ParseError("imaginary part must end in 'i'");
      part.pop_back();
      if (part.empty() || part == "+") part = "1";
      if (part == "-") part = "-1";
    }
    return from_string(part, prec);
  };
  if (!text.empty() && text.back() == 'i') {
    if (split == std::string::npos)
      return {BigReal(prec), parse_part(text, true)};
    return {from_string(text.substr(0, split), prec),
            parse_part(text.substr(split), true)};
  }
  if (split != std::string::npos)
    throw ParseError("trailing real part in complex literal: '" + text + "'");
  return {from_string(text, prec), BigReal(prec)};
}

std::vector<BigRational> bernoulli_even(int count) {
  if (count < 0) throw DomainError("bernoulli_even needs count >= 0");
  std::vector<BigRational> out;
  out.reserve(count + 1);
  out.emplace_back(1);
  if (count == 0) return out;
  // Tangent numbers by the integer triangle; B_{2n} follows from
  // B_{2n} = (-1)^{n-1} 2n T_n / (4^n (4^n - 1)).
  std::vector<BigInt> t(count + 1);
  t[1] = 1;
  for (int k = 2; k <= count; ++k) t[k] = t[k - 1] * (k - 1);
  for (int k = 2; k <= count; ++k)
    for (int j = k; j <= count; ++j)
      t[j] = t[j - 1] * (j - k) + t[j] * (j - k + 2);
  BigInt four_n = 1;
  for (int n = 1; n <= count; ++n) {
    four_n *= 4;
    BigInt num = t[n] * (2 * n);
    if (n % 2 == 0) num = -num;
    BigRational b(num, four_n * (four_n - 1));
    b.canonicalize();
    out.push_back(b);
  }
  return out;
}

BigInt binomial(unsigned long n, unsigned long k) {
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

BigInt factorial(unsigned long n) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

void parallel_for(std::size_t total, int threads,
                  const std::function<void(std::size_t)>& fn) {
  if (threads < 1) threads = 1;
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(threads), total);
  if (workers <= 1) {
    for (std::size_t i = 0; i < total; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= total) break;
          fn(i);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace keli

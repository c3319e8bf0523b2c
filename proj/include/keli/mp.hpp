#pragma once

// Multiprecision kernel: precision bookkeeping, real/complex scalars on top
// of MPFR, exact integers/rationals on top of GMP, Bernoulli numbers, and
// the digit-agreement estimator used for significance reporting.
//
// Summation convention used throughout the library: series are accumulated
// as a left fold in ascending index order, so every run produces bit-identical
// results for identical inputs and precision.

#include <gmp.h>
#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace keli {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input outside a documented domain (poles, bad radii, bad sample counts).
struct DomainError : Error {
  using Error::Error;
};

// A dual-configuration consistency check disagreed: the requested precision
// cannot be certified.
struct PrecisionError : Error {
  using Error::Error;
};

// An iteration exceeded its step budget or a series failed to shrink.
struct ConvergenceError : Error {
  using Error::Error;
};

struct FormatError : Error {
  using Error::Error;
};
struct VersionError : FormatError {
  using FormatError::FormatError;
};
struct TruncationError : FormatError {
  using FormatError::FormatError;
};
struct ParseError : FormatError {
  using FormatError::FormatError;
};

struct InsufficientDataError : Error {
  using Error::Error;
};

using BigInt = mpz_class;
using BigRational = mpq_class;

// Decimal <-> binary sizing. bits_for_digits adds slack so that a value
// carrying `digits` decimal digits survives a string round trip unchanged.
mpfr_prec_t bits_for_digits(int digits);
int digits_for_bits(mpfr_prec_t bits);

struct PrecisionContext {
  int working_digits = 0;
  int guard_digits = 0;

  int total_digits() const { return working_digits + guard_digits; }
  mpfr_prec_t bits() const { return bits_for_digits(total_digits()); }
};

// guard defaults to max(10, working/20); working < 30 is refused.
PrecisionContext make_context(int working_digits);
PrecisionContext make_context(int working_digits, int guard_digits);

class BigReal {
public:
  explicit BigReal(mpfr_prec_t prec = 64) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
  }
  BigReal(long value, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_si(v_, value, MPFR_RNDN);
  }
  BigReal(const BigInt& value, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_z(v_, value.get_mpz_t(), MPFR_RNDN);
  }
  BigReal(const BigRational& value, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_q(v_, value.get_mpq_t(), MPFR_RNDN);
  }
  BigReal(const BigReal& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  BigReal(BigReal&& o) noexcept {
    mpfr_init2(v_, 2);
    mpfr_swap(v_, o.v_);
  }
  BigReal& operator=(const BigReal& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  BigReal& operator=(BigReal&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~BigReal() { mpfr_clear(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }

  bool is_zero() const { return mpfr_zero_p(v_); }
  int sign() const { return mpfr_sgn(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }

  // Approximate decimal exponent: value ~ 10^result. Zero yields a large
  // negative sentinel so magnitude scans treat it as negligible.
  long exponent10() const;

  friend void swap(BigReal& a, BigReal& b) { mpfr_swap(a.v_, b.v_); }

private:
  mpfr_t v_;
};

// Arithmetic results carry max(operand precisions).
BigReal operator+(const BigReal& a, const BigReal& b);
BigReal operator-(const BigReal& a, const BigReal& b);
BigReal operator*(const BigReal& a, const BigReal& b);
BigReal operator/(const BigReal& a, const BigReal& b);
BigReal operator-(const BigReal& a);
BigReal operator+(const BigReal& a, long b);
BigReal operator-(const BigReal& a, long b);
BigReal operator*(const BigReal& a, long b);
BigReal operator/(const BigReal& a, long b);
BigReal operator*(long a, const BigReal& b);

int cmp(const BigReal& a, const BigReal& b);
inline bool operator<(const BigReal& a, const BigReal& b) { return cmp(a, b) < 0; }
inline bool operator>(const BigReal& a, const BigReal& b) { return cmp(a, b) > 0; }
inline bool operator<=(const BigReal& a, const BigReal& b) { return cmp(a, b) <= 0; }
inline bool operator>=(const BigReal& a, const BigReal& b) { return cmp(a, b) >= 0; }
inline bool operator==(const BigReal& a, const BigReal& b) { return mpfr_equal_p(a.get(), b.get()) != 0; }
inline bool operator!=(const BigReal& a, const BigReal& b) { return !(a == b); }

BigReal abs(const BigReal& a);
BigReal sqrt(const BigReal& a);
BigReal log(const BigReal& a);
BigReal exp(const BigReal& a);
BigReal sin(const BigReal& a);
BigReal cos(const BigReal& a);
BigReal atan2(const BigReal& y, const BigReal& x);
BigReal pow(const BigReal& a, long n);
BigReal mul(const BigReal& a, const BigInt& b);
BigReal div(const BigReal& a, const BigInt& b);

BigReal const_pi(mpfr_prec_t prec);
BigReal const_log2(mpfr_prec_t prec);

// Euler's constant two ways: the library routine and an independent
// Bessel-ratio iteration. euler_gamma cross-checks them against each other
// to the context's total digits and throws PrecisionError on disagreement.
BigReal euler_gamma_mpfr(mpfr_prec_t prec);
BigReal euler_gamma_bessel(int digits);
BigReal euler_gamma(const PrecisionContext& ctx);

// Exact-round-trip decimal serialization. Output is scientific notation with
// lowercase 'e' and a signed exponent ("-5.775...e-3"); zero prints as "0".
// Parsing the string back at the same precision restores the value bit for
// bit. Serializing NaN or infinity throws DomainError.
std::string to_string(const BigReal& v);
BigReal from_string(const std::string& text, mpfr_prec_t prec);

// Decimal truncation to `digits` significant digits (used for display and
// for the reduced-precision significance rerun).
BigReal round_to_digits(const BigReal& v, int digits);
std::string to_string_digits(const BigReal& v, int digits);

// Digits of agreement between two values: floor(-log10(|a-b| / scale)) with
// scale = max(|a|, |b|). Equal values saturate at the precision's capacity.
// The result may be <= 0 when the values differ in their leading digit.
int agreement_digits(const BigReal& a, const BigReal& b);

struct BigComplex {
  BigReal re, im;

  explicit BigComplex(mpfr_prec_t prec = 64) : re(prec), im(prec) {}
  BigComplex(BigReal r, BigReal i) : re(std::move(r)), im(std::move(i)) {}
  BigComplex(long r, long i, mpfr_prec_t prec) : re(r, prec), im(i, prec) {}

  mpfr_prec_t prec() const { return std::max(re.prec(), im.prec()); }
  bool is_zero() const { return re.is_zero() && im.is_zero(); }
};

BigComplex operator+(const BigComplex& a, const BigComplex& b);
BigComplex operator-(const BigComplex& a, const BigComplex& b);
BigComplex operator*(const BigComplex& a, const BigComplex& b);
BigComplex operator/(const BigComplex& a, const BigComplex& b);
BigComplex operator-(const BigComplex& a);
BigComplex operator+(const BigComplex& a, const BigReal& b);
BigComplex operator-(const BigComplex& a, const BigReal& b);
BigComplex operator*(const BigComplex& a, const BigReal& b);
BigComplex operator/(const BigComplex& a, const BigReal& b);
BigComplex operator+(const BigComplex& a, long b);
BigComplex operator-(const BigComplex& a, long b);
BigComplex operator*(const BigComplex& a, long b);
BigComplex operator/(const BigComplex& a, long b);

BigComplex conj(const BigComplex& a);
BigReal abs(const BigComplex& a);
BigReal norm(const BigComplex& a);  // |a|^2
BigReal arg(const BigComplex& a);
BigComplex exp(const BigComplex& a);
// Principal branch: imaginary part in (-pi, pi].
BigComplex log(const BigComplex& a);
BigComplex pow(const BigComplex& a, long n);
BigComplex inv(const BigComplex& a);

std::string to_string(const BigComplex& v);
// Accepts "a", "bi", "a+bi", "a-bi" with each part in the real format above.
BigComplex from_string_complex(const std::string& text, mpfr_prec_t prec);

// B_0, B_2, ..., B_{2*count} as exact rationals (odd-index entries vanish
// beyond B_1 and are not stored). Computed through the tangent-number
// triangle, which stays in integer arithmetic until the final division.
std::vector<BigRational> bernoulli_even(int count);

BigInt binomial(unsigned long n, unsigned long k);
BigInt factorial(unsigned long n);

// Runs fn(i) for i in [0, total) on up to `threads` workers. Work items are
// independent; callers collect results by index, so the outcome does not
// depend on the worker count.
void parallel_for(std::size_t total, int threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace keli

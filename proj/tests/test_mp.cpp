#include "doctest.h"
#include "keli/mp.hpp"

#include <set>
#include <string>
#include <vector>

using namespace keli;

TEST_CASE("context construction enforces the floor and the guard rule") {
  CHECK_THROWS_AS(make_context(29), DomainError);
  CHECK_THROWS_AS(make_context(0), DomainError);
  auto a = make_context(30);
  CHECK(a.working_digits == 30);
  CHECK(a.guard_digits == 10);
  auto b = make_context(600);
  CHECK(b.guard_digits == 30);
  CHECK(b.total_digits() == 630);
  auto c = make_context(100, 7);
  CHECK(c.guard_digits == 7);
  CHECK(c.bits() >= bits_for_digits(107));
}

TEST_CASE("bit sizing leaves room for a decimal round trip") {
  CHECK(bits_for_digits(1) > 3);
  CHECK(bits_for_digits(100) >= 333);
  CHECK(digits_for_bits(bits_for_digits(50)) >= 50);
  CHECK_THROWS_AS(bits_for_digits(0), DomainError);
}

TEST_CASE("real arithmetic carries the wider operand precision") {
  BigReal a(3L, 100), b(7L, 300);
  CHECK((a + b).prec() == 300);
  CHECK((a * b).prec() == 300);
  CHECK((a / b).prec() == 300);
  BigReal q = BigReal(1L, 200) / 3L;
  CHECK(q.prec() == 200);
  CHECK(q.to_double() == doctest::Approx(1.0 / 3.0));
  CHECK((-q).sign() == -1);
}

TEST_CASE("serialization round trips exactly at matching precision") {
  for (int k = 1; k <= 120; ++k) {
    const mpfr_prec_t prec = 70 + 37 * (k % 17);
    BigReal v = sin(BigReal(k, prec));
    v = v * pow(BigReal(10L, prec), (k % 41) - 20);
    if (k % 3 == 0) v = -v;
    const std::string s = to_string(v);
    BigReal back = from_string(s, prec);
    CHECK(mpfr_equal_p(back.get(), v.get()));
  }
}

TEST_CASE("serialization format is signed scientific with lowercase e") {
  BigReal v = from_string("-5.7750712e-3", bits_for_digits(30));
  const std::string s = to_string(v);
  CHECK(s.substr(0, 5) == "-5.77");
  CHECK(s.find("e-3") != std::string::npos);
  CHECK(to_string(BigReal(200)) == "0");
  CHECK(to_string(BigReal(42L, 100)) == "4.2e+1");
  CHECK_THROWS_AS(from_string("12q3", 100), ParseError);
  CHECK_THROWS_AS(from_string("", 100), ParseError);
  BigReal inf(64);
  mpfr_set_inf(inf.get(), 1);
  CHECK_THROWS_AS(to_string(inf), DomainError);
}

TEST_CASE("decimal truncation keeps the requested digit count") {
  BigReal pi = const_pi(bits_for_digits(120));
  BigReal r = round_to_digits(pi, 20);
  CHECK(agreement_digits(pi, r) >= 19);
  CHECK(agreement_digits(pi, r) <= 21);
  const std::string s = to_string_digits(pi, 10);
  CHECK(s.substr(0, 11) == "3.141592654");
}

TEST_CASE("agreement estimator matches constructed digit overlaps") {
  const mpfr_prec_t prec = bits_for_digits(200);
  BigReal one(1L, prec);
  BigReal eps = pow(BigReal(10L, prec), -40);
  CHECK(agreement_digits(one, one + eps) == 40);
  CHECK(agreement_digits(one, one) >= 190);
  CHECK(agreement_digits(one, -one) <= 0);
  CHECK(agreement_digits(one, one * 2L) <= 1);
}

TEST_CASE("bernoulli numbers match the classical table") {
  auto b = bernoulli_even(6);
  REQUIRE(b.size() == 7);
  CHECK(b[0] == BigRational(1));
  CHECK(b[1] == BigRational(1, 6));
  CHECK(b[2] == BigRational(-1, 30));
  CHECK(b[3] == BigRational(1, 42));
  CHECK(b[6] == BigRational(-691, 2730));
}

TEST_CASE("bernoulli numbers satisfy the defining recurrence") {
  const int m = 40;
  auto even = bernoulli_even(m);
  // Rebuild the full sequence (B_1 = -1/2, higher odd entries vanish).
  std::vector<BigRational> full(2 * m + 1);
  full[1] = BigRational(-1, 2);
  for (int i = 0; i <= m; ++i) full[2 * i] = even[i];
  for (int n = 1; n <= 2 * m - 1; ++n) {
    BigRational s(0);
    for (int k = 0; k <= n; ++k)
      s += BigRational(binomial(n + 1, k)) * full[k];
    CHECK(s == BigRational(0));
  }
}

TEST_CASE("bernoulli denominators obey von Staudt-Clausen") {
  const int m = 30;
  auto even = bernoulli_even(m);
  const std::vector<long> primes = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                                    31, 37, 41, 43, 47, 53, 59, 61};
  for (int n = 1; n <= m; ++n) {
    BigRational s = even[n];
    for (long p : primes)
      if ((2 * n) % (p - 1) == 0) s += BigRational(1, p);
    CHECK(s.get_den() == 1);
  }
}

TEST_CASE("euler constant routes agree to the requested digits") {
  BigReal a = euler_gamma_mpfr(bits_for_digits(130));
  BigReal b = euler_gamma_bessel(130);
  CHECK(agreement_digits(a, b) >= 128);
  auto g = euler_gamma(make_context(60));
  CHECK(to_string_digits(g, 12).substr(0, 12) == "5.7721566490");
}

TEST_CASE("complex arithmetic and principal-branch functions") {
  const mpfr_prec_t prec = bits_for_digits(80);
  BigComplex a(1, 2, prec), b(3, 4, prec);
  BigComplex p = a * b;
  CHECK(p.re.to_long() == -5);
  CHECK(p.im.to_long() == 10);
  BigComplex q = p / b;
  CHECK(agreement_digits(q.re, a.re) >= 75);
  CHECK(agreement_digits(q.im, a.im) >= 75);

  BigComplex ipi(BigReal(prec), const_pi(prec));
  BigComplex m1 = exp(ipi);
  CHECK(agreement_digits(m1.re, BigReal(-1L, prec)) >= 75);
  CHECK(m1.im.exponent10() < -70);

  BigComplex z(BigReal(5L, prec) / 7L, BigReal(-3L, prec) / 11L);
  BigComplex lz = log(exp(z));
  CHECK(agreement_digits(lz.re, z.re) >= 75);
  CHECK(agreement_digits(lz.im, z.im) >= 75);

  // Branch cut: the argument of a negative real lands at +pi.
  BigComplex neg(-2, 0, prec);
  CHECK(agreement_digits(arg(neg), const_pi(prec)) >= 75);

  BigComplex w = pow(z, 9);
  BigComplex w2(1, 0, prec);
  for (int i = 0; i < 9; ++i) w2 = w2 * z;
  CHECK(agreement_digits(w.re, w2.re) >= 70);
  CHECK(agreement_digits(abs(pow(z, -3)), pow(abs(z), -3)) >= 70);
}

TEST_CASE("complex literals parse in all accepted shapes") {
  const mpfr_prec_t prec = bits_for_digits(40);
  auto z1 = from_string_complex("1.5", prec);
  CHECK(z1.im.is_zero());
  auto z2 = from_string_complex("-2.5i", prec);
  CHECK(z2.re.is_zero());
  CHECK(z2.im.to_double() == -2.5);
  auto z3 = from_string_complex("1e-2+3.25i", prec);
  CHECK(z3.re.to_double() == 0.01);
  CHECK(z3.im.to_double() == 3.25);
  auto z4 = from_string_complex("0.5-1e-3i", prec);
  CHECK(z4.im.to_double() == -0.001);
  auto z5 = from_string_complex("i", prec);
  CHECK(z5.im.to_double() == 1.0);
  CHECK_THROWS_AS(from_string_complex("1+2", prec), ParseError);
  CHECK(to_string(BigComplex(1, -2, prec)) == "1e+0-2e+0i");
}

TEST_CASE("parallel driver covers every index exactly once") {
  const std::size_t n = 503;
  std::vector<int> hits(n, 0);
  parallel_for(n, 4, [&](std::size_t i) { hits[i] += 1; });
  for (auto h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(
      parallel_for(8, 3, [](std::size_t i) {
        if (i == 5) throw DomainError("boom");
      }),
      DomainError);
}

TEST_CASE("binomials and factorials are exact") {
  CHECK(binomial(52, 5) == 2598960);
  CHECK(binomial(3, 7) == 0);
  CHECK(factorial(20) == BigInt("2432902008176640000"));
}

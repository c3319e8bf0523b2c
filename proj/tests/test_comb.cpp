#include "doctest.h"
#include "keli/comb.hpp"

#include <map>

using namespace keli;

TEST_CASE("stirling triangle satisfies the classical identities") {
  auto tri = stirling_triangle(60);
  CHECK(tri.at(3, 0) == 0);
  CHECK(tri.at(3, 1) == 2);
  CHECK(tri.at(3, 2) == -3);
  CHECK(tri.at(3, 3) == 1);
  for (int k = 1; k <= 60; ++k) {
    BigInt unsigned_sum(0), signed_sum(0);
    for (int i = 0; i <= k; ++i) {
      unsigned_sum += abs(tri.at(k, i));
      signed_sum += tri.at(k, i);
    }
    CHECK(unsigned_sum == factorial(k));
    if (k >= 2) CHECK(signed_sum == 0);
    CHECK(tri.at(k, k) == 1);
    BigInt lead = factorial(k - 1);
    if (k % 2 == 0) lead = -lead;
    CHECK(tri.at(k, 1) == lead);
  }
  CHECK_THROWS_AS(tri.at(61, 0), DomainError);
  CHECK_THROWS_AS(tri.at(5, 6), DomainError);
}

TEST_CASE("omega vanishes at nodes and matches between exact and float") {
  for (int j = 1; j <= 5; ++j)
    CHECK(omega_eval(5, BigRational(1, j)) == BigRational(0));
  CHECK(omega_eval(1, BigRational(1, 2)) == BigRational(1, 4));
  // (5/6-1)(1-5/6-1)(5/6-1/2)(1-5/6-1/2) = omega_2(5/6)
  CHECK(omega_eval(2, BigRational(5, 6)) == BigRational(-5, 324));

  const mpfr_prec_t p = bits_for_digits(50);
  BigRational q(7, 9);
  BigReal approx = omega_eval(8, BigReal(q, p));
  CHECK(agreement_digits(approx, BigReal(omega_eval(8, q), p)) >= 48);
}

TEST_CASE("closed-form inverse entries match the hand table") {
  using R = BigRational;
  CHECK(c_coeff(1, 1) == R(-4));
  CHECK(c_coeff(2, 1) == R(144));
  CHECK(c_coeff(2, 2) == R(-162));
  CHECK(c_coeff(3, 1) == R(-2304));
  CHECK(c_coeff(3, 2) == R(23328, 5));
  CHECK(c_coeff(3, 3) == R(-12288, 5));
  CHECK(c_coeff(4, 1) == R(25600));
  CHECK(c_coeff(4, 2) == R(-524880, 7));
  CHECK(c_coeff(4, 3) == R(983040, 11));
  CHECK(c_coeff(4, 4) == R(-3125000, 77));
  CHECK(c_coeff(5, 1) == R(-230400));
  CHECK(c_coeff(5, 2) == R(6298560, 7));
  CHECK(c_coeff(5, 3) == R(-141557760, 77));
  CHECK(c_coeff(5, 4) == R(2812500000L, 1463));
  CHECK(c_coeff(5, 5) == R(-100776960, 133));
  CHECK_THROWS_AS(c_coeff(3, 4), DomainError);
  CHECK_THROWS_AS(c_coeff(0, 0), DomainError);
}

TEST_CASE("system row five carries the expected rationals") {
  auto a = omega_system_matrix(5);
  REQUIRE(a.size() == 5);
  REQUIRE(a[4].size() == 5);
  CHECK(a[4][0] == BigRational(-5, 36));
  CHECK(a[4][1] == BigRational(-5, 324));
  CHECK(a[4][2] == BigRational(-5, 3888));
  CHECK(a[4][3] == BigRational(-35, 559872));
  CHECK(a[4][4] == BigRational(-133, 100776960));
}

TEST_CASE("triangular inversion reproduces the closed form exactly") {
  const int kmax = 20;
  auto inv = omega_system_inverse(kmax);
  for (int k = 1; k <= kmax; ++k)
    for (int j = 1; j <= k; ++j)
      CHECK(inv[k - 1][j - 1] == c_coeff(k, j));
}

TEST_CASE("chi rows match the hand table and the reference expansion") {
  auto tri = stirling_triangle(10);
  const std::map<int, std::map<int, long>> expected{
      {1, {{1, 1}}},
      {2, {{1, 2}, {3, 4}}},
      {3, {{1, 44}, {3, 160}, {5, 36}}},
      {4, {{1, 3624}, {3, 18144}, {5, 7896}, {7, 576}}},
  };
  for (const auto& [k, row] : expected) {
    auto fast = chi_row(k, tri);
    for (const auto& [q, v] : row) CHECK(fast.at_q(q) == v);
  }
  for (int k = 1; k <= 8; ++k) {
    auto fast = chi_row(k, tri);
    auto ref = chi_row_reference(k, tri);
    REQUIRE(fast.chi.size() == ref.chi.size());
    for (size_t i = 0; i < fast.chi.size(); ++i) CHECK(fast.chi[i] == ref.chi[i]);
    CHECK(fast.chi.back() == factorial(k) * factorial(k));
  }
  auto r3 = chi_row(3, tri);
  CHECK_THROWS_AS(r3.at_q(2), DomainError);
  CHECK_THROWS_AS(r3.at_q(7), DomainError);
  CHECK_THROWS_AS(chi_row(11, tri), DomainError);
}

TEST_CASE("beta polynomial equals the direct binomial sum for all tested n") {
  auto tri = stirling_triangle(10);
  for (int k = 1; k <= 10; ++k) {
    auto bp = beta_poly(k, chi_row(k, tri));
    for (long n = 1; n <= 25; ++n)
      CHECK(beta_eval(bp, n) == beta_direct(n, k, tri));
  }
}

TEST_CASE("low-order beta polynomials have the expected exact form") {
  auto tri = stirling_triangle(3);
  auto b1 = beta_poly(1, chi_row(1, tri));
  REQUIRE(b1.coeff.size() == 1);
  CHECK(b1.coeff[0] == BigRational(1));       // beta_{n1} = n^2
  CHECK(beta_eval(b1, 7) == BigRational(49));
  auto b2 = beta_poly(2, chi_row(2, tri));
  CHECK(b2.coeff[0] == BigRational(1, 12));   // beta_{n2} = n^2/12 + n^4/6
  CHECK(b2.coeff[1] == BigRational(1, 6));
  CHECK(beta_eval(b2, 1) == BigRational(1, 4));
  CHECK_THROWS_AS(beta_eval(b1, 0), DomainError);
}

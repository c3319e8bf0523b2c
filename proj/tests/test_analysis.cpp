#include "doctest.h"
#include "keli/analysis.hpp"

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "keli/lambda_series.hpp"

using namespace keli;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/keli_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

void write_file(const std::string& path, const std::string& body) {
  std::ofstream f(path);
  f << body;
}

const std::vector<BigReal>& ordinates() {
  static std::vector<BigReal> gs =
      load_zeta_zeros(std::string(KELI_SOURCE_DIR) + "/data/gamma.txt");
  return gs;
}

const ZeroTable& fixture() {
  static ZeroTable t =
      load_zero_table(std::string(KELI_SOURCE_DIR) + "/data/paper_zeros.csv");
  return t;
}

std::vector<BigComplex> integer_sequence(const std::vector<long>& xs,
                                         mpfr_prec_t prec) {
  std::vector<BigComplex> out;
  for (long x : xs) out.emplace_back(BigReal(x, prec), BigReal(prec));
  return out;
}

}  // namespace

TEST_CASE("ordinate loader reads the published list") {
  const auto& gs = ordinates();
  REQUIRE(gs.size() == 100);
  BigReal first = from_string("14.1347251417346937904572520", 200);
  BigReal last = from_string("236.524229665816205802475508", 200);
  CHECK(agreement_digits(gs.front(), first) >= 26);
  CHECK(agreement_digits(gs.back(), last) >= 26);
  for (std::size_t j = 1; j < gs.size(); ++j) CHECK(gs[j - 1] < gs[j]);

  // comments and blank lines are ignored, inline comments stripped
  TempFile ok("gamma_ok.txt");
  write_file(ok.path, "# header\n\n15.5\n16.25 # tail note\n");
  auto small = load_zeta_zeros(ok.path);
  REQUIRE(small.size() == 2);
  CHECK(small[1] == BigReal(BigRational(65, 4), 64));
}

TEST_CASE("ordinate loader rejections") {
  TempFile down("gamma_down.txt");
  write_file(down.path, "15.1\n17.3\n16.2\n");
  CHECK_THROWS_AS(load_zeta_zeros(down.path), ParseError);

  TempFile low("gamma_low.txt");
  write_file(low.path, "12.5\n21.0\n");
  CHECK_THROWS_AS(load_zeta_zeros(low.path), ParseError);

  TempFile junk("gamma_junk.txt");
  write_file(junk.path, "14.13\nnot-a-number\n");
  CHECK_THROWS_AS(load_zeta_zeros(junk.path), ParseError);

  TempFile empty("gamma_empty.txt");
  write_file(empty.path, "# nothing here\n");
  CHECK_THROWS_AS(load_zeta_zeros(empty.path), ParseError);

  CHECK_THROWS_AS(load_zeta_zeros("/tmp/keli_no_such_file.txt"), ParseError);
}

TEST_CASE("forward differences match hand values") {
  auto seq = integer_sequence({1, 2, 3}, 64);
  auto d1 = finite_difference(seq, 1, DiffNormalization::none);
  CHECK(d1.order == 1);
  CHECK(d1.normalization == DiffNormalization::none);
  REQUIRE(d1.values.size() == 2);
  CHECK(d1.values[0].re == BigReal(1, 64));
  CHECK(d1.values[1].re == BigReal(1, 64));
  CHECK(d1.values[0].im.is_zero());

  auto pow2seq = integer_sequence({1, 2, 4, 8}, 64);
  auto d2 = finite_difference(pow2seq, 2, DiffNormalization::none);
  REQUIRE(d2.values.size() == 2);
  CHECK(d2.values[0].re == BigReal(1, 64));
  CHECK(d2.values[1].re == BigReal(2, 64));

  auto d2n = finite_difference(pow2seq, 2, DiffNormalization::pow2);
  CHECK(d2n.normalization == DiffNormalization::pow2);
  CHECK(d2n.values[0].re == BigReal(BigRational(1, 4), 64));
  CHECK(d2n.values[1].re == BigReal(BigRational(1, 2), 64));

  CHECK_THROWS_AS(finite_difference(seq, 3, DiffNormalization::none),
                  DomainError);
  CHECK_THROWS_AS(finite_difference(seq, 0, DiffNormalization::none),
                  DomainError);
}

TEST_CASE("polynomial sequences are annihilated exactly") {
  std::vector<BigComplex> cubic;
  for (long i = 0; i < 12; ++i) {
    long v = 2 * i * i * i - 7 * i + 5;
    cubic.emplace_back(BigReal(v, 64), BigReal(64));
  }
  auto killed = finite_difference(cubic, 4, DiffNormalization::none);
  for (const auto& z : killed.values) CHECK(z.is_zero());
  auto constant = finite_difference(cubic, 3, DiffNormalization::none);
  for (const auto& z : constant.values) {
    CHECK(z.re == BigReal(12, 64));  // 2 * 3!
    CHECK(z.im.is_zero());
  }

  // degree 49, entries far beyond double range but exactly representable
  const mpfr_prec_t prec = bits_for_digits(130);
  std::vector<BigComplex> deg49;
  for (long i = 0; i < 70; ++i) {
    BigInt base(i + 2), value;
    mpz_pow_ui(value.get_mpz_t(), base.get_mpz_t(), 49);
    deg49.emplace_back(BigReal(value, prec), BigReal(prec));
  }
  auto killed49 = finite_difference(deg49, 50, DiffNormalization::none);
  REQUIRE(killed49.values.size() == 20);
  for (const auto& z : killed49.values) CHECK(z.is_zero());
  auto lead = finite_difference(deg49, 49, DiffNormalization::none);
  BigReal fact49(factorial(49), prec + 49 + 64);
  for (const auto& z : lead.values) CHECK(z.re == fact49);
}

TEST_CASE("binomial weight checksums") {
  for (unsigned long m : {1UL, 5UL, 700UL, 1000UL}) {
    BigInt plain(0), alternating(0);
    for (unsigned long r = 0; r <= m; ++r) {
      BigInt c = binomial(m, r);
      plain += c;
      if (r % 2 == 0)
        alternating += c;
      else
        alternating -= c;
    }
    CHECK(plain == (BigInt(1) << m));
    CHECK(alternating == 0);
  }
}

TEST_CASE("differencing is linear on exact data") {
  std::vector<long> xs, ys;
  for (long i = 0; i < 10; ++i) {
    xs.push_back(i * i + 1);
    ys.push_back(3 * i - 2);
  }
  auto x = integer_sequence(xs, 128);
  auto y = integer_sequence(ys, 128);
  std::vector<BigComplex> mix;
  for (std::size_t i = 0; i < x.size(); ++i)
    mix.push_back(x[i] * 3L + y[i]);
  auto dmix = finite_difference(mix, 2, DiffNormalization::none);
  auto dx = finite_difference(x, 2, DiffNormalization::none);
  auto dy = finite_difference(y, 2, DiffNormalization::none);
  REQUIRE(dmix.values.size() == dx.values.size());
  for (std::size_t i = 0; i < dmix.values.size(); ++i) {
    BigComplex expect = dx.values[i] * 3L + dy.values[i];
    CHECK(dmix.values[i].re == expect.re);
    CHECK(dmix.values[i].im == expect.im);
  }
}

TEST_CASE("stride selection and table conversion") {
  std::vector<long> xs;
  for (long i = 0; i < 10; ++i) xs.push_back(i);
  auto seq = integer_sequence(xs, 64);

  auto s2 = stride_sequence(seq, 2);
  REQUIRE(s2.size() == 5);
  for (std::size_t i = 0; i < s2.size(); ++i)
    CHECK(s2[i].re == BigReal(static_cast<long>(2 * i), 64));

  auto s4 = stride_sequence(seq, 4);
  REQUIRE(s4.size() == 3);
  CHECK(s4[2].re == BigReal(8, 64));

  auto s1 = stride_sequence(seq, 1);
  CHECK(s1.size() == seq.size());
  CHECK_THROWS_AS(stride_sequence(seq, 0), DomainError);

  auto pts = table_to_sequence(fixture());
  REQUIRE(pts.size() == fixture().count());
  CHECK(pts[0].re == fixture().entries[0].re);
  CHECK(pts[0].im == fixture().entries[0].im);
}

TEST_CASE("norm of a difference series") {
  DiffSeries d;
  CHECK(diff_norm(d).is_zero());

  d.values.emplace_back(BigReal(3, 64), BigReal(4, 64));
  CHECK(diff_norm(d) == BigReal(5, 64));

  d.values.emplace_back(BigReal(0, 64), BigReal(5, 64));
  CHECK(diff_norm(d) == BigReal(5, 64));  // rms of (5, 5)
}

TEST_CASE("perturbation is seeded and bounded") {
  auto seq = table_to_sequence(fixture());
  seq.resize(25);
  BigReal amp = from_string("1e-5", 64);

  auto a = perturb_zeros(seq, amp, 42);
  auto b = perturb_zeros(seq, amp, 42);
  auto c = perturb_zeros(seq, amp, 43);
  REQUIRE(a.size() == seq.size());
  bool differs_from_c = false;
  BigReal slack = amp * from_string("1.0000000001", 64);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    CHECK(to_string(a[i].re) == to_string(b[i].re));
    CHECK(to_string(a[i].im) == to_string(b[i].im));
    if (to_string(a[i].re) != to_string(c[i].re)) differs_from_c = true;
    CHECK(abs(a[i] - seq[i]) <= slack);
    CHECK(!(a[i].re == seq[i].re));  // a zero shift has probability ~0
  }
  CHECK(differs_from_c);

  auto same = perturb_zeros(seq, BigReal(64), 42);
  for (std::size_t i = 0; i < seq.size(); ++i)
    CHECK(to_string(same[i].re) == to_string(seq[i].re));

  CHECK_THROWS_AS(perturb_zeros(seq, BigReal(-1, 64), 42), DomainError);
}

TEST_CASE("log-growth fit recovers the reference slope") {
  BigReal c100 = fit_log_factor(fixture(), 100);
  CHECK(c100.to_double() > 15.5);
  CHECK(c100.to_double() < 16.5);
  CHECK(c100.to_double() == doctest::Approx(16.0084405).epsilon(1e-7));

  BigReal c1 = fit_log_factor(fixture(), 1);
  BigReal c1000 = fit_log_factor(fixture(), 1000);
  CHECK(abs(c1 - c1000).to_double() < 0.5);

  // synthetic table with Im exactly 7 ln Re recovers the slope
  const mpfr_prec_t prec = bits_for_digits(60);
  ZeroTable synth;
  synth.provenance = Provenance::fixture;
  for (long k = 1; k <= 60; ++k) {
    ComplexZero e;
    e.k = k;
    e.re = BigReal(50 + 3 * k, prec);
    e.im = log(e.re) * 7;
    synth.entries.push_back(e);
  }
  BigReal seven = fit_log_factor(synth, 1);
  CHECK(agreement_digits(seven, BigReal(7, prec)) >= 30);

  CHECK_THROWS_AS(fit_log_factor(synth, 12), InsufficientDataError);
  CHECK_THROWS_AS(fit_log_factor(fixture(), 3480), InsufficientDataError);
}

TEST_CASE("rescale reproduces the growth law") {
  auto rows = rescale_for_plot(fixture());
  REQUIRE(rows.size() == fixture().count());
  CHECK(rows[0].first == fixture().entries[0].re);
  CHECK(to_string_digits(rows[0].second, 12) == "9.00565418712e+1");

  // an entry obeying Im = 16 ln Re lands exactly on the diagonal
  const mpfr_prec_t prec = bits_for_digits(60);
  ZeroTable synth;
  synth.provenance = Provenance::fixture;
  ComplexZero e;
  e.k = 1;
  e.re = BigReal(25, prec);
  e.im = log(e.re) * 16;
  synth.entries.push_back(e);
  auto diag = rescale_for_plot(synth);
  CHECK(agreement_digits(diag[0].second, diag[0].first) >= 35);

  ZeroTable none;
  CHECK(rescale_for_plot(none).empty());
}

TEST_CASE("deviated zero-sums go negative at the measured indices") {
  const auto& gs = ordinates();

  auto quarter = rh_first_negative(gs, 1, 0.25, 5000, 2);
  REQUIRE(quarter.has_value());
  CHECK(*quarter == 3729);

  auto tenth = rh_first_negative(gs, 1, 0.10, 10000, 2);
  REQUIRE(tenth.has_value());
  CHECK(*tenth == 9327);

  auto twentieth = rh_first_negative(gs, 1, 0.05, 30000, 2);
  REQUIRE(twentieth.has_value());
  CHECK(*twentieth == 18479);

  // larger deviations fail sooner
  CHECK(*twentieth > *tenth);
  CHECK(*tenth > *quarter);

  // a bound short of the crossing reports no sign change
  CHECK(!rh_first_negative(gs, 1, 0.25, 3000, 2).has_value());

  // the scan brackets the crossing seen by the direct sum
  auto ctx = make_context(40);
  ZeroDeviation dev{1, 0.25};
  CHECK(lambda_sum_zeros(3728, gs, dev, ctx).sign() > 0);
  CHECK(lambda_sum_zeros(3729, gs, dev, ctx).sign() < 0);

  // worker count does not move the answer
  auto serial = rh_first_negative(gs, 1, 0.25, 5000, 1);
  auto wide = rh_first_negative(gs, 1, 0.25, 5000, 3);
  CHECK(*serial == *quarter);
  CHECK(*wide == *quarter);
}

TEST_CASE("on-line scans stay nonnegative") {
  const auto& gs = ordinates();
  CHECK(!rh_first_negative(gs, -1, 0.0, 2000, 2).has_value());
  // a deviated pair with delta 0 degenerates to a doubled on-line term
  CHECK(!rh_first_negative(gs, 3, 0.0, 1500, 2).has_value());
  // single ordinate: near-resonant n come closest to zero
  std::vector<BigReal> one{gs.front()};
  CHECK(!rh_first_negative(one, -1, 0.0, 5000, 1).has_value());
}

TEST_CASE("scan input contracts") {
  const auto& gs = ordinates();
  CHECK_THROWS_AS(rh_first_negative(gs, 1, 0.5, 100, 1), DomainError);
  CHECK_THROWS_AS(rh_first_negative(gs, 1, -0.01, 100, 1), DomainError);
  CHECK_THROWS_AS(rh_first_negative(gs, 0, 0.25, 100, 1), DomainError);
  CHECK_THROWS_AS(rh_first_negative(gs, 101, 0.25, 100, 1), DomainError);
  CHECK_THROWS_AS(rh_first_negative(gs, 1, 0.25, 0, 1), DomainError);
  CHECK(!rh_first_negative({}, -1, 0.0, 100, 1).has_value());
}

#include "keli/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace keli {
namespace {

BigReal neg(const BigReal& x) { return BigReal(x.prec()) - x; }

BigReal widen_to(const BigReal& x, mpfr_prec_t prec) {
  BigReal r(prec);
  mpfr_set(r.get(), x.get(), MPFR_RNDN);
  return r;
}

// All table values parse at one fixed precision: strings written by
// save_zero_table from values at this precision reload bit-identically, so
// a second save is byte-identical to the first.
constexpr int kTableDigits = 120;

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void validate_zero_table(const ZeroTable& table) {
  for (std::size_t i = 0; i < table.entries.size(); ++i) {
    const auto& e = table.entries[i];
    if (e.k < 1) throw Error("zero table: nonpositive index");
    if (e.re.sign() <= 0 || e.im.sign() < 0)
      throw Error("zero table: entry outside the canonical quadrant");
    if (i > 0) {
      const auto& p = table.entries[i - 1];
      if (e.k <= p.k) throw Error("zero table: indices not ascending");
      const BigReal gap = e.re - p.re;
      if (!(gap > e.re * 0L) || !(gap * 1000000000L > e.re))
        throw Error("zero table: entries not ascending in re or duplicated");
    }
  }
}

BigComplex seed_zero(long k, const ZeroTable& prior) {
  if (k < 1) throw DomainError("seed_zero needs k >= 1");
  double re = 0;
  const auto& es = prior.entries;
  if (es.empty()) {
    re = 88.7 * static_cast<double>(k) - 12.0;
  } else if (es.size() == 1) {
    re = es[0].re.to_double() + 88.7 * static_cast<double>(k - es[0].k);
  } else {
    // least-squares line through (k, re) of the prior entries
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& e : es) {
      const double x = static_cast<double>(e.k);
      const double y = e.re.to_double();
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double n = static_cast<double>(es.size());
    const double a = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double b = (sy - a * sx) / n;
    re = a * static_cast<double>(k) + b;
  }
  if (!(re > 1.0)) throw DomainError("seed extrapolation collapsed");
  const mpfr_prec_t prec = 128;
  BigReal r(prec);
  mpfr_set_d(r.get(), re, MPFR_RNDN);
  return {r, log(r) * 16L};
}

ComplexZero refine_zero(const BigComplex& seed, const LambdaEvaluator& ev,
                        const LambdaEvaluator& ev_cert, const BigReal& tol) {
  if (!(tol.sign() > 0)) throw DomainError("tolerance must be positive");
  if (ev_cert.target_digits() < ev.target_digits() + 30)
    throw DomainError("certifying evaluator needs >= 30 extra digits");

  const mpfr_prec_t prec = bits_for_digits(ev.target_digits() + 10);
  const BigReal radius =
      BigReal(static_cast<long>(ev.alphas().k_max()), prec) / 2L;
  BigComplex sigma(widen_to(seed.re, prec), widen_to(seed.im, prec));
  if (abs(sigma) > radius)
    throw DomainError("seed outside the reliable radius of the coefficient supply");

  BigComplex value(prec);
  int steps = 0;
  bool converged = false;
  for (steps = 0; steps < 60; ++steps) {
    value = ev.lambda_at(sigma);
    if (abs(value) < tol) {
      converged = true;
      break;
    }
    const BigComplex deriv = ev.lambda_prime(sigma);
    if (abs(deriv).is_zero())
      throw ConvergenceError("derivative vanished during refinement");
    sigma = sigma - value / deriv;
    if (abs(sigma) > radius)
      throw ConvergenceError("iteration left the reliable radius");
  }
  if (!converged)
    throw ConvergenceError("no convergence within the step limit");

  // Mirror family: fold into the canonical quadrant.
  if (sigma.re.sign() < 0) sigma.re = neg(sigma.re);
  if (sigma.im.sign() < 0) sigma.im = neg(sigma.im);
  value = ev.lambda_at(sigma);

  // lambda has real coefficients in s^2, so conjugating the argument must
  // conjugate the value bit for bit.
  const BigComplex mirrored = ev.lambda_at(conj(sigma));
  if (to_string(mirrored.re) != to_string(value.re) ||
      to_string(mirrored.im) != to_string(neg(value.im)))
    throw Error("conjugate symmetry broken at a converged zero");

  const BigReal sharp = abs(ev_cert.lambda_at(sigma));
  if (!(sharp < tol * 10L))
    throw PrecisionError("zero failed recertification at higher precision");

  ComplexZero out;
  out.re = sigma.re;
  out.im = sigma.im;
  out.residual = abs(value);
  out.newton_steps = steps;
  const BigReal dmag = abs(ev.lambda_prime(sigma));
  const BigReal flag_level =
      pow(BigReal(10L, prec), -8L);
  out.derivative_underflow = dmag < flag_level;
  return out;
}

ZeroTable compute_zeros(long k_from, long k_to, const LambdaEvaluator& ev,
                        const LambdaEvaluator& ev_cert, const BigReal& tol,
                        int threads) {
  if (k_from < 1 || k_to < k_from)
    throw DomainError("compute_zeros needs 1 <= k_from <= k_to");
  const std::size_t n = static_cast<std::size_t>(k_to - k_from + 1);
  std::vector<ComplexZero> found(n);
  parallel_for(n, threads, [&](std::size_t i) {
    const BigComplex seed = seed_zero(k_from + static_cast<long>(i));
    found[i] = refine_zero(seed, ev, ev_cert, tol);
  });
  std::sort(found.begin(), found.end(),
            [](const ComplexZero& a, const ComplexZero& b) {
              return a.re < b.re;
            });
  for (std::size_t i = 0; i < n; ++i) found[i].k = k_from + static_cast<long>(i);
  ZeroTable out;
  out.entries = std::move(found);
  out.provenance = Provenance::computed;
  validate_zero_table(out);
  return out;
}

BigComplex product_partial(const BigComplex& s, const ZeroTable& table,
                           long n_factors, const BigReal& constant) {
  if (n_factors < 0 || n_factors > static_cast<long>(table.entries.size()))
    throw DomainError("factor count exceeds the table");
  const mpfr_prec_t prec =
      std::max(std::max(s.re.prec(), s.im.prec()), constant.prec()) + 64;
  const BigComplex ws(widen_to(s.re, prec), widen_to(s.im, prec));
  const BigComplex s2 = ws * ws;
  const BigComplex s4 = s2 * s2;
  BigComplex acc(1, 0, prec);
  for (long i = 0; i < n_factors; ++i) {
    const auto& e = table.entries[i];
    const BigReal re = widen_to(e.re, prec);
    const BigReal im = widen_to(e.im, prec);
    const BigReal diff = re * re - im * im;          // (re^2 - im^2)
    const BigReal m2 = re * re + im * im;            // |sigma|^2
    const BigComplex numer = s4 - s2 * (diff * 2L);  // s^4 - 2 s^2 (re^2-im^2)
    const BigComplex factor = BigComplex(1, 0, prec) + numer / (m2 * m2);
    acc = acc * factor;
  }
  return acc * s2 * constant;
}

VerifyReport verify_against_fixture(const ZeroTable& computed,
                                    const ZeroTable& fixture) {
  VerifyReport report;
  if (computed.entries.empty() || fixture.entries.empty()) {
    report.empty_overlap = true;
    return report;
  }
  for (const auto& c : computed.entries) {
    const ComplexZero* match = nullptr;
    bool by_index = false;
    for (const auto& f : fixture.entries)
      if (f.k == c.k) {
        match = &f;
        by_index = true;
        break;
      }
    if (!match) {
      // nearest re
      const ComplexZero* best = &fixture.entries.front();
      BigReal best_gap = abs(c.re - best->re);
      for (const auto& f : fixture.entries) {
        const BigReal gap = abs(c.re - f.re);
        if (gap < best_gap) {
          best_gap = gap;
          best = &f;
        }
      }
      match = best;
      report.index_mismatch = true;
    }
    VerifyRow row;
    row.k = c.k;
    row.index_matched = by_index;
    row.rel_re = (abs(c.re - match->re) / abs(match->re)).to_double();
    row.rel_im = (abs(c.im - match->im) / abs(match->im)).to_double();
    report.max_rel = std::max({report.max_rel, row.rel_re, row.rel_im});
    report.rows.push_back(row);
  }
  report.compared = report.rows.size();
  report.pass = report.compared > 0 && !report.index_mismatch &&
                report.max_rel <= 5e-14;
  return report;
}

ZeroTable load_zero_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open zero table: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("zero table is empty");
  std::size_t columns = 0;
  ZeroTable out;
  {
    const auto head = split_csv(line);
    if (head.size() == 4 && head[0] == "k" && head[1] == "re" &&
        head[2] == "im" && head[3] == "residual") {
      columns = 4;
      out.provenance = Provenance::computed;
    } else if (head.size() == 3 && head[0] == "k" && head[1] == "re" &&
               head[2] == "im") {
      columns = 3;
      out.provenance = Provenance::fixture;
    } else {
      throw ParseError("unrecognized zero-table header: " + line);
    }
  }
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != columns)
      throw ParseError("zero table row " + std::to_string(row) +
                       ": expected " + std::to_string(columns) + " fields");
    ComplexZero e;
    try {
      e.k = std::stol(fields[0]);
    } catch (const std::exception&) {
      throw ParseError("zero table row " + std::to_string(row) + ": bad index");
    }
    e.re = from_string(fields[1], bits_for_digits(kTableDigits));
    e.im = from_string(fields[2], bits_for_digits(kTableDigits));
    if (columns == 4)
      e.residual = from_string(fields[3], bits_for_digits(kTableDigits));
    out.entries.push_back(std::move(e));
  }
  validate_zero_table(out);
  return out;
}

void save_zero_table(const ZeroTable& table, const std::string& path) {
  validate_zero_table(table);
  std::ofstream outf(path, std::ios::trunc);
  if (!outf) throw Error("cannot write zero table: " + path);
  const bool with_residual = table.provenance == Provenance::computed;
  outf << (with_residual ? "k,re,im,residual\n" : "k,re,im\n");
  for (const auto& e : table.entries) {
    outf << e.k << ',' << to_string(e.re) << ',' << to_string(e.im);
    if (with_residual) outf << ',' << to_string(e.residual);
    outf << '\n';
  }
  if (!outf.good()) throw Error("write failure: " + path);
}

}  // namespace keli

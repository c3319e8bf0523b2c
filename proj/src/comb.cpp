#include "keli/comb.hpp"

#include <stdexcept>

namespace keli {

const BigInt& StirlingTriangle::at(int k, int i) const {
  if (k < 0 || k > k_max || i < 0 || i > k)
    throw DomainError("stirling index out of range");
  return rows[k][i];
}

StirlingTriangle stirling_triangle(int k_max) {
  if (k_max < 0) throw DomainError("stirling_triangle needs k_max >= 0");
  StirlingTriangle tri;
  tri.k_max = k_max;
  tri.rows.reserve(k_max + 1);
  tri.rows.push_back({BigInt(1)});
  for (int k = 0; k < k_max; ++k) {
    const auto& prev = tri.rows.back();
    std::vector<BigInt> next(k + 2);
    for (int i = 0; i <= k + 1; ++i) {
      if (i >= 1) next[i] = prev[i - 1];
      if (i <= k) next[i] -= k * prev[i];
    }
    tri.rows.push_back(std::move(next));
  }
  return tri;
}

BigRational omega_eval(int k, const BigRational& s) {
  if (k < 0) throw DomainError("omega_eval needs k >= 0");
  BigRational acc(1);
  for (int i = 1; i <= k; ++i) {
    const BigRational node(1, i);
    acc *= (s - node) * (BigRational(1) - s - node);
  }
  return acc;
}

BigReal omega_eval(int k, const BigReal& s) {
  if (k < 0) throw DomainError("omega_eval needs k >= 0");
  const mpfr_prec_t prec = s.prec();
  BigReal acc(1L, prec);
  const BigReal one(1L, prec);
  for (int i = 1; i <= k; ++i) {
    const BigReal node = one / i;
    acc = acc * (s - node) * (one - s - node);
  }
  return acc;
}

// Integer form of the closed-form inverse entry: the two Pochhammer
// denominators collapse against the explicit j^{-k} factor, leaving
//   c(k,j) = C(k,j) k! (k+1)^2 (j+1)^{2k-2}
//            / ( prod_{t=j+1..k} (1-tj) * prod_{i=0..j-1} (ij-1) ).
BigRational c_coeff(int k, int j) {
  if (k < 1 || j < 1 || j > k) throw DomainError("c_coeff needs 1 <= j <= k");
  BigInt num = binomial(k, j) * factorial(k);
  num *= static_cast<long>(k + 1) * (k + 1);
  BigInt p;
  mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(j + 1),
                static_cast<unsigned long>(2 * k - 2));
  num *= p;
  BigInt den(1);
  for (long t = j + 1; t <= k; ++t) den *= 1 - t * static_cast<long>(j);
  for (long i = 0; i < j; ++i) den *= i * static_cast<long>(j) - 1;
  BigRational c(num, den);
  c.canonicalize();
  return c;
}

std::vector<std::vector<BigRational>> omega_system_matrix(int k_max) {
  if (k_max < 1) throw DomainError("system needs k_max >= 1");
  std::vector<std::vector<BigRational>> a;
  a.reserve(k_max);
  for (int m = 1; m <= k_max; ++m) {
    std::vector<BigRational> row;
    row.reserve(m);
    const BigRational v(m, m + 1);
    for (int k = 1; k <= m; ++k) {
      BigRational w = omega_eval(k, v);
      if (k % 2 == 1) w = -w;
      row.push_back(w);
    }
    a.push_back(std::move(row));
  }
  return a;
}

std::vector<std::vector<BigRational>> omega_system_inverse(int k_max) {
  const auto a = omega_system_matrix(k_max);
  std::vector<std::vector<BigRational>> c(k_max);
  for (int row = 0; row < k_max; ++row) c[row].assign(row + 1, BigRational(0));
  for (int col = 0; col < k_max; ++col) {
    for (int row = col; row < k_max; ++row) {
      BigRational rhs = (row == col) ? BigRational(1) : BigRational(0);
      for (int t = col; t < row; ++t) rhs -= a[row][t] * c[t][col];
      c[row][col] = rhs / a[row][row];
    }
  }
  return c;
}

const BigInt& ChiRow::at_q(int q) const {
  if (q < 1 || q > 2 * k - 1 || q % 2 == 0)
    throw DomainError("chi index must be odd and within the row");
  return chi[(q - 1) / 2];
}

namespace {

// Coefficients of W(y) = y prod_{u=1..k-1} (y^2 - u^2) in y^2:
// wc[t] multiplies y^{2t+1}, t = 0..k-1.
std::vector<BigInt> window_poly(int k) {
  std::vector<BigInt> wc{BigInt(1)};
  wc.reserve(k);
  for (long u = 1; u < k; ++u) {
    wc.push_back(BigInt(0));
    for (long i = static_cast<long>(wc.size()) - 1; i >= 0; --i) {
      BigInt v = (i > 0) ? wc[i - 1] : BigInt(0);
      v -= u * u * wc[i];
      wc[i] = std::move(v);
    }
  }
  return wc;
}

void validate_top(const ChiRow& row) {
  const BigInt expect = factorial(row.k) * factorial(row.k);
  if (row.chi.back() != expect)
    throw Error("chi row failed the (k!)^2 checksum");
}

}  // namespace

ChiRow chi_row(int k, const StirlingTriangle& tri) {
  if (k < 1) throw DomainError("chi_row needs k >= 1");
  if (tri.k_max < k) throw DomainError("stirling triangle too small for chi row");
  const auto& srow = tri.rows[k];

  // Autocorrelation of the unsigned row: T_d = sum_i |S^{(i)}||S^{(i+d)}|.
  std::vector<BigInt> t(k);
  for (int d = 0; d < k; ++d)
    for (int i = 1; i + d <= k; ++i) t[d] += abs(srow[i]) * abs(srow[i + d]);

  const auto wc = window_poly(k);

  // Even moments of the symmetric weight: M_e = T_0 [e=0] + 2 sum_d T_d d^e.
  std::vector<BigInt> mom(2 * k - 1);
  mom[0] = t[0];
  for (long d = 1; d < k; ++d) {
    BigInt dp(1);
    for (int e = 0; e <= 2 * k - 2; ++e) {
      if (e % 2 == 0) mom[e] += 2 * t[d] * dp;
      dp *= d;
    }
  }

  ChiRow out;
  out.k = k;
  out.chi.resize(k);
  for (int tq = 0; tq < k; ++tq) {
    const int q = 2 * tq + 1;
    BigInt acc;
    for (int rho = tq; rho < k; ++rho) {
      const int r = 2 * rho + 1;
      acc += wc[rho] * binomial(r, q) * mom[r - q];
    }
    out.chi[tq] = std::move(acc);
  }
  validate_top(out);
  return out;
}

ChiRow chi_row_reference(int k, const StirlingTriangle& tri) {
  if (k < 1) throw DomainError("chi_row_reference needs k >= 1");
  if (tri.k_max < k) throw DomainError("stirling triangle too small for chi row");
  const auto& srow = tri.rows[k];
  const auto wc = window_poly(k);

  // Accumulate |S_i||S_j| W(x + (i-j)) coefficient by coefficient; the even
  // powers must cancel identically across pairs.
  std::vector<BigInt> full(2 * k);
  for (int i = 1; i <= k; ++i) {
    for (int j = 1; j <= k; ++j) {
      const BigInt w = abs(srow[i]) * abs(srow[j]);
      const long d = i - j;
      for (int rho = 0; rho < k; ++rho) {
        const int r = 2 * rho + 1;
        BigInt dp(1);
        for (int q = r; q >= 0; --q) {
          full[q] += w * wc[rho] * binomial(r, q) * dp;
          dp *= d;
        }
      }
    }
  }
  ChiRow out;
  out.k = k;
  out.chi.resize(k);
  for (int q = 0; q <= 2 * k - 1; ++q) {
    if (q % 2 == 0) {
      if (full[q] != 0) throw Error("even-power coefficient failed to cancel");
    } else {
      out.chi[(q - 1) / 2] = std::move(full[q]);
    }
  }
  validate_top(out);
  return out;
}

BetaPolynomial beta_poly(int k, const ChiRow& chi) {
  if (chi.k != k) throw DomainError("chi row does not match requested k");
  const BigInt den = factorial(k) * factorial(k) * factorial(2 * k - 1);
  BetaPolynomial bp;
  bp.k = k;
  bp.coeff.reserve(k);
  for (const auto& c : chi.chi) {
    BigRational q(c, den);
    q.canonicalize();
    bp.coeff.push_back(std::move(q));
  }
  return bp;
}

BigRational beta_eval(const BetaPolynomial& bp, long n) {
  if (n < 1) throw DomainError("beta_eval needs n >= 1");
  const BigRational n2(static_cast<long>(n) * n);
  BigRational acc = bp.coeff.back();
  for (auto it = bp.coeff.rbegin() + 1; it != bp.coeff.rend(); ++it)
    acc = acc * n2 + *it;
  return acc * n2;
}

BigRational beta_direct(long n, int k, const StirlingTriangle& tri) {
  if (n < 1 || k < 1) throw DomainError("beta_direct needs n, k >= 1");
  if (tri.k_max < k) throw DomainError("stirling triangle too small");
  const auto& srow = tri.rows[k];
  BigInt acc;
  for (int i = 1; i <= k; ++i)
    for (int j = 1; j <= k; ++j) {
      const long upper = n + k + i - j - 1;
      acc += abs(srow[i]) * abs(srow[j]) *
             binomial(static_cast<unsigned long>(upper), 2 * k - 1);
    }
  BigRational out(acc * n, factorial(k) * factorial(k));
  out.canonicalize();
  return out;
}

}  // namespace keli

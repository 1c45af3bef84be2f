#include "loconst/binom.hpp"

#include <stdexcept>

#include "loconst/padic.hpp"

namespace loconst {

namespace {

long mod_pos(long x, long n) {
  x %= n;
  return x < 0 ? x + n : x;
}

mpz_class target_of(const SumParams& q) {
  const long r = q.r();
  return binomial(r, q.i) * (binomial(q.b - q.i, q.m) - binomial(r - q.i, q.m));
}

CongruenceReport make_report(const SumParams& q, mpz_class S) {
  CongruenceReport rep;
  rep.params = q;
  rep.S = std::move(S);
  rep.target = target_of(q);
  rep.v_S = vp_or(rep.S, q.p, -1);
  rep.v_diff = vp_or(rep.S - rep.target, q.p, -1);
  rep.pass_t = rep.v_S < 0 || rep.v_S >= q.t;
  rep.pass_t1 = rep.v_diff < 0 || rep.v_diff >= q.t + 1;
  rep.boundary_corner = q.b == q.p - 1 && q.m == 0;
  return rep;
}

}  // namespace

long SumParams::r() const {
  mpz_class pt;
  mpz_ui_pow_ui(pt.get_mpz_t(), p, t);
  const mpz_class r = b + s * pt * (p - 1);
  if (!r.fits_slong_p()) throw std::overflow_error("SumParams: r does not fit in a long");
  return r.get_si();
}

void SumParams::validate() const {
  if (p == 2 || !is_prime(p)) throw std::invalid_argument("SumParams: p must be an odd prime");
  if (b <= 0 || b > p - 1) throw std::invalid_argument("SumParams: need 0 < b <= p-1");
  if (s < 1 || s % p == 0) throw std::invalid_argument("SumParams: need s >= 1 with p not dividing s");
  if (t < 1) throw std::invalid_argument("SumParams: need t >= 1");
  if (i < 0 || i >= b) throw std::invalid_argument("SumParams: need 0 <= i < b");
  if (m < 0 || m >= p - 1) throw std::invalid_argument("SumParams: need 0 <= m < p-1");
}

long vp_or(const mpz_class& n, long p, long inf_value) {
  return n == 0 ? inf_value : vp(n, p);
}

mpz_class binomial(long n, long k) {
  if (n < 0 || k < 0 || k > n) return 0;
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return out;
}

mpz_class S_sum(const SumParams& q) {
  q.validate();
  const long r = q.r();
  const long cls = mod_pos(q.b - q.m, q.p - 1);
  mpz_class sum = 0, crj = 1;  // crj = C(r, j)
  for (long j = 0; j < r - q.m; ++j) {
    if (j > 0) {
      crj *= r - j + 1;
      mpz_divexact_ui(crj.get_mpz_t(), crj.get_mpz_t(), static_cast<unsigned long>(j));
    }
    if (j % (q.p - 1) == cls && j >= q.i) sum += binomial(j, q.i) * crj;
  }
  return sum;
}

mpz_class S_tilde(const SumParams& q) {
  q.validate();
  const long r = q.r();
  const long cls = mod_pos(q.b - q.m, q.p - 1);
  mpz_class sum = 0, crj = 1;
  for (long j = 0; j <= r; ++j) {
    if (j > 0) {
      crj *= r - j + 1;
      mpz_divexact_ui(crj.get_mpz_t(), crj.get_mpz_t(), static_cast<unsigned long>(j));
    }
    if (j % (q.p - 1) == cls && j >= q.i) sum += binomial(j, q.i) * crj;
  }
  return sum;
}

mpz_class S_sum_mod(const SumParams& q, int K) {
  q.validate();
  if (K < 1) throw std::invalid_argument("S_sum_mod: need K >= 1");
  const long r = q.r();
  const int p = q.p;
  mpz_class mod;
  mpz_ui_pow_ui(mod.get_mpz_t(), p, K);
  const mpz_class pp(p);
  // Teichmuller lifts of 1..p-1 modulo p^K
  mpz_class filter = 0;
  const long shift = mod_pos(q.i - (q.b - q.m), p - 1);
  const mpz_class e1(shift), e2(r - q.i);
  for (int lam = 1; lam < p; ++lam) {
    mpz_class z = lam, y;
    for (;;) {
      mpz_powm(y.get_mpz_t(), z.get_mpz_t(), pp.get_mpz_t(), mod.get_mpz_t());
      if (y == z) break;
      z = y;
    }
    mpz_class term, onep = z + 1;
    mpz_powm(term.get_mpz_t(), z.get_mpz_t(), e1.get_mpz_t(), mod.get_mpz_t());
    mpz_class second;
    mpz_powm(second.get_mpz_t(), onep.get_mpz_t(), e2.get_mpz_t(), mod.get_mpz_t());
    filter += term * second;
  }
  mpz_class inv;
  const mpz_class pm1(p - 1);
  mpz_invert(inv.get_mpz_t(), pm1.get_mpz_t(), mod.get_mpz_t());
  mpz_class stilde = binomial(r, q.i) * filter * inv;
  mpz_class out = stilde - binomial(r, q.i) * binomial(r - q.i, q.m);
  mpz_fdiv_r(out.get_mpz_t(), out.get_mpz_t(), mod.get_mpz_t());
  return out;
}

CongruenceReport check_cong2(const SumParams& q) { return make_report(q, S_sum(q)); }

std::vector<CongruenceReport> check_cong2_all(int p, int b, long s, int t) {
  SumParams base{p, b, s, t, 0, 0};
  base.validate();
  const long r = base.r();
  const int classes = p - 1;
  // sums[i][m]; index j lies in the class of exactly one m.
  std::vector<std::vector<mpz_class>> sums(b, std::vector<mpz_class>(classes, 0));
  std::vector<int> m_of_class(classes);
  for (int m = 0; m < classes; ++m) m_of_class[mod_pos(b - m, classes)] = m;
  std::vector<mpz_class> cji(b);
  mpz_class crj = 1;
  for (long j = 0; j <= r; ++j) {
    if (j > 0) {
      crj *= r - j + 1;
      mpz_divexact_ui(crj.get_mpz_t(), crj.get_mpz_t(), static_cast<unsigned long>(j));
    }
    const int m = m_of_class[j % classes];
    if (j >= r - m) continue;
    const long top = std::min<long>(j, b - 1);
    for (long i = 0; i <= top; ++i) {
      mpz_bin_uiui(cji[i].get_mpz_t(), static_cast<unsigned long>(j), static_cast<unsigned long>(i));
      mpz_addmul(sums[i][m].get_mpz_t(), crj.get_mpz_t(), cji[i].get_mpz_t());
    }
  }
  std::vector<CongruenceReport> out;
  out.reserve(static_cast<size_t>(b) * classes);
  for (int i = 0; i < b; ++i)
    for (int m = 0; m < classes; ++m) {
      SumParams q = base;
      q.i = i;
      q.m = m;
      out.push_back(make_report(q, sums[i][m]));
    }
  return out;
}

std::vector<mpz_class> binomial_row_mod(long n, int p, int N) {
  if (n < 0 || N < 1) throw std::invalid_argument("binomial_row_mod: need n >= 0 and N >= 1");
  mpz_class mod;
  mpz_ui_pow_ui(mod.get_mpz_t(), p, N);
  std::vector<mpz_class> row(n + 1);
  std::vector<mpz_class> ppow(N);
  ppow[0] = 1;
  for (int k = 1; k < N; ++k) ppow[k] = ppow[k - 1] * p;
  mpz_class unit = 1, inv;
  long v = 0;
  row[0] = 1 % mod;
  for (long j = 1; j <= n; ++j) {
    long num = n - j + 1, den = j;
    while (num % p == 0) {
      num /= p;
      ++v;
    }
    while (den % p == 0) {
      den /= p;
      --v;
    }
    const mpz_class d(den);
    mpz_invert(inv.get_mpz_t(), d.get_mpz_t(), mod.get_mpz_t());
    unit = unit * num * inv;
    mpz_fdiv_r(unit.get_mpz_t(), unit.get_mpz_t(), mod.get_mpz_t());
    if (v >= N) {
      row[j] = 0;
    } else {
      row[j] = unit * ppow[v];
      mpz_fdiv_r(row[j].get_mpz_t(), row[j].get_mpz_t(), mod.get_mpz_t());
    }
  }
  return row;
}

long alpha(int p, long r) {
  if (r < 0) throw std::invalid_argument("alpha: r must be >= 0");
  long total = 0;
  long denom = p - 1;
  while (denom <= r) {
    total += r / denom;
    if (denom > r / p) break;
    denom *= p;
  }
  return total;
}

}  // namespace loconst

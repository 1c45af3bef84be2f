#pragma once

#include <gmpxx.h>

#include <vector>

namespace loconst {

/// Parameters of the congruence-class binomial sums: r = b + s p^t (p-1).
struct SumParams {
  int p = 0;
  int b = 0;
  long s = 0;
  int t = 0;
  int i = 0;
  int m = 0;

  long r() const;
  /// Throws std::invalid_argument unless 0 < b <= p-1, p does not divide s,
  /// s >= 1, t >= 1, 0 <= i < b and 0 <= m < p-1.
  void validate() const;
};

struct CongruenceReport {
  SumParams params;
  mpz_class S;
  mpz_class target;  // C(r,i) (C(b-i,m) - C(r-i,m))
  long v_S = 0;      // -1 when S = 0 (valuation +infinity)
  long v_diff = 0;   // -1 when S = target
  bool pass_t = false;
  bool pass_t1 = false;
  bool boundary_corner = false;  // b = p-1, m = 0
};

/// v_p with +infinity reported as `inf_value`.
long vp_or(const mpz_class& n, long p, long inf_value);

/// C(n, k) as an exact integer (0 outside 0 <= k <= n).
mpz_class binomial(long n, long k);

/// S_{r,i,m}: sum over j = b-m mod (p-1), 0 <= j < r-m, of C(j,i) C(r,j).
mpz_class S_sum(const SumParams& params);

/// The same sum extended to 0 <= j <= r.
mpz_class S_tilde(const SumParams& params);

/// S_{r,i,m} mod p^K through the root-of-unity filter
/// (p-1) S~ = C(r,i) sum_{zeta in mu_{p-1}} zeta^(i-b+m) (1+zeta)^(r-i).
mpz_class S_sum_mod(const SumParams& params, int K);

CongruenceReport check_cong2(const SumParams& params);

/// All reports for one (p, b, s, t), every i < b and m < p-1, from a single
/// pass of direct summation over j.
std::vector<CongruenceReport> check_cong2_all(int p, int b, long s, int t);

/// C(n, j) mod p^N for j = 0..n, carrying the p-valuation and the unit part
/// separately so no big binomials are formed.
std::vector<mpz_class> binomial_row_mod(long n, int p, int N);

/// alpha(r) = sum_{n >= 1} floor(r / (p^(n-1) (p-1))).
long alpha(int p, long r);

}  // namespace loconst

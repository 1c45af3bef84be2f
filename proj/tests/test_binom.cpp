#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "loconst/binom.hpp"
#include "oracles.hpp"

using namespace loconst;

TEST_CASE("anchor sum") {
  const SumParams q{5, 3, 1, 1, 0, 1};
  CHECK(q.r() == 23);
  CHECK(S_sum(q) == 2096105);
  CHECK(S_sum(q) == oracle::S_direct(5, 23, 3, 0, 1));
  const auto rep = check_cong2(q);
  CHECK(rep.target == -20);
  CHECK(rep.S - rep.target == 2096125);
  CHECK(rep.v_diff >= 2);
  CHECK(rep.pass_t);
  CHECK(rep.pass_t1);
  mpz_class r25 = rep.S % 25;
  CHECK(r25 == 5);
}

TEST_CASE("parameter guards") {
  CHECK_THROWS(S_sum({5, 3, 0, 1, 0, 1}));
  CHECK_THROWS(S_sum({5, 3, 5, 1, 0, 1}));
  CHECK_THROWS(S_sum({5, 0, 1, 1, 0, 1}));
  CHECK_THROWS(S_sum({5, 3, 1, 0, 0, 1}));
  CHECK_THROWS(S_sum({5, 3, 1, 1, 3, 1}));
  CHECK_THROWS(S_sum({5, 3, 1, 1, 0, 4}));
  CHECK_THROWS(S_sum({4, 3, 1, 1, 0, 1}));
}

TEST_CASE("S tilde two ways") {
  for (int p : {3, 5, 7})
    for (int b = 1; b < p; ++b)
      for (int t : {1, 2})
        for (int i = 0; i < b; ++i)
          for (int m = 0; m < p - 1; ++m) {
            const SumParams q{p, b, 1, t, i, m};
            const long r = q.r();
            CHECK(S_tilde(q) - S_sum(q) == binomial(r, i) * binomial(r - i, m));
          }
}

TEST_CASE("batched sums match the direct oracle") {
  for (int p : {3, 5, 7, 11})
    for (int b = 1; b < p; ++b)
      for (int t : {1, 2}) {
        const auto reps = check_cong2_all(p, b, 2, t);
        CHECK(reps.size() == size_t(b) * (p - 1));
        for (const auto& rep : reps) {
          const auto& q = rep.params;
          CHECK(rep.S == oracle::S_direct(p, q.r(), b, q.i, q.m));
        }
      }
}

TEST_CASE("root-of-unity filter agrees with exact sums") {
  for (int p : {3, 5, 7, 11, 13})
    for (int b = 1; b < p; ++b)
      for (int t : {1, 2})
        for (int i = 0; i < b; ++i)
          for (int m = 0; m < p - 1; ++m) {
            if (p >= 11 && t == 2) continue;
            const SumParams q{p, b, 1, t, i, m};
            for (int K : {1, t + 1, t + 3}) {
              mpz_class mod, exact = S_sum(q);
              mpz_ui_pow_ui(mod.get_mpz_t(), p, K);
              mpz_fdiv_r(exact.get_mpz_t(), exact.get_mpz_t(), mod.get_mpz_t());
              CHECK(S_sum_mod(q, K) == exact);
            }
          }
}

TEST_CASE("congruences on a small sweep") {
  for (int p : {3, 5, 7})
    for (int b = 1; b < p; ++b)
      for (int s : {1, 2})
        for (int t : {1, 2})
          for (const auto& rep : check_cong2_all(p, b, s, t)) {
            if (rep.boundary_corner) continue;
            CHECK(rep.pass_t);
            CHECK(rep.pass_t1);
            CHECK(rep.v_S == (rep.S == 0 ? -1 : oracle::vp(rep.S, p)));
          }
}

TEST_CASE("target difference is divisible by p^t") {
  for (int p : {3, 5, 7, 11})
    for (int b = 1; b < p; ++b)
      for (int t : {1, 2, 3}) {
        const SumParams q{p, b, 1, t, 0, 0};
        const long r = q.r();
        for (int i = 0; i < b; ++i)
          for (int m = 0; m <= p - 1; ++m) {
            const mpz_class d = binomial(b - i, m) - binomial(r - i, m);
            if (d != 0) CHECK(oracle::vp(d, p) >= t);
          }
      }
}

TEST_CASE("alpha") {
  CHECK(alpha(5, 0) == 0);
  CHECK(alpha(5, 24) == 7);
  CHECK(alpha(7, 5) == 0);
  for (int p : {3, 5, 7})
    for (long r = 0; r < 500; ++r) {
      long direct = 0;
      for (long d = p - 1; d <= r; d *= p) direct += r / d;
      CHECK(alpha(p, r) == direct);
    }
  CHECK_THROWS(alpha(5, -1));
}

TEST_CASE("binomial rows modulo prime powers") {
  for (int p : {3, 5, 7})
    for (long n : {0L, 1L, 7L, 25L, 124L, 300L})
      for (int N : {1, 3, 6}) {
        const auto row = binomial_row_mod(n, p, N);
        mpz_class mod;
        mpz_ui_pow_ui(mod.get_mpz_t(), p, N);
        for (long j = 0; j <= n; ++j) {
          mpz_class c = binomial(n, j);
          mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), mod.get_mpz_t());
          CHECK(row[j] == c);
        }
      }
}

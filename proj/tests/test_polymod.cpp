#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "loconst/polymod.hpp"
#include "oracles.hpp"

using namespace loconst;

namespace {

std::vector<long> as_long(const HomPoly& f) { return {f.coeffs().begin(), f.coeffs().end()}; }

HomPoly random_poly(std::mt19937_64& rng, int p, int r, double density = 0.5) {
  std::uniform_int_distribution<long> c(1, p - 1);
  std::bernoulli_distribution on(density);
  HomPoly f(p, r);
  for (int i = 0; i <= r; ++i)
    if (on(rng)) f.set(i, c(rng));
  return f;
}

HomPoly random_class_poly(std::mt19937_64& rng, int p, int r, int a) {
  std::uniform_int_distribution<long> c(0, p - 1);
  HomPoly f(p, r);
  for (int i = a; i <= r; i += p - 1) f.set(i, c(rng));
  return f;
}

}  // namespace

TEST_CASE("theta order examples") {
  const auto th = HomPoly::theta(5);
  CHECK(theta_order(th) == 1);
  CHECK(theta_order(HomPoly::monomial(5, 23, 0)) == 0);
  CHECK(theta_order(make_Fm(5, 23, 3, 1)) == 1);
  CHECK(make_Fm(5, 23, 3, 1) == [] {
    HomPoly f(5, 23);
    f.set(22, 1);
    f.set(2, -1);
    return f;
  }());
  CHECK_THROWS_AS(theta_order(HomPoly(5, 10)), std::invalid_argument);
}

TEST_CASE("theta factors into the rational linear forms") {
  for (int p : {3, 5, 7, 11, 13}) {
    // -X * prod (Y - lam X)
    HomPoly prod = HomPoly::monomial(p, 1, 0, -1);
    for (int lam = 0; lam < p; ++lam) {
      HomPoly lin(p, 1);
      lin.set(1, 1);
      lin.set(0, -lam);
      prod = prod * lin;
    }
    CHECK(prod == HomPoly::theta(p));
  }
}

TEST_CASE("theta order agrees with the linear-factor oracle") {
  std::mt19937_64 rng(7);
  for (int p : {3, 5, 7, 11})
    for (int trial = 0; trial < 300; ++trial) {
      const int r = std::uniform_int_distribution<int>(0, 60)(rng);
      const int k = std::uniform_int_distribution<int>(0, 3)(rng);
      HomPoly f = random_poly(rng, p, r);
      if (f.is_zero()) continue;
      f = theta_power(p, k) * f;
      CHECK(theta_order(f) == oracle::theta_order(as_long(f), p));
    }
}

TEST_CASE("divconds examples") {
  CHECK(divconds_check(HomPoly::theta(5), 1, 1));
  CHECK_FALSE(divconds_check(HomPoly::monomial(5, 23, 0), 1, 0));
  const auto f1 = make_Fm(5, 23, 3, 1);
  CHECK(divconds_check(f1, 1, 2));
  CHECK_FALSE(divconds_check(f1, 2, 2));
  CHECK_THROWS_AS(divconds_check(HomPoly(5, 6, {1, 1, 0, 0, 0, 0, 0}), 1, 0), std::invalid_argument);
}

TEST_CASE("divconds matches theta division for m <= p") {
  // For m > p the j! factors vanish mod p and the criterion degenerates;
  // that range is exercised separately by the acceptance runner.
  std::mt19937_64 rng(11);
  for (int p : {3, 5, 7}) {
    for (int trial = 0; trial < 1500; ++trial) {
      const int r = std::uniform_int_distribution<int>(0, 40)(rng);
      const int a = std::uniform_int_distribution<int>(0, p - 2)(rng);
      if (a > r) continue;
      HomPoly f = random_class_poly(rng, p, r, a);
      if (trial % 2 && r >= p + 1) {
        // theta^k G keeps the support in a single class
        const int k = std::uniform_int_distribution<int>(1, std::min(4, r / (p + 1)))(rng);
        const int rg = r - k * (p + 1);
        HomPoly g = random_class_poly(rng, p, rg, std::min(a, rg));
        f = theta_power(p, k) * g;
      }
      if (f.is_zero()) continue;
      int cls = -1;
      for (int i = 0; i <= r; ++i)
        if (f.coeff(i)) cls = i % (p - 1);
      const int ord = theta_order(f);
      for (int m = 0; m <= std::min(4, p); ++m) CHECK(divconds_check(f, m, cls) == (ord >= m));
    }
  }
}

TEST_CASE("theta order is additive over products") {
  std::mt19937_64 rng(13);
  for (int p : {3, 5, 7})
    for (int trial = 0; trial < 100; ++trial) {
      HomPoly f = random_poly(rng, p, std::uniform_int_distribution<int>(0, 20)(rng));
      HomPoly g = random_poly(rng, p, std::uniform_int_distribution<int>(0, 20)(rng));
      if (f.is_zero() || g.is_zero()) continue;
      const int k = trial % 3;
      CHECK(theta_order(theta_power(p, k) * f) == k + theta_order(f));
      CHECK(theta_order(f * g) >= theta_order(f) + theta_order(g));
    }
}

TEST_CASE("F_m has theta order exactly m") {
  for (int p : {3, 5, 7, 11, 13})
    for (int b = 1; b <= p - 1; ++b)
      for (int m = 0; 2 * m <= b; ++m)
        for (int t : {1, 2})
          for (int s : {1, 2}) {
            long pt = 1;
            for (int k = 0; k < t; ++k) pt *= p;
            const long r = b + s * pt * (p - 1);
            CHECK(theta_order(make_Fm(p, r, b, m)) == m);
          }
  CHECK(make_Fm(5, 3, 3, 1).is_zero());
  CHECK(make_Fm(5, 23, 3, 0) == [] {
    HomPoly f(5, 23);
    f.set(23, 1);
    f.set(3, -1);
    return f;
  }());
  CHECK_THROWS(make_Fm(5, 22, 3, 1));
  CHECK_THROWS(make_Fm(5, 23, 3, 4));
}

TEST_CASE("H_m lies one step deeper") {
  CHECK(theta_order(make_Hm(5, 23, 3, 1)) >= 2);
  CHECK(theta_order(make_Hm(7, 89, 5, 2)) >= 3);
  CHECK(make_Hm(5, 23, 3, 0).is_zero());
  for (int p : {3, 5, 7, 11})
    for (int b = 1; b <= p - 1; ++b)
      for (int m = 0; 2 * m < b; ++m) {
        const long r = b + p * (p - 1);
        const auto h = make_Hm(p, r, b, m);
        if (!h.is_zero()) CHECK(theta_order(h) >= m + 1);
      }
  CHECK_THROWS(make_Hm(5, 23, 2, 1));
  CHECK_THROWS(make_Hm(5, 7, 3, 1));
}

TEST_CASE("gamma action") {
  const int p = 7;
  const auto id = GammaMat::identity(p);
  const auto f = make_Fm(p, 47, 5, 2);
  CHECK(gamma_act(id, f) == f);
  CHECK(gamma_act(GammaMat::make(p, 0, 1, 1, 0), HomPoly::monomial(p, 9, 0)) == HomPoly::monomial(p, 9, 9));
  CHECK_THROWS(GammaMat::make(p, 1, 2, 2, 4));

  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> d(0, p - 1);
  auto rand_g = [&] {
    for (;;) {
      const int a = d(rng), b = d(rng), c = d(rng), e = d(rng);
      if (oracle::modp(long(a) * e - long(b) * c, p)) return GammaMat::make(p, a, b, c, e);
    }
  };
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = rand_g(), h = rand_g();
    const auto F = random_poly(rng, p, d(rng) * 5);
    CHECK(gamma_act(g * h, F) == gamma_act(g, gamma_act(h, F)));
    CHECK(gamma_act(g, HomPoly::theta(p)) == HomPoly::theta(p).scaled(g.det()));
    CHECK(as_long(gamma_act(g, F)) == oracle::substitute(as_long(F), g.a, g.b, g.c, g.d, p));
    CHECK(gamma_act(g, F, 2) == gamma_act(g, F).scaled(long(g.det()) * g.det()));
  }
}

TEST_CASE("subquotient dimensions") {
  for (int p : {3, 5, 7})
    for (int r = 0; r <= 60; ++r)
      for (int m = 0; m <= 3; ++m) {
        const long s = r - long(m) * (p + 1);
        const int dq = filtration_dim(p, r, m) - filtration_dim(p, r, m + 1);
        if (s >= p) CHECK(dq == p + 1);
        if (s >= 0) CHECK(filtration_dim(p, r, m) == s + 1);
        if (s >= 0) CHECK(ThetaQuotient(p, s).dim() == std::min<long>(s + 1, p + 1));
      }
}

TEST_CASE("quotient coordinates") {
  const auto f1 = make_Fm(5, 23, 3, 1);
  const auto q = quotient_coords(f1, 1);
  CHECK(q.r() == 17);
  CHECK(HomPoly::theta(5) * q == f1);
  CHECK_THROWS_AS(quotient_coords(f1, 2), std::invalid_argument);
}

TEST_CASE("gamma span") {
  CHECK(gamma_span_dim({}, 5) == 0);
  CHECK(gamma_span_dim({HomPoly(5, 7)}, 5) == 0);
  // p=5, b=3, m=1: F_1 generates the whole subquotient
  CHECK(gamma_span_dim({quotient_coords(make_Fm(5, 23, 3, 1), 1)}, 5) == 6);
  for (int p : {3, 5, 7})
    for (long s = 1; s <= 3 * p; ++s) {
      const long bp = (s - 1) % (p - 1) + 1;
      CHECK(gamma_span_dim({HomPoly::monomial(p, s, s)}, p) == (s < p ? s + 1 : bp + 1));
    }
}

TEST_CASE("gamma span agrees with full-group enumeration") {
  std::mt19937_64 rng(19);
  for (int p : {3, 5})
    for (int trial = 0; trial < 40; ++trial) {
      const int s = std::uniform_int_distribution<int>(0, 3 * p)(rng);
      const auto f = random_poly(rng, p, s, 0.3);
      CHECK(gamma_span_dim({f}, p) == oracle::span_mod_theta(as_long(f), p));
    }
}

TEST_CASE("rank and echelon") {
  CHECK(rank_mod_p({{1, 2}, {2, 4}}, 5) == 1);
  CHECK(rank_mod_p({{1, 2}, {2, 3}}, 5) == 2);
  FpEchelon e(7, 3);
  CHECK(e.insert({1, 0, 0}));
  CHECK(e.insert({1, 1, 0}));
  CHECK_FALSE(e.insert({3, 5, 0}));
  CHECK(e.rank() == 2);
  CHECK(binom_mod_p(23, 1, 5) == 3);
  CHECK(binom_mod_p(30, 5, 5) == 1);
  CHECK(binom_mod_p(25, 5, 5) == 0);
  CHECK(primitive_root(7) == 3);
  CHECK(inv_mod_p(3, 7) == 5);
}

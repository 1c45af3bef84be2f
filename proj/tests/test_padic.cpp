#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "loconst/padic.hpp"
#include "oracles.hpp"

using namespace loconst;

TEST_CASE("make_ap valuations") {
  auto c5 = PrimeCtx::make(5, 1, 20);
  auto a = make_ap(c5, 1, {1});
  CHECK(a.valuation() == Valuation::exact(1, 1));
  CHECK(a.agrees_with(PadicElem::from_int(c5, 5L)));

  auto c7 = PrimeCtx::make(7, 2, 20);
  auto pi = make_ap(c7, 1, {1});
  CHECK(pi.valuation().to_string() == "1/2");
  CHECK((pi * pi).agrees_with(PadicElem::from_int(c7, 7L)));

  auto c52 = PrimeCtx::make(5, 2, 20);
  CHECK(make_ap(c52, 3, {2}).valuation().to_string() == "3/2");

  CHECK_THROWS_AS(make_ap(c5, 0, {1}), std::invalid_argument);
  CHECK_THROWS_AS(make_ap(c5, 1, {5}), std::invalid_argument);
  CHECK_THROWS(PrimeCtx::make(9, 1, 10));
  CHECK_THROWS(PrimeCtx::make(2, 1, 10));
  CHECK_THROWS(PrimeCtx::make(5, 3, 2));
}

TEST_CASE("teichmuller lifts") {
  auto ctx = PrimeCtx::make(5, 1, 10);
  CHECK(teichmuller(ctx, 0).is_zero());
  CHECK(teichmuller(ctx, 1).agrees_with(PadicElem::from_int(ctx, 1L)));
  const auto t2 = teichmuller(ctx, 2);
  CHECK(t2.pow(4).agrees_with(PadicElem::from_int(ctx, 1L)));
  CHECK(t2.residue() == 2);
  CHECK(t2.agrees_with(PadicElem::from_int(ctx, oracle::teichmuller(5, 2, 10))));

  for (int p : {3, 5, 7, 11, 13})
    for (int e : {1, 2, 3})
      for (int M : {e, 17, 60}) {
        if (M < e) continue;
        auto c = PrimeCtx::make(p, e, M);
        for (int lam = 0; lam < p; ++lam) {
          const auto t = teichmuller(c, lam);
          CHECK(t.pow(p).agrees_with(t));
          CHECK(t.residue() == lam);
          if (lam) {
            const long N = (M + e - 1) / e;
            CHECK(t.agrees_with(PadicElem::from_int(c, oracle::teichmuller(p, lam, N))));
          }
        }
      }
}

TEST_CASE("zero at precision never reports an exact valuation") {
  auto ctx = PrimeCtx::make(7, 2, 20);
  const auto z = PadicElem::zero(ctx, 20);
  CHECK(z.valuation().kind == Valuation::Kind::lower_bound);
  CHECK(z.valuation().to_string() == ">=10");

  const auto x = teichmuller(ctx, 3) + make_ap(ctx, 5, {2, 1});
  const auto s = x + (-x);
  CHECK(s.is_zero());
  CHECK(s.valuation().kind == Valuation::Kind::lower_bound);
  CHECK(s.known_prec() >= ctx->M());

  // p^10 vanishes at precision 20 with e = 2
  CHECK(PadicElem::from_int(ctx, 282475249L).is_zero());
}

TEST_CASE("integrality verdicts") {
  auto ctx = PrimeCtx::make(5, 2, 12);
  const auto pi = PadicElem::pi_power(ctx, 1);
  CHECK(pi.is_integral() == Tri::yes);
  CHECK(pi.inverse().is_integral() == Tri::no);
  CHECK_THROWS_AS(pi.inverse().residue(), std::invalid_argument);
  // a zero known only modulo pi^-3 is undecided
  const auto z = PadicElem::pi_power(ctx, -3) * PadicElem::zero(ctx, 0);
  CHECK(z.is_integral() == Tri::insufficient_precision);
  CHECK_THROWS_AS(z.residue(), PrecisionError);
  CHECK(std::string(to_string(Tri::insufficient_precision)) == "insufficient_precision");
}

TEST_CASE("precision bookkeeping") {
  auto ctx = PrimeCtx::make(5, 1, 10);
  const auto p3 = PadicElem::pi_power(ctx, 3);
  const auto inv = p3.inverse();
  CHECK(inv.valuation().to_string() == "-3");
  CHECK(inv.known_prec() == 4);  // relative precision 7 is kept
  CHECK((inv * p3).agrees_with(PadicElem::from_int(ctx, 1L)));
  CHECK((inv * p3).known_prec() == 7);
  const auto two = PadicElem::from_int(ctx, 2L);
  CHECK((two * two.inverse()).agrees_with(PadicElem::from_int(ctx, 1L)));
  CHECK(((inv + PadicElem::from_int(ctx, 1L)) - inv).known_prec() == 4);
}

TEST_CASE("valuation is additive on random products") {
  std::mt19937_64 rng(20240611);
  for (int p : {3, 5, 7, 13})
    for (int e : {1, 2, 3}) {
      auto ctx = PrimeCtx::make(p, e, 40);
      std::uniform_int_distribution<long> dig(0, 1000000), sh(-5, 8);
      for (int trial = 0; trial < 200; ++trial) {
        std::vector<mpz_class> a(e), b(e);
        for (auto& x : a) x = dig(rng);
        for (auto& x : b) x = dig(rng);
        const auto x = PadicElem::from_shifted_digits(ctx, a, sh(rng), 40);
        const auto y = PadicElem::from_shifted_digits(ctx, b, sh(rng), 40);
        const auto xy = x * y;
        if (!x.is_zero() && !y.is_zero()) {
          REQUIRE(!xy.is_zero());
          CHECK(xy.valuation() == x.valuation() + y.valuation());
        }
        const auto sum = x + y;
        if (!sum.is_zero() && !x.is_zero() && !y.is_zero()) {
          const auto lo = x.valuation().compare(y.valuation()) <= 0 ? x.valuation() : y.valuation();
          CHECK(sum.valuation().compare(lo) >= 0);
        }
        CHECK((x * y).agrees_with(y * x));
        CHECK(((x + y) - y).agrees_with(x));
      }
    }
}

TEST_CASE("ramified arithmetic matches integer arithmetic on p-powers") {
  auto ctx = PrimeCtx::make(7, 3, 30);
  const auto pi = PadicElem::pi_power(ctx, 1);
  CHECK(pi.pow(3).agrees_with(PadicElem::from_int(ctx, 7L)));
  CHECK(pi.pow(7).agrees_with(PadicElem::from_int(ctx, 49L) * pi));
  const auto u = PadicElem::from_digits(ctx, {3, 1, 4}, 30);
  CHECK((u * u.inverse()).agrees_with(PadicElem::from_int(ctx, 1L)));
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "loconst/binom.hpp"
#include "loconst/hecke.hpp"
#include "oracles.hpp"

using namespace loconst;

namespace {

bool same(const EPoly& a, const EPoly& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!(a[i] - b[i]).is_zero()) return false;
  return true;
}

EPoly monomial(const CtxPtr& ctx, int r, int i, long c = 1) {
  EPoly v = epoly_zero(ctx, r);
  v.set(i, PadicElem::from_int(ctx, c));
  return v;
}

EPoly random_epoly(std::mt19937_64& rng, const CtxPtr& ctx, int r) {
  EPoly v = epoly_zero(ctx, r);
  std::uniform_int_distribution<long> coef(-40, 40);
  for (int i = 0; i <= r; ++i) v.set(i, PadicElem::from_int(ctx, coef(rng)));
  return v;
}

TreeFunc random_side0(std::mt19937_64& rng, const CtxPtr& ctx, int r, int max_level) {
  TreeFunc f(ctx, r);
  std::uniform_int_distribution<int> lev(0, max_level), dig(0, ctx->p() - 1), count(1, 3);
  for (int n = count(rng); n > 0; --n) {
    CosetRep rep;
    for (int k = lev(rng); k > 0; --k) rep.digits.push_back(dig(rng));
    f.add_term(rep, random_epoly(rng, ctx, r));
  }
  return f;
}

Mat2 inverse_of(const Mat2& g) {
  const PadicElem di = g.det().inverse();
  return {g.d * di, -(g.b * di), -(g.c * di), g.a * di};
}

}  // namespace

TEST_CASE("up-tree part on monomials") {
  const int p = 5, r = 3;
  const auto ctx = PrimeCtx::make(p, 1, 12);
  TreeFunc f(ctx, r);
  f.add_term(CosetRep::identity(), monomial(ctx, r, r));  // Y^r
  const TreeFunc t = T_plus(f);
  CHECK(t.terms().size() == size_t(p));
  for (int lam = 0; lam < p; ++lam) {
    // (-[lam] X + p Y)^r expanded directly
    EPoly expect = epoly_zero(ctx, r);
    const PadicElem tl = teichmuller(ctx, lam);
    for (int j = 0; j <= r; ++j) {
      PadicElem c = PadicElem::from_int(ctx, binomial(r, j)) * (-tl).pow(r - j) *
                    PadicElem::from_int(ctx, 1L).mul_pi(j);
      expect.set(j, c);
    }
    const CosetRep child{0, {lam}};
    REQUIRE(t.terms().count(child));
    CHECK(same(t.terms().at(child), expect));
  }
  CHECK(same(t.terms().at({0, {0}}), monomial(ctx, r, r, 125)));

  TreeFunc g(ctx, r);
  g.add_term(CosetRep::identity(), monomial(ctx, r, 0));  // X^r
  const TreeFunc tg = T_plus(g);
  for (int lam = 0; lam < p; ++lam) CHECK(same(tg.terms().at({0, {lam}}), monomial(ctx, r, 0)));
}

TEST_CASE("down-tree part on monomials") {
  const int p = 5, r = 4;
  const auto ctx = PrimeCtx::make(p, 1, 12);
  TreeFunc f(ctx, r);
  f.add_term(CosetRep::identity(), monomial(ctx, r, r));
  const TreeFunc t = T_minus(f);
  REQUIRE(t.terms().size() == 1);
  CHECK(same(t.terms().at(CosetRep::alpha()), monomial(ctx, r, r)));

  TreeFunc g(ctx, r);
  g.add_term({0, {0}}, monomial(ctx, r, 0));
  const TreeFunc tg = T_minus(g);
  REQUIRE(tg.terms().size() == 1);
  CHECK(same(tg.terms().at(CosetRep::identity()), monomial(ctx, r, 0, 625)));
}

TEST_CASE("fast operator agrees with the defining sum") {
  std::mt19937_64 rng(20240611);
  for (int p : {3, 5, 7})
    for (int e : {1, 2})
      for (int trial = 0; trial < 4; ++trial) {
        const auto ctx = PrimeCtx::make(p, e, 10 * e);
        const int r = 1 + static_cast<int>(rng() % 6);
        const TreeFunc f = random_side0(rng, ctx, r, 2);
        CHECK(check_T_side1_consistency(f));
      }
}

TEST_CASE("down after up multiplies by p^(r+1)") {
  std::mt19937_64 rng(77);
  for (int p : {3, 5})
    for (int r : {1, 3, 6}) {
      const auto ctx = PrimeCtx::make(p, 1, 14);
      const EPoly v = random_epoly(rng, ctx, r);
      TreeFunc f(ctx, r);
      f.add_term(CosetRep::identity(), v);
      const TreeFunc back = T_minus(T_plus(f));
      REQUIRE(back.terms().size() == 1);
      mpz_class scale;
      mpz_ui_pow_ui(scale.get_mpz_t(), p, r + 1);
      CHECK(same(back.terms().at(CosetRep::identity()),
                 epoly_scaled(v, PadicElem::from_int(ctx, scale))));
    }
}

TEST_CASE("linearity") {
  std::mt19937_64 rng(5);
  const auto ctx = PrimeCtx::make(5, 2, 16);
  for (int trial = 0; trial < 5; ++trial) {
    const TreeFunc f = random_side0(rng, ctx, 4, 2), g = random_side0(rng, ctx, 4, 2);
    const PadicElem c = PadicElem::from_int(ctx, static_cast<long>(rng() % 97));
    CHECK(T_full(f + g.scaled(c)).agrees_with(T_full(f) + T_full(g).scaled(c)));
  }
}

TEST_CASE("operator commutes with translation") {
  std::mt19937_64 rng(99);
  for (int p : {3, 5}) {
    const auto ctx = PrimeCtx::make(p, 1, 14);
    const auto gctx = group_ctx(*ctx, 6);
    const std::vector<Mat2> hs = {
        Mat2::from_ints(gctx, 1, 1, 0, 1), Mat2::from_ints(gctx, 0, 1, 1, 0),
        Mat2::from_ints(gctx, p, 0, 0, 1), Mat2::from_ints(gctx, 1, 0, p, 1),
        Mat2::from_ints(gctx, 2, 1, 1, 1)};
    for (const auto& h : hs) {
      const TreeFunc f = random_side0(rng, ctx, 3, 1);
      CHECK(T_full(translate(h, f)).agrees_with(translate(h, T_full(f))));
    }
  }
}

TEST_CASE("canonical representatives") {
  const int p = 5;
  const auto ctx = PrimeCtx::make(p, 1, 10);
  const auto gctx = group_ctx(*ctx, 4);
  const std::vector<CosetRep> reps = {CosetRep::identity(), CosetRep::alpha(), {0, {3}},
                                      {0, {0, 4, 1}}, {1, {2}}, {1, {0, 0, 3}}};
  for (const auto& rep : reps) {
    const auto can = canonicalize(coset_matrix(gctx, rep));
    CHECK(can.rep == rep);
    CHECK(can.k.in_K() == Tri::yes);
  }
  const Mat2 scaled = coset_matrix(gctx, CosetRep::alpha()) * Mat2::from_ints(gctx, p, 0, 0, p);
  CHECK(canonicalize(scaled).rep == CosetRep::alpha());
  // right multiplication by K keeps the coset
  const Mat2 k = Mat2::from_ints(gctx, 2, 1, 3, 2);
  for (const auto& rep : reps) CHECK(canonicalize(coset_matrix(gctx, rep) * k).rep == rep);
}

TEST_CASE("evaluation") {
  std::mt19937_64 rng(3);
  const int p = 5;
  const auto ctx = PrimeCtx::make(p, 1, 12);
  const auto gctx = group_ctx(*ctx, 4);
  const int r = 3;
  const EPoly v = random_epoly(rng, ctx, r);
  const CosetRep rep{0, {2, 1}};
  TreeFunc f(ctx, r);
  f.add_term(rep, v);
  const Mat2 k = Mat2::from_ints(gctx, 1, 2, 3, 1);  // det -5: not in K
  const Mat2 k2 = Mat2::from_ints(gctx, 1, 2, 1, 3);
  const Mat2 ginv = inverse_of(coset_matrix(gctx, rep));
  CHECK(same(evaluate(f, ginv), v));
  CHECK(same(evaluate(f, k2 * ginv), act(k2, v, ctx)));
  CHECK(same(evaluate(f, k * ginv), epoly_zero(ctx, r)));

  const TreeFunc g = random_side0(rng, ctx, r, 2);
  const Mat2 h = Mat2::from_ints(gctx, 1, 1, 0, 1);
  for (const auto& [rp, w] : g.terms()) {
    const Mat2 x = inverse_of(coset_matrix(gctx, rp));
    CHECK(same(evaluate(translate(h, g), x), evaluate(g, x * h)));
  }
}

TEST_CASE("witness at v = 1") {
  WitnessParams wp;
  wp.p = 7;
  wp.h = 1;
  wp.b = 3;
  wp.m = 1;
  wp.t = 2;
  CHECK(wp.r() == 297);
  const auto rep = verify_witness(wp);
  CHECK(rep.passed());
  CHECK(rep.certifies_generator_vanishes());
  CHECK_FALSE(rep.boundary);
  const auto& total = rep.claim("total");
  REQUIRE(total.residue.size() == 1);
  const HomPoly expect = make_Fm(7, 297, 3, 1).scaled(-3);
  CHECK(total.residue.at({0, {0}}) == expect);
  for (const auto& c : rep.claims) CHECK(c.min_prec >= 1);
}

TEST_CASE("witness on the boundary") {
  WitnessParams wp;
  wp.p = 5;
  wp.e = 2;
  wp.h = 3;
  wp.b = 3;
  wp.m = 1;
  wp.t = 3;
  wp.unit = {1};
  const auto exc = verify_witness(wp);
  CHECK(exc.boundary);
  CHECK(exc.passed());
  CHECK(exc.exceptional);
  CHECK(exc.boundary_unit == 0);
  CHECK_FALSE(exc.certifies_generator_vanishes());

  wp.unit = {2};
  const auto gen = verify_witness(wp);
  CHECK(gen.passed());
  CHECK_FALSE(gen.exceptional);
  CHECK(gen.ap_ratio_residue == 2);
  CHECK(gen.boundary_unit == 4);
  CHECK(gen.adjusted_matches);
  CHECK(gen.certifies_generator_vanishes());
}

TEST_CASE("witness hypotheses") {
  WitnessParams wp;
  wp.p = 7;
  wp.h = 0;
  wp.b = 3;
  wp.m = 1;
  wp.t = 2;
  CHECK_THROWS_AS(verify_witness(wp), HypothesisError);
  wp.h = 1;
  wp.m = 2;
  CHECK_THROWS_AS(verify_witness(wp), HypothesisError);
  wp.m = 1;
  wp.t = 0;
  CHECK_THROWS_AS(verify_witness(wp), HypothesisError);
  wp.t = 2;
  wp.s = 7;
  CHECK_THROWS_AS(verify_witness(wp), HypothesisError);
  wp.s = 1;
  wp.b = 1;
  CHECK_THROWS_AS(verify_witness(wp), HypothesisError);
  wp.b = 2;
  wp.h = 1;
  CHECK_THROWS_AS(verify_witness(wp), HypothesisError);  // b = 2v with b even
}

TEST_CASE("witness over small parameters") {
  for (int p : {5, 7})
    for (int b = 3; b < p; ++b) {
      WitnessParams wp;
      wp.p = p;
      wp.h = 1;
      wp.b = b;
      wp.m = 1;
      wp.t = 2;
      const auto rep = verify_witness(wp);
      CHECK(rep.passed());
      CHECK(rep.claim("total").residue.size() == 1);
    }
}

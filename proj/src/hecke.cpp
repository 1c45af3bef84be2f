#include "loconst/hecke.hpp"

#include <algorithm>
#include <climits>
#include <sstream>
#include <stdexcept>

#include "loconst/binom.hpp"

namespace loconst {

namespace {

long digits_needed(const PrimeCtx& ctx) { return (ctx.M() + ctx.e() - 1) / ctx.e(); }

mpz_class teich_int(int p, long lam, long N) {
  mpz_class mod, x = lam, y;
  mpz_ui_pow_ui(mod.get_mpz_t(), p, N);
  const mpz_class pp(p);
  if (lam % p == 0) return 0;
  for (;;) {
    mpz_powm(y.get_mpz_t(), x.get_mpz_t(), pp.get_mpz_t(), mod.get_mpz_t());
    if (y == x) return x;
    x = y;
  }
}

// Powers of Teichmuller lifts modulo p^N: pw[lam][k] = [lam]^k, k < p - 1.
struct TeichPowers {
  int p;
  mpz_class mod;
  std::vector<std::vector<mpz_class>> pw;

  TeichPowers(int p_, long N) : p(p_), pw(p_) {
    mpz_ui_pow_ui(mod.get_mpz_t(), p, N);
    for (int lam = 1; lam < p; ++lam) {
      const mpz_class t = teich_int(p, lam, N);
      pw[lam].resize(p - 1);
      pw[lam][0] = 1;
      for (int k = 1; k < p - 1; ++k) {
        pw[lam][k] = pw[lam][k - 1] * t;
        mpz_fdiv_r(pw[lam][k].get_mpz_t(), pw[lam][k].get_mpz_t(), mod.get_mpz_t());
      }
    }
  }

  /// (sign * [lam])^n with sign = -1 when negate is set.
  mpz_class power(int lam, long n, bool negate) const {
    if (lam == 0) return n == 0 ? 1 : 0;
    mpz_class out = pw[lam][n % (p - 1)];
    if (negate && (n & 1)) out = mod - out;
    return out;
  }
};

std::vector<int> live_indices(const EPoly& v, long& lowval) {
  std::vector<int> idx;
  lowval = LONG_MAX;
  for (const auto& [i, x] : v.entries()) {
    idx.push_back(i);
    lowval = std::min(lowval, x.pi_val_lower());
  }
  return idx;
}

void check_side0(const TreeFunc& f, const char* who) {
  for (const auto& [rep, v] : f.terms())
    if (rep.side != 0) throw std::invalid_argument(std::string(who) + ": side-1 support");
}

PadicElem to_ctx(const PadicElem& x, const CtxPtr& ctx) {
  if (x.ctx() == ctx) return x;
  if (x.ctx()->p() != ctx->p()) throw std::invalid_argument("to_ctx: mismatched prime");
  if (x.ctx()->e() != 1) throw std::invalid_argument("to_ctx: source must be unramified");
  if (x.is_integral() != Tri::yes) throw PrecisionError("to_ctx: entry not known to be integral");
  const auto dig = x.integral_digits();
  return PadicElem::from_digits(ctx, {dig[0]}, x.known_prec() * ctx->e());
}

std::vector<int> teich_digits(PadicElem x, int count, const CtxPtr& gctx) {
  std::vector<int> out;
  for (int i = 0; i < count; ++i) {
    if (x.is_integral() != Tri::yes || x.known_prec() < 1)
      throw PrecisionError("canonicalize: coset digits undetermined at this precision");
    const int lam = x.residue();
    out.push_back(lam);
    x = (x - teichmuller(gctx, lam)).mul_pi(-1);
  }
  return out;
}

Mat2 coset_inverse(const CtxPtr& gctx, const CosetRep& rep) {
  PadicElem lam = PadicElem::zero(gctx, gctx->M());
  for (int i = 0; i < rep.level(); ++i) lam += teichmuller(gctx, rep.digits[i]).mul_pi(i);
  const long m = rep.level();
  const auto one = PadicElem::from_int(gctx, 1L);
  const auto zero = PadicElem::zero(gctx, gctx->M());
  if (rep.side == 0) return {one.mul_pi(-m), -(lam.mul_pi(-m)), zero, one};
  return {one, zero, -(lam.mul_pi(-m)), one.mul_pi(-m - 1)};
}

}  // namespace

std::string CosetRep::to_string() const {
  std::ostringstream os;
  os << "g" << side << "(" << level() << ";";
  for (size_t i = 0; i < digits.size(); ++i) os << (i ? "," : "") << digits[i];
  os << ")";
  return os.str();
}

// ------------------------------------------------------------------ EPoly

EPoly::EPoly(CtxPtr ctx, int r) : ctx_(std::move(ctx)), r_(r), zero_(PadicElem::zero(ctx_, ctx_->M())) {
  if (r < 0) throw std::invalid_argument("EPoly: negative degree");
}

const PadicElem& EPoly::operator[](int i) const {
  if (i < 0 || i > r_) throw std::out_of_range("EPoly: index out of range");
  const auto it = entries_.find(i);
  return it == entries_.end() ? zero_ : it->second;
}

void EPoly::set(int i, PadicElem x) {
  if (i < 0 || i > r_) throw std::out_of_range("EPoly: index out of range");
  if (x.is_zero() && x.known_prec() >= ctx_->M())
    entries_.erase(i);
  else
    entries_.insert_or_assign(i, std::move(x));
}

void EPoly::add(int i, const PadicElem& x) {
  if (x.is_zero() && x.known_prec() >= ctx_->M()) return;
  const auto it = entries_.find(i);
  set(i, it == entries_.end() ? x : it->second + x);
}

EPoly epoly_zero(const CtxPtr& ctx, int r) { return EPoly(ctx, r); }

EPoly epoly_lift(const CtxPtr& ctx, const HomPoly& f) {
  EPoly v(ctx, f.r());
  for (int i = 0; i <= f.r(); ++i)
    if (f.coeff(i)) v.set(i, PadicElem::from_int(ctx, static_cast<long>(f.coeff(i))));
  return v;
}

EPoly epoly_scaled(const EPoly& v, const PadicElem& c) {
  EPoly out(v.ctx(), v.r());
  for (const auto& [i, x] : v.entries()) out.set(i, x * c);
  return out;
}

EPoly epoly_add(const EPoly& a, const EPoly& b) {
  if (a.r() != b.r()) throw std::invalid_argument("epoly_add: degree mismatch");
  EPoly out = a;
  for (const auto& [i, x] : b.entries()) out.add(i, x);
  return out;
}

// ------------------------------------------------------------------- Mat2

Mat2 Mat2::from_ints(const CtxPtr& ctx, long a, long b, long c, long d) {
  return {PadicElem::from_int(ctx, a), PadicElem::from_int(ctx, b), PadicElem::from_int(ctx, c),
          PadicElem::from_int(ctx, d)};
}

Mat2 Mat2::operator*(const Mat2& o) const {
  return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

PadicElem Mat2::det() const { return a * d - b * c; }

Tri Mat2::in_K() const {
  bool undecided = false;
  for (const auto* x : {&a, &b, &c, &d}) {
    const Tri t = x->is_integral();
    if (t == Tri::no) return Tri::no;
    if (t == Tri::insufficient_precision) undecided = true;
  }
  const auto dt = det();
  if (dt.is_zero()) return Tri::insufficient_precision;
  if (dt.pi_val_lower() != 0) return undecided ? Tri::insufficient_precision : Tri::no;
  return undecided ? Tri::insufficient_precision : Tri::yes;
}

CtxPtr group_ctx(const PrimeCtx& coeff_ctx, int max_level) {
  const long Mg = digits_needed(coeff_ctx) + 2L * std::max(max_level, 0) + 16;
  return PrimeCtx::make(coeff_ctx.p(), 1, static_cast<int>(Mg));
}

Mat2 coset_matrix(const CtxPtr& gctx, const CosetRep& rep) {
  PadicElem lam = PadicElem::zero(gctx, gctx->M());
  for (int i = 0; i < rep.level(); ++i) lam += teichmuller(gctx, rep.digits[i]).mul_pi(i);
  const long m = rep.level();
  const auto one = PadicElem::from_int(gctx, 1L);
  const auto zero = PadicElem::zero(gctx, gctx->M());
  if (rep.side == 0) return {one.mul_pi(m), lam, zero, one};
  return {one, zero, lam.mul_pi(1), one.mul_pi(m + 1)};
}

Canonical canonicalize(const Mat2& g) {
  const CtxPtr& gctx = g.a.ctx();
  if (gctx->e() != 1) throw std::invalid_argument("canonicalize: matrices live in an e = 1 context");
  auto val = [](const PadicElem& x) { return x.pi_val_lower(); };

  CosetRep rep;
  bool found = false;
  // Upper triangular form from the bottom row: [[A, B], [0, D]].
  {
    PadicElem A(gctx), B(gctx), D(gctx);
    bool ok = true;
    if (!g.d.is_zero() && (g.c.is_zero() || val(g.d) <= val(g.c))) {
      A = g.a - g.b * g.c * g.d.inverse();
      B = g.b;
      D = g.d;
    } else if (!g.c.is_zero()) {
      A = g.b - g.a * g.d * g.c.inverse();
      B = g.a;
      D = g.c;
    } else {
      ok = false;
    }
    if (ok && !A.is_zero()) {
      const long w = val(A) - val(D);
      const PadicElem bp = B * D.inverse();
      if (w >= 0 && (bp.is_zero() ? bp.known_prec() >= w : val(bp) >= 0)) {
        rep = {0, teich_digits(bp, static_cast<int>(w), gctx)};
        found = true;
      }
    }
  }
  // Lower triangular form from the top row: [[A, 0], [C, D]].
  if (!found) {
    PadicElem A(gctx), C(gctx), D(gctx);
    if (!g.a.is_zero() && (g.b.is_zero() || val(g.a) <= val(g.b))) {
      A = g.a;
      C = g.c;
      D = g.d - g.c * g.b * g.a.inverse();
    } else if (!g.b.is_zero()) {
      A = g.b;
      C = g.d;
      D = g.c - g.d * g.a * g.b.inverse();
    } else {
      throw PrecisionError("canonicalize: top row indistinguishable from zero");
    }
    if (D.is_zero()) throw PrecisionError("canonicalize: determinant undetermined");
    const long w = val(D) - val(A);
    const PadicElem cp = C * A.inverse();
    if (w >= 1 && (cp.is_zero() ? cp.known_prec() >= w : val(cp) >= 1)) {
      rep = {1, teich_digits(cp.mul_pi(-1), static_cast<int>(w - 1), gctx)};
      found = true;
    }
  }
  if (!found) throw std::logic_error("canonicalize: no standard representative found");

  Mat2 k = coset_inverse(gctx, rep) * g;
  const PadicElem dt = k.det();
  if (dt.is_zero()) throw PrecisionError("canonicalize: determinant undetermined");
  const long vd = val(dt);
  if (vd % 2 != 0) throw std::logic_error("canonicalize: odd determinant valuation");
  const long s = vd / 2;
  k = {k.a.mul_pi(-s), k.b.mul_pi(-s), k.c.mul_pi(-s), k.d.mul_pi(-s)};
  switch (k.in_K()) {
    case Tri::yes: break;
    case Tri::no: throw std::logic_error("canonicalize: residual matrix not in K");
    case Tri::insufficient_precision: throw PrecisionError("canonicalize: residual matrix undetermined");
  }
  return {std::move(rep), std::move(k)};
}

EPoly act(const Mat2& k, const EPoly& v, const CtxPtr& ctx) {
  const PadicElem a = to_ctx(k.a, ctx), b = to_ctx(k.b, ctx), c = to_ctx(k.c, ctx),
                  d = to_ctx(k.d, ctx);
  const int r = v.r();
  const auto zero = PadicElem::zero(ctx, ctx->M());
  // Horner: H_k = H_{k-1} (aX + cY) + v_k (bX + dY)^k
  std::vector<PadicElem> h{v[0]}, yp{PadicElem::from_int(ctx, 1L)};
  for (int n = 1; n <= r; ++n) {
    std::vector<PadicElem> nh(n + 1, zero), ny(n + 1, zero);
    for (int i = 0; i < n; ++i) {
      nh[i] += a * h[i];
      nh[i + 1] += c * h[i];
      ny[i] += b * yp[i];
      ny[i + 1] += d * yp[i];
    }
    for (int i = 0; i <= n; ++i) nh[i] += v[n] * ny[i];
    h.swap(nh);
    yp.swap(ny);
  }
  EPoly out(ctx, r);
  for (int i = 0; i <= r; ++i) out.set(i, std::move(h[i]));
  return out;
}

// --------------------------------------------------------------- TreeFunc

TreeFunc::TreeFunc(CtxPtr ctx, int r) : ctx_(std::move(ctx)), r_(r) {
  if (r < 0) throw std::invalid_argument("TreeFunc: negative degree");
}

void TreeFunc::add_term(const CosetRep& rep, const EPoly& v) {
  if (v.r() != r_) throw std::invalid_argument("TreeFunc: degree mismatch");
  auto it = terms_.find(rep);
  if (it == terms_.end()) {
    if (!v.is_exact_zero()) terms_.emplace(rep, v);
    return;
  }
  for (const auto& [i, x] : v.entries()) it->second.add(i, x);
  if (it->second.is_exact_zero()) terms_.erase(it);
}

TreeFunc TreeFunc::operator+(const TreeFunc& o) const {
  if (r_ != o.r_) throw std::invalid_argument("TreeFunc: degree mismatch");
  TreeFunc out = *this;
  for (const auto& [rep, v] : o.terms_) out.add_term(rep, v);
  return out;
}

TreeFunc TreeFunc::operator-(const TreeFunc& o) const {
  return *this + o.scaled(PadicElem::from_int(ctx_, -1L));
}

TreeFunc TreeFunc::scaled(const PadicElem& c) const {
  TreeFunc out(ctx_, r_);
  for (const auto& [rep, v] : terms_) out.add_term(rep, epoly_scaled(v, c));
  return out;
}

long TreeFunc::min_precision() const {
  long best = ctx_->M();
  for (const auto& [rep, v] : terms_)
    for (const auto& [i, x] : v.entries()) best = std::min(best, x.known_prec());
  return best;
}

long TreeFunc::min_valuation() const {
  long best = ctx_->M();
  for (const auto& [rep, v] : terms_)
    for (const auto& [i, x] : v.entries()) best = std::min(best, x.pi_val_lower());
  return best;
}

Tri TreeFunc::integral() const {
  bool undecided = false;
  for (const auto& [rep, v] : terms_)
    for (const auto& [i, x] : v.entries()) {
      if (x.is_integral() == Tri::no) return Tri::no;
      if (x.known_prec() < 1) undecided = true;
    }
  return undecided ? Tri::insufficient_precision : Tri::yes;
}

std::map<CosetRep, HomPoly> TreeFunc::residue() const {
  std::map<CosetRep, HomPoly> out;
  const int p = ctx_->p();
  for (const auto& [rep, v] : terms_) {
    HomPoly f(p, r_);
    for (const auto& [i, x] : v.entries()) {
      if (x.known_prec() < 1 && x.is_zero())
        throw PrecisionError("residue: coefficient known only modulo pi^" + std::to_string(x.known_prec()));
      f.set(i, x.residue());
    }
    if (!f.is_zero()) out.emplace(rep, std::move(f));
  }
  return out;
}

bool TreeFunc::agrees_with(const TreeFunc& o) const {
  const TreeFunc d = *this - o;
  for (const auto& [rep, v] : d.terms_)
    for (const auto& [i, x] : v.entries())
      if (!x.is_zero()) return false;
  return true;
}

// ------------------------------------------------------------- operators

TreeFunc T_plus(const TreeFunc& f) {
  check_side0(f, "T_plus");
  const CtxPtr& ctx = f.ctx();
  const int p = ctx->p(), r = f.r();
  const long M = ctx->M(), e = ctx->e(), N = digits_needed(*ctx);
  const TeichPowers tp(p, N);
  TreeFunc out(ctx, r);
  for (const auto& [rep, v] : f.terms()) {
    long lowval;
    const auto idx = live_indices(v, lowval);
    if (idx.empty()) continue;
    // p^j kills coefficient j once j e + lowval >= M
    const long jmax = std::min<long>(r, M - lowval <= 0 ? -1 : (M - lowval + e - 1) / e - 1);
    std::vector<EPoly> outs(p, epoly_zero(ctx, r));
    mpz_class binom, z;
    for (long j = 0; j <= jmax; ++j) {
      std::vector<PadicElem> acc(p, PadicElem::zero(ctx, M));
      for (int i : idx) {
        if (i < j) continue;
        if (i == j) {
          for (int lam = 0; lam < p; ++lam) acc[lam] += v[i];
          continue;
        }
        mpz_bin_uiui(binom.get_mpz_t(), i, j);
        mpz_fdiv_r(binom.get_mpz_t(), binom.get_mpz_t(), tp.mod.get_mpz_t());
        for (int lam = 1; lam < p; ++lam) {
          z = binom * tp.power(lam, i - j, true);
          acc[lam] += v[i] * PadicElem::from_int(ctx, z);
        }
      }
      for (int lam = 0; lam < p; ++lam) outs[lam].set(static_cast<int>(j), acc[lam].mul_pi(j * e));
    }
    for (int lam = 0; lam < p; ++lam) {
      CosetRep child = rep;
      child.digits.push_back(lam);
      out.add_term(child, outs[lam]);
    }
  }
  return out;
}

TreeFunc T_minus(const TreeFunc& f) {
  check_side0(f, "T_minus");
  const CtxPtr& ctx = f.ctx();
  const int p = ctx->p(), r = f.r();
  const long M = ctx->M(), e = ctx->e(), N = digits_needed(*ctx);
  const TeichPowers tp(p, N);
  std::map<int, std::vector<mpz_class>> rows;
  TreeFunc out(ctx, r);
  for (const auto& [rep, v] : f.terms()) {
    if (rep.level() == 0) {
      EPoly w(ctx, r);
      for (const auto& [j, x] : v.entries()) w.set(j, x.mul_pi(long(r - j) * e));
      out.add_term(CosetRep::alpha(), w);
      continue;
    }
    const int delta = rep.digits.back();
    CosetRep parent = rep;
    parent.digits.pop_back();
    long lowval;
    const auto idx = live_indices(v, lowval);
    EPoly w = epoly_zero(ctx, r);
    mpz_class z;
    for (int i : idx) {
      const long shift = long(r - i) * e;
      if (shift + v[i].pi_val_lower() >= M) continue;
      const PadicElem ci = v[i].mul_pi(shift);
      if (delta == 0) {
        w.add(i, ci);
        continue;
      }
      auto it = rows.find(i);
      if (it == rows.end()) it = rows.emplace(i, binomial_row_mod(i, p, static_cast<int>(N))).first;
      const auto& row = it->second;
      for (int j = 0; j <= i; ++j) {
        z = row[j] * tp.power(delta, i - j, false);
        w.add(j, ci * PadicElem::from_int(ctx, z));
      }
    }
    out.add_term(parent, w);
  }
  return out;
}

TreeFunc T_raw(const TreeFunc& f) {
  const CtxPtr& ctx = f.ctx();
  const int p = ctx->p();
  int max_level = 0;
  for (const auto& [rep, v] : f.terms()) max_level = std::max(max_level, rep.level());
  const CtxPtr gctx = group_ctx(*ctx, max_level + 2);
  TreeFunc out(ctx, f.r());
  const auto zero_c = PadicElem::zero(ctx, ctx->M());
  const auto one_c = PadicElem::from_int(ctx, 1L);
  const auto p_c = PadicElem::from_int(ctx, static_cast<long>(p));
  for (const auto& [rep, v] : f.terms()) {
    const Mat2 g = coset_matrix(gctx, rep);
    for (int lam = 0; lam < p; ++lam) {
      const Mat2 step{PadicElem::from_int(gctx, static_cast<long>(p)), teichmuller(gctx, lam),
                      PadicElem::zero(gctx, gctx->M()), PadicElem::from_int(gctx, 1L)};
      // v(X, -[lam] X + p Y)
      const Mat2 sub{one_c, -teichmuller(ctx, lam), zero_c, p_c};
      const Canonical can = canonicalize(g * step);
      out.add_term(can.rep, act(can.k, act(sub, v, ctx), ctx));
    }
    const Mat2 step = Mat2::from_ints(gctx, 1, 0, 0, p);
    const Mat2 sub{p_c, zero_c, zero_c, one_c};  // v(pX, Y)
    const Canonical can = canonicalize(g * step);
    out.add_term(can.rep, act(can.k, act(sub, v, ctx), ctx));
  }
  return out;
}

TreeFunc T_full(const TreeFunc& f) {
  TreeFunc side0(f.ctx(), f.r()), side1(f.ctx(), f.r());
  for (const auto& [rep, v] : f.terms()) (rep.side == 0 ? side0 : side1).add_term(rep, v);
  TreeFunc out = T_plus(side0) + T_minus(side0);
  if (!side1.terms().empty()) out = out + T_raw(side1);
  return out;
}

TreeFunc translate(const Mat2& h, const TreeFunc& f) {
  const CtxPtr& gctx = h.a.ctx();
  TreeFunc out(f.ctx(), f.r());
  for (const auto& [rep, v] : f.terms()) {
    const Canonical can = canonicalize(h * coset_matrix(gctx, rep));
    out.add_term(can.rep, act(can.k, v, f.ctx()));
  }
  return out;
}

EPoly evaluate(const TreeFunc& f, const Mat2& gp) {
  const CtxPtr& gctx = gp.a.ctx();
  EPoly acc = epoly_zero(f.ctx(), f.r());
  for (const auto& [rep, v] : f.terms()) {
    const Mat2 x = gp * coset_matrix(gctx, rep);
    const PadicElem dt = x.det();
    if (dt.is_zero()) throw PrecisionError("evaluate: determinant undetermined");
    const long vd = dt.pi_val_lower();
    if (vd % 2 != 0) continue;
    const long s = vd / 2;
    const Mat2 k{x.a.mul_pi(-s), x.b.mul_pi(-s), x.c.mul_pi(-s), x.d.mul_pi(-s)};
    const Tri inK = k.in_K();
    if (inK == Tri::insufficient_precision) throw PrecisionError("evaluate: membership in KZ undetermined");
    if (inK == Tri::yes) acc = epoly_add(acc, act(k, v, f.ctx()));
  }
  return acc;
}

bool check_T_side1_consistency(const TreeFunc& f) {
  const TreeFunc fast = T_plus(f) + T_minus(f);
  const TreeFunc raw = T_raw(f);
  if (!fast.agrees_with(raw)) return false;
  return (fast - raw).min_precision() >= f.ctx()->M();
}

// ---------------------------------------------------------------- witness

long WitnessParams::r() const {
  mpz_class pt;
  mpz_ui_pow_ui(pt.get_mpz_t(), p, t);
  const mpz_class rr = b + s * pt * (p - 1);
  if (!rr.fits_sint_p()) throw std::overflow_error("WitnessParams: r too large");
  return rr.get_si();
}

long WitnessParams::auto_precision() const {
  const long ceil_v = (h + e - 1) / e;
  return e * (2 * ceil_v + t + 4);
}

void check_witness_hypotheses(const WitnessParams& wp) {
  if (wp.p == 2 || !is_prime(wp.p)) throw HypothesisError("p must be an odd prime");
  if (wp.e < 1) throw HypothesisError("e must be >= 1");
  if (wp.h < 1) throw HypothesisError("v(a_p) must be positive (a_p in the maximal ideal)");
  if (wp.unit.empty() || static_cast<long>(wp.unit.size()) > wp.e ||
      mod_p(wp.unit[0], wp.p) == 0)
    throw HypothesisError("a_p unit part must have between 1 and e digits and a nonzero residue");
  if (wp.s < 1 || wp.s % wp.p == 0) throw HypothesisError("need s >= 1 with p not dividing s");
  if (wp.t < 1) throw HypothesisError("need t >= 1");
  if (wp.b < 1) throw HypothesisError("need b >= 1");
  if (2 * wp.h > long(wp.b) * wp.e) throw HypothesisError("need 2 v(a_p) <= b");
  if (wp.m < 1 || long(wp.m) * wp.e > wp.h) throw HypothesisError("need 1 <= m <= floor(v(a_p))");
  if (long(wp.t) * wp.e <= 2 * wp.h - wp.e) throw HypothesisError("need t > 2 v(a_p) - 1");
  if (2 * wp.h == long(wp.b) * wp.e && wp.b % 2 == 0)
    throw HypothesisError("b = 2 v(a_p) requires b odd");
  if (wp.M != 0 && wp.M < wp.e) throw HypothesisError("precision M must be at least e");
}

TreeFunc build_f0(const CtxPtr& ctx, const WitnessParams& wp, const PadicElem& ap) {
  const long r = wp.r();
  const int p = wp.p;
  const long N = digits_needed(*ctx);
  const PadicElem K =
      PadicElem::from_int(ctx, static_cast<long>(p - 1)).mul_pi(long(wp.m) * ctx->e()) * (ap * ap).inverse();
  const auto row = binomial_row_mod(r, p, static_cast<int>(N));
  EPoly v = epoly_zero(ctx, static_cast<int>(r));
  const long cls = mod_p(wp.b - wp.m, p - 1);
  for (long j = cls; j < r - wp.m; j += p - 1) v.set(static_cast<int>(j), K * PadicElem::from_int(ctx, row[j]));
  TreeFunc f(ctx, static_cast<int>(r));
  f.add_term(CosetRep::identity(), v);
  return f;
}

TreeFunc build_f1(const CtxPtr& ctx, const WitnessParams& wp, const PadicElem& ap) {
  const long r = wp.r();
  const int p = wp.p, b = wp.b, m = wp.m;
  const PadicElem ap_inv = ap.inverse();
  TreeFunc f(ctx, static_cast<int>(r));

  mpz_class crm = binomial(r, m);
  const PadicElem c = PadicElem::from_int(ctx, static_cast<long>(1 - p)) * PadicElem::from_int(ctx, crm) * ap_inv;
  EPoly v = epoly_zero(ctx, static_cast<int>(r));
  v.set(static_cast<int>(r - m), c);
  v.set(b - m, -c);
  f.add_term({0, {0}}, v);

  for (int lam = 1; lam < p; ++lam) {
    const PadicElem coef =
        teichmuller(ctx, inv_mod_p(lam, p)).pow(m).mul_pi(long(m) * ctx->e()) * ap_inv;
    EPoly w = epoly_zero(ctx, static_cast<int>(r));
    w.set(static_cast<int>(r), coef);
    w.set(b, -coef);
    f.add_term({0, {lam}}, w);
  }
  return f;
}

const ClaimCheck& WitnessReport::claim(const std::string& name) const {
  for (const auto& c : claims)
    if (c.name == name) return c;
  throw std::out_of_range("WitnessReport: no claim " + name);
}

bool WitnessReport::insufficient_precision() const {
  for (const auto& c : claims)
    if (c.integral == Tri::insufficient_precision) return true;
  return false;
}

bool WitnessReport::passed() const {
  if (claims.empty() || !binom_r_m_unit) return false;
  for (const auto& c : claims)
    if (c.integral != Tri::yes || !c.residue_ok) return false;
  return !boundary || adjusted_matches;
}

bool WitnessReport::certifies_generator_vanishes() const { return passed() && !exceptional; }

WitnessReport verify_witness(const WitnessParams& wp) {
  check_witness_hypotheses(wp);
  WitnessReport rep;
  rep.params = wp;
  rep.r = wp.r();
  rep.M = wp.M ? wp.M : wp.auto_precision();
  const int p = wp.p, b = wp.b, m = wp.m;
  const long r = rep.r;
  if (r > INT_MAX / 2) throw HypothesisError("r too large");
  rep.boundary = 2 * wp.h == long(b) * wp.e;
  rep.outside_hypotheses = b > p - 1;

  const CtxPtr ctx = PrimeCtx::make(p, wp.e, static_cast<int>(rep.M));
  std::vector<mpz_class> unit(wp.unit.begin(), wp.unit.end());
  const PadicElem ap = make_ap(ctx, wp.h, unit);

  const TreeFunc f0 = build_f0(ctx, wp, ap);
  const TreeFunc f1 = build_f1(ctx, wp, ap);
  const TreeFunc tp0 = T_plus(f0), tm0 = T_minus(f0), tp1 = T_plus(f1), tm1 = T_minus(f1);
  const TreeFunc ap0 = f0.scaled(ap), ap1 = f1.scaled(ap);
  const TreeFunc total = tp0 + tm0 + tp1 + tm1 - ap0 - ap1;

  // predictions over F_p
  const int ubar = static_cast<int>(mod_p(wp.unit[0], p));
  const long uinv2 = long(inv_mod_p(ubar, p)) * inv_mod_p(ubar, p) % p;
  const int crm = binom_mod_p(r, m, p);
  const int crbm = binom_mod_p(r, b - m, p);
  rep.binom_r_m_unit = crm != 0;
  const CosetRep g10{0, {0}};
  HomPoly bterm(p, static_cast<int>(r));
  if (rep.boundary) bterm.set(b - m, -uinv2 * crbm);
  const HomPoly fm = make_Fm(p, r, b, m);
  const HomPoly pred_total = fm.scaled(-crm) + bterm;

  auto nonzero = [](std::map<CosetRep, HomPoly> mp) {
    for (auto it = mp.begin(); it != mp.end();) it = it->second.is_zero() ? mp.erase(it) : std::next(it);
    return mp;
  };
  auto check = [&](const std::string& name, const TreeFunc& tf, std::map<CosetRep, HomPoly> pred) {
    ClaimCheck c;
    c.name = name;
    c.integral = tf.integral();
    c.min_prec = tf.min_precision();
    c.min_val = tf.min_valuation();
    c.predicted = nonzero(std::move(pred));
    if (c.integral == Tri::yes) {
      c.residue = tf.residue();
      c.residue_ok = c.residue == c.predicted;
    }
    rep.claims.push_back(std::move(c));
  };
  check("Tplus_f0", tp0, {{g10, bterm}});
  check("Tminus_f0", tm0, {});
  check("Tplus_f1", tp1, {});
  check("Tminus_f1_minus_ap_f0", tm1 - ap0, {});
  check("total", total, {{g10, pred_total}});

  if (rep.boundary) {
    rep.f_prime_axiom = true;
    rep.ap_ratio_residue = ubar;
    rep.boundary_unit = static_cast<int>(mod_p(long(binom_mod_p(b, m, p)) * (uinv2 - 1), p));
    rep.exceptional = long(ubar) * ubar % p == 1;
    const auto& tot = rep.claims.back();
    if (tot.integral == Tri::yes) {
      // adding the image of f' contributes (p^b / a_p^2) C(r, b-m) X^m Y^(r-m)
      HomPoly adjusted = tot.residue.count(g10) ? tot.residue.at(g10) : HomPoly(p, static_cast<int>(r));
      adjusted.set(static_cast<int>(r - m), adjusted.coeff(static_cast<int>(r - m)) + uinv2 * crbm);
      const long constant = mod_p(-(crm - uinv2 * crbm), p);
      rep.adjusted_matches = adjusted == fm.scaled(constant) && constant == rep.boundary_unit;
    }
  }
  return rep;
}

}  // namespace loconst

#include "loconst/padic.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

namespace loconst {

const char* to_string(Tri t) {
  switch (t) {
    case Tri::yes: return "yes";
    case Tri::no: return "no";
    case Tri::insufficient_precision: return "insufficient_precision";
  }
  return "?";
}

bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

long vp(const mpz_class& n, long p) {
  if (n == 0) return -1;
  mpz_class rest;
  mpz_class pp(p);
  return static_cast<long>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), pp.get_mpz_t()));
}

// ---------------------------------------------------------------- PrimeCtx

PrimeCtx::PrimeCtx(int p, int e, int M) : p_(p), e_(e), M_(M) {
  const long n = (M + e - 1) / e + 64;
  pow_cache_.reserve(n + 1);
  mpz_class x = 1;
  for (long k = 0; k <= n; ++k) {
    pow_cache_.push_back(x);
    x *= p;
  }
}

std::shared_ptr<const PrimeCtx> PrimeCtx::make(int p, int e, int M) {
  if (p == 2 || !is_prime(p)) throw std::invalid_argument("p must be an odd prime");
  if (e < 1) throw std::invalid_argument("ramification index e must be >= 1");
  if (M < e) throw std::invalid_argument("precision M must be at least e");
  return std::shared_ptr<const PrimeCtx>(new PrimeCtx(p, e, M));
}

mpz_class PrimeCtx::p_pow(long k) const {
  if (k < 0) throw std::invalid_argument("negative power of p");
  if (static_cast<size_t>(k) < pow_cache_.size()) return pow_cache_[k];
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), p_, static_cast<unsigned long>(k));
  return r;
}

// --------------------------------------------------------------- Valuation

Valuation Valuation::exact(long num, long den) { return {Kind::exact, num, den}; }
Valuation Valuation::at_least(long num, long den) { return {Kind::lower_bound, num, den}; }
Valuation Valuation::infinity() { return {Kind::infinite, 0, 1}; }

int Valuation::compare(const Valuation& o) const {
  if (kind == Kind::infinite || o.kind == Kind::infinite) {
    if (kind == o.kind) return 0;
    return kind == Kind::infinite ? 1 : -1;
  }
  const long lhs = num * o.den, rhs = o.num * den;
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

Valuation Valuation::operator+(const Valuation& o) const {
  if (kind == Kind::infinite || o.kind == Kind::infinite) return infinity();
  const long d = std::lcm(den, o.den);
  Valuation r{Kind::exact, num * (d / den) + o.num * (d / o.den), d};
  if (kind == Kind::lower_bound || o.kind == Kind::lower_bound) r.kind = Kind::lower_bound;
  return r;
}

bool Valuation::operator==(const Valuation& o) const {
  return kind == o.kind && (kind == Kind::infinite || compare(o) == 0);
}

std::string Valuation::to_string() const {
  if (kind == Kind::infinite) return "inf";
  const long g = std::gcd(num, den);
  std::ostringstream os;
  if (kind == Kind::lower_bound) os << ">=";
  os << num / g;
  if (den / g != 1) os << '/' << den / g;
  return os.str();
}

// ------------------------------------------------------- O_E digit helpers

namespace {

using Digits = std::vector<mpz_class>;

long ceil_div(long a, long b) { return a >= 0 ? (a + b - 1) / b : -((-a) / b); }

// sum c_i pi^i modulo pi^R, digits in [0, p^k).
void reduce(Digits& c, long R, const PrimeCtx& ctx) {
  const long e = ctx.e();
  for (long i = 0; i < e; ++i) {
    const long k = ceil_div(R - i, e);
    if (k <= 0) {
      c[i] = 0;
    } else {
      const mpz_class m = ctx.p_pow(k);
      mpz_fdiv_r(c[i].get_mpz_t(), c[i].get_mpz_t(), m.get_mpz_t());
    }
  }
}

long digits_val(const Digits& c, long R, const PrimeCtx& ctx) {
  long best = R;
  for (long i = 0; i < ctx.e(); ++i)
    if (c[i] != 0) best = std::min(best, ctx.e() * vp(c[i], ctx.p()) + i);
  return best;
}

Digits shift_up(const Digits& c, long k, const PrimeCtx& ctx) {
  const long e = ctx.e(), q = k / e, s = k % e;
  Digits out(e);
  for (long i = 0; i < e; ++i) {
    if (i >= s) {
      out[i] = c[i - s];
    } else {
      out[i] = c[e - s + i] * ctx.p();
    }
  }
  if (q > 0) {
    const mpz_class m = ctx.p_pow(q);
    for (auto& x : out) x *= m;
  }
  return out;
}

// Exact division by pi^k; the caller guarantees divisibility.
Digits shift_down(const Digits& c, long k, const PrimeCtx& ctx) {
  const long e = ctx.e(), q = k / e, s = k % e;
  Digits out(e);
  for (long j = 0; j < e; ++j) {
    if (j < e - s) {
      out[j] = c[j + s];
    } else {
      mpz_divexact_ui(out[j].get_mpz_t(), c[j - (e - s)].get_mpz_t(), ctx.p());
    }
  }
  if (q > 0) {
    const mpz_class m = ctx.p_pow(q);
    for (auto& x : out) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  }
  return out;
}

Digits ring_mul(const Digits& a, const Digits& b, const PrimeCtx& ctx) {
  const long e = ctx.e();
  if (e == 1) return {a[0] * b[0]};
  Digits conv(2 * e - 1);
  for (long i = 0; i < e; ++i) {
    if (a[i] == 0) continue;
    for (long j = 0; j < e; ++j) conv[i + j] += a[i] * b[j];
  }
  Digits out(conv.begin(), conv.begin() + e);
  for (long k = e; k < 2 * e - 1; ++k) out[k - e] += conv[k] * ctx.p();
  return out;
}

Digits unit_inverse(const Digits& u, long R, const PrimeCtx& ctx) {
  const long e = ctx.e();
  mpz_class c0 = u[0] % ctx.p();
  if (c0 < 0) c0 += ctx.p();
  mpz_class inv0;
  const mpz_class pp(ctx.p());
  if (mpz_invert(inv0.get_mpz_t(), c0.get_mpz_t(), pp.get_mpz_t()) == 0)
    throw std::logic_error("unit_inverse: not a unit");
  Digits y(e);
  y[0] = inv0;
  long cur = 1;
  while (cur < R) {
    cur = std::min(2 * cur, R);
    Digits t = ring_mul(u, y, ctx);
    for (auto& x : t) x = -x;
    t[0] += 2;
    reduce(t, cur, ctx);
    y = ring_mul(y, t, ctx);
    reduce(y, cur, ctx);
  }
  reduce(y, R, ctx);
  return y;
}

}  // namespace

// --------------------------------------------------------------- PadicElem

PadicElem::PadicElem(CtxPtr ctx) : ctx_(std::move(ctx)), zero_(true), prec_(ctx_->M()) {}

PadicElem PadicElem::zero(CtxPtr ctx, long prec) {
  PadicElem z(std::move(ctx));
  z.prec_ = std::min<long>(prec, z.ctx_->M());
  return z;
}

PadicElem PadicElem::from_digits(CtxPtr ctx, std::vector<mpz_class> digits, long prec) {
  if (static_cast<long>(digits.size()) > ctx->e())
    throw std::invalid_argument("from_digits: more than e digits");
  return from_shifted_digits(std::move(ctx), std::move(digits), 0, prec);
}

PadicElem PadicElem::from_shifted_digits(CtxPtr ctx, std::vector<mpz_class> c, long lo, long prec) {
  PadicElem x(ctx);
  x.prec_ = std::min<long>(prec, ctx->M());
  const long R = x.prec_ - lo;
  if (R <= 0) return x;
  c.resize(ctx->e());
  reduce(c, R, *ctx);
  const long k = digits_val(c, R, *ctx);
  if (k >= R) return x;
  x.zero_ = false;
  x.val_ = lo + k;
  x.unit_ = k == 0 ? std::move(c) : shift_down(c, k, *ctx);
  reduce(x.unit_, R - k, *ctx);
  return x;
}

PadicElem PadicElem::from_int(CtxPtr ctx, const mpz_class& n) {
  if (n == 0) return zero(ctx, ctx->M());
  const long N = (ctx->M() + ctx->e() - 1) / ctx->e();
  mpz_class r;
  const mpz_class m = ctx->p_pow(N);
  mpz_fdiv_r(r.get_mpz_t(), n.get_mpz_t(), m.get_mpz_t());
  return from_digits(std::move(ctx), {r}, std::numeric_limits<long>::max());
}

PadicElem PadicElem::from_int(CtxPtr ctx, long n) { return from_int(std::move(ctx), mpz_class(n)); }

PadicElem PadicElem::pi_power(CtxPtr ctx, long k) {
  return from_shifted_digits(ctx, {mpz_class(1)}, k, ctx->M());
}

PadicElem PadicElem::mul_pi(long k) const {
  PadicElem out = *this;
  if (zero_) {
    out.prec_ = std::min<long>(prec_ + k, ctx_->M());
    return out;
  }
  out.val_ = val_ + k;
  out.prec_ = prec_ + k;
  if (out.prec_ > ctx_->M()) {
    out.prec_ = ctx_->M();
    if (out.val_ >= out.prec_) return zero(ctx_, out.prec_);
    reduce(out.unit_, out.prec_ - out.val_, *ctx_);
  }
  return out;
}

Valuation PadicElem::valuation() const {
  return zero_ ? Valuation::at_least(prec_, ctx_->e()) : Valuation::exact(val_, ctx_->e());
}

Tri PadicElem::is_integral() const {
  if (zero_) return prec_ >= 0 ? Tri::yes : Tri::insufficient_precision;
  return val_ >= 0 ? Tri::yes : Tri::no;
}

int PadicElem::residue() const {
  switch (is_integral()) {
    case Tri::no: throw std::invalid_argument("residue of a non-integral value");
    case Tri::insufficient_precision:
      throw PrecisionError("residue: integrality undecided at precision " + std::to_string(prec_));
    case Tri::yes: break;
  }
  if (zero_) {
    if (prec_ < 1) throw PrecisionError("residue: value known only modulo pi^0");
    return 0;
  }
  if (val_ > 0) return 0;
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), unit_[0].get_mpz_t(), ctx_->p());
  return static_cast<int>(r.get_si());
}

std::vector<mpz_class> PadicElem::integral_digits() const {
  if (zero_) {
    if (prec_ < 0) throw PrecisionError("integral_digits: integrality undecided");
    return Digits(ctx_->e());
  }
  if (val_ < 0) throw std::invalid_argument("integral_digits: negative valuation");
  Digits d = shift_up(unit_, val_, *ctx_);
  reduce(d, prec_, *ctx_);
  return d;
}

PadicElem PadicElem::operator+(const PadicElem& o) const {
  const long prec = std::min(prec_, o.prec_);
  if (zero_ && o.zero_) return zero(ctx_, prec);
  long lo;
  if (zero_) {
    lo = o.val_;
  } else if (o.zero_) {
    lo = val_;
  } else {
    lo = std::min(val_, o.val_);
  }
  if (prec - lo <= 0) return zero(ctx_, prec);
  Digits sum(ctx_->e());
  if (!zero_) sum = shift_up(unit_, val_ - lo, *ctx_);
  if (!o.zero_) {
    Digits b = shift_up(o.unit_, o.val_ - lo, *ctx_);
    for (long i = 0; i < ctx_->e(); ++i) sum[i] += b[i];
  }
  return from_shifted_digits(ctx_, std::move(sum), lo, prec);
}

PadicElem PadicElem::operator-() const {
  if (zero_) return *this;
  Digits neg = unit_;
  for (auto& x : neg) x = -x;
  return from_shifted_digits(ctx_, std::move(neg), val_, prec_);
}

PadicElem PadicElem::operator-(const PadicElem& o) const { return *this + (-o); }

PadicElem PadicElem::operator*(const PadicElem& o) const {
  const long M = ctx_->M();
  if (zero_ && o.zero_) return zero(ctx_, std::min(prec_ + o.prec_, static_cast<long>(M)));
  if (zero_) return zero(ctx_, std::min(prec_ + o.val_, static_cast<long>(M)));
  if (o.zero_) return zero(ctx_, std::min(o.prec_ + val_, static_cast<long>(M)));
  const long val = val_ + o.val_;
  const long R = std::min(prec_ - val_, o.prec_ - o.val_);
  return from_shifted_digits(ctx_, ring_mul(unit_, o.unit_, *ctx_), val, val + R);
}

PadicElem PadicElem::inverse() const {
  if (zero_) throw PrecisionError("inverse of a value indistinguishable from zero");
  const long R = prec_ - val_;
  return from_shifted_digits(ctx_, unit_inverse(unit_, R, *ctx_), -val_, -val_ + R);
}

PadicElem PadicElem::pow(unsigned long k) const {
  PadicElem result = from_int(ctx_, 1L);
  PadicElem base = *this;
  while (k > 0) {
    if (k & 1UL) result *= base;
    k >>= 1;
    if (k > 0) base *= base;
  }
  return result;
}

std::string PadicElem::to_string() const {
  std::ostringstream os;
  if (zero_) {
    os << "O(pi^" << prec_ << ")";
    return os.str();
  }
  os << "pi^" << val_ << "*(";
  for (long i = 0; i < ctx_->e(); ++i) {
    if (i) os << " + ";
    os << unit_[i].get_str();
    if (i) os << "*pi^" << i;
  }
  os << ") + O(pi^" << prec_ << ")";
  return os.str();
}

// -------------------------------------------------------------- factories

PadicElem teichmuller(const CtxPtr& ctx, long lam) {
  const long p = ctx->p();
  lam %= p;
  if (lam < 0) lam += p;
  if (lam == 0) return PadicElem::zero(ctx, ctx->M());
  const long N = (ctx->M() + ctx->e() - 1) / ctx->e();
  const mpz_class mod = ctx->p_pow(N);
  mpz_class x = lam, y;
  const mpz_class pp(p);
  for (;;) {
    mpz_powm(y.get_mpz_t(), x.get_mpz_t(), pp.get_mpz_t(), mod.get_mpz_t());
    if (y == x) break;
    x = y;
  }
  return PadicElem::from_digits(ctx, {x}, ctx->M());
}

PadicElem make_ap(const CtxPtr& ctx, long h, const std::vector<mpz_class>& unit_digits) {
  if (h <= 0) throw std::invalid_argument("a_p must lie in the maximal ideal (h >= 1)");
  if (unit_digits.empty() || static_cast<long>(unit_digits.size()) > ctx->e())
    throw std::invalid_argument("a_p unit needs between 1 and e digits");
  mpz_class c0;
  mpz_fdiv_r_ui(c0.get_mpz_t(), unit_digits[0].get_mpz_t(), ctx->p());
  if (c0 == 0) throw std::invalid_argument("a_p unit part reduces to zero mod pi");
  return PadicElem::from_digits(ctx, unit_digits, ctx->M()).mul_pi(h);
}

}  // namespace loconst

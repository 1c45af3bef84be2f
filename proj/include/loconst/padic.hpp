#pragma once

#include <gmpxx.h>

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace loconst {

/// Raised when a verdict cannot be decided at the precision carried by a value.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Three-valued answer for questions that depend on precision.
enum class Tri { yes, no, insufficient_precision };

const char* to_string(Tri t);

/// The prime p, the ramification index e of E = Q_p(pi) with pi^e = p,
/// and the working absolute pi-adic precision M.
class PrimeCtx {
 public:
  static std::shared_ptr<const PrimeCtx> make(int p, int e, int M);

  int p() const { return p_; }
  int e() const { return e_; }
  int M() const { return M_; }

  /// p^k for k >= 0 (cached for small k).
  mpz_class p_pow(long k) const;

 private:
  PrimeCtx(int p, int e, int M);

  int p_;
  int e_;
  int M_;
  std::vector<mpz_class> pow_cache_;
};

using CtxPtr = std::shared_ptr<const PrimeCtx>;

bool is_prime(long n);

/// A rational valuation num/den with den = e, or a lower bound when the
/// value is indistinguishable from zero, or +infinity.
struct Valuation {
  enum class Kind { exact, lower_bound, infinite };

  Kind kind = Kind::infinite;
  long num = 0;
  long den = 1;

  static Valuation exact(long num, long den);
  static Valuation at_least(long num, long den);
  static Valuation infinity();

  bool is_exact() const { return kind == Kind::exact; }
  /// num/den compared as rationals; both must be exact.
  int compare(const Valuation& other) const;
  Valuation operator+(const Valuation& other) const;
  bool operator==(const Valuation& other) const;
  std::string to_string() const;
};

/// An element of E = Q_p(pi), pi^e = p, known modulo pi^known_prec.
///
/// A nonzero value is stored as pi^val * u with u a unit of O_E written as
/// sum_{i<e} c_i pi^i, the c_i reduced so that u is canonical modulo
/// pi^(known_prec - val). A value whose tracked digits all vanish is a
/// "zero at precision known_prec" and never reports an exact valuation.
/// Absolute precision never exceeds the context's M.
class PadicElem {
 public:
  explicit PadicElem(CtxPtr ctx);  // zero at precision M

  static PadicElem zero(CtxPtr ctx, long prec);
  static PadicElem from_int(CtxPtr ctx, const mpz_class& n);
  static PadicElem from_int(CtxPtr ctx, long n);
  /// pi^k, k may be negative.
  static PadicElem pi_power(CtxPtr ctx, long k);
  /// sum_i digits[i] * pi^i known modulo pi^prec (prec is capped at M).
  static PadicElem from_digits(CtxPtr ctx, std::vector<mpz_class> digits, long prec);
  /// pi^shift * sum_i digits[i] * pi^i known modulo pi^prec.
  static PadicElem from_shifted_digits(CtxPtr ctx, std::vector<mpz_class> digits, long shift,
                                       long prec);

  const CtxPtr& ctx() const { return ctx_; }
  bool is_zero() const { return zero_; }
  long known_prec() const { return prec_; }
  /// Exact pi-adic valuation if nonzero, otherwise the precision (a lower bound).
  long pi_val_lower() const { return zero_ ? prec_ : val_; }
  Valuation valuation() const;
  Tri is_integral() const;
  /// Image in O_E / pi = F_p.
  int residue() const;
  /// Unit part digits c_0..c_{e-1} (empty for zero).
  const std::vector<mpz_class>& unit_digits() const { return unit_; }
  /// Digits of the value itself; requires a nonnegative valuation.
  std::vector<mpz_class> integral_digits() const;

  PadicElem operator+(const PadicElem& o) const;
  PadicElem operator-(const PadicElem& o) const;
  PadicElem operator-() const;
  PadicElem operator*(const PadicElem& o) const;
  PadicElem& operator+=(const PadicElem& o) { return *this = *this + o; }
  PadicElem& operator-=(const PadicElem& o) { return *this = *this - o; }
  PadicElem& operator*=(const PadicElem& o) { return *this = *this * o; }

  PadicElem inverse() const;
  PadicElem pow(unsigned long k) const;
  /// Multiplication by pi^k, exact shift of the valuation.
  PadicElem mul_pi(long k) const;

  /// True when x - y is indistinguishable from zero at the joint precision.
  bool agrees_with(const PadicElem& o) const { return (*this - o).is_zero(); }

  std::string to_string() const;

 private:
  CtxPtr ctx_;
  bool zero_ = true;
  long val_ = 0;
  long prec_ = 0;
  std::vector<mpz_class> unit_;
};

/// Teichmuller representative of lam in F_p, to precision M.
PadicElem teichmuller(const CtxPtr& ctx, long lam);

/// a_p = u * pi^h with u = sum unit_digits[i] pi^i, v(a_p) = h/e.
PadicElem make_ap(const CtxPtr& ctx, long h, const std::vector<mpz_class>& unit_digits);

/// p-adic valuation of a nonzero integer; -1 for zero.
long vp(const mpz_class& n, long p);

}  // namespace loconst

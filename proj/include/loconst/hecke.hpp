#pragma once

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "loconst/padic.hpp"
#include "loconst/polymod.hpp"

namespace loconst {

/// Standard coset representatives of G / KZ:
///   side 0: g0(m, lam) = [[p^m, lam], [0, 1]]
///   side 1: g1(m, lam) = [[1, 0], [p lam, p^(m+1)]]
/// with lam = sum_i [digits[i]] p^i and m = digits.size().
struct CosetRep {
  int side = 0;
  std::vector<int> digits;

  int level() const { return static_cast<int>(digits.size()); }
  static CosetRep identity() { return {}; }
  static CosetRep alpha() { return {1, {}}; }

  auto operator<=>(const CosetRep&) const = default;
  std::string to_string() const;
};

/// Degree-r polynomial over E: entry i is the coefficient of X^(r-i) Y^i.
/// Only coefficients that differ from zero at full precision are stored; a
/// zero known to lower precision is kept, so the precision ledger survives.
class EPoly {
 public:
  EPoly(CtxPtr ctx, int r);

  const CtxPtr& ctx() const { return ctx_; }
  int r() const { return r_; }
  size_t size() const { return static_cast<size_t>(r_ + 1); }
  const PadicElem& operator[](int i) const;
  void set(int i, PadicElem x);
  void add(int i, const PadicElem& x);
  /// Stored coefficients by index.
  const std::map<int, PadicElem>& entries() const { return entries_; }
  bool is_exact_zero() const { return entries_.empty(); }

 private:
  CtxPtr ctx_;
  int r_;
  PadicElem zero_;
  std::map<int, PadicElem> entries_;
};

EPoly epoly_zero(const CtxPtr& ctx, int r);
/// Integer lift of a polynomial over F_p, coefficients in [0, p).
EPoly epoly_lift(const CtxPtr& ctx, const HomPoly& f);
EPoly epoly_scaled(const EPoly& v, const PadicElem& c);
EPoly epoly_add(const EPoly& a, const EPoly& b);

/// 2x2 matrix over Q_p. Entries share one context.
struct Mat2 {
  PadicElem a, b, c, d;

  static Mat2 from_ints(const CtxPtr& ctx, long a, long b, long c, long d);
  Mat2 operator*(const Mat2& o) const;
  PadicElem det() const;
  /// Entries integral and determinant a unit.
  Tri in_K() const;
};

/// An e = 1 context wide enough for matrices of coset level up to max_level
/// when coefficients live in `coeff_ctx`.
CtxPtr group_ctx(const PrimeCtx& coeff_ctx, int max_level);

Mat2 coset_matrix(const CtxPtr& gctx, const CosetRep& rep);

/// g = p^s * g_std * k with k in K.
struct Canonical {
  CosetRep rep;
  Mat2 k;
};

/// Finds the standard representative of g KZ by column reduction.
/// Throws PrecisionError when the entries do not determine the coset.
Canonical canonicalize(const Mat2& g);

/// (k . v)(X, Y) = v(aX + cY, bX + dY). Entries of k must be integral; they
/// are carried into the coefficient context of v with their precision.
EPoly act(const Mat2& k, const EPoly& v, const CtxPtr& coeff_ctx);

/// Finitely supported function sum [g_std, v] on G / KZ. Central p acts
/// trivially, so [g z k, v] = [g, k v] for z a power of p and k in K.
class TreeFunc {
 public:
  TreeFunc(CtxPtr ctx, int r);

  const CtxPtr& ctx() const { return ctx_; }
  int r() const { return r_; }
  const std::map<CosetRep, EPoly>& terms() const { return terms_; }

  /// Adds v to the value at rep. Terms that vanish at full precision are dropped.
  void add_term(const CosetRep& rep, const EPoly& v);

  TreeFunc operator+(const TreeFunc& o) const;
  TreeFunc operator-(const TreeFunc& o) const;
  TreeFunc scaled(const PadicElem& c) const;

  /// Smallest absolute precision over all stored coefficients (M if none).
  long min_precision() const;
  /// Smallest pi-adic valuation over stored coefficients; zeros count with
  /// their precision as a lower bound.
  long min_valuation() const;
  /// yes when every coefficient is integral with a determined residue.
  Tri integral() const;
  /// Reduction mod pi; only nonzero residues are returned.
  std::map<CosetRep, HomPoly> residue() const;
  /// Every coefficient of the difference vanishes at the joint precision.
  bool agrees_with(const TreeFunc& o) const;

 private:
  CtxPtr ctx_;
  int r_;
  std::map<CosetRep, EPoly> terms_;
};

/// Up-tree part on side-0 terms:
/// [g0(n, mu), v] -> sum_lam [g0(n+1, mu + p^n [lam]), v(X, -[lam] X + p Y)].
TreeFunc T_plus(const TreeFunc& f);
/// Down-tree part on side-0 terms: level n > 0 moves to the truncated digit
/// list, level 0 moves to alpha.
TreeFunc T_minus(const TreeFunc& f);
/// T^+ + T^- on side-0 terms; side-1 terms go through T_raw.
TreeFunc T_full(const TreeFunc& f);
/// The defining sum over the p+1 neighbours, each matrix canonicalized.
TreeFunc T_raw(const TreeFunc& f);

/// Left translation h . [g, v] = [h g, v].
TreeFunc translate(const Mat2& h, const TreeFunc& f);
/// The value f(g') as a polynomial.
EPoly evaluate(const TreeFunc& f, const Mat2& gp);

/// T_raw(f) agrees with T_plus(f) + T_minus(f) at full precision.
bool check_T_side1_consistency(const TreeFunc& f);

// ------------------------------------------------------------- witness

struct WitnessParams {
  int p = 0;
  int e = 1;
  long h = 0;                  // v(a_p) = h / e
  std::vector<long> unit{1};   // a_p = pi^h * (unit[0] + unit[1] pi + ...)
  int b = 0;
  int m = 0;
  int t = 0;
  long s = 1;                  // r = b + s p^t (p-1)
  long M = 0;                  // 0 selects the automatic precision

  long r() const;
  /// e (2 ceil(v) + t + 4): every claim lands at absolute precision >= e.
  long auto_precision() const;
};

/// Raised when the parameters fall outside the hypotheses of the witness.
class HypothesisError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Throws HypothesisError unless 2v <= b, 1 <= m <= floor(v), t > 2v - 1,
/// p does not divide s, and b odd when b = 2v.
void check_witness_hypotheses(const WitnessParams& wp);

TreeFunc build_f0(const CtxPtr& ctx, const WitnessParams& wp, const PadicElem& ap);
TreeFunc build_f1(const CtxPtr& ctx, const WitnessParams& wp, const PadicElem& ap);

struct ClaimCheck {
  std::string name;
  Tri integral = Tri::insufficient_precision;
  bool residue_ok = false;
  long min_prec = 0;
  long min_val = 0;
  std::map<CosetRep, HomPoly> residue;
  std::map<CosetRep, HomPoly> predicted;
};

struct WitnessReport {
  WitnessParams params;
  long r = 0;
  long M = 0;
  bool boundary = false;            // b = 2 v(a_p)
  bool outside_hypotheses = false;  // b > p - 1
  bool binom_r_m_unit = false;
  std::vector<ClaimCheck> claims;   // Tplus_f0, Tminus_f0, Tplus_f1, Tminus_f1_minus_ap_f0, total
  // boundary case only
  int ap_ratio_residue = 0;         // a_p / p^(b/2) mod pi
  int boundary_unit = 0;            // C(b,m) (p^b/a_p^2 - 1) mod pi
  bool exceptional = false;         // a_p / p^(b/2) = +-1 mod pi
  bool adjusted_matches = false;    // residue after the f' step equals the stated multiple of F_m
  bool f_prime_axiom = false;       // f' consumed as an axiom, not constructed

  const ClaimCheck& claim(const std::string& name) const;
  bool insufficient_precision() const;
  /// Every claim integral with the predicted residue.
  bool passed() const;
  /// passed() and [g0(1,0), F_m] is forced to zero (not exceptional).
  bool certifies_generator_vanishes() const;
};

WitnessReport verify_witness(const WitnessParams& wp);

}  // namespace loconst

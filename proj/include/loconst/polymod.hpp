#pragma once

#include <optional>
#include <string>
#include <vector>

namespace loconst {

/// Homogeneous polynomial of degree r over F_p: coeffs[i] is the coefficient
/// of X^(r-i) Y^i. Coefficients are kept in [0, p).
class HomPoly {
 public:
  HomPoly(int p, int r);
  HomPoly(int p, int r, std::vector<long> coeffs);

  static HomPoly monomial(int p, int r, int i, long c = 1);
  /// theta = X^p Y - X Y^p in V_{p+1}.
  static HomPoly theta(int p);

  int p() const { return p_; }
  int r() const { return r_; }
  int coeff(int i) const { return c_[i]; }
  const std::vector<int>& coeffs() const { return c_; }
  void set(int i, long c);
  bool is_zero() const;

  HomPoly operator+(const HomPoly& o) const;
  HomPoly operator-(const HomPoly& o) const;
  HomPoly operator*(const HomPoly& o) const;
  HomPoly scaled(long c) const;
  bool operator==(const HomPoly& o) const { return p_ == o.p_ && r_ == o.r_ && c_ == o.c_; }

  std::string to_string() const;

 private:
  int p_;
  int r_;
  std::vector<int> c_;
};

HomPoly theta_power(int p, int k);

/// F / theta if theta divides F exactly, otherwise nullopt.
std::optional<HomPoly> divide_by_theta(const HomPoly& F);

/// Largest m with theta^m | F, by repeated exact division. Throws for F = 0.
int theta_order(const HomPoly& F);

/// The two-condition criterion for theta^m | F when the support of F lies in
/// one class a mod (p-1). Throws if the support leaves that class.
bool divconds_check(const HomPoly& F, int m, int a);

/// F_m = X^m Y^(r-m) - X^(r-b+m) Y^(b-m), requires r = b mod (p-1), 0 <= m <= b.
HomPoly make_Fm(int p, long r, int b, int m);

/// H_m = F_m - (-1)^m theta^m (Y^(r-m(p+1)) - Y^(b-2m) X^(r-b-pm+m)).
HomPoly make_Hm(int p, long r, int b, int m);

/// Invertible 2x2 matrix [[a, b], [c, d]] over F_p.
struct GammaMat {
  int p;
  int a, b, c, d;

  static GammaMat make(int p, long a, long b, long c, long d);
  static GammaMat identity(int p) { return make(p, 1, 0, 0, 1); }
  int det() const;
  GammaMat operator*(const GammaMat& o) const;
};

/// (g.F)(X, Y) = F(aX + cY, bX + dY), times det(g)^twist.
HomPoly gamma_act(const GammaMat& g, const HomPoly& F, int twist = 0);

/// F / theta^m; throws if theta^m does not divide F.
HomPoly quotient_coords(const HomPoly& F, int m);

/// The quotient V_s / V_s^(1) with a fixed monomial basis: X^s, X^(s-i) Y^i
/// for 1 <= i <= p-1, and Y^s (for s >= p; all monomials when s < p).
class ThetaQuotient {
 public:
  ThetaQuotient(int p, long s);

  int p() const { return p_; }
  long s() const { return s_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  /// Exponent of Y in the k-th basis monomial.
  long basis_index(int k) const { return basis_[k]; }

  std::vector<int> coords(const HomPoly& F) const;
  /// Coordinates of g applied to the class with the given coordinates.
  std::vector<int> act(const GammaMat& g, const std::vector<int>& v) const;

 private:
  int slot_of(long i) const;
  void add_monomial_image(const GammaMat& g, long i, int coef, std::vector<int>& out) const;

  int p_;
  long s_;
  std::vector<long> basis_;
};

/// Dimension of the Gamma-span of the given classes in V_s / V_s^(1),
/// by closure under [[1,1],[0,1]], [[g,0],[0,1]] and the antidiagonal swap.
int gamma_span_dim(const std::vector<HomPoly>& vectors, int p);

/// dim V_r^(m) computed as the rank of {theta^m * monomials}.
int filtration_dim(int p, long r, int m);

/// Rank over F_p of the given rows.
int rank_mod_p(std::vector<std::vector<int>> rows, int p);

/// Incremental row echelon form over F_p.
class FpEchelon {
 public:
  FpEchelon(int p, int n) : p_(p), n_(n) {}
  /// Adds v; returns true if v was independent of the rows so far.
  bool insert(std::vector<int> v);
  int rank() const { return static_cast<int>(rows_.size()); }

 private:
  int p_;
  int n_;
  std::vector<std::vector<int>> rows_;
  std::vector<int> pivots_;
};

long mod_p(long x, int p);
int inv_mod_p(long x, int p);
/// C(n, k) mod p by Lucas' theorem.
int binom_mod_p(long n, long k, int p);
/// A generator of F_p^*.
int primitive_root(int p);

}  // namespace loconst

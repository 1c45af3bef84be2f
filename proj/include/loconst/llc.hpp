#pragma once

#include <optional>
#include <string>
#include <vector>

#include "loconst/hecke.hpp"

namespace loconst {

/// Nonnegative rational num/den in lowest terms.
struct Rational {
  long num = 0;
  long den = 1;

  static Rational make(long num, long den);
  /// Parses "3/2" or "1".
  static Rational parse(const std::string& s);
  bool is_integer() const { return den == 1; }
  std::string to_string() const;
  auto operator<=>(const Rational& o) const { return num * o.den <=> o.num * den; }
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
};

/// mu_unr * omega^omega_exp, symbolic. unr is an element of F_p^*.
struct Character {
  int omega_exp = 0;
  int unr = 1;

  auto operator<=>(const Character&) const = default;
  std::string to_string() const;
};

/// pi(r, lam, eta).
struct SmoothDescriptor {
  int r = 0;
  int lam = 0;
  Character eta;

  auto operator<=>(const SmoothDescriptor&) const = default;
  std::string to_string() const;
};

/// Either ind(omega_2^c) (x) eta, or (mu_lam omega^a + mu_{1/lam}) (x) eta.
struct GaloisDescriptor {
  enum class Kind { irreducible, reducible };
  Kind kind = Kind::irreducible;
  long c = 1;  // omega_2 exponent, irreducible only
  int a = 0;   // omega exponent, reducible only
  int lam = 1; // reducible only, nonzero
  Character eta;

  static GaloisDescriptor irreducible(long c, Character eta = {});
  static GaloisDescriptor reducible(int a, int lam, Character eta = {});
  auto operator<=>(const GaloisDescriptor&) const = default;
  std::string to_string() const;
};

Character normalize(const Character& eta, int p);
/// Reduces exponents and picks the least of the equivalent descriptions.
SmoothDescriptor canonical(const SmoothDescriptor& s, int p);
/// Throws std::invalid_argument when omega_2^c extends to G_Qp (p+1 | c).
GaloisDescriptor canonical(const GaloisDescriptor& g, int p);

/// [p-3-r] in {0, ..., p-2}.
int bracket_p3r(int p, int r);

/// One descriptor for the irreducible case, two (sorted) for the reducible case.
std::vector<SmoothDescriptor> ll_forward(const GaloisDescriptor& g, int p);
/// Throws std::invalid_argument when the input is not in the image of ll_forward.
GaloisDescriptor ll_inverse(const std::vector<SmoothDescriptor>& s, int p);

struct BergerBound {
  Rational bound;  // 3 v + alpha(k-1) + 1
  bool satisfied = false;
};
BergerBound berger_bound(int p, long k, const Rational& v);

struct ApData {
  Rational v;
  std::optional<int> residue;  // a_p / p^v mod the maximal ideal, when known
  bool is_zero = false;
};

struct HypothesisCheck {
  std::string name;
  bool ok = false;
  std::string detail;
};

/// Per-m entry of the quotient chain.
struct ChainLink {
  int m = 0;
  bool witness_passed = false;
  bool generator_vanishes = false;
  int span_dim = 0;
  int expected_dim = 0;
  bool ok() const { return witness_passed && generator_vanishes && span_dim == expected_dim; }
};

struct ChainSummary {
  std::vector<ChainLink> links;
  bool surjection = false;       // ind(V_r / V_r^(1)) onto the reduction
  int Yr_span_dim = 0;           // Gamma-span of Y^r in V_r / V_r^(1)
  bool F1_vanishes = false;
  std::optional<SmoothDescriptor> supercuspidal;
  std::optional<GaloisDescriptor> galois;
  std::vector<std::string> blockers;
  bool concluded() const { return galois.has_value(); }
};

/// reports[i] must be the witness for m = i + 1, for every m up to floor(v).
ChainSummary chain_status(const WitnessParams& wp, const std::vector<WitnessReport>& reports);

struct ReductionReport {
  int p = 0;
  long k = 0;
  ApData ap;
  int b = 0;
  long k0 = 0;
  long t = -1;  // v_p(k - k0); -1 when k = k0
  Rational t_required;
  std::vector<HypothesisCheck> checks;
  std::optional<GaloisDescriptor> verdict;
  std::optional<Rational> m_bound;
  std::optional<int> catalogue_m;
  std::vector<std::string> exception_flags;
  std::string path;  // "theorem" or "certificate"
  BergerBound berger;
  std::optional<ChainSummary> chain;

  bool outside_known_range() const { return !verdict.has_value(); }
};

/// When `certificates` is given it is used in place of the theorem statement.
ReductionReport decide_reduction(int p, long k, const ApData& ap,
                                 const std::vector<WitnessReport>* certificates = nullptr);

}  // namespace loconst

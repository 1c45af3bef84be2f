#include "loconst/llc.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "loconst/binom.hpp"
#include "loconst/polymod.hpp"

namespace loconst {

namespace {

long pos_mod(long x, long n) {
  x %= n;
  return x < 0 ? x + n : x;
}

void require_odd_prime(int p) {
  if (p == 2 || !is_prime(p)) throw std::invalid_argument("p must be an odd prime");
}

Character twist(Character eta, long omega_exp, int p) {
  eta.omega_exp = static_cast<int>(pos_mod(eta.omega_exp + omega_exp, p - 1));
  return eta;
}

}  // namespace

// --------------------------------------------------------------- Rational

Rational Rational::make(long num, long den) {
  if (den == 0) throw std::invalid_argument("Rational: zero denominator");
  if (den < 0) num = -num, den = -den;
  const long g = std::gcd(num, den);
  return g ? Rational{num / g, den / g} : Rational{0, 1};
}

Rational Rational::parse(const std::string& s) {
  const auto slash = s.find('/');
  try {
    size_t used = 0;
    if (slash == std::string::npos) {
      const long n = std::stol(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return make(n, 1);
    }
    const std::string a = s.substr(0, slash), b = s.substr(slash + 1);
    const long n = std::stol(a, &used);
    if (used != a.size()) throw std::invalid_argument(s);
    const long d = std::stol(b, &used);
    if (used != b.size()) throw std::invalid_argument(s);
    return make(n, d);
  } catch (const std::logic_error&) {
    throw std::invalid_argument("cannot parse rational '" + s + "'");
  }
}

std::string Rational::to_string() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

// ------------------------------------------------------------ descriptors

std::string Character::to_string() const {
  std::ostringstream os;
  os << "omega^" << omega_exp;
  if (unr != 1) os << "*mu_" << unr;
  return os.str();
}

std::string SmoothDescriptor::to_string() const {
  return "pi(" + std::to_string(r) + "," + std::to_string(lam) + "," + eta.to_string() + ")";
}

GaloisDescriptor GaloisDescriptor::irreducible(long c, Character eta) {
  GaloisDescriptor g;
  g.kind = Kind::irreducible;
  g.c = c;
  g.eta = eta;
  return g;
}

GaloisDescriptor GaloisDescriptor::reducible(int a, int lam, Character eta) {
  GaloisDescriptor g;
  g.kind = Kind::reducible;
  g.c = 0;
  g.a = a;
  g.lam = lam;
  g.eta = eta;
  return g;
}

std::string GaloisDescriptor::to_string() const {
  if (kind == Kind::irreducible)
    return "ind(omega2^" + std::to_string(c) + ")(x)" + eta.to_string();
  return "(mu_" + std::to_string(lam) + "*omega^" + std::to_string(a) + " + mu_1/" +
         std::to_string(lam) + ")(x)" + eta.to_string();
}

Character normalize(const Character& eta, int p) {
  Character out;
  out.omega_exp = static_cast<int>(pos_mod(eta.omega_exp, p - 1));
  out.unr = static_cast<int>(pos_mod(eta.unr, p));
  if (out.unr == 0) throw std::invalid_argument("unramified parameter must be nonzero mod p");
  return out;
}

SmoothDescriptor canonical(const SmoothDescriptor& s, int p) {
  require_odd_prime(p);
  if (s.r < 0 || s.r > p - 1) throw std::invalid_argument("pi(r, lam, eta) needs 0 <= r <= p-1");
  SmoothDescriptor a{s.r, static_cast<int>(pos_mod(s.lam, p)), normalize(s.eta, p)};
  if (a.lam != 0) return a;
  const SmoothDescriptor b{p - 1 - a.r, 0, twist(a.eta, a.r, p)};
  return std::min(a, b);
}

GaloisDescriptor canonical(const GaloisDescriptor& g, int p) {
  require_odd_prime(p);
  const Character eta = normalize(g.eta, p);
  if (g.kind == GaloisDescriptor::Kind::irreducible) {
    const long c = pos_mod(g.c, long(p) * p - 1);
    if (c % (p + 1) == 0) throw std::invalid_argument("omega_2^c with p+1 | c does not induce an irreducible");
    const long r1 = c % (p + 1);  // r + 1 in 1..p
    const Character e1 = twist(eta, (c - r1) / (p + 1), p);
    const auto a = GaloisDescriptor::irreducible(r1, e1);
    const auto b = GaloisDescriptor::irreducible(p + 1 - r1, twist(e1, r1 - 1, p));
    return std::min(a, b);
  }
  const int lam = static_cast<int>(pos_mod(g.lam, p));
  if (lam == 0) throw std::invalid_argument("reducible descriptor needs lam != 0");
  const int a0 = static_cast<int>(pos_mod(g.a, p - 1));
  const auto x = GaloisDescriptor::reducible(a0, lam, eta);
  const auto y = GaloisDescriptor::reducible(static_cast<int>(pos_mod(-a0, p - 1)), inv_mod_p(lam, p),
                                             twist(eta, a0, p));
  return std::min(x, y);
}

int bracket_p3r(int p, int r) { return static_cast<int>(pos_mod(p - 3 - r, p - 1)); }

std::vector<SmoothDescriptor> ll_forward(const GaloisDescriptor& g, int p) {
  const GaloisDescriptor c = canonical(g, p);
  if (c.kind == GaloisDescriptor::Kind::irreducible)
    return {canonical(SmoothDescriptor{static_cast<int>(c.c - 1), 0, c.eta}, p)};
  const int r = static_cast<int>(pos_mod(c.a - 1, p - 1));
  std::vector<SmoothDescriptor> out{
      canonical(SmoothDescriptor{r, c.lam, c.eta}, p),
      canonical(SmoothDescriptor{bracket_p3r(p, r), inv_mod_p(c.lam, p), twist(c.eta, r + 1, p)}, p)};
  std::sort(out.begin(), out.end());
  return out;
}

GaloisDescriptor ll_inverse(const std::vector<SmoothDescriptor>& s, int p) {
  std::vector<SmoothDescriptor> in;
  for (const auto& x : s) in.push_back(canonical(x, p));
  std::sort(in.begin(), in.end());
  GaloisDescriptor cand;
  if (in.size() == 1 && in[0].lam == 0) {
    cand = canonical(GaloisDescriptor::irreducible(in[0].r + 1, in[0].eta), p);
  } else if (in.size() == 2 && in[0].lam != 0 && in[0].r <= p - 2) {
    cand = canonical(GaloisDescriptor::reducible(in[0].r + 1, in[0].lam, in[0].eta), p);
  } else {
    throw std::invalid_argument("ll_inverse: input is not in the image of the correspondence");
  }
  if (ll_forward(cand, p) != in)
    throw std::invalid_argument("ll_inverse: input is not in the image of the correspondence");
  return cand;
}

// ----------------------------------------------------------------- bounds

BergerBound berger_bound(int p, long k, const Rational& v) {
  BergerBound out;
  const long a = alpha(p, std::max(k - 1, 0L));
  out.bound = Rational::make(3 * v.num + (a + 1) * v.den, v.den);
  out.satisfied = k * out.bound.den > out.bound.num;
  return out;
}

// ------------------------------------------------------------------ chain

ChainSummary chain_status(const WitnessParams& wp, const std::vector<WitnessReport>& reports) {
  ChainSummary out;
  const int p = wp.p, b = wp.b;
  const long r = wp.r();
  const int n = static_cast<int>(wp.h / wp.e);
  for (int m = 1; m <= n; ++m) {
    ChainLink link;
    link.m = m;
    const WitnessReport* rep = nullptr;
    for (const auto& x : reports)
      if (x.params.p == p && x.params.b == b && x.r == r && x.params.m == m && x.params.h * wp.e == wp.h * x.params.e)
        rep = &x;
    if (!rep) {
      out.blockers.push_back("missing witness for m = " + std::to_string(m));
      out.links.push_back(link);
      continue;
    }
    link.witness_passed = rep->passed();
    link.generator_vanishes = rep->certifies_generator_vanishes();
    const HomPoly q = quotient_coords(make_Fm(p, r, b, m), m);
    link.span_dim = gamma_span_dim({q}, p);
    link.expected_dim = ThetaQuotient(p, q.r()).dim();
    if (!link.ok()) out.blockers.push_back("link m = " + std::to_string(m) + " not certified");
    out.links.push_back(link);
  }
  out.surjection = out.blockers.empty();
  out.Yr_span_dim = gamma_span_dim({HomPoly::monomial(p, static_cast<int>(r), static_cast<int>(r))}, p);
  out.F1_vanishes = out.Yr_span_dim == b + 1;
  if (!out.F1_vanishes) out.blockers.push_back("Y^r does not generate a copy of V_b");
  if (!out.blockers.empty()) return out;
  out.supercuspidal = canonical(SmoothDescriptor{p - 1 - b, 0, {b, 1}}, p);
  const GaloisDescriptor g = ll_inverse({*out.supercuspidal}, p);
  if (g != canonical(GaloisDescriptor::irreducible(b + 1), p)) {
    out.blockers.push_back("dictionary image differs from ind(omega2^(b+1))");
    return out;
  }
  out.galois = g;
  return out;
}

// -------------------------------------------------------------- decision

ReductionReport decide_reduction(int p, long k, const ApData& ap,
                                 const std::vector<WitnessReport>* certificates) {
  require_odd_prime(p);
  if (k < 2) throw std::invalid_argument("decide_reduction: need k >= 2");
  if (!ap.is_zero && ap.v.num <= 0) throw std::invalid_argument("decide_reduction: need v(a_p) > 0");

  ReductionReport rep;
  rep.p = p;
  rep.k = k;
  rep.ap = ap;
  rep.b = static_cast<int>(pos_mod(k - 2, p - 1));
  if (rep.b == 0) rep.b = p - 1;
  rep.k0 = rep.b + 2;
  const long diff = k - rep.k0;
  rep.t = diff == 0 ? -1 : vp(mpz_class(diff < 0 ? -diff : diff), p);
  rep.t_required = Rational::make(2 * ap.v.num, ap.v.den);
  rep.berger = berger_bound(p, k, ap.v);

  rep.checks.push_back({"a_p nonzero", !ap.is_zero, ""});
  if (ap.is_zero) {
    rep.exception_flags.push_back("a_p = 0: no local constancy in the weight");
    return rep;
  }

  const Rational two_v = rep.t_required;
  const bool strict = two_v < Rational::make(rep.b, 1);
  const bool boundary = two_v == Rational::make(rep.b, 1) && rep.b % 2 == 1;
  rep.checks.push_back({"2v(a_p)+2 < k0 <= p+1", strict || boundary,
                        strict ? "k0 = " + std::to_string(rep.k0)
                               : boundary ? "boundary: k0 = 2v(a_p)+2 odd" : "k0 too small"});
  const bool t_ok = rep.t < 0 || rep.t * two_v.den >= two_v.num;
  rep.checks.push_back({"v(k - k0) >= 2v(a_p)", t_ok,
                        "t = " + (rep.t < 0 ? std::string("inf") : std::to_string(rep.t))});
  if (boundary) {
    if (!ap.residue) {
      rep.checks.push_back({"a_p/p^((k0-2)/2) != +-1 mod p", false, "residue not supplied"});
    } else {
      const long u = pos_mod(*ap.residue, p);
      const bool ok = u != 0 && (u * u) % p != 1;
      rep.checks.push_back({"a_p/p^((k0-2)/2) != +-1 mod p", ok, "residue " + std::to_string(u)});
      if (!ok && u != 0) rep.exception_flags.push_back("boundary: a_p/p^((k0-2)/2) = +-1 mod p");
    }
  }

  // known values of m(k, a_p) for slopes below 2
  const auto k_is = [&](long c) { return pos_mod(k - c, p - 1) == 0; };
  const Rational v = ap.v;
  if (v < Rational::make(1, 1)) {
    if (v == Rational::make(1, 2) && k_is(3))
      rep.exception_flags.push_back("catalogue: v(a_p) = 1/2 and k = 3 mod (p-1)");
    else
      rep.catalogue_m = 1;
  } else if (v == Rational::make(1, 1)) {
    if (k_is(3)) rep.catalogue_m = 3;
    else if (k_is(4)) rep.exception_flags.push_back("catalogue: v(a_p) = 1 and k = 4 mod (p-1)");
    else rep.catalogue_m = 2;
  } else if (v < Rational::make(2, 1)) {
    if (v == Rational::make(3, 2) && k_is(5))
      rep.exception_flags.push_back("catalogue: v(a_p) = 3/2 and k = 5 mod (p-1)");
    else
      rep.catalogue_m = k_is(3) ? 3 : 2;
  }

  const bool checks_ok = std::all_of(rep.checks.begin(), rep.checks.end(), [](const auto& c) { return c.ok; });
  if (!checks_ok || !rep.exception_flags.empty()) return rep;

  if (certificates) {
    rep.path = "certificate";
    if (rep.t < 0 || diff < 0) {
      rep.exception_flags.push_back("certificate: no witness unless k > k0");
      return rep;
    }
    WitnessParams wp;
    wp.p = p;
    wp.e = static_cast<int>(v.den);
    wp.h = v.num;
    wp.unit = {ap.residue.value_or(1)};
    wp.b = rep.b;
    wp.t = static_cast<int>(rep.t);
    mpz_class step;
    mpz_ui_pow_ui(step.get_mpz_t(), p, wp.t);
    step *= p - 1;
    wp.s = mpz_class(diff / step).get_si();
    if (wp.s % p == 0) {
      rep.exception_flags.push_back("certificate: k - k0 not of the form s p^t (p-1) with p not dividing s");
      return rep;
    }
    rep.chain = chain_status(wp, *certificates);
    if (!rep.chain->concluded()) {
      for (const auto& b : rep.chain->blockers) rep.exception_flags.push_back("certificate: " + b);
      return rep;
    }
    rep.verdict = rep.chain->galois;
  } else {
    rep.path = "theorem";
    rep.verdict = canonical(GaloisDescriptor::irreducible(rep.b + 1), p);
  }
  rep.m_bound = Rational::make(2 * v.num + v.den, v.den);
  return rep;
}

}  // namespace loconst

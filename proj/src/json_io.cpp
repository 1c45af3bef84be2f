#include "loconst/json_io.hpp"

#include <stdexcept>

namespace loconst {

namespace {

std::string tri_name(Tri t) { return to_string(t); }

Json poly_map(const std::map<CosetRep, HomPoly>& m, const std::string& claim) {
  Json out = Json::array();
  for (const auto& [rep, f] : m) out.push_back({{"claim", claim}, {"rep", to_json(rep)}, {"poly", to_json(f)}});
  return out;
}

}  // namespace

Json to_json(const PadicElem& x) {
  Json digits = Json::array();
  for (const auto& d : x.unit_digits()) digits.push_back(d.get_str());
  const auto& c = *x.ctx();
  return {{"p", c.p()},           {"e", c.e()},         {"M", c.M()},
          {"zero", x.is_zero()},  {"val", x.pi_val_lower()}, {"digits", digits},
          {"known_prec", x.known_prec()}};
}

Json to_json(const HomPoly& f) {
  return {{"p", f.p()}, {"r", f.r()}, {"ring", "F_" + std::to_string(f.p())}, {"coeffs", f.coeffs()}};
}

Json to_json(const CosetRep& rep) { return {{"side", rep.side}, {"digits", rep.digits}}; }

Json to_json(const TreeFunc& f) {
  Json terms = Json::array();
  for (const auto& [rep, v] : f.terms()) {
    Json coeffs = Json::array();
    for (int i = 0; i <= f.r(); ++i) coeffs.push_back(to_json(v[i]));
    terms.push_back({{"rep", to_json(rep)}, {"coeffs", coeffs}});
  }
  const auto& c = *f.ctx();
  return {{"p", c.p()}, {"e", c.e()}, {"M", c.M()}, {"r", f.r()}, {"terms", terms}};
}

Json to_json(const WitnessParams& wp) {
  return {{"p", wp.p}, {"e", wp.e}, {"ap_h", wp.h}, {"ap_unit", wp.unit}, {"b", wp.b},
          {"m", wp.m}, {"t", wp.t}, {"s", wp.s},   {"precision", wp.M}};
}

Json to_json(const WitnessReport& rep) {
  Json integ = Json::object(), residues = Json::array(), predicted = Json::array();
  for (const auto& c : rep.claims) {
    integ[c.name] = {{"integral", tri_name(c.integral)},
                     {"residue_ok", c.residue_ok},
                     {"min_prec", c.min_prec},
                     {"min_val", c.min_val}};
    for (auto& x : poly_map(c.residue, c.name)) residues.push_back(std::move(x));
    for (auto& x : poly_map(c.predicted, c.name)) predicted.push_back(std::move(x));
  }
  Json out = {{"params", to_json(rep.params)},
              {"r", rep.r},
              {"M", rep.M},
              {"integrality", integ},
              {"residue_terms", residues},
              {"predicted_terms", predicted},
              {"match", rep.passed()},
              {"binom_r_m_unit", rep.binom_r_m_unit},
              {"outside_hypotheses", rep.outside_hypotheses},
              {"generator_vanishes", rep.certifies_generator_vanishes()}};
  if (rep.outside_hypotheses) out["label"] = "outside theorem hypotheses";
  Json flags = {{"boundary", rep.boundary}};
  if (rep.boundary) {
    flags["ap_ratio_residue"] = rep.ap_ratio_residue;
    flags["boundary_unit"] = rep.boundary_unit;
    flags["exceptional"] = rep.exceptional;
    flags["adjusted_matches"] = rep.adjusted_matches;
    flags["f_prime_axiom"] = rep.f_prime_axiom;
  }
  out["boundary_flags"] = flags;
  return out;
}

Json to_json(const CongruenceReport& rep) {
  const auto& q = rep.params;
  return {{"p", q.p},
          {"b", q.b},
          {"s", q.s},
          {"t", q.t},
          {"i", q.i},
          {"m", q.m},
          {"S", rep.S.get_str()},
          {"target", rep.target.get_str()},
          {"v_S", rep.v_S},
          {"v_diff", rep.v_diff},
          {"pass_t", rep.pass_t},
          {"pass_t1", rep.pass_t1},
          {"boundary_corner", rep.boundary_corner}};
}

Json to_json(const Rational& q) { return q.to_string(); }

Json to_json(const Character& eta) { return {{"omega_exp", eta.omega_exp}, {"unr", eta.unr}}; }

Json to_json(const SmoothDescriptor& s) {
  return {{"r", s.r}, {"lam", s.lam}, {"eta", to_json(s.eta)}};
}

Json to_json(const GaloisDescriptor& g) {
  if (g.kind == GaloisDescriptor::Kind::irreducible)
    return {{"kind", "irreducible"}, {"c", g.c}, {"eta", to_json(g.eta)}, {"text", g.to_string()}};
  return {{"kind", "reducible"}, {"a", g.a}, {"lam", g.lam}, {"eta", to_json(g.eta)}, {"text", g.to_string()}};
}

Json to_json(const ChainSummary& c) {
  Json links = Json::array();
  for (const auto& l : c.links)
    links.push_back({{"m", l.m},
                     {"witness_passed", l.witness_passed},
                     {"generator_vanishes", l.generator_vanishes},
                     {"span_dim", l.span_dim},
                     {"expected_dim", l.expected_dim}});
  Json out = {{"links", links},
              {"surjection", c.surjection},
              {"Yr_span_dim", c.Yr_span_dim},
              {"F1_vanishes", c.F1_vanishes},
              {"blockers", c.blockers}};
  out["supercuspidal"] = c.supercuspidal ? to_json(*c.supercuspidal) : Json();
  out["galois"] = c.galois ? to_json(*c.galois) : Json();
  return out;
}

Json to_json(const ReductionReport& rep) {
  Json checks = Json::array();
  for (const auto& c : rep.checks) checks.push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
  Json ap = {{"valuation", to_json(rep.ap.v)}, {"zero", rep.ap.is_zero}};
  ap["residue"] = rep.ap.residue ? Json(*rep.ap.residue) : Json();
  Json out = {{"p", rep.p},
              {"k", rep.k},
              {"ap", ap},
              {"b", rep.b},
              {"k0", rep.k0},
              {"t", rep.t < 0 ? Json("inf") : Json(rep.t)},
              {"t_required", to_json(rep.t_required)},
              {"checks", checks}};
  out["verdict"] = rep.verdict ? to_json(*rep.verdict) : Json("outside known range");
  out["path"] = rep.path;
  out["m_bound"] = rep.m_bound ? to_json(*rep.m_bound) : Json();
  out["catalogue_m"] = rep.catalogue_m ? Json(*rep.catalogue_m) : Json();
  out["exception_flags"] = rep.exception_flags;
  out["berger"] = {{"bound", to_json(rep.berger.bound)}, {"satisfied", rep.berger.satisfied}};
  out["twist"] = "all descriptors up to unramified twist";
  if (rep.chain) out["chain"] = to_json(*rep.chain);
  return out;
}

mpz_class mpz_from_json(const Json& j) {
  if (j.is_number_integer()) return mpz_class(j.get<long>());
  if (j.is_string()) {
    mpz_class out;
    if (out.set_str(j.get<std::string>(), 10) != 0)
      throw std::invalid_argument("not an integer: " + j.get<std::string>());
    return out;
  }
  throw std::invalid_argument("expected an integer or a decimal string");
}

Character character_from_json(const Json& j) {
  if (j.is_null()) return {};
  return {j.value("omega_exp", 0), j.value("unr", 1)};
}

SmoothDescriptor smooth_from_json(const Json& j) {
  return {j.at("r").get<int>(), j.value("lam", 0), character_from_json(j.value("eta", Json()))};
}

GaloisDescriptor galois_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const Character eta = character_from_json(j.value("eta", Json()));
  if (kind == "irreducible") return GaloisDescriptor::irreducible(j.at("c").get<long>(), eta);
  if (kind == "reducible")
    return GaloisDescriptor::reducible(j.at("a").get<int>(), j.at("lam").get<int>(), eta);
  throw std::invalid_argument("unknown descriptor kind '" + kind + "'");
}

CosetRep coset_from_json(const Json& j) {
  CosetRep rep;
  rep.side = j.value("side", 0);
  if (rep.side != 0 && rep.side != 1) throw std::invalid_argument("coset side must be 0 or 1");
  rep.digits = j.value("digits", std::vector<int>{});
  return rep;
}

TreeFunc treefunc_from_json(const Json& j) {
  const int p = j.at("p").get<int>(), e = j.value("e", 1), M = j.at("M").get<int>();
  const int r = j.at("r").get<int>();
  const auto ctx = PrimeCtx::make(p, e, M);
  TreeFunc f(ctx, r);
  for (const auto& term : j.at("terms")) {
    const CosetRep rep = coset_from_json(term.at("rep"));
    for (int d : rep.digits)
      if (d < 0 || d >= p) throw std::invalid_argument("coset digits must lie in [0, p)");
    const auto& coeffs = term.at("coeffs");
    if (static_cast<int>(coeffs.size()) != r + 1) throw std::invalid_argument("term needs r+1 coefficients");
    EPoly v = epoly_zero(ctx, r);
    for (int i = 0; i <= r; ++i) v.set(i, PadicElem::from_int(ctx, mpz_from_json(coeffs[i])));
    f.add_term(rep, v);
  }
  return f;
}

}  // namespace loconst

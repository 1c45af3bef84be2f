#pragma once

#include <json.hpp>

#include "loconst/binom.hpp"
#include "loconst/hecke.hpp"
#include "loconst/llc.hpp"

namespace loconst {

using Json = nlohmann::ordered_json;

Json to_json(const PadicElem& x);
Json to_json(const HomPoly& f);
Json to_json(const CosetRep& rep);
Json to_json(const TreeFunc& f);
Json to_json(const WitnessParams& wp);
Json to_json(const WitnessReport& rep);
Json to_json(const CongruenceReport& rep);
Json to_json(const Rational& q);
Json to_json(const Character& eta);
Json to_json(const SmoothDescriptor& s);
Json to_json(const GaloisDescriptor& g);
Json to_json(const ChainSummary& c);
Json to_json(const ReductionReport& rep);

/// Big integers travel as decimal strings; plain JSON integers are accepted too.
mpz_class mpz_from_json(const Json& j);

Character character_from_json(const Json& j);
SmoothDescriptor smooth_from_json(const Json& j);
GaloisDescriptor galois_from_json(const Json& j);
CosetRep coset_from_json(const Json& j);

/// {"p", "e", "M", "r", "terms": [{"rep": {...}, "coeffs": [int | string, ...]}]}
/// Coefficients are integers, lifted with full precision.
TreeFunc treefunc_from_json(const Json& j);

}  // namespace loconst

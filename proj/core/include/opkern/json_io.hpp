#pragma once

#include <string>

#include "opkern/ainf.hpp"
#include "opkern/bm.hpp"
#include "opkern/graded.hpp"
#include "opkern/moduli.hpp"
#include "opkern/operad.hpp"
#include "opkern/tree.hpp"

/* JSON schemas (all exact, no floating point):
 *   graded space   {"field": "Q"|{"Fp": p}, "basis": [{"name": str, "deg": int}]}
 *   map            {"deg": int, "entries": [[out_name, in_name, coeff]]}
 *   complex        {"space": <space>, "d": <map>}
 *   operad         {"components": {"<n>": <space>}, "comp": [{"p","i","q","entries":
 *                   [[x_name, y_name, out_name, coeff]]}], "identity": name | [[name, coeff]],
 *                   "differential": {"<n>": <map>} (optional)}
 *   A-inf structure {"complex": <complex>, "m": {"<n>": <map>}}
 *   ideal          {"variables": [str], "generators": [[[coeff, [var_index...]]...]]}
 *   cdga           {"complex": <complex>, "unit": name, "product":
 *                   [[a_name, b_name, [[c_name, coeff]...]]]}
 *   assignment     {"<n>": [[name, coeff]...]}
 * Coefficients are integers or "num/den" strings. */
namespace opk {

std::string space_to_json(const GradedSpace& s);
SpacePtr space_from_json(const std::string& text);

std::string map_to_json(const HomogMap& f);
HomogMap map_from_json(const std::string& text, const SpacePtr& source, const SpacePtr& target);

std::string complex_to_json(const ChainComplex& c);
ChainComplex complex_from_json(const std::string& text);

std::string operad_to_json(const OperadTable& o);
OperadPtr operad_from_json(const std::string& text);

std::string ainf_structure_to_json(const AInfStructure& s);
AInfStructure ainf_structure_from_json(const std::string& text);

/* TreePoly as a list of (coefficient, s-expression) pairs. */
std::string tree_poly_to_json(const TreePoly& poly);
TreePoly tree_poly_from_json(const std::string& text, const GenSetPtr& gens, const Field& field,
                             int arity, int degree);

std::string ideal_to_json(const PolyIdeal& ideal);

std::string enumeration_to_json(const EnumerationResult& e, const OrbitData* orbits);

std::string bm_to_json(const BmAlgebra& b, const LinearPartReport* lp, const BmReport* certify);

Cdga cdga_from_json(const std::string& text);
BmAssignment assignment_from_json(const std::string& text, const SpacePtr& target_space);

/* Canonical result payloads for certificates. */
std::string report_to_json(const DSquaredReport& r);
std::string report_to_json(const OperadReport& r);
std::string report_to_json(const StasheffReport& r);
std::string report_to_json(const BmReport& r);
std::string report_to_json(const DgPointReport& r);

}  // namespace opk

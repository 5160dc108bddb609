#include "opkern/json_io.hpp"

#include <stdexcept>

#include "json.hpp"

namespace opk {

namespace {

using nlohmann::json;

json scalar_to_json(const Scalar& s) {
    if (!s.field().is_rationals())
        return json(s.residue());
    const Rational& r = s.rational();
    if (r.is_integer() && r.raw().get_num().fits_slong_p())
        return json(static_cast<std::int64_t>(r.raw().get_num().get_si()));
    return json(r.str());
}

Scalar scalar_from_json(const json& j, const Field& field) {
    if (j.is_number_integer())
        return Scalar::of(field, j.get<std::int64_t>());
    if (j.is_string())
        return Scalar::of(field, Rational::parse(j.get<std::string>()));
    throw std::invalid_argument("json: expected an integer or \"num/den\" coefficient");
}

json field_to_json(const Field& f) {
    if (f.is_rationals()) return json("Q");
    return json{{"Fp", f.characteristic()}};
}

Field field_from_json(const json& j) {
    if (j.is_string() && j.get<std::string>() == "Q") return Field::rationals();
    if (j.is_object() && j.contains("Fp")) return Field::prime_field(j["Fp"].get<std::uint64_t>());
    throw std::invalid_argument("json: field must be \"Q\" or {\"Fp\": p}");
}

json space_to_json_obj(const GradedSpace& s) {
    json basis = json::array();
    for (const BasisElement& b : s.basis())
        basis.push_back(json{{"name", b.name}, {"deg", b.deg}});
    return json{{"field", field_to_json(s.field())}, {"basis", basis}};
}

SpacePtr space_from_json_obj(const json& j) {
    Field field = field_from_json(j.at("field"));
    std::vector<BasisElement> basis;
    for (const json& b : j.at("basis"))
        basis.push_back({b.at("name").get<std::string>(), b.at("deg").get<int>()});
    return make_space(field, std::move(basis));
}

json map_to_json_obj(const HomogMap& f) {
    json entries = json::array();
    for (const auto& [key, v] : f.entries())
        entries.push_back(json::array(
            {f.target()->name(key.second), f.source()->name(key.first), scalar_to_json(v)}));
    return json{{"deg", f.degree()}, {"entries", entries}};
}

HomogMap map_from_json_obj(const json& j, const SpacePtr& source, const SpacePtr& target) {
    HomogMap f(source, target, j.at("deg").get<int>());
    for (const json& e : j.at("entries")) {
        auto out = target->index_of(e.at(0).get<std::string>());
        auto in = source->index_of(e.at(1).get<std::string>());
        if (!out || !in)
            throw std::invalid_argument("json: unknown basis name in map entry");
        f.add(*out, *in, scalar_from_json(e.at(2), source->field()));
    }
    return f;
}

json complex_to_json_obj(const ChainComplex& c) {
    return json{{"space", space_to_json_obj(*c.space())}, {"d", map_to_json_obj(c.d())}};
}

ChainComplex complex_from_json_obj(const json& j) {
    SpacePtr space = space_from_json_obj(j.at("space"));
    return ChainComplex(space, map_from_json_obj(j.at("d"), space, space));
}

json sparse_vec_to_json(const GradedSpace& space, const SparseVec& v) {
    json out = json::array();
    for (const auto& [i, c] : v) out.push_back(json::array({space.name(i), scalar_to_json(c)}));
    return out;
}

SparseVec sparse_vec_from_json(const json& j, const GradedSpace& space) {
    SparseVec out;
    for (const json& e : j) {
        auto idx = space.index_of(e.at(0).get<std::string>());
        if (!idx) throw std::invalid_argument("json: unknown basis name '" + e.at(0).get<std::string>() + "'");
        Scalar c = scalar_from_json(e.at(1), space.field());
        if (!c.is_zero()) out.emplace(*idx, c);
    }
    return out;
}

}  // namespace

std::string space_to_json(const GradedSpace& s) { return space_to_json_obj(s).dump(2) + "\n"; }

SpacePtr space_from_json(const std::string& text) {
    return space_from_json_obj(json::parse(text));
}

std::string map_to_json(const HomogMap& f) { return map_to_json_obj(f).dump(2) + "\n"; }

HomogMap map_from_json(const std::string& text, const SpacePtr& source, const SpacePtr& target) {
    return map_from_json_obj(json::parse(text), source, target);
}

std::string complex_to_json(const ChainComplex& c) { return complex_to_json_obj(c).dump(2) + "\n"; }

ChainComplex complex_from_json(const std::string& text) {
    return complex_from_json_obj(json::parse(text));
}

std::string operad_to_json(const OperadTable& o) {
    json components = json::object();
    for (int n = 0; n <= o.max_arity; ++n)
        components[std::to_string(n)] = space_to_json_obj(o.component(n));
    json comp = json::array();
    for (const auto& [key, tab] : o.comp) {
        auto [p, i, q] = key;
        json entries = json::array();
        for (const auto& [pair, vec] : tab) {
            for (const auto& [out, c] : vec)
                entries.push_back(json::array({o.component(p).name(pair.first),
                                               o.component(q).name(pair.second),
                                               o.component(p + q - 1).name(out), scalar_to_json(c)}));
        }
        comp.push_back(json{{"p", p}, {"i", i}, {"q", q}, {"entries", entries}});
    }
    json j{{"components", components}, {"comp", comp}};
    if (o.identity.size() == 1 && o.identity.begin()->second == Scalar::of(o.field, 1))
        j["identity"] = o.component(1).name(o.identity.begin()->first);
    else
        j["identity"] = sparse_vec_to_json(o.component(1), o.identity);
    if (o.differential) {
        json diff = json::object();
        for (int n = 0; n <= o.max_arity; ++n)
            diff[std::to_string(n)] = map_to_json_obj((*o.differential)[static_cast<std::size_t>(n)]);
        j["differential"] = diff;
    }
    return j.dump(2) + "\n";
}

OperadPtr operad_from_json(const std::string& text) {
    json j = json::parse(text);
    auto table = std::make_shared<OperadTable>();
    const json& components = j.at("components");
    int max_arity = -1;
    for (auto it = components.begin(); it != components.end(); ++it)
        max_arity = std::max(max_arity, std::stoi(it.key()));
    if (max_arity < 1)
        throw std::invalid_argument("json: operad needs components up to arity >= 1");
    table->max_arity = max_arity;
    for (int n = 0; n <= max_arity; ++n) {
        auto it = components.find(std::to_string(n));
        if (it == components.end())
            throw std::invalid_argument("json: missing operad component " + std::to_string(n));
        table->components.push_back(space_from_json_obj(*it));
    }
    table->field = table->components[0]->field();

    for (const json& c : j.at("comp")) {
        int p = c.at("p").get<int>(), i = c.at("i").get<int>(), q = c.at("q").get<int>();
        if (p < 1 || i < 1 || i > p || q < 0 || p > max_arity || q > max_arity ||
            p + q - 1 > max_arity)
            throw std::invalid_argument("json: composition key out of range");
        BilinearTable tab;
        for (const json& e : c.at("entries")) {
            auto xi = table->component(p).index_of(e.at(0).get<std::string>());
            auto yi = table->component(q).index_of(e.at(1).get<std::string>());
            auto oi = table->component(p + q - 1).index_of(e.at(2).get<std::string>());
            if (!xi || !yi || !oi)
                throw std::invalid_argument("json: unknown basis name in composition entry");
            Scalar v = scalar_from_json(e.at(3), table->field);
            if (!v.is_zero()) tab[{*xi, *yi}][*oi] = v;
        }
        table->comp[{p, i, q}] = std::move(tab);
    }

    const json& id = j.at("identity");
    if (id.is_string()) {
        auto idx = table->component(1).index_of(id.get<std::string>());
        if (!idx) throw std::invalid_argument("json: unknown identity name");
        table->identity = SparseVec{{*idx, Scalar::of(table->field, 1)}};
    } else {
        table->identity = sparse_vec_from_json(id, table->component(1));
    }

    if (j.contains("differential")) {
        std::vector<HomogMap> diff;
        for (int n = 0; n <= max_arity; ++n) {
            const SpacePtr& comp = table->components[static_cast<std::size_t>(n)];
            auto it = j["differential"].find(std::to_string(n));
            diff.push_back(it == j["differential"].end()
                               ? HomogMap::zero(comp, comp, -1)
                               : map_from_json_obj(*it, comp, comp));
        }
        table->differential = std::move(diff);
    }
    return table;
}

std::string ainf_structure_to_json(const AInfStructure& s) {
    json ops = json::object();
    for (const auto& [n, f] : s.ops) ops[std::to_string(n)] = map_to_json_obj(f);
    return json{{"complex", complex_to_json_obj(s.complex)}, {"m", ops}}.dump(2) + "\n";
}

AInfStructure ainf_structure_from_json(const std::string& text) {
    json j = json::parse(text);
    ChainComplex complex = complex_from_json_obj(j.at("complex"));
    PowerCache powers(complex.space());
    AInfStructure s{complex, {}};
    for (auto it = j.at("m").begin(); it != j.at("m").end(); ++it) {
        int n = std::stoi(it.key());
        s.ops.emplace(n, map_from_json_obj(*it, powers.power(n), complex.space()));
    }
    return s;
}

std::string tree_poly_to_json(const TreePoly& poly) {
    json out = json::array();
    for (const auto& [tree, coeff] : poly.terms())
        out.push_back(json::array({scalar_to_json(coeff), tree.str(*poly.gens())}));
    return out.dump() + "\n";
}

TreePoly tree_poly_from_json(const std::string& text, const GenSetPtr& gens, const Field& field,
                             int arity, int degree) {
    TreePoly poly = TreePoly::zero(gens, field, arity, degree);
    for (const json& term : json::parse(text))
        poly.add_term(PlanarTree::parse(*gens, term.at(1).get<std::string>()),
                      scalar_from_json(term.at(0), field));
    return poly;
}

std::string ideal_to_json(const PolyIdeal& ideal) {
    json gens = json::array();
    for (const Polynomial& g : ideal.generators) {
        json terms = json::array();
        for (const auto& [coeff, mono] : g.terms)
            terms.push_back(json::array({coeff, mono.vars}));
        gens.push_back(terms);
    }
    return json{{"variables", ideal.variables}, {"generators", gens}}.dump(2) + "\n";
}

std::string enumeration_to_json(const EnumerationResult& e, const OrbitData* orbits) {
    json points = json::array();
    for (const EnumeratedPoint& p : e.points) {
        json entry;
        json c = json::array();
        for (const Scalar& v : p.tensor.c) c.push_back(scalar_to_json(v));
        entry["c"] = c;
        if (p.unit) {
            json a = json::array();
            for (const Scalar& v : p.unit->a) a.push_back(scalar_to_json(v));
            entry["unit"] = a;
        }
        points.push_back(entry);
    }
    json j{{"n", e.n},
           {"q", e.q},
           {"unital_filter", e.unital_filter},
           {"scanned", e.scanned},
           {"counts", {{"associative", e.associative_count}, {"unital", e.unital_count}}},
           {"note",
            "the unital locus is reported as the set-theoretic trace {points with a unit}; "
            "its openness is witnessed only by the rank-1 principal-open identification, "
            "GL-stability, and unit-uniqueness certificates"},
           {"points", points}};
    if (orbits) {
        json os = json::array();
        for (const Orbit& orbit : orbits->orbits)
            os.push_back(json{{"rep", orbit.representative},
                              {"members", orbit.members},
                              {"size", orbit.members.size()},
                              {"stabilizer", orbit.stabilizer_order}});
        j["orbits"] = os;
        j["group_order"] = orbits->group_order;
        j["action"] = OrbitData::action_convention;
    }
    return j.dump(2) + "\n";
}

std::string bm_to_json(const BmAlgebra& b, const LinearPartReport* lp, const BmReport* certify) {
    json gens = json::array();
    for (int n = 2; n <= b.r(); ++n)
        gens.push_back(json{{"n", n}, {"deg", b.gen_degree(n)}});
    json diff = json::object();
    for (int n = 2; n <= b.r(); ++n) {
        json terms = json::array();
        for (const auto& [mono, coeff] : b.d_gen(n).terms())
            terms.push_back(json::array({coeff.str(), mono.gens}));
        diff[std::to_string(n)] = terms;
    }
    json j{{"m", b.m()}, {"r", b.r()}, {"generators", gens}, {"differential", diff},
           {"product_reading", "literal x_q x_p, canonicalized by graded commutativity"}};
    if (lp) {
        json degs = json::array();
        for (const auto& [n, deg] : lp->generator_degrees) degs.push_back(json::array({n, deg}));
        j["linear_part"] = json{{"generator_degrees", degs},
                                {"induced_differential_zero", lp->induced_differential_zero},
                                {"min_degree", lp->min_degree},
                                {"max_degree", lp->max_degree},
                                {"degrees_unbounded_in_n", lp->degrees_unbounded_in_n},
                                {"degenerate_all_odd", lp->degenerate_all_odd}};
    }
    if (certify) {
        json viol = json::array();
        for (const auto& v : certify->violations)
            viol.push_back(json{{"generator", v.generator}, {"residual", v.residual}});
        j["d_squared"] = json{{"ok", certify->ok}, {"violations", viol}};
    }
    return j.dump(2) + "\n";
}

Cdga cdga_from_json(const std::string& text) {
    json j = json::parse(text);
    ChainComplex complex = complex_from_json_obj(j.at("complex"));
    const GradedSpace& space = *complex.space();
    int dim = space.dim();
    Cdga out{complex,
             std::vector<std::vector<SparseVec>>(static_cast<std::size_t>(dim),
                                                 std::vector<SparseVec>(static_cast<std::size_t>(dim))),
             0};
    auto unit = space.index_of(j.at("unit").get<std::string>());
    if (!unit) throw std::invalid_argument("json: unknown unit name");
    out.unit_index = *unit;
    for (const json& e : j.at("product")) {
        auto a = space.index_of(e.at(0).get<std::string>());
        auto b = space.index_of(e.at(1).get<std::string>());
        if (!a || !b) throw std::invalid_argument("json: unknown basis name in product");
        out.product[static_cast<std::size_t>(*a)][static_cast<std::size_t>(*b)] =
            sparse_vec_from_json(e.at(2), space);
    }
    return out;
}

BmAssignment assignment_from_json(const std::string& text, const SpacePtr& target_space) {
    json j = json::parse(text);
    BmAssignment out;
    for (auto it = j.begin(); it != j.end(); ++it)
        out.emplace(std::stoi(it.key()), sparse_vec_from_json(*it, *target_space));
    return out;
}

std::string report_to_json(const DSquaredReport& r) {
    json viol = json::array();
    for (const auto& v : r.violations)
        viol.push_back(json{{"generator", v.generator}, {"residual", v.residual}});
    return json{{"ok", r.ok}, {"max_arity", r.max_arity}, {"violations", viol}}.dump();
}

std::string report_to_json(const OperadReport& r) {
    json viol = json::array();
    for (const auto& v : r.violations)
        viol.push_back(json{{"rule", v.rule},
                            {"arities", v.arities},
                            {"positions", v.positions},
                            {"elements", v.elements},
                            {"lhs", v.lhs},
                            {"rhs", v.rhs}});
    return json{{"ok", r.ok}, {"max_arity", r.max_arity}, {"violations", viol}}.dump();
}

std::string report_to_json(const StasheffReport& r) {
    json viol = json::array();
    for (const auto& v : r.violations)
        viol.push_back(json{{"arity", v.arity}, {"difference", v.difference}});
    return json{{"ok", r.ok}, {"max_arity", r.max_arity}, {"violations", viol}}.dump();
}

std::string report_to_json(const BmReport& r) {
    json viol = json::array();
    for (const auto& v : r.violations)
        viol.push_back(json{{"generator", v.generator}, {"residual", v.residual}});
    return json{{"ok", r.ok}, {"m", r.m}, {"r", r.r}, {"violations", viol}}.dump();
}

std::string report_to_json(const DgPointReport& r) {
    return json{{"ok", r.ok}, {"failing_generators", r.failing_generators}}.dump();
}

}  // namespace opk

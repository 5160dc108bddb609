#include "doctest.h"

#include "json.hpp"

#include "opkern/ainf.hpp"
#include "opkern/json_io.hpp"
#include "opkern/moduli.hpp"
#include "opkern/operad.hpp"
#include "opkern/report.hpp"

using namespace opk;

namespace {
const Field Q = Field::rationals();
}

TEST_CASE("graded space and map round-trip through JSON") {
    SpacePtr s = make_space(Field::prime_field(7), {{"x", 0}, {"y", -2}});
    SpacePtr back = space_from_json(space_to_json(*s));
    CHECK(*back == *s);

    SpacePtr qs = make_space(Q, {{"a", 1}, {"b", 0}});
    HomogMap f(qs, qs, -1);
    f.add(1, 0, Scalar::of(Q, Rational(2, 3)));
    HomogMap g = map_from_json(map_to_json(f), qs, qs);
    CHECK(g == f);

    // integer and "num/den" coefficient forms both parse
    HomogMap h = map_from_json(R"({"deg": -1, "entries": [["b", "a", 2], ["b", "a", "1/2"]]})",
                               qs, qs);
    CHECK(h.coeff(1, 0).rational() == Rational(5, 2));
    CHECK_THROWS_AS(map_from_json(R"({"deg": 0, "entries": [["zz", "a", 1]]})", qs, qs),
                    std::invalid_argument);
}

TEST_CASE("chain complex JSON validates d on the way in") {
    std::string good = R"({
      "space": {"field": "Q", "basis": [{"name": "x", "deg": 1}, {"name": "y", "deg": 0}]},
      "d": {"deg": -1, "entries": [["y", "x", 1]]}
    })";
    ChainComplex c = complex_from_json(good);
    CHECK(c.space()->dim() == 2);
    ChainComplex back = complex_from_json(complex_to_json(c));
    CHECK(*back.space() == *c.space());
    CHECK(back.d() == c.d());

    std::string bad = R"({
      "space": {"field": "Q", "basis": [{"name": "x", "deg": 2}, {"name": "y", "deg": 1}, {"name": "z", "deg": 0}]},
      "d": {"deg": -1, "entries": [["y", "x", 1], ["z", "y", 1]]}
    })";
    CHECK_THROWS_AS(complex_from_json(bad), std::invalid_argument);
}

TEST_CASE("operad table JSON round-trips and still passes the axioms") {
    OperadPtr uass = build_uass(Q, 4);
    OperadPtr back = operad_from_json(operad_to_json(*uass));
    CHECK(back->max_arity == 4);
    CHECK(check_operad_axioms(*back, 4).ok);
    CHECK(back->identity == uass->identity);

    // free operad with differential survives the round trip
    AInfOperad a = build_ainf(4);
    OperadPtr table = free_operad_table(a.gens, Q, 4, a.d.get());
    OperadPtr parsed = operad_from_json(operad_to_json(*table));
    CHECK(check_operad_axioms(*parsed, 4).ok);
    REQUIRE(parsed->differential.has_value());
    for (int n = 0; n <= 4; ++n)
        CHECK((*parsed->differential)[static_cast<std::size_t>(n)] ==
              (*table->differential)[static_cast<std::size_t>(n)]);
}

TEST_CASE("A-infinity structure JSON round-trip") {
    SpacePtr sp = make_space(Q, {{"e1", 0}, {"e2", 0}});
    ChainComplex m = ChainComplex::with_zero_d(sp);
    PowerCache powers(sp);
    HomogMap m2(powers.power(2), sp, 0);
    m2.add(0, 0, Scalar::of(Q, 1));
    m2.add(1, 3, Scalar::of(Q, 1));
    AInfStructure s{m, {}};
    s.ops.emplace(2, m2);
    s.ops.emplace(3, HomogMap::zero(powers.power(3), sp, 1));
    AInfStructure back = ainf_structure_from_json(ainf_structure_to_json(s));
    CHECK(back.ops.at(2) == s.ops.at(2));
    CHECK(check_stasheff(back, 3).ok);
}

TEST_CASE("tree polynomials round-trip as (coefficient, tree) lists") {
    AInfOperad a = build_ainf(6);
    for (int n : {3, 5, 6}) {
        const TreePoly& poly = a.d_mu(n);
        TreePoly back = tree_poly_from_json(tree_poly_to_json(poly), a.gens, Q, n, n - 3);
        CHECK(back == poly);
    }
}

TEST_CASE("ideal and enumeration payloads are well-formed JSON") {
    nlohmann::json ideal = nlohmann::json::parse(ideal_to_json(unital_ideal(2)));
    CHECK(ideal["variables"].size() == 10);
    CHECK(ideal["generators"].size() == 24);

    EnumerationResult e = enumerate_points(1, 3, false);
    std::vector<SCTensor> pts;
    for (const auto& p : e.points) pts.push_back(p.tensor);
    OrbitData orbits = gl_orbits(pts, 1, 3);
    nlohmann::json payload = nlohmann::json::parse(enumeration_to_json(e, &orbits));
    CHECK(payload["counts"]["associative"] == 3);
    CHECK(payload["counts"]["unital"] == 2);
    CHECK(payload["group_order"] == 2);
    CHECK(payload["orbits"].size() == 2);
}

TEST_CASE("bm payload carries generators, differential, and analyses") {
    BmAlgebra b(-2, 5);
    LinearPartReport lp = linear_part(b);
    BmReport cert = certify_bm_d_squared(-2, 5);
    nlohmann::json payload = nlohmann::json::parse(bm_to_json(b, &lp, &cert));
    CHECK(payload["generators"].size() == 4);
    CHECK(payload["d_squared"]["ok"] == true);
    CHECK(payload["linear_part"]["induced_differential_zero"] == true);
    CHECK(payload["generators"][0]["deg"] == -2);
}

TEST_CASE("cdga and assignment parsing") {
    std::string cdga_text = R"({
      "complex": {
        "space": {"field": "Q", "basis": [{"name": "1", "deg": 0}, {"name": "u", "deg": 1}]},
        "d": {"deg": -1, "entries": []}
      },
      "unit": "1",
      "product": [["1", "1", [["1", 1]]], ["1", "u", [["u", 1]]], ["u", "1", [["u", 1]]]]
    })";
    Cdga t = cdga_from_json(cdga_text);
    CHECK(t.validate().empty());
    BmAssignment a = assignment_from_json(R"({"2": [["1", "3/2"]], "3": []})", t.complex.space());
    CHECK(a.at(2).begin()->second.rational() == Rational(3, 2));
    CHECK(a.at(3).empty());
}

TEST_CASE("certificates serialize deterministically; timing is opt-in") {
    Certificate cert;
    cert.command = {"opkern", "ainf", "certify", "--max-arity", "4"};
    cert.inputs_digest = digest_hex(fnv1a64("abc"));
    cert.seed = 7;
    cert.result_json = report_to_json(certify_ainf_d_squared(4));
    cert.timing_seconds = 1.25;
    std::string a = serialize_certificate(cert);
    std::string b = serialize_certificate(cert);
    CHECK(a == b);
    CHECK(a.find("timing") == std::string::npos);
    std::string with_timing = serialize_certificate(cert, true);
    CHECK(with_timing.find("timing_seconds") != std::string::npos);
}

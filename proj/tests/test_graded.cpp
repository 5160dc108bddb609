#include "doctest.h"

#include <set>

#include "opkern/graded.hpp"
#include "opkern/report.hpp"

using namespace opk;

namespace {

const Field Q = Field::rationals();

SpacePtr two_three() {
    return make_space(Q, {{"a", 0}, {"b", 1}});
}

HomogMap random_map(SplitMix64& rng, const SpacePtr& src, const SpacePtr& dst, int deg) {
    HomogMap f(src, dst, deg);
    for (int r = 0; r < dst->dim(); ++r)
        for (int c = 0; c < src->dim(); ++c) {
            if (dst->deg(r) != src->deg(c) + deg || rng.below(2) == 0) continue;
            f.add(r, c, Scalar::of(src->field(), rng.range(-3, 3)));
        }
    return f;
}

/* test-only oracle: dense matrix product */
HomogMap dense_compose(const HomogMap& g, const HomogMap& f) {
    HomogMap out(f.source(), g.target(), f.degree() + g.degree());
    for (int r = 0; r < g.target()->dim(); ++r)
        for (int c = 0; c < f.source()->dim(); ++c) {
            Scalar acc = Scalar::of(f.source()->field(), 0);
            for (int m = 0; m < f.target()->dim(); ++m) acc += g.coeff(r, m) * f.coeff(m, c);
            if (!acc.is_zero()) out.add(r, c, acc);
        }
    return out;
}

}  // namespace

TEST_CASE("graded space basics") {
    SpacePtr s = make_space(Q, {{"x", 0}, {"y", 2}, {"z", -1}});
    CHECK(s->dim() == 3);
    CHECK(s->deg(1) == 2);
    CHECK(s->index_of("z") == 2);
    CHECK(!s->index_of("w"));
    CHECK_THROWS_AS(make_space(Q, {{"x", 0}, {"x", 1}}), std::invalid_argument);
}

TEST_CASE("tensor product: unit, dimensions, degrees") {
    SpacePtr unit = make_space(Q, {{"1", 0}});
    SpacePtr line_m = make_space(Q, {{"e", 7}});
    SpacePtr t = tensor_space(unit, line_m);
    CHECK(t->dim() == 1);
    CHECK(t->deg(0) == 7);

    SpacePtr a = make_space(Q, {{"a0", 0}, {"a1", 1}});
    SpacePtr b = make_space(Q, {{"b0", 0}, {"b1", 1}, {"b2", 2}});
    SpacePtr ab = tensor_space(a, b);
    CHECK(ab->dim() == 6);

    SpacePtr aa = tensor_space(a, a);
    std::multiset<int> degs;
    for (int i = 0; i < aa->dim(); ++i) degs.insert(aa->deg(i));
    CHECK(degs == std::multiset<int>({0, 1, 1, 2}));

    CHECK_THROWS_AS(tensor_space(a, make_space(Field::prime_field(2), {{"c", 0}})),
                    std::invalid_argument);
}

TEST_CASE("tensor product is associative up to degree-preserving reindexing") {
    SpacePtr a = make_space(Q, {{"a0", 0}, {"a1", 1}});
    SpacePtr b = make_space(Q, {{"b0", -1}, {"b1", 3}});
    SpacePtr c = make_space(Q, {{"c0", 2}});
    SpacePtr left = tensor_space(tensor_space(a, b), c);
    SpacePtr right = tensor_space(a, tensor_space(b, c));
    REQUIRE(left->dim() == right->dim());
    for (int i = 0; i < left->dim(); ++i) CHECK(left->deg(i) == right->deg(i));
}

TEST_CASE("homogeneity of map entries is enforced") {
    SpacePtr s = two_three();
    HomogMap f(s, s, 0);
    CHECK_THROWS_AS(f.add(1, 0, Scalar::of(Q, 1)), std::invalid_argument);  // deg 1 <- deg 0 under deg-0 map
    f.add(0, 0, Scalar::of(Q, 2));
    CHECK(f.coeff(0, 0).rational() == Rational(2));
    f.add(0, 0, Scalar::of(Q, -2));
    CHECK(f.is_zero());  // cancelled entries disappear
}

TEST_CASE("compose: identity, and sparse result equals dense oracle") {
    SplitMix64 rng{7};
    std::vector<BasisElement> basis;
    for (int i = 0; i < 5; ++i) basis.push_back({"v" + std::to_string(i), static_cast<int>(rng.range(-2, 2))});
    SpacePtr s = make_space(Q, basis);
    HomogMap id = HomogMap::identity(s);
    for (int trial = 0; trial < 30; ++trial) {
        HomogMap f = random_map(rng, s, s, static_cast<int>(rng.range(-1, 1)));
        HomogMap g = random_map(rng, s, s, static_cast<int>(rng.range(-1, 1)));
        CHECK(compose_maps(id, f) == f);
        CHECK(compose_maps(f, id) == f);
        CHECK(compose_maps(g, f) == dense_compose(g, f));
    }
}

TEST_CASE("chain complex construction checks d") {
    SpacePtr s = make_space(Q, {{"x", 1}, {"y", 0}});
    HomogMap d(s, s, -1);
    d.add(1, 0, Scalar::of(Q, 1));
    ChainComplex c(s, d);  // d(x)=y, d(y)=0: fine
    CHECK(compose_maps(c.d(), c.d()).is_zero());

    SpacePtr s3 = make_space(Q, {{"x", 2}, {"y", 1}, {"z", 0}});
    HomogMap bad(s3, s3, -1);
    bad.add(1, 0, Scalar::of(Q, 1));
    bad.add(2, 1, Scalar::of(Q, 1));  // d(x)=y, d(y)=z: d^2(x)=z != 0
    CHECK_THROWS_AS(ChainComplex(s3, bad), std::invalid_argument);

    HomogMap wrong_deg(s3, s3, 0);
    CHECK_THROWS_AS(ChainComplex(s3, wrong_deg), std::invalid_argument);
}

TEST_CASE("insert_map and compose_insert agree") {
    SplitMix64 rng{11};
    SpacePtr m = make_space(Q, {{"a", 0}, {"b", 1}});
    PowerCache powers(m);
    for (int trial = 0; trial < 10; ++trial) {
        int q = 1 + static_cast<int>(rng.below(2));
        int p = 2 + static_cast<int>(rng.below(2));
        int slot = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(p)));
        HomogMap inner = random_map(rng, powers.power(q), m, static_cast<int>(rng.range(-1, 1)));
        HomogMap outer = random_map(rng, powers.power(p), m, static_cast<int>(rng.range(-1, 1)));
        HomogMap via_insert = compose_maps(outer, insert_map(powers, inner, q, slot, p));
        HomogMap direct = compose_insert(powers, outer, p, inner, q, slot);
        CHECK(via_insert == direct);
    }
}

TEST_CASE("tensor_maps carries the Koszul sign") {
    // f = id on an odd line, g of odd degree: (1 (x) g)(a (x) b) = -a (x) g(b)
    SpacePtr odd = make_space(Q, {{"a", 1}});
    SpacePtr pair = make_space(Q, {{"b0", 0}, {"b1", 1}});
    HomogMap id = HomogMap::identity(odd);
    HomogMap g(pair, pair, 1);
    g.add(1, 0, Scalar::of(Q, 1));  // g(b0) = b1, degree +1 (odd)
    HomogMap t = tensor_maps(id, g);
    // column (a, b0) -> -(a, b1): sign (-1)^{|g||a|} = -1
    CHECK(t.coeff(0 * 2 + 1, 0 * 2 + 0).rational() == Rational(-1));
}

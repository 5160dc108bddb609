#include "doctest.h"

#include "opkern/linalg.hpp"
#include "opkern/report.hpp"

using namespace opk;

namespace {
const Field Q = Field::rationals();

DenseMatrix from_rows(Field f, const std::vector<std::vector<int>>& rows) {
    DenseMatrix m(f, static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) m.at(r, c) = Scalar::of(f, rows[r][c]);
    return m;
}
}  // namespace

TEST_CASE("rank and nullspace on hand examples") {
    DenseMatrix m = from_rows(Q, {{1, 2, 3}, {2, 4, 6}, {0, 1, 1}});
    CHECK(rank(m) == 2);
    auto ns = nullspace(m);
    REQUIRE(ns.size() == 1);
    // residual check
    for (int r = 0; r < m.rows(); ++r) {
        Scalar acc = Scalar::of(Q, 0);
        for (int c = 0; c < m.cols(); ++c) acc += m.at(r, c) * ns[0][static_cast<std::size_t>(c)];
        CHECK(acc.is_zero());
    }
}

TEST_CASE("solve: consistent and inconsistent systems") {
    DenseMatrix a = from_rows(Q, {{1, 1}, {1, -1}});
    auto x = solve_linear(a, {Scalar::of(Q, 3), Scalar::of(Q, 1)});
    REQUIRE(x.has_value());
    CHECK((*x)[0].rational() == Rational(2));
    CHECK((*x)[1].rational() == Rational(1));
    CHECK(solution_space_dim(a, {Scalar::of(Q, 3), Scalar::of(Q, 1)}) == 0);

    DenseMatrix b = from_rows(Q, {{1, 1}, {2, 2}});
    CHECK(!solve_linear(b, {Scalar::of(Q, 1), Scalar::of(Q, 3)}).has_value());
    CHECK(solution_space_dim(b, {Scalar::of(Q, 1), Scalar::of(Q, 3)}) == -1);
    CHECK(solution_space_dim(b, {Scalar::of(Q, 1), Scalar::of(Q, 2)}) == 1);
}

TEST_CASE("inverse over F_p and Q") {
    Field f7 = Field::prime_field(7);
    DenseMatrix m = from_rows(f7, {{1, 2}, {3, 4}});
    auto inv = inverse(m);
    REQUIRE(inv.has_value());
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
            Scalar acc = Scalar::of(f7, 0);
            for (int k = 0; k < 2; ++k) acc += m.at(r, k) * inv->at(k, c);
            CHECK(acc == Scalar::of(f7, r == c ? 1 : 0));
        }
    CHECK(!inverse(from_rows(Q, {{1, 2}, {2, 4}})).has_value());
}

TEST_CASE("random solve property: A x = b residual vanishes") {
    SplitMix64 rng{5};
    for (int trial = 0; trial < 50; ++trial) {
        Field f = trial % 2 ? Q : Field::prime_field(5);
        int rows = 1 + static_cast<int>(rng.below(5)), cols = 1 + static_cast<int>(rng.below(5));
        DenseMatrix a(f, rows, cols);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) a.at(r, c) = Scalar::of(f, rng.range(-3, 3));
        std::vector<Scalar> b;
        for (int r = 0; r < rows; ++r) b.push_back(Scalar::of(f, rng.range(-3, 3)));
        auto x = solve_linear(a, b);
        if (!x) continue;
        for (int r = 0; r < rows; ++r) {
            Scalar acc = Scalar::of(f, 0);
            for (int c = 0; c < cols; ++c) acc += a.at(r, c) * (*x)[static_cast<std::size_t>(c)];
            CHECK(acc == b[static_cast<std::size_t>(r)]);
        }
    }
}

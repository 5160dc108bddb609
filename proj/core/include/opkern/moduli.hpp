#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "opkern/field.hpp"
#include "opkern/graded.hpp"
#include "opkern/operad.hpp"

namespace opk {

/* Structure-constant tensor of a rank-n based algebra: c[i][j][k] is the
 * coefficient of e_k in e_i * e_j, stored flat as c[(i*n + j)*n + k]. */
struct SCTensor {
    int n = 0;
    Field field = Field::rationals();
    std::vector<Scalar> c;

    const Scalar& at(int i, int j, int k) const {
        return c[static_cast<std::size_t>((i * n + j) * n + k)];
    }
    Scalar& at(int i, int j, int k) { return c[static_cast<std::size_t>((i * n + j) * n + k)]; }
    static SCTensor zeros(int n, Field field);
    std::string str() const;
};

struct UnitVector {
    std::vector<Scalar> a;
    std::string str() const;
};

/* Monomial = product of variables by index, sorted, with repetitions. */
struct PolyMonomial {
    std::vector<int> vars;
    bool operator<(const PolyMonomial& o) const { return vars < o.vars; }
    bool operator==(const PolyMonomial& o) const { return vars == o.vars; }
};

/* Polynomial with integer coefficients in named variables. */
struct Polynomial {
    std::vector<std::pair<std::int64_t, PolyMonomial>> terms;  // canonical sorted, no zeros
    void add_term(std::int64_t coeff, PolyMonomial mono);
    Scalar eval(const Field& field, const std::vector<Scalar>& point) const;
    bool is_zero() const { return terms.empty(); }
    std::string str(const std::vector<std::string>& variables) const;
};

struct PolyIdeal {
    std::vector<std::string> variables;
    std::vector<Polynomial> generators;
};

/* Variable order: c_{ijk} at index (i*n + j)*n + k (0-based i, j, k). */
int sc_var_index(int n, int i, int j, int k);

/* The associativity ideal: n^3 variables c_ijk and the n^4 quadrics
 * sum_m (c_ijm c_mkl - c_iml c_jkm) indexed by (i,j,k,l). */
PolyIdeal assoc_ideal(int n);

/* The unital ideal: variables c_ijk and a_1..a_n; the associativity quadrics
 * plus delta_jk - sum_i a_i c_ijk and delta_jk - sum_i c_jik a_i. */
PolyIdeal unital_ideal(int n);

bool is_associative(const SCTensor& c);

/* Solves the 2n^2 linear unit equations exactly. */
std::optional<UnitVector> find_unit(const SCTensor& c);

struct UnitCertificate {
    bool associative = false;
    int solution_dim = -1;  // -1 = no unit, 0 = unique unit
    std::optional<UnitVector> unit;
    bool at_most_one() const { return solution_dim <= 0; }
};

/* Requires is_associative(c); certifies that the unit system has an empty or
 * one-point solution set by an exact rank computation. */
UnitCertificate unit_uniqueness_certificate(const SCTensor& c);

struct EnumeratedPoint {
    SCTensor tensor;
    std::optional<UnitVector> unit;
};

struct EnumerationResult {
    int n = 0;
    std::uint64_t q = 0;
    bool unital_filter = false;
    std::uint64_t scanned = 0;
    std::vector<EnumeratedPoint> points;  // lexicographic in the tensor entries
    std::uint64_t associative_count = 0;
    std::uint64_t unital_count = 0;
};

/* Exhaustive scan of all q^(n^3) tensors over F_q in lexicographic order.
 * Throws if the scan exceeds the budget. When `unital` is set only points
 * with a unit are returned (counts always report both). */
EnumerationResult enumerate_points(int n, std::uint64_t q, bool unital,
                                   std::uint64_t budget = (1ull << 24), int workers = 1);

struct Orbit {
    std::size_t representative = 0;  // index into the input point list
    std::vector<std::size_t> members;
    std::uint64_t stabilizer_order = 0;
};

struct OrbitData {
    std::uint64_t group_order = 0;  // |GL_n(F_q)|
    std::vector<Orbit> orbits;
    /* Action convention: (g.c) is the structure tensor making g an algebra
     * isomorphism (F^n, c) -> (F^n, g.c), i.e. the product transported as
     * x *' y = g(g^{-1}x . g^{-1}y). */
    static constexpr const char* action_convention =
        "g.c transports the product: x *' y = g(g^-1 x . g^-1 y); left action";
};

/* Partitions points under the transport-of-structure GL_n(F_q) action and
 * certifies |orbit| * |stabilizer| = |GL_n(F_q)| for each orbit. */
OrbitData gl_orbits(const std::vector<SCTensor>& points, int n, std::uint64_t q,
                    std::uint64_t budget = (1ull << 24));

/* Applies one group element. */
SCTensor gl_act(const SCTensor& c, const DenseMatrix& g, const DenseMatrix& g_inverse);

/* The multiplication map A^2 -> A of the tensor, on the based ungraded
 * space with basis e1..en in degree 0. */
ChainComplex sc_complex(const SCTensor& c);
HomogMap sc_product(const SCTensor& c, const ChainComplex& complex);

}  // namespace opk

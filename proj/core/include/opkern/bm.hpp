#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "opkern/ainf.hpp"
#include "opkern/graded.hpp"
#include "opkern/rational.hpp"

namespace opk {

/* Monomial in the generators x_n, stored as the sorted list of indices n
 * (with repetitions for even generators). */
struct GcMonomial {
    std::vector<int> gens;
    bool operator<(const GcMonomial& o) const { return gens < o.gens; }
    bool operator==(const GcMonomial& o) const { return gens == o.gens; }
};

/* Free graded-commutative polynomial over Q in the generators x_n of B_m.
 * Monomials are kept sorted; the Koszul sign of sorting is folded into the
 * coefficient, and odd generators square to zero. */
class GCPoly {
public:
    GCPoly() = default;

    bool is_zero() const { return terms_.empty(); }
    const std::map<GcMonomial, Rational>& terms() const { return terms_; }
    void add_term(const GcMonomial& sorted_mono, const Rational& coeff);
    GCPoly operator+(const GCPoly& o) const;
    GCPoly scaled(const Rational& c) const;
    bool operator==(const GCPoly& o) const { return terms_ == o.terms_; }
    std::string str() const;

private:
    std::map<GcMonomial, Rational> terms_;
};

/* Truncation B_{m,r} of the representing CDGA B_m: generators x_2..x_r with
 * |x_n| = (n-1)(m+1)-1 and the differential
 *   d(x_n) = sum over p+q-1 = n, p,q >= 2, 1 <= i <= p of
 *            (-1)^((q-1)i + (p+m(i-1))(q+1)m) x_q x_p,
 * products canonicalized by graded commutativity. Defined over Q only. */
class BmAlgebra {
public:
    BmAlgebra(int m, int r);

    int m() const { return m_; }
    int r() const { return r_; }
    int gen_degree(int n) const;  // (n-1)(m+1)-1
    bool gen_is_odd(int n) const { return gen_degree(n) % 2 != 0; }
    const GCPoly& d_gen(int n) const;

    long long mono_degree(const GcMonomial& mono) const;
    /* x_a * x_b ... product of two monomials with the Koszul sort sign. */
    GCPoly mono_product(const GcMonomial& a, const GcMonomial& b) const;
    GCPoly poly_product(const GCPoly& a, const GCPoly& b) const;
    /* Graded Leibniz extension of d to any polynomial. */
    GCPoly d(const GCPoly& poly) const;

private:
    int m_, r_;
    std::vector<GCPoly> d_gens_;  // index n-2
};

BmAlgebra build_bm(int m, int r);

struct BmViolation {
    int generator;         // n with d(d(x_n)) != 0
    std::string residual;
};

struct BmReport {
    bool ok = true;
    int m = 0, r = 0;
    std::vector<BmViolation> violations;
};

BmReport certify_bm_d_squared(int m, int r, int workers = 1);

struct LinearPartReport {
    std::vector<std::pair<int, int>> generator_degrees;  // (n, |x_n|)
    bool induced_differential_zero = true;
    int min_degree = 0, max_degree = 0;
    /* (n-1)(m+1)-1 is unbounded in n for m != -1; every finite truncation is
     * bounded. */
    bool degrees_unbounded_in_n = false;
    /* m = -1 puts every generator in degree -1 (all odd). */
    bool degenerate_all_odd = false;
};

/* Quotient by the square of the augmentation ideal: generator degrees plus
 * the induced differential, which must vanish (no linear terms occur in any
 * d(x_n)), the minimality ingredient. */
LinearPartReport linear_part(const BmAlgebra& b);

/* Finite-dimensional commutative dg-algebra over Q: a chain complex with a
 * basis-indexed product table and a unit basis element. */
struct Cdga {
    ChainComplex complex;
    std::vector<std::vector<SparseVec>> product;  // product[i][j] = e_i * e_j
    int unit_index = 0;

    SparseVec multiply(const SparseVec& a, const SparseVec& b) const;
    /* Checks graded commutativity, associativity, unit, and the Leibniz rule
     * on basis elements; returns human-readable problems. */
    std::vector<std::string> validate() const;
};

/* Assignment of a target element to each generator x_n, 2 <= n <= r. */
using BmAssignment = std::map<int, SparseVec>;

struct DgPointReport {
    bool ok = true;
    std::vector<int> failing_generators;
};

/* True iff d_target(assignment(x_n)) equals the assignment-evaluated d(x_n)
 * for every n <= r, i.e. the assignment defines a dg-algebra map from the
 * truncation. Elements must be homogeneous of the generators' degrees. */
DgPointReport check_dg_point(const BmAlgebra& b, const Cdga& target, const BmAssignment& assignment);

/* The A-infinity structure on the m-fold suspension of the target induced by
 * a structure-constant assignment: operations
 *   m_n(s a_1, ..., s a_n) = (-1)^(m * sum_i (n-i)|a_i|) s (x_n a_1 ... a_n).
 * check_stasheff on this structure agrees with check_dg_point. */
AInfStructure suspension_structure(const Cdga& target, int m, const BmAssignment& assignment, int r);

}  // namespace opk

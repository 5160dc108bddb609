#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "opkern/graded.hpp"
#include "opkern/linalg.hpp"
#include "opkern/tree.hpp"

namespace opk {

/* Bilinear composition law o_i : O(p) ⊗ O(q) -> O(p+q-1) on basis pairs. */
using BilinearTable = std::map<std::pair<int, int>, SparseVec>;

/* Non-symmetric operad with explicit components up to a fixed arity bound.
 * Immutable once built; every checker reports the bound it certified. */
struct OperadTable {
    Field field = Field::rationals();
    int max_arity = 0;
    std::vector<SpacePtr> components;                       // index = arity, 0..max_arity
    std::map<std::tuple<int, int, int>, BilinearTable> comp;  // key = (p, i, q)
    SparseVec identity;                                     // degree-0 element of components[1]
    std::optional<std::vector<HomogMap>> differential;      // degree -1 endomap per arity

    const GradedSpace& component(int n) const;
    bool has_comp(int p, int i, int q) const;
    const BilinearTable& table(int p, int i, int q) const;  // throws if missing
    SparseVec compose(int p, int i, int q, const SparseVec& x, const SparseVec& y) const;
    SparseVec d_of(int n, const SparseVec& x) const;        // zero when no differential
};

using OperadPtr = std::shared_ptr<const OperadTable>;

struct OperadViolation {
    std::string rule;                   // which equation family failed
    std::vector<int> arities;
    std::vector<int> positions;         // insertion indices involved
    std::vector<std::string> elements;  // basis element names
    std::string lhs, rhs;               // both evaluated sides
};

struct OperadReport {
    bool ok = true;
    int max_arity = 0;
    std::vector<OperadViolation> violations;
};

/* Exhaustively evaluates the associativity equations (1')/(2) and the unit
 * equations (3)/(4) on all basis tuples whose composites stay within the
 * arity bound; with a differential also the derivation rule, d(id) = 0 and
 * d∘d = 0. The graded disjoint-reassociation uses the Koszul sign
 * (x o_i y) o_j z = (-1)^{|y||z|} (x o_j z) o_{i+q-1} y for j < i. */
OperadReport check_operad_axioms(const OperadTable& o, int max_arity, int workers = 1);

struct OperadMorphism {
    OperadPtr source, target;
    std::vector<HomogMap> maps;  // degree 0, per arity
};

/* f(x) o_i f(y) = f(x o_i y) on basis pairs, f(id) = id, and compatibility
 * with differentials (missing differentials are treated as zero). */
OperadReport check_operad_morphism(const OperadMorphism& f, int max_arity, int workers = 1);

OperadMorphism compose_morphisms(const OperadMorphism& g, const OperadMorphism& f);

/* uAss(n) = span{e} in degree 0 for all n >= 0, all composition laws the
 * unit isomorphism; Ass is the same with Ass(0) = 0. phi : Ass -> uAss is
 * the identity in every positive arity. */
OperadPtr build_uass(Field field, int max_arity);
OperadPtr build_ass(Field field, int max_arity);
OperadMorphism build_phi(Field field, int max_arity);

/* Endomorphism operad of a finite-dimensional chain complex. Component n has
 * the elementary maps (target basis b, source tuple t) as basis, indexed
 * t * dim + b; composition is insertion with the Koszul sign of (1'); the
 * differential is d∘f - (-1)^{|f|} f∘d_tensor. */
struct EndOperad {
    OperadPtr table;
    ChainComplex complex;
    std::vector<SpacePtr> powers;  // M^(tensor n), 0..max_arity

    int dim() const { return complex.space()->dim(); }
    int basis_index(int n, long long tuple_index, int target_row) const;
    /* Element of End(n) as an actual map M^n -> M; must be homogeneous. */
    HomogMap element_as_map(int n, const SparseVec& elem) const;
    SparseVec map_as_element(const HomogMap& f) const;
};

EndOperad end_operad(const ChainComplex& m, int max_arity);

/* Endomorphism operad of a chain map g : X -> Y: component n is the pullback
 * of Hom(X^n, X) -> Hom(X^n, Y) <- Hom(Y^n, Y), i.e. pairs (alpha, beta)
 * with g∘alpha = beta∘g^(tensor n), realized as a concrete graded subspace.
 * to_source / to_target are the projection operad morphisms d_1 and d_0. */
struct MapOperad {
    OperadPtr table;
    OperadMorphism to_source, to_target;
    EndOperad end_x, end_y;
};

MapOperad end_operad_of_map(const ChainComplex& x, const ChainComplex& y, const HomogMap& g,
                            int max_arity);

/* O-algebra structure presented as an operad morphism into an endomorphism
 * operad. */
struct AlgebraStructure {
    OperadPtr operad;
    EndOperad end;
    OperadMorphism morphism;
};

/* Builds the Ass- (unit absent) or uAss-algebra structure generated by a
 * binary product: arity n acts by the right-iterated product. The caller is
 * responsible for associativity (check with check_operad_morphism). */
AlgebraStructure algebra_from_product(const ChainComplex& a, const HomogMap& product,
                                      const std::optional<SparseVec>& unit_element,
                                      int max_arity);

struct AlgebraMorphismReport {
    bool ok = true;
    std::vector<std::string> failures;
};

/* True iff g is a chain map and g(x(a_1,...,a_n)) = x(g a_1,...,g a_n) holds
 * on every basis element x of O(n), n <= max_arity, and every basis tuple;
 * by the pullback description this is equivalent to the existence of the
 * unique lift f_g into the endomorphism operad of g. */
AlgebraMorphismReport check_algebra_morphism(const AlgebraStructure& a, const AlgebraStructure& b,
                                             const HomogMap& g, int max_arity);

/* Materializes the free (dg) operad on the given generators as an explicit
 * table, components spanned by planar trees. Requires generator arities >= 2. */
OperadPtr free_operad_table(const GenSetPtr& gens, Field field, int max_arity,
                            const Derivation* d = nullptr);

}  // namespace opk

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "opkern/field.hpp"

namespace opk {

/* Koszul sign rule: moving a block of homogeneous elements with degrees
 * `right` past a block with degrees `left` costs (-1)^(sum(left)*sum(right)).
 * Returned as +1/-1. */
int koszul_sign(const std::vector<int>& degrees_left, const std::vector<int>& degrees_right);
inline int koszul_sign_sums(long long sum_left, long long sum_right) {
    return ((sum_left & 1) && (sum_right & 1)) ? -1 : +1;
}

struct BasisElement {
    std::string name;
    int deg = 0;
};

/* Finite-dimensional graded vector space with a named, ordered basis. */
class GradedSpace {
public:
    GradedSpace(Field field, std::vector<BasisElement> basis);

    const Field& field() const { return field_; }
    int dim() const { return static_cast<int>(basis_.size()); }
    const BasisElement& at(int i) const { return basis_.at(static_cast<std::size_t>(i)); }
    int deg(int i) const { return at(i).deg; }
    const std::string& name(int i) const { return at(i).name; }
    const std::vector<BasisElement>& basis() const { return basis_; }
    std::optional<int> index_of(const std::string& name) const;

    bool operator==(const GradedSpace& o) const;

private:
    Field field_;
    std::vector<BasisElement> basis_;
    std::map<std::string, int> index_;
};

using SpacePtr = std::shared_ptr<const GradedSpace>;

SpacePtr make_space(Field field, std::vector<BasisElement> basis);

/* Monoidal product. Basis is ordered pairs in lexicographic order (left
 * factor major), degrees add, names are joined with "⊗". */
SpacePtr tensor_space(const SpacePtr& a, const SpacePtr& b);

/* Sparse vector in a given space: index -> nonzero coefficient. */
using SparseVec = std::map<int, Scalar>;

void vec_add_scaled(SparseVec& acc, const SparseVec& v, const Scalar& c);
std::string vec_str(const GradedSpace& space, const SparseVec& v);

/* Homogeneous linear map of fixed degree between graded spaces. Entries are
 * kept sparsely, keyed (column, row) so equality is structural and iteration
 * order is canonical. A nonzero entry requires
 * deg(target row) = deg(source column) + degree-of-map. */
class HomogMap {
public:
    HomogMap(SpacePtr source, SpacePtr target, int degree);

    static HomogMap identity(const SpacePtr& space);
    static HomogMap zero(SpacePtr source, SpacePtr target, int degree) {
        return HomogMap(std::move(source), std::move(target), degree);
    }

    const SpacePtr& source() const { return source_; }
    const SpacePtr& target() const { return target_; }
    int degree() const { return degree_; }

    void add(int row, int col, const Scalar& value);
    void set(int row, int col, const Scalar& value);
    const std::map<std::pair<int, int>, Scalar>& entries() const { return entries_; }
    bool is_zero() const { return entries_.empty(); }
    std::size_t nnz() const { return entries_.size(); }

    Scalar coeff(int row, int col) const;
    /* Column `col` of the matrix as a sparse vector in the target. */
    SparseVec column(int col) const;
    SparseVec apply(const SparseVec& v) const;

    HomogMap operator+(const HomogMap& o) const;
    HomogMap operator-(const HomogMap& o) const;
    HomogMap scaled(const Scalar& c) const;

    bool operator==(const HomogMap& o) const;
    bool operator!=(const HomogMap& o) const { return !(*this == o); }

private:
    SpacePtr source_, target_;
    int degree_;
    std::map<std::pair<int, int>, Scalar> entries_;  // key = (col, row)
};

/* g after f; degrees add, matrix is the exact product. */
HomogMap compose_maps(const HomogMap& g, const HomogMap& f);

/* f ⊗ g on tensor_space(source(f), source(g)), with the Koszul sign
 * (f⊗g)(a⊗b) = (-1)^{|g||a|} f(a)⊗g(b). */
HomogMap tensor_maps(const HomogMap& f, const HomogMap& g);

/* Mixed-radix addressing of the basis of M^⊗n (dim(M)^n tuples, leftmost
 * factor most significant, matching iterated tensor_space order). */
struct TupleIndexer {
    int dim = 0;
    int arity = 0;

    long long size() const;
    std::vector<int> decode(long long index) const;
    long long encode(const std::vector<int>& tuple) const;
};

/* Caches tensor powers of one space; power(0) is the 1-dimensional unit. */
class PowerCache {
public:
    explicit PowerCache(SpacePtr m);
    const SpacePtr& base() const { return m_; }
    const SpacePtr& power(int n);
    TupleIndexer indexer(int n) const { return TupleIndexer{m_->dim(), n}; }
    /* Sum of base degrees of the first `count` slots of the tuple. */
    long long prefix_degree(const std::vector<int>& tuple, int count) const;

private:
    SpacePtr m_;
    std::vector<SpacePtr> powers_;
};

/* 1^(i-1) ⊗ f ⊗ 1^(p-i) : M^⊗(p+q-1) -> M^⊗p for f : M^⊗q -> M, insertion
 * slot 1 <= i <= p. Basis action carries the Koszul sign
 * (-1)^{|f|·(deg u_1+...+deg u_{i-1})}. */
HomogMap insert_map(PowerCache& powers, const HomogMap& f, int arity_q, int slot, int outer_arity);

/* outer ∘ (1^(i-1) ⊗ inner ⊗ 1^(p-i)) for outer : M^⊗p -> M and
 * inner : M^⊗q -> M, computed sparsely by joining the entries of both maps
 * (never materializing the insertion). Same value as composing with
 * insert_map. */
HomogMap compose_insert(PowerCache& powers, const HomogMap& outer, int outer_arity,
                        const HomogMap& inner, int inner_arity, int slot);

/* Chain complex: d of degree -1 with d∘d = 0, verified exactly. */
class ChainComplex {
public:
    ChainComplex(SpacePtr space, HomogMap d);
    static ChainComplex with_zero_d(SpacePtr space);

    const SpacePtr& space() const { return space_; }
    const HomogMap& d() const { return d_; }

private:
    SpacePtr space_;
    HomogMap d_;
};

}  // namespace opk

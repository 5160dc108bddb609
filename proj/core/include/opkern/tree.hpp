#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "opkern/field.hpp"
#include "opkern/graded.hpp"

namespace opk {

struct Generator {
    std::string name;
    int arity = 0;   // >= 0
    int degree = 0;
};

/* Generating sequence of a free graded operad. The operad identity is never
 * listed here; it is represented by the bare-leaf tree. */
class GenSet {
public:
    explicit GenSet(std::vector<Generator> gens);

    int size() const { return static_cast<int>(gens_.size()); }
    const Generator& at(int i) const { return gens_.at(static_cast<std::size_t>(i)); }
    int index_of(const std::string& name) const;
    const std::vector<Generator>& all() const { return gens_; }

private:
    std::vector<Generator> gens_;
    std::map<std::string, int> index_;
};

using GenSetPtr = std::shared_ptr<const GenSet>;

/* Decorated planar rooted tree. Leaves are numbered left to right; the bare
 * leaf is the operad identity. Immutable, cheap to copy. */
class PlanarTree {
public:
    static PlanarTree leaf() { return PlanarTree(); }
    static PlanarTree corolla(const GenSet& gens, int gen_index);
    static PlanarTree node(const GenSet& gens, int gen_index, std::vector<PlanarTree> children);

    bool is_leaf() const { return node_ == nullptr; }
    int arity() const { return node_ ? node_->arity : 1; }
    int degree() const { return node_ ? node_->degree : 0; }
    int node_count() const { return node_ ? node_->nodes : 0; }
    int gen() const;
    const std::vector<PlanarTree>& children() const;

    /* S-expression "(gen child1 child2 ...)" with leaves "_1", "_2", ... */
    std::string str(const GenSet& gens) const;
    static PlanarTree parse(const GenSet& gens, const std::string& text);

private:
    struct Node {
        int gen;
        int arity;
        int degree;
        int nodes;
        std::vector<PlanarTree> children;
    };
    PlanarTree() = default;
    std::shared_ptr<const Node> node_;

    friend int tree_compare(const GenSet&, const PlanarTree&, const PlanarTree&);
};

/* Total order used for canonical forms: (arity, degree, root generator name,
 * children lexicographically); the leaf sorts before any node. */
int tree_compare(const GenSet& gens, const PlanarTree& a, const PlanarTree& b);

struct TreeOrder {
    GenSetPtr gens;
    bool operator()(const PlanarTree& a, const PlanarTree& b) const {
        return tree_compare(*gens, a, b) < 0;
    }
};

using TreeTerms = std::map<PlanarTree, Scalar, TreeOrder>;

/* Element of the free graded operad: a linear combination of trees sharing
 * one arity and one degree, kept in canonical sorted form with no zero
 * coefficients. */
class TreePoly {
public:
    static TreePoly zero(GenSetPtr gens, Field field, int arity, int degree);
    static TreePoly single(GenSetPtr gens, Field field, const PlanarTree& tree, const Scalar& coeff);

    const GenSetPtr& gens() const { return gens_; }
    const Field& field() const { return field_; }
    int arity() const { return arity_; }
    int degree() const { return degree_; }
    const TreeTerms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const PlanarTree& tree, const Scalar& coeff);
    TreePoly operator+(const TreePoly& o) const;
    TreePoly scaled(const Scalar& c) const;
    bool operator==(const TreePoly& o) const;
    bool operator!=(const TreePoly& o) const { return !(*this == o); }

    std::string str() const;

private:
    TreePoly(GenSetPtr gens, Field field, int arity, int degree);
    GenSetPtr gens_;
    Field field_;
    int arity_, degree_;
    TreeTerms terms_;
};

/* Operadic insertion x ∘_i y. Grafting two canonical trees produces the
 * canonical tree of the combined shape times the Koszul sign of reordering
 * the construction into planar preorder: (-1)^{|y| * S} where S is the total
 * degree of the nodes of x that follow leaf i in preorder. Nested and
 * disjoint reassociation identities (2) and (1') then hold on the nose. */
TreePoly graft(const TreePoly& x, int position, const TreePoly& y);

/* The unique degree -1 derivation of the free operad extending a value on
 * each generator. On a tree it is the signed sum over nodes of substituting
 * the node's generator by its value, the sign being (-1)^(sum of degrees of
 * the generators preceding that node in planar preorder). */
class Derivation {
public:
    Derivation(GenSetPtr gens, Field field, std::vector<TreePoly> value_on_gens);

    const TreePoly& on_generator(int gen_index) const {
        return values_.at(static_cast<std::size_t>(gen_index));
    }
    TreePoly apply_tree(const PlanarTree& tree) const;
    TreePoly apply(const TreePoly& poly) const;

    const GenSetPtr& gens() const { return gens_; }
    const Field& field() const { return field_; }

private:
    GenSetPtr gens_;
    Field field_;
    std::vector<TreePoly> values_;
};

struct DSquaredViolation {
    std::string generator;
    std::string residual;  // nonzero d(d(gen)) in canonical form
};

struct DSquaredReport {
    bool ok = true;
    int max_arity = 0;
    std::vector<DSquaredViolation> violations;
};

/* Checks d(d(g)) == 0 for every generator of arity <= max_arity. */
DSquaredReport verify_d_squared(const Derivation& d, int max_arity, int workers = 1);

/* All trees of the given arity, sorted by the canonical order. Requires all
 * generator arities >= 2, otherwise components are infinite-dimensional. */
std::vector<PlanarTree> enumerate_trees(const GenSet& gens, int arity);

}  // namespace opk

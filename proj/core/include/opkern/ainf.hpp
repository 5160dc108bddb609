#pragma once

#include <map>
#include <memory>

#include "opkern/graded.hpp"
#include "opkern/tree.hpp"

namespace opk {

/* The A-infinity operad, truncated at a top arity: free graded operad on
 * mu_n of arity n and degree n-2 (n >= 2) with
 *   d(mu_n) = sum over p+q-1 = n, p,q >= 2, 1 <= i <= p of
 *             (-1)^(qp + (q-1)i) mu_p o_i mu_q. */
struct AInfOperad {
    GenSetPtr gens;
    Field field;
    int max_arity;
    std::shared_ptr<const Derivation> d;

    int gen_index(int n) const;                     // index of mu_n
    const TreePoly& d_mu(int n) const;              // d(mu_n)
};

AInfOperad build_ainf(int max_arity, Field field = Field::rationals());

DSquaredReport certify_ainf_d_squared(int max_arity, int workers = 1,
                                      Field field = Field::rationals());

/* Evaluates a tree of the free operad in the endomorphism operad of the base
 * of `powers`, substituting each generator by the given map (which must have
 * the generator's arity and degree). The leaf evaluates to the identity. */
HomogMap realize_tree(PowerCache& powers, const GenSet& gens,
                      const std::map<int, HomogMap>& images, const PlanarTree& tree);
HomogMap realize_poly(PowerCache& powers, const std::map<int, HomogMap>& images,
                      const TreePoly& poly);

/* A-infinity algebra structure data on a finite-dimensional chain complex:
 * operations m_n : M^(tensor n) -> M of degree n-2 for 2 <= n <= r. */
struct AInfStructure {
    ChainComplex complex;
    std::map<int, HomogMap> ops;
};

struct StasheffViolation {
    int arity;
    std::string difference;  // nonzero (LHS - RHS) as a map, pretty-printed
};

struct StasheffReport {
    bool ok = true;
    int max_arity = 0;
    std::vector<StasheffViolation> violations;
};

/* Checks the Stasheff identities: for each n, the differential of m_n in the
 * endomorphism dg operad must equal the action of d(mu_n), i.e.
 *   d∘m_n - (-1)^(n-2) sum_i m_n∘(1⊗..⊗d⊗..⊗1)
 *     = sum (-1)^(qp+(q-1)i) m_p ∘_i m_q
 * with insertion Koszul signs. */
StasheffReport check_stasheff(const AInfStructure& s, int max_arity, int workers = 1);

struct OperadMorphism;

/* The trivial fibration onto the associative operad: mu_2 -> the generator
 * of Ass(2), mu_n -> 0 for n > 2; a tree maps to the generator iff every
 * node is mu_2. Source is the materialized free operad with its
 * differential, target is Ass with d = 0. */
OperadMorphism build_quotient_to_ass(const AInfOperad& a, int max_arity);

}  // namespace opk

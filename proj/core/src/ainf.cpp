#include "opkern/ainf.hpp"

#include <stdexcept>

#include "opkern/operad.hpp"
#include "opkern/parallel.hpp"

namespace opk {

int AInfOperad::gen_index(int n) const {
    if (n < 2 || n > max_arity)
        throw std::out_of_range("AInfOperad: mu_" + std::to_string(n) + " not built (max arity " +
                                std::to_string(max_arity) + ")");
    return n - 2;
}

const TreePoly& AInfOperad::d_mu(int n) const {
    return d->on_generator(gen_index(n));
}

AInfOperad build_ainf(int max_arity, Field field) {
    if (max_arity < 2)
        throw std::invalid_argument("build_ainf: max_arity must be >= 2");
    std::vector<Generator> gens;
    for (int n = 2; n <= max_arity; ++n)
        gens.push_back({"mu" + std::to_string(n), n, n - 2});
    auto gen_set = std::make_shared<const GenSet>(std::move(gens));

    std::vector<TreePoly> d_values;
    for (int n = 2; n <= max_arity; ++n) {
        TreePoly dn = TreePoly::zero(gen_set, field, n, n - 3);
        for (int p = 2; p <= n - 1; ++p) {
            int q = n + 1 - p;
            if (q < 2) continue;
            PlanarTree inner = PlanarTree::corolla(*gen_set, q - 2);
            for (int i = 1; i <= p; ++i) {
                std::vector<PlanarTree> children(static_cast<std::size_t>(p), PlanarTree::leaf());
                children[static_cast<std::size_t>(i - 1)] = inner;
                PlanarTree term = PlanarTree::node(*gen_set, p - 2, std::move(children));
                long long exponent = static_cast<long long>(q) * p + static_cast<long long>(q - 1) * i;
                dn.add_term(term, sign_scalar(field, exponent));
            }
        }
        d_values.push_back(std::move(dn));
    }

    AInfOperad out{gen_set, field, max_arity,
                   std::make_shared<const Derivation>(gen_set, field, std::move(d_values))};
    return out;
}

DSquaredReport certify_ainf_d_squared(int max_arity, int workers, Field field) {
    AInfOperad ainf = build_ainf(max_arity, field);
    return verify_d_squared(*ainf.d, max_arity, workers);
}

HomogMap realize_tree(PowerCache& powers, const GenSet& gens,
                      const std::map<int, HomogMap>& images, const PlanarTree& tree) {
    if (tree.is_leaf())
        return HomogMap::identity(powers.base());
    auto it = images.find(tree.gen());
    if (it == images.end())
        throw std::invalid_argument("realize_tree: no image for generator '" +
                                    gens.at(tree.gen()).name + "'");
    HomogMap acc = it->second;
    int current_arity = static_cast<int>(tree.children().size());
    int offset = 0;
    for (const PlanarTree& child : tree.children()) {
        if (child.is_leaf()) {
            ++offset;
            continue;
        }
        HomogMap child_map = realize_tree(powers, gens, images, child);
        acc = compose_insert(powers, acc, current_arity, child_map, child.arity(), offset + 1);
        current_arity += child.arity() - 1;
        offset += child.arity();
    }
    return acc;
}

HomogMap realize_poly(PowerCache& powers, const std::map<int, HomogMap>& images,
                      const TreePoly& poly) {
    HomogMap acc = HomogMap::zero(powers.power(poly.arity()), powers.base(), poly.degree());
    for (const auto& [tree, coeff] : poly.terms())
        acc = acc + realize_tree(powers, *poly.gens(), images, tree).scaled(coeff);
    return acc;
}

StasheffReport check_stasheff(const AInfStructure& s, int max_arity, int workers) {
    const SpacePtr& m_space = s.complex.space();
    const Field& field = m_space->field();
    PowerCache powers(m_space);
    const HomogMap& d = s.complex.d();

    std::map<int, HomogMap> images;
    for (const auto& [n, op] : s.ops) {
        if (n < 2)
            throw std::invalid_argument("check_stasheff: operations start at m_2");
        if (op.degree() != n - 2)
            throw std::invalid_argument("check_stasheff: m_" + std::to_string(n) +
                                        " must have degree " + std::to_string(n - 2));
        if (!(*op.source() == *powers.power(n)) || !(*op.target() == *m_space))
            throw std::invalid_argument("check_stasheff: m_" + std::to_string(n) +
                                        " is not a map M^" + std::to_string(n) + " -> M");
        images.emplace(n - 2, op);  // keyed by generator index = n - 2
    }
    AInfOperad ainf = build_ainf(max_arity, field);
    for (int n = 2; n <= max_arity; ++n)
        if (s.ops.find(n) == s.ops.end())
            throw std::invalid_argument("check_stasheff: missing m_" + std::to_string(n));

    std::vector<int> arities;
    for (int n = 2; n <= max_arity; ++n) arities.push_back(n);

    auto run = [&](std::size_t begin, std::size_t end) {
        std::vector<StasheffViolation> out;
        PowerCache local(m_space);
        for (std::size_t k = begin; k < end; ++k) {
            int n = arities[k];
            const HomogMap& mn = s.ops.at(n);
            HomogMap lhs = compose_maps(d, mn);
            Scalar sgn = sign_scalar(field, n - 2);
            for (int i = 1; i <= n; ++i)
                lhs = lhs - compose_insert(local, mn, n, d, 1, i).scaled(sgn);
            HomogMap rhs = realize_poly(local, images, ainf.d_mu(n));
            if (!(lhs == rhs)) {
                HomogMap diff = lhs - rhs;
                std::string detail;
                for (const auto& [key, v] : diff.entries()) {
                    if (!detail.empty()) detail += " + ";
                    detail += v.str() + "*(" + diff.target()->name(key.second) + "<-" +
                              diff.source()->name(key.first) + ")";
                    if (detail.size() > 400) { detail += " ..."; break; }
                }
                out.push_back({n, detail});
            }
        }
        return out;
    };
    auto chunks = parallel_chunks<std::vector<StasheffViolation>>(arities.size(), workers, run);

    StasheffReport report;
    report.max_arity = max_arity;
    for (auto& chunk : chunks)
        for (auto& v : chunk) report.violations.push_back(std::move(v));
    report.ok = report.violations.empty();
    return report;
}

OperadMorphism build_quotient_to_ass(const AInfOperad& a, int max_arity) {
    if (max_arity > a.max_arity)
        throw std::invalid_argument("build_quotient_to_ass: bound exceeds the built operad");
    OperadMorphism f;
    f.source = free_operad_table(a.gens, a.field, max_arity, a.d.get());
    f.target = build_ass(a.field, max_arity);
    Scalar one = Scalar::of(a.field, 1);
    for (int n = 0; n <= max_arity; ++n) {
        const SpacePtr& src = f.source->components[static_cast<std::size_t>(n)];
        HomogMap fn(src, f.target->components[static_cast<std::size_t>(n)], 0);
        for (int k = 0; k < src->dim(); ++k)
            if (src->deg(k) == 0) fn.add(0, k, one);  // degree-0 trees are exactly the all-mu_2 ones
        f.maps.push_back(std::move(fn));
    }
    return f;
}

}  // namespace opk

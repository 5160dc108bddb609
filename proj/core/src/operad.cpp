#include "opkern/operad.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "opkern/parallel.hpp"

namespace opk {

const GradedSpace& OperadTable::component(int n) const {
    if (n < 0 || n > max_arity)
        throw std::out_of_range("OperadTable: arity " + std::to_string(n) + " beyond bound " +
                                std::to_string(max_arity));
    return *components[static_cast<std::size_t>(n)];
}

bool OperadTable::has_comp(int p, int i, int q) const {
    return comp.find({p, i, q}) != comp.end();
}

const BilinearTable& OperadTable::table(int p, int i, int q) const {
    auto it = comp.find({p, i, q});
    if (it == comp.end())
        throw std::invalid_argument("OperadTable: missing composition map (p=" + std::to_string(p) +
                                    ", i=" + std::to_string(i) + ", q=" + std::to_string(q) + ")");
    return it->second;
}

SparseVec OperadTable::compose(int p, int i, int q, const SparseVec& x, const SparseVec& y) const {
    const BilinearTable& t = table(p, i, q);
    SparseVec out;
    for (const auto& [xi, xv] : x) {
        for (const auto& [yi, yv] : y) {
            auto it = t.find({xi, yi});
            if (it == t.end()) continue;
            vec_add_scaled(out, it->second, xv * yv);
        }
    }
    return out;
}

SparseVec OperadTable::d_of(int n, const SparseVec& x) const {
    if (!differential) return {};
    return (*differential)[static_cast<std::size_t>(n)].apply(x);
}

namespace {

struct Instance {
    int rule;  // 1 = (1'), 2 = (2), 3 = unit-left, 4 = unit-right, 5 = derivation
    int a = -1, b = -1, c = -1, i = -1, j = -1;
};

const char* rule_name(int rule) {
    switch (rule) {
        case 1: return "assoc-disjoint-(1')";
        case 2: return "assoc-nested-(2)";
        case 3: return "unit-left-(3)";
        case 4: return "unit-right-(4)";
        case 5: return "derivation";
        default: return "?";
    }
}

}  // namespace

OperadReport check_operad_axioms(const OperadTable& o, int max_arity, int workers) {
    if (max_arity > o.max_arity)
        throw std::invalid_argument("check_operad_axioms: bound exceeds the table's arity bound");
    const int a_max = max_arity;
    std::vector<Instance> instances;

    for (int a = 2; a <= a_max; ++a)
        for (int b = 0; b <= a_max; ++b) {
            if (a + b - 1 > a_max) continue;
            for (int c = 0; c <= a_max; ++c) {
                if (a + c - 1 > a_max || a + b + c - 2 > a_max) continue;
                for (int i = 2; i <= a; ++i)
                    for (int j = 1; j < i; ++j)
                        instances.push_back({1, a, b, c, i, j});
            }
        }
    for (int a = 1; a <= a_max; ++a)
        for (int b = 1; b <= a_max; ++b) {
            if (a + b - 1 > a_max) continue;
            for (int c = 0; c <= a_max; ++c) {
                if (b + c - 1 > a_max || a + b + c - 2 > a_max) continue;
                for (int i = 1; i <= a; ++i)
                    for (int j = i; j < b + i; ++j)
                        instances.push_back({2, a, b, c, i, j});
            }
        }
    for (int a = 0; a <= a_max; ++a) instances.push_back({3, a});
    for (int a = 1; a <= a_max; ++a)
        for (int i = 1; i <= a; ++i) instances.push_back({4, a, -1, -1, i});
    if (o.differential) {
        for (const auto& [key, tab] : o.comp) {
            auto [p, i, q] = key;
            (void)tab;
            if (p + q - 1 <= a_max && p <= a_max && q <= a_max)
                instances.push_back({5, p, q, -1, i});
        }
    }

    const Field& field = o.field;
    Scalar one = Scalar::of(field, 1);

    auto run = [&](std::size_t begin, std::size_t end) {
        std::vector<OperadViolation> out;
        auto record = [&](const Instance& in, const std::vector<std::string>& elems, int arity_out,
                          const SparseVec& lhs, const SparseVec& rhs) {
            OperadViolation v;
            v.rule = rule_name(in.rule);
            v.arities = {in.a, in.b, in.c};
            v.positions = {in.i, in.j};
            v.elements = elems;
            v.lhs = vec_str(o.component(arity_out), lhs);
            v.rhs = vec_str(o.component(arity_out), rhs);
            out.push_back(std::move(v));
        };
        for (std::size_t k = begin; k < end; ++k) {
            const Instance& in = instances[k];
            if (in.rule == 1) {
                int a = in.a, b = in.b, c = in.c, i = in.i, j = in.j;
                int n_out = a + b + c - 2;
                for (int xi = 0; xi < o.component(a).dim(); ++xi)
                    for (int yi = 0; yi < o.component(b).dim(); ++yi)
                        for (int zi = 0; zi < o.component(c).dim(); ++zi) {
                            SparseVec x{{xi, one}}, y{{yi, one}}, z{{zi, one}};
                            SparseVec lhs = o.compose(a + b - 1, j, c, o.compose(a, i, b, x, y), z);
                            SparseVec rhs = o.compose(a + c - 1, i + c - 1, b, o.compose(a, j, c, x, z), y);
                            long long koszul = static_cast<long long>(o.component(b).deg(yi)) *
                                               o.component(c).deg(zi);
                            SparseVec srhs;
                            vec_add_scaled(srhs, rhs, sign_scalar(field, koszul));
                            if (lhs != srhs)
                                record(in, {o.component(a).name(xi), o.component(b).name(yi),
                                            o.component(c).name(zi)}, n_out, lhs, srhs);
                        }
            } else if (in.rule == 2) {
                int a = in.a, b = in.b, c = in.c, i = in.i, j = in.j;
                int n_out = a + b + c - 2;
                for (int xi = 0; xi < o.component(a).dim(); ++xi)
                    for (int yi = 0; yi < o.component(b).dim(); ++yi)
                        for (int zi = 0; zi < o.component(c).dim(); ++zi) {
                            SparseVec x{{xi, one}}, y{{yi, one}}, z{{zi, one}};
                            SparseVec lhs = o.compose(a + b - 1, j, c, o.compose(a, i, b, x, y), z);
                            SparseVec rhs = o.compose(a, i, b + c - 1, x, o.compose(b, j - i + 1, c, y, z));
                            if (lhs != rhs)
                                record(in, {o.component(a).name(xi), o.component(b).name(yi),
                                            o.component(c).name(zi)}, n_out, lhs, rhs);
                        }
            } else if (in.rule == 3) {
                int a = in.a;
                for (int xi = 0; xi < o.component(a).dim(); ++xi) {
                    SparseVec x{{xi, one}};
                    SparseVec lhs = o.compose(1, 1, a, o.identity, x);
                    if (lhs != x) record(in, {o.component(a).name(xi)}, a, lhs, x);
                }
            } else if (in.rule == 4) {
                int a = in.a, i = in.i;
                for (int xi = 0; xi < o.component(a).dim(); ++xi) {
                    SparseVec x{{xi, one}};
                    SparseVec lhs = o.compose(a, i, 1, x, o.identity);
                    if (lhs != x) record(in, {o.component(a).name(xi)}, a, lhs, x);
                }
            } else {
                int p = in.a, q = in.b, i = in.i;
                int n_out = p + q - 1;
                for (int xi = 0; xi < o.component(p).dim(); ++xi)
                    for (int yi = 0; yi < o.component(q).dim(); ++yi) {
                        SparseVec x{{xi, one}}, y{{yi, one}};
                        SparseVec lhs = o.d_of(n_out, o.compose(p, i, q, x, y));
                        SparseVec rhs = o.compose(p, i, q, o.d_of(p, x), y);
                        vec_add_scaled(rhs, o.compose(p, i, q, x, o.d_of(q, y)),
                                       sign_scalar(field, o.component(p).deg(xi)));
                        if (lhs != rhs)
                            record(in, {o.component(p).name(xi), o.component(q).name(yi)}, n_out, lhs, rhs);
                    }
            }
        }
        return out;
    };

    auto chunks = parallel_chunks<std::vector<OperadViolation>>(instances.size(), workers, run);
    OperadReport report;
    report.max_arity = max_arity;
    for (auto& chunk : chunks)
        for (auto& v : chunk) report.violations.push_back(std::move(v));

    if (o.differential) {
        const auto& diff = *o.differential;
        for (int n = 0; n <= max_arity; ++n) {
            const HomogMap& dn = diff[static_cast<std::size_t>(n)];
            if (!compose_maps(dn, dn).is_zero())
                report.violations.push_back({"d-squared", {n}, {}, {}, "d∘d", "0"});
        }
        SparseVec did = diff[1].apply(o.identity);
        if (!did.empty())
            report.violations.push_back(
                {"identity-cycle", {1}, {}, {}, vec_str(o.component(1), did), "0"});
    }

    report.ok = report.violations.empty();
    return report;
}

OperadReport check_operad_morphism(const OperadMorphism& f, int max_arity, int workers) {
    const OperadTable& src = *f.source;
    const OperadTable& tgt = *f.target;
    if (max_arity > src.max_arity || max_arity > tgt.max_arity)
        throw std::invalid_argument("check_operad_morphism: bound exceeds a table's arity bound");
    if (static_cast<int>(f.maps.size()) <= max_arity)
        throw std::invalid_argument("check_operad_morphism: missing arity components in the morphism");
    for (int n = 0; n <= max_arity; ++n) {
        const HomogMap& fn = f.maps[static_cast<std::size_t>(n)];
        if (fn.degree() != 0 || !(*fn.source() == src.component(n)) || !(*fn.target() == tgt.component(n)))
            throw std::invalid_argument("check_operad_morphism: arity " + std::to_string(n) +
                                        " map has wrong shape or degree");
    }

    OperadReport report;
    report.max_arity = max_arity;
    Scalar one = Scalar::of(src.field, 1);

    std::vector<std::tuple<int, int, int>> keys;
    for (const auto& [key, tab] : src.comp) {
        auto [p, i, q] = key;
        (void)tab;
        if (p <= max_arity && q <= max_arity && p + q - 1 <= max_arity) keys.push_back(key);
    }

    auto run = [&](std::size_t begin, std::size_t end) {
        std::vector<OperadViolation> out;
        for (std::size_t k = begin; k < end; ++k) {
            auto [p, i, q] = keys[k];
            const HomogMap& fp = f.maps[static_cast<std::size_t>(p)];
            const HomogMap& fq = f.maps[static_cast<std::size_t>(q)];
            const HomogMap& fn = f.maps[static_cast<std::size_t>(p + q - 1)];
            for (int xi = 0; xi < src.component(p).dim(); ++xi)
                for (int yi = 0; yi < src.component(q).dim(); ++yi) {
                    SparseVec x{{xi, one}}, y{{yi, one}};
                    SparseVec lhs = fn.apply(src.compose(p, i, q, x, y));
                    SparseVec rhs = tgt.compose(p, i, q, fp.column(xi), fq.column(yi));
                    if (lhs != rhs) {
                        OperadViolation v;
                        v.rule = "morphism-composition";
                        v.arities = {p, q};
                        v.positions = {i};
                        v.elements = {src.component(p).name(xi), src.component(q).name(yi)};
                        v.lhs = vec_str(tgt.component(p + q - 1), lhs);
                        v.rhs = vec_str(tgt.component(p + q - 1), rhs);
                        out.push_back(std::move(v));
                    }
                }
        }
        return out;
    };
    auto chunks = parallel_chunks<std::vector<OperadViolation>>(keys.size(), workers, run);
    for (auto& chunk : chunks)
        for (auto& v : chunk) report.violations.push_back(std::move(v));

    SparseVec fid = f.maps[1].apply(src.identity);
    if (fid != tgt.identity)
        report.violations.push_back({"morphism-identity", {1}, {}, {},
                                     vec_str(tgt.component(1), fid),
                                     vec_str(tgt.component(1), tgt.identity)});

    if (src.differential || tgt.differential) {
        for (int n = 0; n <= max_arity; ++n) {
            const HomogMap& fn = f.maps[static_cast<std::size_t>(n)];
            HomogMap lhs = src.differential
                               ? compose_maps(fn, (*src.differential)[static_cast<std::size_t>(n)])
                               : HomogMap::zero(fn.source(), fn.target(), -1);
            HomogMap rhs = tgt.differential
                               ? compose_maps((*tgt.differential)[static_cast<std::size_t>(n)], fn)
                               : HomogMap::zero(fn.source(), fn.target(), -1);
            if (!(lhs == rhs))
                report.violations.push_back({"morphism-differential", {n}, {}, {}, "f∘d", "d∘f"});
        }
    }

    report.ok = report.violations.empty();
    return report;
}

OperadMorphism compose_morphisms(const OperadMorphism& g, const OperadMorphism& f) {
    std::size_t arity = std::min(f.maps.size(), g.maps.size());
    OperadMorphism out;
    out.source = f.source;
    out.target = g.target;
    for (std::size_t n = 0; n < arity; ++n)
        out.maps.push_back(compose_maps(g.maps[n], f.maps[n]));
    return out;
}

namespace {

OperadPtr build_one_dimensional(Field field, int max_arity, bool with_nullary) {
    auto table = std::make_shared<OperadTable>();
    table->field = field;
    table->max_arity = max_arity;
    SpacePtr line = make_space(field, {{"e", 0}});
    SpacePtr empty = make_space(field, {});
    for (int n = 0; n <= max_arity; ++n)
        table->components.push_back(n == 0 && !with_nullary ? empty : line);
    Scalar one = Scalar::of(field, 1);
    for (int p = 1; p <= max_arity; ++p)
        for (int q = 0; p + q - 1 <= max_arity && q <= max_arity; ++q)
            for (int i = 1; i <= p; ++i) {
                BilinearTable tab;
                if (q > 0 || with_nullary) tab[{0, 0}] = SparseVec{{0, one}};
                table->comp[{p, i, q}] = std::move(tab);
            }
    table->identity = SparseVec{{0, one}};
    return table;
}

}  // namespace

OperadPtr build_uass(Field field, int max_arity) {
    return build_one_dimensional(field, max_arity, true);
}

OperadPtr build_ass(Field field, int max_arity) {
    return build_one_dimensional(field, max_arity, false);
}

OperadMorphism build_phi(Field field, int max_arity) {
    OperadMorphism phi;
    phi.source = build_ass(field, max_arity);
    phi.target = build_uass(field, max_arity);
    Scalar one = Scalar::of(field, 1);
    for (int n = 0; n <= max_arity; ++n) {
        HomogMap fn(phi.source->components[static_cast<std::size_t>(n)],
                    phi.target->components[static_cast<std::size_t>(n)], 0);
        if (n >= 1) fn.set(0, 0, one);
        phi.maps.push_back(std::move(fn));
    }
    return phi;
}

int EndOperad::basis_index(int n, long long tuple_index, int target_row) const {
    (void)n;
    return static_cast<int>(tuple_index) * dim() + target_row;
}

HomogMap EndOperad::element_as_map(int n, const SparseVec& elem) const {
    const GradedSpace& comp = table->component(n);
    const SpacePtr& src = powers[static_cast<std::size_t>(n)];
    if (elem.empty()) return HomogMap::zero(src, complex.space(), 0);
    int deg = comp.deg(elem.begin()->first);
    HomogMap f(src, complex.space(), deg);
    for (const auto& [idx, v] : elem) {
        if (comp.deg(idx) != deg)
            throw std::invalid_argument("EndOperad: element is not homogeneous");
        f.add(idx % dim(), idx / dim(), v);
    }
    return f;
}

SparseVec EndOperad::map_as_element(const HomogMap& f) const {
    int n = -1;
    for (std::size_t k = 0; k < powers.size(); ++k)
        if (*powers[k] == *f.source()) { n = static_cast<int>(k); break; }
    if (n < 0 || !(*f.target() == *complex.space()))
        throw std::invalid_argument("EndOperad: map is not M^n -> M within the arity bound");
    SparseVec out;
    for (const auto& [key, v] : f.entries())
        out.emplace(basis_index(n, key.first, key.second), v);
    return out;
}

EndOperad end_operad(const ChainComplex& m, int max_arity) {
    if (max_arity < 0)
        throw std::invalid_argument("end_operad: negative arity bound");
    const SpacePtr& space = m.space();
    const Field& field = space->field();
    const int dim = space->dim();

    std::vector<SpacePtr> powers;
    {
        PowerCache cache(space);
        for (int n = 0; n <= max_arity; ++n) powers.push_back(cache.power(n));
    }

    auto table = std::make_shared<OperadTable>();
    table->field = field;
    table->max_arity = max_arity;
    for (int n = 0; n <= max_arity; ++n) {
        const SpacePtr& pw = powers[static_cast<std::size_t>(n)];
        std::vector<BasisElement> basis;
        basis.reserve(static_cast<std::size_t>(pw->dim()) * static_cast<std::size_t>(dim));
        for (int t = 0; t < pw->dim(); ++t)
            for (int b = 0; b < dim; ++b)
                basis.push_back({space->name(b) + "<-" + pw->name(t), space->deg(b) - pw->deg(t)});
        table->components.push_back(make_space(field, std::move(basis)));
    }

    // composition: E_{b,t} o_i E_{c,s} = [c = t_i] (-1)^{|E_{c,s}|*prefix} E_{b, t[i->s]}
    for (int p = 1; p <= max_arity; ++p) {
        TupleIndexer pt{dim, p};
        for (int q = 0; q <= max_arity && p + q - 1 <= max_arity; ++q) {
            TupleIndexer qt{dim, q};
            TupleIndexer nt{dim, p + q - 1};
            for (int i = 1; i <= p; ++i) {
                BilinearTable tab;
                for (long long t = 0; t < pt.size(); ++t) {
                    std::vector<int> tup = pt.decode(t);
                    long long prefix = 0;
                    for (int l = 0; l < i - 1; ++l) prefix += space->deg(tup[static_cast<std::size_t>(l)]);
                    int required = tup[static_cast<std::size_t>(i - 1)];
                    for (long long s = 0; s < qt.size(); ++s) {
                        std::vector<int> sub = qt.decode(s);
                        std::vector<int> merged;
                        merged.reserve(static_cast<std::size_t>(p + q - 1));
                        for (int l = 0; l < i - 1; ++l) merged.push_back(tup[static_cast<std::size_t>(l)]);
                        for (int l = 0; l < q; ++l) merged.push_back(sub[static_cast<std::size_t>(l)]);
                        for (int l = i; l < p; ++l) merged.push_back(tup[static_cast<std::size_t>(l)]);
                        long long sub_deg = 0;
                        for (int v : sub) sub_deg += space->deg(v);
                        long long out_tuple = nt.encode(merged);
                        for (int b = 0; b < dim; ++b) {
                            for (int c = 0; c < dim; ++c) {
                                if (c != required) continue;
                                long long y_deg = space->deg(c) - sub_deg;
                                Scalar sgn = sign_scalar(field, y_deg * prefix);
                                int xi = static_cast<int>(t) * dim + b;
                                int yi = static_cast<int>(s) * dim + c;
                                tab[{xi, yi}] = SparseVec{{static_cast<int>(out_tuple) * dim + b, sgn}};
                            }
                        }
                    }
                }
                table->comp[{p, i, q}] = std::move(tab);
            }
        }
    }

    Scalar one = Scalar::of(field, 1);
    for (int b = 0; b < dim; ++b) table->identity[b * dim + b] = one;

    // differential: d_End(E_{b,t}) = sum_b' d_{b',b} E_{b',t}
    //   - (-1)^{|E|} sum_j sum_a (-1)^{prefix_j(t)} d_{t_j,a} E_{b, t[j->a]}
    const HomogMap& d = m.d();
    std::vector<std::vector<std::pair<int, Scalar>>> d_rows(static_cast<std::size_t>(dim));
    for (const auto& [key, v] : d.entries())
        d_rows[static_cast<std::size_t>(key.second)].push_back({key.first, v});

    std::vector<HomogMap> diff;
    for (int n = 0; n <= max_arity; ++n) {
        const SpacePtr& comp = table->components[static_cast<std::size_t>(n)];
        TupleIndexer nt{dim, n};
        HomogMap dn(comp, comp, -1);
        for (long long t = 0; t < nt.size(); ++t) {
            std::vector<int> tup = nt.decode(t);
            for (int b = 0; b < dim; ++b) {
                int col = static_cast<int>(t) * dim + b;
                for (const auto& [brow, v] : d.column(b))
                    dn.add(static_cast<int>(t) * dim + brow, col, v);
                long long e_deg = comp->deg(col);
                Scalar outer = sign_scalar(field, e_deg + 1);  // the -(-1)^{|E|} factor
                long long prefix = 0;
                for (int j = 0; j < n; ++j) {
                    int tj = tup[static_cast<std::size_t>(j)];
                    for (const auto& [a, v] : d_rows[static_cast<std::size_t>(tj)]) {
                        std::vector<int> moved = tup;
                        moved[static_cast<std::size_t>(j)] = a;
                        dn.add(static_cast<int>(nt.encode(moved)) * dim + b, col,
                               outer * v * sign_scalar(field, prefix));
                    }
                    prefix += space->deg(tj);
                }
            }
        }
        diff.push_back(std::move(dn));
    }
    table->differential = std::move(diff);

    return EndOperad{std::move(table), m, std::move(powers)};
}

namespace {

/* Pullback component data: basis vectors in ambient End(X)(n) ⊕ End(Y)(n)
 * coordinates plus the free ambient index of each vector, which makes
 * coordinatization a lookup. */
struct PullbackComponent {
    std::vector<SparseVec> ambient_basis;
    std::vector<int> free_index;
    std::map<int, int> free_to_local;
    int ax = 0;  // dimension of the End(X) part

    SparseVec coordinatize(const SparseVec& ambient) const {
        SparseVec coords;
        for (const auto& [idx, v] : ambient) {
            auto it = free_to_local.find(idx);
            if (it != free_to_local.end()) coords.emplace(it->second, v);
        }
        SparseVec check;
        for (const auto& [j, v] : coords)
            vec_add_scaled(check, ambient_basis[static_cast<std::size_t>(j)], v);
        if (check != ambient)
            throw std::logic_error("end_operad_of_map: vector not in the pullback subspace");
        return coords;
    }

    SparseVec alpha_part(const SparseVec& ambient_or_coords, bool coords) const {
        SparseVec ambient;
        if (coords) {
            for (const auto& [j, v] : ambient_or_coords)
                vec_add_scaled(ambient, ambient_basis[static_cast<std::size_t>(j)], v);
        } else {
            ambient = ambient_or_coords;
        }
        SparseVec out;
        for (const auto& [idx, v] : ambient)
            if (idx < ax) out.emplace(idx, v);
        return out;
    }

    SparseVec beta_part(const SparseVec& ambient_or_coords, bool coords) const {
        SparseVec ambient;
        if (coords) {
            for (const auto& [j, v] : ambient_or_coords)
                vec_add_scaled(ambient, ambient_basis[static_cast<std::size_t>(j)], v);
        } else {
            ambient = ambient_or_coords;
        }
        SparseVec out;
        for (const auto& [idx, v] : ambient)
            if (idx >= ax) out.emplace(idx - ax, v);
        return out;
    }
};

}  // namespace

MapOperad end_operad_of_map(const ChainComplex& x, const ChainComplex& y, const HomogMap& g,
                            int max_arity) {
    if (g.degree() != 0 || !(*g.source() == *x.space()) || !(*g.target() == *y.space()))
        throw std::invalid_argument("end_operad_of_map: g must be a degree-0 map X -> Y");
    if (!(compose_maps(g, x.d()) == compose_maps(y.d(), g)))
        throw std::invalid_argument("end_operad_of_map: g is not a chain map");

    const Field& field = x.space()->field();
    Scalar one = Scalar::of(field, 1);
    EndOperad end_x = end_operad(x, max_arity);
    EndOperad end_y = end_operad(y, max_arity);
    const int dim_x = x.space()->dim(), dim_y = y.space()->dim();

    std::vector<std::vector<std::pair<int, Scalar>>> g_rows(static_cast<std::size_t>(dim_y));
    for (const auto& [key, v] : g.entries())
        g_rows[static_cast<std::size_t>(key.second)].push_back({key.first, v});

    std::vector<PullbackComponent> pull(static_cast<std::size_t>(max_arity) + 1);
    auto table = std::make_shared<OperadTable>();
    table->field = field;
    table->max_arity = max_arity;

    for (int n = 0; n <= max_arity; ++n) {
        const GradedSpace& ex = end_x.table->component(n);
        const GradedSpace& ey = end_y.table->component(n);
        int ax = ex.dim(), ay = ey.dim();
        PullbackComponent& pc = pull[static_cast<std::size_t>(n)];
        pc.ax = ax;
        TupleIndexer xt{dim_x, n};

        // constraint on an ambient column: g∘alpha - beta∘g^(tensor n) = 0 in Hom(X^n, Y)
        auto constraint_column = [&](int amb) {
            SparseVec rows;
            if (amb < ax) {
                int b = amb % dim_x;
                long long t = amb / dim_x;
                for (const auto& [brow, v] : g.column(b))
                    rows.emplace(static_cast<int>(t) * dim_y + brow, v);
            } else {
                int c = (amb - ax) % dim_y;
                long long s = (amb - ax) / dim_y;
                std::vector<int> sub = TupleIndexer{dim_y, n}.decode(s);
                // enumerate u with prod_l g_{s_l, u_l} != 0
                std::vector<std::size_t> pick(static_cast<std::size_t>(n), 0);
                bool any = true;
                for (int l = 0; l < n; ++l)
                    if (g_rows[static_cast<std::size_t>(sub[static_cast<std::size_t>(l)])].empty()) any = false;
                while (any) {
                    Scalar prod = one;
                    std::vector<int> u(static_cast<std::size_t>(n), 0);
                    for (int l = 0; l < n; ++l) {
                        const auto& row = g_rows[static_cast<std::size_t>(sub[static_cast<std::size_t>(l)])];
                        u[static_cast<std::size_t>(l)] = row[pick[static_cast<std::size_t>(l)]].first;
                        prod *= row[pick[static_cast<std::size_t>(l)]].second;
                    }
                    int row_idx = static_cast<int>(xt.encode(u)) * dim_y + c;
                    auto it = rows.find(row_idx);
                    if (it == rows.end()) rows.emplace(row_idx, -prod);
                    else { it->second -= prod; if (it->second.is_zero()) rows.erase(it); }
                    int l = n;
                    while (l > 0) {
                        --l;
                        const auto& row = g_rows[static_cast<std::size_t>(sub[static_cast<std::size_t>(l)])];
                        if (++pick[static_cast<std::size_t>(l)] < row.size()) break;
                        pick[static_cast<std::size_t>(l)] = 0;
                        if (l == 0) any = false;
                    }
                    if (n == 0) break;
                }
            }
            return rows;
        };

        // group ambient columns by degree
        std::map<int, std::vector<int>> by_degree;
        for (int k = 0; k < ax; ++k) by_degree[ex.deg(k)].push_back(k);
        for (int k = 0; k < ay; ++k) by_degree[ey.deg(k)].push_back(ax + k);

        std::vector<BasisElement> basis;
        int counter = 0;
        for (const auto& [deg, cols] : by_degree) {
            std::vector<SparseVec> cons;
            std::map<int, int> row_local;
            cons.reserve(cols.size());
            for (int amb : cols) {
                cons.push_back(constraint_column(amb));
                for (const auto& [r, v] : cons.back()) {
                    (void)v;
                    row_local.emplace(r, 0);
                }
            }
            int nrows = 0;
            for (auto& [r, loc] : row_local) loc = nrows++;
            DenseMatrix mat(field, nrows, static_cast<int>(cols.size()));
            for (std::size_t cidx = 0; cidx < cols.size(); ++cidx)
                for (const auto& [r, v] : cons[cidx])
                    mat.at(row_local[r], static_cast<int>(cidx)) = v;
            DenseMatrix reduced = mat;
            std::vector<int> pivots = rref(reduced);
            std::vector<bool> is_pivot(cols.size(), false);
            for (int p : pivots) is_pivot[static_cast<std::size_t>(p)] = true;
            for (std::size_t fcol = 0; fcol < cols.size(); ++fcol) {
                if (is_pivot[fcol]) continue;
                SparseVec vec;
                vec.emplace(cols[fcol], one);
                for (std::size_t krow = 0; krow < pivots.size(); ++krow) {
                    Scalar coeff = -reduced.at(static_cast<int>(krow), static_cast<int>(fcol));
                    if (!coeff.is_zero())
                        vec.emplace(cols[static_cast<std::size_t>(pivots[krow])], coeff);
                }
                pc.ambient_basis.push_back(std::move(vec));
                pc.free_index.push_back(cols[fcol]);
                pc.free_to_local.emplace(cols[fcol], static_cast<int>(pc.ambient_basis.size()) - 1);
                basis.push_back({"w" + std::to_string(counter++), deg});
            }
        }
        table->components.push_back(make_space(field, std::move(basis)));
    }

    // composition via the ambient endomorphism operads
    for (int p = 1; p <= max_arity; ++p)
        for (int q = 0; q <= max_arity && p + q - 1 <= max_arity; ++q)
            for (int i = 1; i <= p; ++i) {
                BilinearTable tab;
                const PullbackComponent& pp = pull[static_cast<std::size_t>(p)];
                const PullbackComponent& pq = pull[static_cast<std::size_t>(q)];
                const PullbackComponent& pn = pull[static_cast<std::size_t>(p + q - 1)];
                for (std::size_t uu = 0; uu < pp.ambient_basis.size(); ++uu)
                    for (std::size_t vv = 0; vv < pq.ambient_basis.size(); ++vv) {
                        SparseVec ua = pp.alpha_part(pp.ambient_basis[uu], false);
                        SparseVec ub = pp.beta_part(pp.ambient_basis[uu], false);
                        SparseVec va = pq.alpha_part(pq.ambient_basis[vv], false);
                        SparseVec vb = pq.beta_part(pq.ambient_basis[vv], false);
                        SparseVec ca = end_x.table->compose(p, i, q, ua, va);
                        SparseVec cb = end_y.table->compose(p, i, q, ub, vb);
                        SparseVec ambient = ca;
                        for (const auto& [idx, v] : cb) ambient.emplace(idx + pn.ax, v);
                        SparseVec coords = pn.coordinatize(ambient);
                        if (!coords.empty())
                            tab[{static_cast<int>(uu), static_cast<int>(vv)}] = std::move(coords);
                    }
                table->comp[{p, i, q}] = std::move(tab);
            }

    {
        SparseVec ambient = end_x.table->identity;
        for (const auto& [idx, v] : end_y.table->identity)
            ambient.emplace(idx + pull[1].ax, v);
        table->identity = pull[1].coordinatize(ambient);
    }

    std::vector<HomogMap> diff;
    for (int n = 0; n <= max_arity; ++n) {
        const PullbackComponent& pc = pull[static_cast<std::size_t>(n)];
        const SpacePtr& comp = table->components[static_cast<std::size_t>(n)];
        HomogMap dn(comp, comp, -1);
        const HomogMap& dx = (*end_x.table->differential)[static_cast<std::size_t>(n)];
        const HomogMap& dy = (*end_y.table->differential)[static_cast<std::size_t>(n)];
        for (std::size_t j = 0; j < pc.ambient_basis.size(); ++j) {
            SparseVec da = dx.apply(pc.alpha_part(pc.ambient_basis[j], false));
            SparseVec db = dy.apply(pc.beta_part(pc.ambient_basis[j], false));
            SparseVec ambient = da;
            for (const auto& [idx, v] : db) ambient.emplace(idx + pc.ax, v);
            for (const auto& [row, v] : pc.coordinatize(ambient))
                dn.add(row, static_cast<int>(j), v);
        }
        diff.push_back(std::move(dn));
    }
    table->differential = std::move(diff);

    MapOperad out{table, {}, {}, std::move(end_x), std::move(end_y)};
    out.to_source.source = table;
    out.to_source.target = out.end_x.table;
    out.to_target.source = table;
    out.to_target.target = out.end_y.table;
    for (int n = 0; n <= max_arity; ++n) {
        const PullbackComponent& pc = pull[static_cast<std::size_t>(n)];
        const SpacePtr& comp = table->components[static_cast<std::size_t>(n)];
        HomogMap d1(comp, out.end_x.table->components[static_cast<std::size_t>(n)], 0);
        HomogMap d0(comp, out.end_y.table->components[static_cast<std::size_t>(n)], 0);
        for (std::size_t j = 0; j < pc.ambient_basis.size(); ++j) {
            for (const auto& [idx, v] : pc.alpha_part(pc.ambient_basis[j], false))
                d1.add(idx, static_cast<int>(j), v);
            for (const auto& [idx, v] : pc.beta_part(pc.ambient_basis[j], false))
                d0.add(idx, static_cast<int>(j), v);
        }
        out.to_source.maps.push_back(std::move(d1));
        out.to_target.maps.push_back(std::move(d0));
    }
    return out;
}

AlgebraStructure algebra_from_product(const ChainComplex& a, const HomogMap& product,
                                      const std::optional<SparseVec>& unit_element,
                                      int max_arity) {
    const Field& field = a.space()->field();
    EndOperad end = end_operad(a, max_arity);
    OperadPtr operad = unit_element ? build_uass(field, max_arity) : build_ass(field, max_arity);

    PowerCache powers(a.space());
    if (product.degree() != 0 || !(*product.source() == *powers.power(2)) ||
        !(*product.target() == *a.space()))
        throw std::invalid_argument("algebra_from_product: product must be a degree-0 map A^2 -> A");

    OperadMorphism f;
    f.source = operad;
    f.target = end.table;
    for (int n = 0; n <= max_arity; ++n) {
        HomogMap fn(operad->components[static_cast<std::size_t>(n)],
                    end.table->components[static_cast<std::size_t>(n)], 0);
        SparseVec image;
        if (n == 0) {
            if (unit_element) image = *unit_element;  // End(0) basis = basis of A
        } else if (n == 1) {
            image = end.table->identity;
        } else {
            HomogMap iter = product;
            for (int k = 3; k <= n; ++k)
                iter = compose_maps(iter, insert_map(powers, product, 2, k - 1, k - 1));
            image = end.map_as_element(iter);
        }
        if (operad->components[static_cast<std::size_t>(n)]->dim() > 0)
            for (const auto& [idx, v] : image) fn.add(idx, 0, v);
        f.maps.push_back(std::move(fn));
    }
    return AlgebraStructure{operad, std::move(end), std::move(f)};
}

AlgebraMorphismReport check_algebra_morphism(const AlgebraStructure& a, const AlgebraStructure& b,
                                             const HomogMap& g, int max_arity) {
    AlgebraMorphismReport report;
    if (g.degree() != 0 || !(*g.source() == *a.end.complex.space()) ||
        !(*g.target() == *b.end.complex.space()))
        throw std::invalid_argument("check_algebra_morphism: g must be a degree-0 map A -> B");
    OperadReport ra = check_operad_morphism(a.morphism, max_arity);
    OperadReport rb = check_operad_morphism(b.morphism, max_arity);
    if (!ra.ok || !rb.ok)
        throw std::invalid_argument("check_algebra_morphism: structure maps fail their own axioms");

    if (!(compose_maps(g, a.end.complex.d()) == compose_maps(b.end.complex.d(), g))) {
        report.ok = false;
        report.failures.push_back("g is not a chain map");
        return report;
    }

    const int dim_a = a.end.dim(), dim_b = b.end.dim();
    for (int n = 0; n <= max_arity; ++n) {
        const GradedSpace& on = a.operad->component(n);
        TupleIndexer at{dim_a, n};
        for (int xi = 0; xi < on.dim(); ++xi) {
            HomogMap ma = a.end.element_as_map(n, a.morphism.maps[static_cast<std::size_t>(n)].column(xi));
            HomogMap mb = b.end.element_as_map(n, b.morphism.maps[static_cast<std::size_t>(n)].column(xi));
            for (long long u = 0; u < at.size(); ++u) {
                SparseVec lhs = g.apply(ma.column(static_cast<int>(u)));
                // column of g^(tensor n) at the tuple u (no signs: |g| = 0)
                std::vector<int> tup = at.decode(u);
                SparseVec gcol{{0, Scalar::of(g.source()->field(), 1)}};
                for (int l = 0; l < n; ++l) {
                    SparseVec next;
                    for (const auto& [idx, v] : gcol)
                        for (const auto& [row, w] : g.column(tup[static_cast<std::size_t>(l)]))
                            next.emplace(idx * dim_b + row, v * w);
                    gcol = std::move(next);
                }
                SparseVec rhs = mb.apply(gcol);
                if (lhs != rhs) {
                    report.ok = false;
                    if (report.failures.size() < 16) {
                        std::ostringstream os;
                        os << "arity " << n << ", element " << on.name(xi) << ", tuple "
                           << a.end.powers[static_cast<std::size_t>(n)]->name(static_cast<int>(u))
                           << ": g(x(...)) = " << vec_str(*b.end.complex.space(), lhs)
                           << " but x(g...) = " << vec_str(*b.end.complex.space(), rhs);
                        report.failures.push_back(os.str());
                    }
                }
            }
        }
    }
    return report;
}

OperadPtr free_operad_table(const GenSetPtr& gens, Field field, int max_arity, const Derivation* d) {
    auto table = std::make_shared<OperadTable>();
    table->field = field;
    table->max_arity = max_arity;

    std::vector<std::vector<PlanarTree>> trees;
    for (int n = 0; n <= max_arity; ++n) trees.push_back(enumerate_trees(*gens, n));

    for (int n = 0; n <= max_arity; ++n) {
        std::vector<BasisElement> basis;
        for (const PlanarTree& t : trees[static_cast<std::size_t>(n)])
            basis.push_back({t.str(*gens), t.degree()});
        table->components.push_back(make_space(field, std::move(basis)));
    }

    auto find_tree = [&](int n, const PlanarTree& t) {
        const auto& list = trees[static_cast<std::size_t>(n)];
        auto it = std::lower_bound(list.begin(), list.end(), t,
                                   [&](const PlanarTree& u, const PlanarTree& v) {
                                       return tree_compare(*gens, u, v) < 0;
                                   });
        if (it == list.end() || tree_compare(*gens, *it, t) != 0)
            throw std::logic_error("free_operad_table: tree not found");
        return static_cast<int>(it - list.begin());
    };

    auto poly_to_vec = [&](int n, const TreePoly& poly) {
        SparseVec out;
        for (const auto& [t, c] : poly.terms()) out.emplace(find_tree(n, t), c);
        return out;
    };

    Scalar one = Scalar::of(field, 1);
    for (int p = 1; p <= max_arity; ++p)
        for (int q = 0; q <= max_arity && p + q - 1 <= max_arity; ++q)
            for (int i = 1; i <= p; ++i) {
                BilinearTable tab;
                const auto& xs = trees[static_cast<std::size_t>(p)];
                const auto& ys = trees[static_cast<std::size_t>(q)];
                for (std::size_t xi = 0; xi < xs.size(); ++xi)
                    for (std::size_t yi = 0; yi < ys.size(); ++yi) {
                        TreePoly prod = graft(TreePoly::single(gens, field, xs[xi], one), i,
                                              TreePoly::single(gens, field, ys[yi], one));
                        SparseVec vec = poly_to_vec(p + q - 1, prod);
                        if (!vec.empty())
                            tab[{static_cast<int>(xi), static_cast<int>(yi)}] = std::move(vec);
                    }
                table->comp[{p, i, q}] = std::move(tab);
            }

    table->identity = SparseVec{{find_tree(1, PlanarTree::leaf()), one}};

    if (d) {
        std::vector<HomogMap> diff;
        for (int n = 0; n <= max_arity; ++n) {
            const SpacePtr& comp = table->components[static_cast<std::size_t>(n)];
            HomogMap dn(comp, comp, -1);
            const auto& list = trees[static_cast<std::size_t>(n)];
            for (std::size_t k = 0; k < list.size(); ++k)
                for (const auto& [row, v] : poly_to_vec(n, d->apply_tree(list[k])))
                    dn.add(row, static_cast<int>(k), v);
            diff.push_back(std::move(dn));
        }
        table->differential = std::move(diff);
    }
    return table;
}

}  // namespace opk

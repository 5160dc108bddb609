#include "opkern/tree.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "opkern/parallel.hpp"

namespace opk {

GenSet::GenSet(std::vector<Generator> gens) : gens_(std::move(gens)) {
    for (int i = 0; i < size(); ++i) {
        const Generator& g = gens_[static_cast<std::size_t>(i)];
        if (g.arity < 0)
            throw std::invalid_argument("GenSet: negative arity for '" + g.name + "'");
        if (!index_.emplace(g.name, i).second)
            throw std::invalid_argument("GenSet: duplicate generator name '" + g.name + "'");
    }
}

int GenSet::index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end())
        throw std::invalid_argument("GenSet: unknown generator '" + name + "'");
    return it->second;
}

PlanarTree PlanarTree::corolla(const GenSet& gens, int gen_index) {
    const Generator& g = gens.at(gen_index);
    std::vector<PlanarTree> leaves(static_cast<std::size_t>(g.arity), PlanarTree::leaf());
    return node(gens, gen_index, std::move(leaves));
}

PlanarTree PlanarTree::node(const GenSet& gens, int gen_index, std::vector<PlanarTree> children) {
    const Generator& g = gens.at(gen_index);
    if (static_cast<int>(children.size()) != g.arity)
        throw std::invalid_argument("PlanarTree: generator '" + g.name + "' needs " +
                                    std::to_string(g.arity) + " children, got " +
                                    std::to_string(children.size()));
    auto data = std::make_shared<Node>();
    data->gen = gen_index;
    data->arity = 0;
    data->degree = g.degree;
    data->nodes = 1;
    for (const PlanarTree& c : children) {
        data->arity += c.arity();
        data->degree += c.degree();
        data->nodes += c.node_count();
    }
    data->children = std::move(children);
    PlanarTree t;
    t.node_ = std::move(data);
    return t;
}

int PlanarTree::gen() const {
    if (!node_) throw std::logic_error("PlanarTree: leaf has no generator");
    return node_->gen;
}

const std::vector<PlanarTree>& PlanarTree::children() const {
    if (!node_) throw std::logic_error("PlanarTree: leaf has no children");
    return node_->children;
}

namespace {

void print_tree(const GenSet& gens, const PlanarTree& t, std::ostream& os, int& next_leaf) {
    if (t.is_leaf()) {
        os << "_" << next_leaf++;
        return;
    }
    os << "(" << gens.at(t.gen()).name;
    for (const PlanarTree& c : t.children()) {
        os << " ";
        print_tree(gens, c, os, next_leaf);
    }
    os << ")";
}

struct Parser {
    const GenSet& gens;
    const std::string& text;
    std::size_t pos = 0;
    int expected_leaf = 1;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    std::string token() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
               text[pos] != '(' && text[pos] != ')')
            ++pos;
        if (start == pos)
            throw std::invalid_argument("PlanarTree: parse error at offset " + std::to_string(pos));
        return text.substr(start, pos - start);
    }

    PlanarTree parse_tree() {
        skip_ws();
        if (pos >= text.size())
            throw std::invalid_argument("PlanarTree: unexpected end of input");
        if (text[pos] == '(') {
            ++pos;
            std::string name = token();
            int gen = gens.index_of(name);
            std::vector<PlanarTree> children;
            while (true) {
                skip_ws();
                if (pos >= text.size())
                    throw std::invalid_argument("PlanarTree: missing ')'");
                if (text[pos] == ')') {
                    ++pos;
                    break;
                }
                children.push_back(parse_tree());
            }
            return PlanarTree::node(gens, gen, std::move(children));
        }
        std::string tok = token();
        if (tok.size() < 2 || tok[0] != '_')
            throw std::invalid_argument("PlanarTree: expected leaf '_k', got '" + tok + "'");
        int k = std::stoi(tok.substr(1));
        if (k != expected_leaf)
            throw std::invalid_argument("PlanarTree: leaves must be numbered left to right; expected _" +
                                        std::to_string(expected_leaf) + ", got '" + tok + "'");
        ++expected_leaf;
        return PlanarTree::leaf();
    }
};

}  // namespace

std::string PlanarTree::str(const GenSet& gens) const {
    std::ostringstream os;
    int next_leaf = 1;
    print_tree(gens, *this, os, next_leaf);
    return os.str();
}

PlanarTree PlanarTree::parse(const GenSet& gens, const std::string& text) {
    Parser p{gens, text};
    PlanarTree t = p.parse_tree();
    p.skip_ws();
    if (p.pos != text.size())
        throw std::invalid_argument("PlanarTree: trailing input after tree");
    return t;
}

int tree_compare(const GenSet& gens, const PlanarTree& a, const PlanarTree& b) {
    if (a.arity() != b.arity()) return a.arity() < b.arity() ? -1 : 1;
    if (a.degree() != b.degree()) return a.degree() < b.degree() ? -1 : 1;
    if (a.is_leaf() || b.is_leaf()) {
        if (a.is_leaf() && b.is_leaf()) return 0;
        return a.is_leaf() ? -1 : 1;
    }
    const std::string& na = gens.at(a.gen()).name;
    const std::string& nb = gens.at(b.gen()).name;
    if (na != nb) return na < nb ? -1 : 1;
    const auto& ca = a.children();
    const auto& cb = b.children();
    for (std::size_t k = 0; k < std::min(ca.size(), cb.size()); ++k) {
        int c = tree_compare(gens, ca[k], cb[k]);
        if (c != 0) return c;
    }
    if (ca.size() != cb.size()) return ca.size() < cb.size() ? -1 : 1;
    return 0;
}

TreePoly::TreePoly(GenSetPtr gens, Field field, int arity, int degree)
    : gens_(std::move(gens)), field_(field), arity_(arity), degree_(degree),
      terms_(TreeOrder{gens_}) {}

TreePoly TreePoly::zero(GenSetPtr gens, Field field, int arity, int degree) {
    return TreePoly(std::move(gens), field, arity, degree);
}

TreePoly TreePoly::single(GenSetPtr gens, Field field, const PlanarTree& tree, const Scalar& coeff) {
    TreePoly p(std::move(gens), field, tree.arity(), tree.degree());
    p.add_term(tree, coeff);
    return p;
}

void TreePoly::add_term(const PlanarTree& tree, const Scalar& coeff) {
    if (coeff.is_zero()) return;
    if (tree.arity() != arity_ || tree.degree() != degree_)
        throw std::invalid_argument("TreePoly: term of arity " + std::to_string(tree.arity()) +
                                    ", degree " + std::to_string(tree.degree()) +
                                    " in a polynomial of arity " + std::to_string(arity_) +
                                    ", degree " + std::to_string(degree_));
    auto it = terms_.find(tree);
    if (it == terms_.end()) {
        terms_.emplace(tree, coeff);
    } else {
        it->second += coeff;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

TreePoly TreePoly::operator+(const TreePoly& o) const {
    if (arity_ != o.arity_ || degree_ != o.degree_)
        throw std::invalid_argument("TreePoly: sum of incompatible arity/degree");
    TreePoly out = *this;
    for (const auto& [t, c] : o.terms_) out.add_term(t, c);
    return out;
}

TreePoly TreePoly::scaled(const Scalar& c) const {
    TreePoly out(gens_, field_, arity_, degree_);
    if (c.is_zero()) return out;
    for (const auto& [t, v] : terms_) out.add_term(t, v * c);
    return out;
}

bool TreePoly::operator==(const TreePoly& o) const {
    if (arity_ != o.arity_ || degree_ != o.degree_ || terms_.size() != o.terms_.size()) return false;
    auto it = terms_.begin(), jt = o.terms_.begin();
    for (; it != terms_.end(); ++it, ++jt) {
        if (tree_compare(*gens_, it->first, jt->first) != 0 || it->second != jt->second) return false;
    }
    return true;
}

std::string TreePoly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [t, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << c.str() << "*" << t.str(*gens_);
    }
    return os.str();
}

namespace {

/* Total degree of the generators at nodes strictly after leaf `target`
 * (1-based) in planar preorder. */
long long degree_after_leaf(const GenSet& gens, const PlanarTree& t, int target) {
    long long acc = 0;
    int seen = 0;
    bool found = false;
    auto walk = [&](auto&& self, const PlanarTree& u) -> void {
        if (u.is_leaf()) {
            ++seen;
            if (seen == target) found = true;
            return;
        }
        if (found) acc += gens.at(u.gen()).degree;
        for (const PlanarTree& c : u.children()) self(self, c);
    };
    walk(walk, t);
    if (!found) throw std::out_of_range("graft: leaf index out of range");
    return acc;
}

PlanarTree splice_leaf(const GenSet& gens, const PlanarTree& t, int& countdown, const PlanarTree& y) {
    if (t.is_leaf()) {
        --countdown;
        return countdown == 0 ? y : t;
    }
    std::vector<PlanarTree> children;
    children.reserve(t.children().size());
    for (const PlanarTree& c : t.children()) {
        if (countdown > 0)
            children.push_back(splice_leaf(gens, c, countdown, y));
        else
            children.push_back(c);
    }
    return PlanarTree::node(gens, t.gen(), std::move(children));
}

}  // namespace

TreePoly graft(const TreePoly& x, int position, const TreePoly& y) {
    if (position < 1 || position > x.arity())
        throw std::out_of_range("graft: position " + std::to_string(position) +
                                " out of range for arity " + std::to_string(x.arity()));
    if (x.field() != y.field())
        throw std::invalid_argument("graft: field mismatch");
    const GenSet& gens = *x.gens();
    TreePoly out = TreePoly::zero(x.gens(), x.field(), x.arity() + y.arity() - 1,
                                  x.degree() + y.degree());
    for (const auto& [tx, cx] : x.terms()) {
        long long after = degree_after_leaf(gens, tx, position);
        for (const auto& [ty, cy] : y.terms()) {
            int countdown = position;
            PlanarTree spliced = splice_leaf(gens, tx, countdown, ty);
            Scalar sgn = sign_scalar(x.field(), static_cast<long long>(ty.degree()) * after);
            out.add_term(spliced, cx * cy * sgn);
        }
    }
    return out;
}

Derivation::Derivation(GenSetPtr gens, Field field, std::vector<TreePoly> value_on_gens)
    : gens_(std::move(gens)), field_(field), values_(std::move(value_on_gens)) {
    if (static_cast<int>(values_.size()) != gens_->size())
        throw std::invalid_argument("Derivation: need one value per generator");
    for (int i = 0; i < gens_->size(); ++i) {
        const Generator& g = gens_->at(i);
        const TreePoly& v = values_[static_cast<std::size_t>(i)];
        if (v.arity() != g.arity || v.degree() != g.degree - 1)
            throw std::invalid_argument("Derivation: d(" + g.name + ") must have arity " +
                                        std::to_string(g.arity) + " and degree " +
                                        std::to_string(g.degree - 1));
    }
}

TreePoly Derivation::apply_tree(const PlanarTree& tree) const {
    if (tree.is_leaf())
        return TreePoly::zero(gens_, field_, 1, -1);
    const GenSet& gens = *gens_;
    // corolla: one node, d substitutes the generator directly
    bool corolla = true;
    for (const PlanarTree& c : tree.children())
        if (!c.is_leaf()) { corolla = false; break; }
    if (corolla)
        return values_[static_cast<std::size_t>(tree.gen())];
    // split off the rightmost non-leaf child Y; the remaining tree X grafts
    // it back with sign +1, so the Leibniz rule applies directly
    const auto& children = tree.children();
    int split = -1;
    for (int k = static_cast<int>(children.size()) - 1; k >= 0; --k) {
        if (!children[static_cast<std::size_t>(k)].is_leaf()) { split = k; break; }
    }
    int position = 1;
    for (int k = 0; k < split; ++k) position += children[static_cast<std::size_t>(k)].arity();
    std::vector<PlanarTree> pruned = children;
    PlanarTree y_tree = pruned[static_cast<std::size_t>(split)];
    pruned[static_cast<std::size_t>(split)] = PlanarTree::leaf();
    PlanarTree x_tree = PlanarTree::node(gens, tree.gen(), std::move(pruned));

    Scalar one = Scalar::of(field_, 1);
    TreePoly x_poly = TreePoly::single(gens_, field_, x_tree, one);
    TreePoly y_poly = TreePoly::single(gens_, field_, y_tree, one);
    TreePoly lhs = graft(apply_tree(x_tree), position, y_poly);
    TreePoly rhs = graft(x_poly, position, apply_tree(y_tree));
    return lhs + rhs.scaled(sign_scalar(field_, x_tree.degree()));
}

TreePoly Derivation::apply(const TreePoly& poly) const {
    TreePoly out = TreePoly::zero(gens_, field_, poly.arity(), poly.degree() - 1);
    for (const auto& [t, c] : poly.terms())
        out = out + apply_tree(t).scaled(c);
    return out;
}

DSquaredReport verify_d_squared(const Derivation& d, int max_arity, int workers) {
    const GenSet& gens = *d.gens();
    std::vector<int> targets;
    for (int i = 0; i < gens.size(); ++i)
        if (gens.at(i).arity <= max_arity) targets.push_back(i);

    auto run = [&](std::size_t begin, std::size_t end) {
        std::vector<DSquaredViolation> out;
        for (std::size_t k = begin; k < end; ++k) {
            int g = targets[k];
            TreePoly dd = d.apply(d.on_generator(g));
            if (!dd.is_zero())
                out.push_back({gens.at(g).name, dd.str()});
        }
        return out;
    };
    auto chunks = parallel_chunks<std::vector<DSquaredViolation>>(targets.size(), workers, run);

    DSquaredReport report;
    report.max_arity = max_arity;
    for (auto& chunk : chunks)
        for (auto& v : chunk) report.violations.push_back(std::move(v));
    report.ok = report.violations.empty();
    return report;
}

namespace {

void compositions(int total, int parts, std::vector<int>& current,
                  const std::function<void(const std::vector<int>&)>& emit) {
    if (parts == 0) {
        if (total == 0) emit(current);
        return;
    }
    for (int first = 1; first <= total - (parts - 1); ++first) {
        current.push_back(first);
        compositions(total - first, parts - 1, current, emit);
        current.pop_back();
    }
}

}  // namespace

std::vector<PlanarTree> enumerate_trees(const GenSet& gens, int arity) {
    for (const Generator& g : gens.all())
        if (g.arity < 2)
            throw std::invalid_argument("enumerate_trees: generator '" + g.name +
                                        "' has arity < 2; components are infinite-dimensional");
    std::vector<std::vector<PlanarTree>> memo(static_cast<std::size_t>(arity) + 1);
    for (int n = 1; n <= arity; ++n) {
        std::vector<PlanarTree>& out = memo[static_cast<std::size_t>(n)];
        if (n == 1) out.push_back(PlanarTree::leaf());
        for (int gi = 0; gi < gens.size(); ++gi) {
            int k = gens.at(gi).arity;
            if (k > n) continue;
            std::vector<int> current;
            compositions(n, k, current, [&](const std::vector<int>& split) {
                // all ways to pick child subtrees with the given arities
                std::vector<std::size_t> pick(split.size(), 0);
                while (true) {
                    std::vector<PlanarTree> children;
                    children.reserve(split.size());
                    for (std::size_t j = 0; j < split.size(); ++j)
                        children.push_back(memo[static_cast<std::size_t>(split[j])][pick[j]]);
                    out.push_back(PlanarTree::node(gens, gi, std::move(children)));
                    std::size_t j = split.size();
                    while (j > 0) {
                        --j;
                        if (++pick[j] < memo[static_cast<std::size_t>(split[j])].size()) break;
                        pick[j] = 0;
                        if (j == 0) return;
                    }
                    if (split.empty()) return;
                }
            });
        }
        std::sort(out.begin(), out.end(),
                  [&](const PlanarTree& a, const PlanarTree& b) { return tree_compare(gens, a, b) < 0; });
    }
    return memo[static_cast<std::size_t>(arity)];
}

}  // namespace opk

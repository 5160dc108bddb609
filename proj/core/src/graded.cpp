#include "opkern/graded.hpp"

#include <sstream>
#include <stdexcept>

namespace opk {

int koszul_sign(const std::vector<int>& degrees_left, const std::vector<int>& degrees_right) {
    long long sl = 0, sr = 0;
    for (int d : degrees_left) sl += d;
    for (int d : degrees_right) sr += d;
    return koszul_sign_sums(sl, sr);
}

GradedSpace::GradedSpace(Field field, std::vector<BasisElement> basis)
    : field_(field), basis_(std::move(basis)) {
    for (int i = 0; i < dim(); ++i) {
        auto [it, fresh] = index_.emplace(basis_[static_cast<std::size_t>(i)].name, i);
        if (!fresh)
            throw std::invalid_argument("GradedSpace: duplicate basis name '" + it->first + "'");
    }
}

std::optional<int> GradedSpace::index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

bool GradedSpace::operator==(const GradedSpace& o) const {
    if (field_ != o.field_ || basis_.size() != o.basis_.size()) return false;
    for (std::size_t i = 0; i < basis_.size(); ++i)
        if (basis_[i].name != o.basis_[i].name || basis_[i].deg != o.basis_[i].deg) return false;
    return true;
}

SpacePtr make_space(Field field, std::vector<BasisElement> basis) {
    return std::make_shared<GradedSpace>(field, std::move(basis));
}

SpacePtr tensor_space(const SpacePtr& a, const SpacePtr& b) {
    if (a->field() != b->field())
        throw std::invalid_argument("tensor_space: field mismatch");
    std::vector<BasisElement> basis;
    basis.reserve(static_cast<std::size_t>(a->dim()) * static_cast<std::size_t>(b->dim()));
    for (int i = 0; i < a->dim(); ++i)
        for (int j = 0; j < b->dim(); ++j)
            basis.push_back({a->name(i) + "⊗" + b->name(j), a->deg(i) + b->deg(j)});
    return make_space(a->field(), std::move(basis));
}

void vec_add_scaled(SparseVec& acc, const SparseVec& v, const Scalar& c) {
    if (c.is_zero()) return;
    for (const auto& [i, x] : v) {
        auto it = acc.find(i);
        if (it == acc.end()) {
            Scalar val = x * c;
            if (!val.is_zero()) acc.emplace(i, std::move(val));
        } else {
            it->second += x * c;
            if (it->second.is_zero()) acc.erase(it);
        }
    }
}

std::string vec_str(const GradedSpace& space, const SparseVec& v) {
    if (v.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [i, c] : v) {
        if (!first) os << " + ";
        first = false;
        os << c.str() << "*" << space.name(i);
    }
    return os.str();
}

HomogMap::HomogMap(SpacePtr source, SpacePtr target, int degree)
    : source_(std::move(source)), target_(std::move(target)), degree_(degree) {
    if (!source_ || !target_)
        throw std::invalid_argument("HomogMap: null space");
    if (source_->field() != target_->field())
        throw std::invalid_argument("HomogMap: field mismatch");
}

HomogMap HomogMap::identity(const SpacePtr& space) {
    HomogMap id(space, space, 0);
    Scalar one = Scalar::of(space->field(), 1);
    for (int i = 0; i < space->dim(); ++i) id.set(i, i, one);
    return id;
}

void HomogMap::add(int row, int col, const Scalar& value) {
    if (value.is_zero()) return;
    if (col < 0 || col >= source_->dim() || row < 0 || row >= target_->dim())
        throw std::out_of_range("HomogMap: entry out of range");
    if (target_->deg(row) != source_->deg(col) + degree_)
        throw std::invalid_argument("HomogMap: entry (" + target_->name(row) + "," + source_->name(col) +
                                    ") violates homogeneity for degree " + std::to_string(degree_));
    auto key = std::make_pair(col, row);
    auto it = entries_.find(key);
    if (it == entries_.end()) {
        entries_.emplace(key, value);
    } else {
        it->second += value;
        if (it->second.is_zero()) entries_.erase(it);
    }
}

void HomogMap::set(int row, int col, const Scalar& value) {
    auto key = std::make_pair(col, row);
    entries_.erase(key);
    add(row, col, value);
}

Scalar HomogMap::coeff(int row, int col) const {
    auto it = entries_.find({col, row});
    return it == entries_.end() ? Scalar::of(source_->field(), 0) : it->second;
}

SparseVec HomogMap::column(int col) const {
    SparseVec out;
    for (auto it = entries_.lower_bound({col, 0}); it != entries_.end() && it->first.first == col; ++it)
        out.emplace(it->first.second, it->second);
    return out;
}

SparseVec HomogMap::apply(const SparseVec& v) const {
    SparseVec out;
    for (const auto& [col, c] : v)
        vec_add_scaled(out, column(col), c);
    return out;
}

HomogMap HomogMap::operator+(const HomogMap& o) const {
    if (degree_ != o.degree_ || !(*source_ == *o.source_) || !(*target_ == *o.target_))
        throw std::invalid_argument("HomogMap: shape mismatch in sum");
    HomogMap out = *this;
    for (const auto& [key, v] : o.entries_) out.add(key.second, key.first, v);
    return out;
}

HomogMap HomogMap::operator-(const HomogMap& o) const {
    return *this + o.scaled(Scalar::of(source_->field(), -1));
}

HomogMap HomogMap::scaled(const Scalar& c) const {
    HomogMap out(source_, target_, degree_);
    if (c.is_zero()) return out;
    for (const auto& [key, v] : entries_) out.add(key.second, key.first, v * c);
    return out;
}

bool HomogMap::operator==(const HomogMap& o) const {
    return degree_ == o.degree_ && *source_ == *o.source_ && *target_ == *o.target_ && entries_ == o.entries_;
}

HomogMap compose_maps(const HomogMap& g, const HomogMap& f) {
    if (!(*f.target() == *g.source()))
        throw std::invalid_argument("compose_maps: target(f) != source(g)");
    HomogMap out(f.source(), g.target(), f.degree() + g.degree());
    for (const auto& [key, v] : f.entries()) {
        auto [col, mid] = key;
        for (const auto& [gr, gv] : g.column(mid))
            out.add(gr, col, gv * v);
    }
    return out;
}

HomogMap tensor_maps(const HomogMap& f, const HomogMap& g) {
    SpacePtr src = tensor_space(f.source(), g.source());
    SpacePtr dst = tensor_space(f.target(), g.target());
    HomogMap out(src, dst, f.degree() + g.degree());
    const Field& field = src->field();
    for (const auto& [fk, fv] : f.entries()) {
        auto [fcol, frow] = fk;
        long long a_deg = f.source()->deg(fcol);
        Scalar sgn = sign_scalar(field, static_cast<long long>(g.degree()) * a_deg);
        for (const auto& [gk, gv] : g.entries()) {
            auto [gcol, grow] = gk;
            out.add(frow * g.target()->dim() + grow, fcol * g.source()->dim() + gcol, fv * gv * sgn);
        }
    }
    return out;
}

long long TupleIndexer::size() const {
    long long s = 1;
    for (int k = 0; k < arity; ++k) s *= dim;
    return s;
}

std::vector<int> TupleIndexer::decode(long long index) const {
    std::vector<int> tuple(static_cast<std::size_t>(arity), 0);
    for (int k = arity - 1; k >= 0; --k) {
        tuple[static_cast<std::size_t>(k)] = static_cast<int>(index % dim);
        index /= dim;
    }
    return tuple;
}

long long TupleIndexer::encode(const std::vector<int>& tuple) const {
    long long index = 0;
    for (int t : tuple) index = index * dim + t;
    return index;
}

PowerCache::PowerCache(SpacePtr m) : m_(std::move(m)) {
    powers_.push_back(make_space(m_->field(), {{"1", 0}}));
    powers_.push_back(m_);
}

const SpacePtr& PowerCache::power(int n) {
    if (n < 0) throw std::invalid_argument("PowerCache: negative power");
    while (static_cast<int>(powers_.size()) <= n)
        powers_.push_back(tensor_space(powers_.back(), m_));
    return powers_[static_cast<std::size_t>(n)];
}

long long PowerCache::prefix_degree(const std::vector<int>& tuple, int count) const {
    long long s = 0;
    for (int k = 0; k < count; ++k) s += m_->deg(tuple[static_cast<std::size_t>(k)]);
    return s;
}

HomogMap insert_map(PowerCache& powers, const HomogMap& f, int arity_q, int slot, int outer_arity) {
    const int p = outer_arity;
    const int q = arity_q;
    if (slot < 1 || slot > p)
        throw std::out_of_range("insert_map: slot out of range");
    const int n = p + q - 1;
    const SpacePtr& src = powers.power(n);
    const SpacePtr& dst = powers.power(p);
    if (!(*f.source() == *powers.power(q)) || !(*f.target() == *powers.base()))
        throw std::invalid_argument("insert_map: f is not a map M^q -> M over the cache base");
    const Field& field = src->field();
    TupleIndexer in_idx = powers.indexer(n);
    TupleIndexer out_idx = powers.indexer(p);
    TupleIndexer f_idx = powers.indexer(q);
    HomogMap out(src, dst, f.degree());
    // one f-entry hits dim^(p-1) contexts: all choices of the untouched slots
    TupleIndexer ctx_idx{powers.base()->dim(), p - 1};
    for (const auto& [key, v] : f.entries()) {
        auto [fcol, frow] = key;
        std::vector<int> inner = f_idx.decode(fcol);
        for (long long c = 0; c < ctx_idx.size(); ++c) {
            std::vector<int> ctx = ctx_idx.decode(c);
            std::vector<int> col_tuple, row_tuple;
            col_tuple.reserve(static_cast<std::size_t>(n));
            row_tuple.reserve(static_cast<std::size_t>(p));
            for (int k = 0; k < slot - 1; ++k) {
                col_tuple.push_back(ctx[static_cast<std::size_t>(k)]);
                row_tuple.push_back(ctx[static_cast<std::size_t>(k)]);
            }
            for (int k = 0; k < q; ++k) col_tuple.push_back(inner[static_cast<std::size_t>(k)]);
            row_tuple.push_back(frow);
            for (int k = slot - 1; k < p - 1; ++k) {
                col_tuple.push_back(ctx[static_cast<std::size_t>(k)]);
                row_tuple.push_back(ctx[static_cast<std::size_t>(k)]);
            }
            long long prefix = powers.prefix_degree(col_tuple, slot - 1);
            Scalar sgn = sign_scalar(field, static_cast<long long>(f.degree()) * prefix);
            out.add(static_cast<int>(out_idx.encode(row_tuple)), static_cast<int>(in_idx.encode(col_tuple)), v * sgn);
        }
    }
    return out;
}

HomogMap compose_insert(PowerCache& powers, const HomogMap& outer, int outer_arity,
                        const HomogMap& inner, int inner_arity, int slot) {
    const SpacePtr& base = powers.base();
    if (!(*outer.target() == *base) || !(*inner.target() == *base))
        throw std::invalid_argument("compose_insert: maps must land in the cache base");
    const int p = outer_arity, q = inner_arity;
    if (!(*outer.source() == *powers.power(p)) || !(*inner.source() == *powers.power(q)))
        throw std::invalid_argument("compose_insert: sources must be the stated tensor powers");
    if (slot < 1 || slot > p)
        throw std::out_of_range("compose_insert: slot out of range");
    const int n = p + q - 1;
    const Field& field = base->field();
    TupleIndexer pt = powers.indexer(p);
    TupleIndexer qt = powers.indexer(q);
    TupleIndexer nt = powers.indexer(n);

    // group inner entries by output row
    std::vector<std::vector<std::pair<long long, Scalar>>> by_row(
        static_cast<std::size_t>(base->dim()));
    for (const auto& [key, v] : inner.entries())
        by_row[static_cast<std::size_t>(key.second)].push_back({key.first, v});

    HomogMap out(powers.power(n), base, outer.degree() + inner.degree());
    for (const auto& [key, ov] : outer.entries()) {
        auto [ocol, orow] = key;
        std::vector<int> t = pt.decode(ocol);
        int mid = t[static_cast<std::size_t>(slot - 1)];
        const auto& hits = by_row[static_cast<std::size_t>(mid)];
        if (hits.empty()) continue;
        long long prefix = powers.prefix_degree(t, slot - 1);
        Scalar sgn = sign_scalar(field, static_cast<long long>(inner.degree()) * prefix);
        for (const auto& [icol, iv] : hits) {
            std::vector<int> a = qt.decode(icol);
            std::vector<int> u;
            u.reserve(static_cast<std::size_t>(n));
            for (int l = 0; l < slot - 1; ++l) u.push_back(t[static_cast<std::size_t>(l)]);
            for (int l = 0; l < q; ++l) u.push_back(a[static_cast<std::size_t>(l)]);
            for (int l = slot; l < p; ++l) u.push_back(t[static_cast<std::size_t>(l)]);
            out.add(orow, static_cast<int>(nt.encode(u)), ov * iv * sgn);
        }
    }
    return out;
}

ChainComplex::ChainComplex(SpacePtr space, HomogMap d) : space_(std::move(space)), d_(std::move(d)) {
    if (!(*d_.source() == *space_) || !(*d_.target() == *space_))
        throw std::invalid_argument("ChainComplex: d must be an endomap of the space");
    if (d_.degree() != -1)
        throw std::invalid_argument("ChainComplex: differential must have degree -1");
    if (!compose_maps(d_, d_).is_zero())
        throw std::invalid_argument("ChainComplex: d∘d != 0");
}

ChainComplex ChainComplex::with_zero_d(SpacePtr space) {
    HomogMap d = HomogMap::zero(space, space, -1);
    return ChainComplex(std::move(space), std::move(d));
}

}  // namespace opk

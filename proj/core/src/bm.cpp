#include "opkern/bm.hpp"

#include <sstream>
#include <stdexcept>

#include "opkern/parallel.hpp"

namespace opk {

void GCPoly::add_term(const GcMonomial& sorted_mono, const Rational& coeff) {
    if (coeff.is_zero()) return;
    auto it = terms_.find(sorted_mono);
    if (it == terms_.end()) {
        terms_.emplace(sorted_mono, coeff);
    } else {
        it->second += coeff;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

GCPoly GCPoly::operator+(const GCPoly& o) const {
    GCPoly out = *this;
    for (const auto& [m, c] : o.terms_) out.add_term(m, c);
    return out;
}

GCPoly GCPoly::scaled(const Rational& c) const {
    GCPoly out;
    if (c.is_zero()) return out;
    for (const auto& [m, v] : terms_) out.add_term(m, v * c);
    return out;
}

std::string GCPoly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << c.str();
        for (int n : m.gens) os << "*x" << n;
    }
    return os.str();
}

BmAlgebra::BmAlgebra(int m, int r) : m_(m), r_(r) {
    if (r < 2) throw std::invalid_argument("BmAlgebra: truncation r must be >= 2");
    for (int n = 2; n <= r; ++n) {
        GCPoly dn;
        for (int p = 2; p <= n - 1; ++p) {
            int q = n + 1 - p;
            if (q < 2) continue;
            for (int i = 1; i <= p; ++i) {
                long long exponent = static_cast<long long>(q - 1) * i +
                                     (static_cast<long long>(p) + static_cast<long long>(m) * (i - 1)) *
                                         (q + 1) * m;
                Rational sign((exponent % 2 == 0) ? 1 : -1);
                // literal x_q x_p, then canonical sorting
                GCPoly term = mono_product({{q}}, {{p}});
                dn = dn + term.scaled(sign);
            }
        }
        d_gens_.push_back(std::move(dn));
    }
}

int BmAlgebra::gen_degree(int n) const {
    if (n < 2 || n > r_)
        throw std::out_of_range("BmAlgebra: x_" + std::to_string(n) + " outside truncation");
    return (n - 1) * (m_ + 1) - 1;
}

const GCPoly& BmAlgebra::d_gen(int n) const {
    if (n < 2 || n > r_)
        throw std::out_of_range("BmAlgebra: x_" + std::to_string(n) + " outside truncation");
    return d_gens_[static_cast<std::size_t>(n - 2)];
}

long long BmAlgebra::mono_degree(const GcMonomial& mono) const {
    long long acc = 0;
    for (int n : mono.gens) acc += gen_degree(n);
    return acc;
}

GCPoly BmAlgebra::mono_product(const GcMonomial& a, const GcMonomial& b) const {
    GCPoly out;
    // merge-sort b into a; a b-generator crossing a remaining odd a-generator
    // flips the sign when itself odd; an odd generator met twice kills the term
    std::vector<std::size_t> odd_suffix(a.gens.size() + 1, 0);
    for (std::size_t k = a.gens.size(); k-- > 0;)
        odd_suffix[k] = odd_suffix[k + 1] + (gen_is_odd(a.gens[k]) ? 1 : 0);

    GcMonomial merged;
    merged.gens.reserve(a.gens.size() + b.gens.size());
    long long parity = 0;
    std::size_t ia = 0, ib = 0;
    while (ia < a.gens.size() || ib < b.gens.size()) {
        bool take_a;
        if (ia >= a.gens.size()) take_a = false;
        else if (ib >= b.gens.size()) take_a = true;
        else take_a = a.gens[ia] <= b.gens[ib];
        if (take_a) {
            merged.gens.push_back(a.gens[ia++]);
        } else {
            int g = b.gens[ib++];
            if (gen_is_odd(g)) parity += static_cast<long long>(odd_suffix[ia]);
            merged.gens.push_back(g);
        }
    }
    for (std::size_t k = 0; k + 1 < merged.gens.size(); ++k)
        if (merged.gens[k] == merged.gens[k + 1] && gen_is_odd(merged.gens[k]))
            return out;  // odd square vanishes
    out.add_term(merged, Rational((parity % 2 == 0) ? 1 : -1));
    return out;
}

GCPoly BmAlgebra::poly_product(const GCPoly& a, const GCPoly& b) const {
    GCPoly out;
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms())
            out = out + mono_product(ma, mb).scaled(ca * cb);
    return out;
}

GCPoly BmAlgebra::d(const GCPoly& poly) const {
    GCPoly out;
    for (const auto& [mono, coeff] : poly.terms()) {
        long long prefix = 0;
        for (std::size_t j = 0; j < mono.gens.size(); ++j) {
            int n = mono.gens[j];
            GcMonomial left{std::vector<int>(mono.gens.begin(),
                                             mono.gens.begin() + static_cast<long>(j))};
            GcMonomial right{std::vector<int>(mono.gens.begin() + static_cast<long>(j) + 1,
                                              mono.gens.end())};
            GCPoly term = d_gen(n);
            GCPoly left_poly;
            left_poly.add_term(left, Rational(1));
            GCPoly right_poly;
            right_poly.add_term(right, Rational(1));
            GCPoly piece = poly_product(poly_product(left_poly, term), right_poly);
            Rational sign(((prefix % 2 + 2) % 2 == 0) ? 1 : -1);
            out = out + piece.scaled(sign * coeff);
            prefix += gen_degree(n);
        }
    }
    return out;
}

BmAlgebra build_bm(int m, int r) {
    return BmAlgebra(m, r);
}

BmReport certify_bm_d_squared(int m, int r, int workers) {
    BmAlgebra b(m, r);
    std::vector<int> gens;
    for (int n = 2; n <= r; ++n) gens.push_back(n);
    auto run = [&](std::size_t begin, std::size_t end) {
        std::vector<BmViolation> out;
        for (std::size_t k = begin; k < end; ++k) {
            int n = gens[k];
            GCPoly dd = b.d(b.d_gen(n));
            if (!dd.is_zero()) out.push_back({n, dd.str()});
        }
        return out;
    };
    auto chunks = parallel_chunks<std::vector<BmViolation>>(gens.size(), workers, run);
    BmReport report;
    report.m = m;
    report.r = r;
    for (auto& chunk : chunks)
        for (auto& v : chunk) report.violations.push_back(std::move(v));
    report.ok = report.violations.empty();
    return report;
}

LinearPartReport linear_part(const BmAlgebra& b) {
    LinearPartReport report;
    for (int n = 2; n <= b.r(); ++n) {
        report.generator_degrees.push_back({n, b.gen_degree(n)});
        for (const auto& [mono, coeff] : b.d_gen(n).terms()) {
            (void)coeff;
            if (mono.gens.size() < 2) report.induced_differential_zero = false;
        }
    }
    report.min_degree = report.generator_degrees.front().second;
    report.max_degree = report.generator_degrees.front().second;
    for (const auto& [n, deg] : report.generator_degrees) {
        (void)n;
        report.min_degree = std::min(report.min_degree, deg);
        report.max_degree = std::max(report.max_degree, deg);
    }
    report.degrees_unbounded_in_n = (b.m() != -1);
    report.degenerate_all_odd = (b.m() == -1);
    return report;
}

SparseVec Cdga::multiply(const SparseVec& a, const SparseVec& b) const {
    SparseVec out;
    for (const auto& [i, ci] : a)
        for (const auto& [j, cj] : b)
            vec_add_scaled(out, product[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                           ci * cj);
    return out;
}

std::vector<std::string> Cdga::validate() const {
    std::vector<std::string> problems;
    const GradedSpace& space = *complex.space();
    const Field& field = space.field();
    if (!field.is_rationals()) problems.push_back("target CDGA must be over Q");
    int dim = space.dim();
    if (static_cast<int>(product.size()) != dim)
        return {"product table has wrong shape"};
    Scalar one = Scalar::of(field, 1);
    for (int i = 0; i < dim; ++i) {
        if (static_cast<int>(product[static_cast<std::size_t>(i)].size()) != dim)
            return {"product table has wrong shape"};
        SparseVec ei{{i, one}};
        if (multiply(SparseVec{{unit_index, one}}, ei) != ei ||
            multiply(ei, SparseVec{{unit_index, one}}) != ei)
            problems.push_back("unit fails on " + space.name(i));
    }
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            for (const auto& [k, v] : product[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) {
                (void)v;
                if (space.deg(k) != space.deg(i) + space.deg(j)) {
                    problems.push_back("product not graded on (" + space.name(i) + "," + space.name(j) + ")");
                    break;
                }
            }
            SparseVec ij = product[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            SparseVec ji = product[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
            SparseVec signed_ji;
            vec_add_scaled(signed_ji, ji,
                           sign_scalar(field, static_cast<long long>(space.deg(i)) * space.deg(j)));
            if (ij != signed_ji)
                problems.push_back("commutativity fails on (" + space.name(i) + "," + space.name(j) + ")");
            for (int k = 0; k < dim; ++k) {
                SparseVec ek{{k, one}};
                if (multiply(ij, ek) != multiply(SparseVec{{i, one}}, multiply(SparseVec{{j, one}}, ek))) {
                    problems.push_back("associativity fails on (" + space.name(i) + "," +
                                       space.name(j) + "," + space.name(k) + ")");
                }
            }
            // Leibniz on basis products
            SparseVec lhs = complex.d().apply(ij);
            SparseVec rhs = multiply(complex.d().apply(SparseVec{{i, one}}), SparseVec{{j, one}});
            vec_add_scaled(rhs, multiply(SparseVec{{i, one}}, complex.d().apply(SparseVec{{j, one}})),
                           sign_scalar(field, space.deg(i)));
            if (lhs != rhs)
                problems.push_back("Leibniz fails on (" + space.name(i) + "," + space.name(j) + ")");
        }
    return problems;
}

namespace {

SparseVec eval_assignment(const BmAlgebra& b, const Cdga& target, const BmAssignment& assignment,
                          const GCPoly& poly) {
    SparseVec acc;
    Scalar one = Scalar::of(target.complex.space()->field(), 1);
    for (const auto& [mono, coeff] : poly.terms()) {
        SparseVec prod{{target.unit_index, one}};
        for (int n : mono.gens) prod = target.multiply(prod, assignment.at(n));
        vec_add_scaled(acc, prod, Scalar::of(target.complex.space()->field(), coeff));
    }
    (void)b;
    return acc;
}

}  // namespace

DgPointReport check_dg_point(const BmAlgebra& b, const Cdga& target, const BmAssignment& assignment) {
    const GradedSpace& space = *target.complex.space();
    if (!space.field().is_rationals())
        throw std::invalid_argument("check_dg_point: target must be over Q");
    for (int n = 2; n <= b.r(); ++n) {
        auto it = assignment.find(n);
        if (it == assignment.end())
            throw std::invalid_argument("check_dg_point: missing assignment for x_" + std::to_string(n));
        for (const auto& [idx, v] : it->second) {
            (void)v;
            if (space.deg(idx) != b.gen_degree(n))
                throw std::invalid_argument("check_dg_point: assignment of x_" + std::to_string(n) +
                                            " is not homogeneous of degree " +
                                            std::to_string(b.gen_degree(n)));
        }
    }
    DgPointReport report;
    for (int n = 2; n <= b.r(); ++n) {
        SparseVec lhs = target.complex.d().apply(assignment.at(n));
        SparseVec rhs = eval_assignment(b, target, assignment, b.d_gen(n));
        if (lhs != rhs) {
            report.ok = false;
            report.failing_generators.push_back(n);
        }
    }
    return report;
}

AInfStructure suspension_structure(const Cdga& target, int m, const BmAssignment& assignment, int r) {
    const GradedSpace& a_space = *target.complex.space();
    const Field& field = a_space.field();
    BmAlgebra b(m, r);

    std::vector<BasisElement> basis;
    for (int i = 0; i < a_space.dim(); ++i)
        basis.push_back({"s" + a_space.name(i), a_space.deg(i) + m});
    SpacePtr m_space = make_space(field, std::move(basis));

    HomogMap d(m_space, m_space, -1);
    Scalar susp_sign = sign_scalar(field, m);  // d(s a) = (-1)^m s d(a)
    for (const auto& [key, v] : target.complex.d().entries())
        d.add(key.second, key.first, v * susp_sign);
    ChainComplex complex(m_space, std::move(d));

    PowerCache powers(m_space);
    AInfStructure s{complex, {}};
    for (int n = 2; n <= r; ++n) {
        const SparseVec& xn = assignment.at(n);
        TupleIndexer idx{a_space.dim(), n};
        HomogMap mn(powers.power(n), m_space, n - 2);
        for (long long t = 0; t < idx.size(); ++t) {
            std::vector<int> tuple = idx.decode(t);
            long long weighted = 0;
            for (int l = 0; l < n; ++l)
                weighted += static_cast<long long>(n - 1 - l) *
                            a_space.deg(tuple[static_cast<std::size_t>(l)]);
            Scalar sgn = sign_scalar(field, static_cast<long long>(m) * weighted);
            SparseVec prod = xn;
            for (int l = 0; l < n; ++l)
                prod = target.multiply(prod, SparseVec{{tuple[static_cast<std::size_t>(l)],
                                                        Scalar::of(field, 1)}});
            for (const auto& [row, v] : prod)
                mn.add(row, static_cast<int>(t), v * sgn);
        }
        s.ops.emplace(n, std::move(mn));
    }
    return s;
}

}  // namespace opk

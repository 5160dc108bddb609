#include "opkern/moduli.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include "opkern/linalg.hpp"
#include "opkern/parallel.hpp"

namespace opk {

SCTensor SCTensor::zeros(int n, Field field) {
    SCTensor t;
    t.n = n;
    t.field = field;
    t.c.assign(static_cast<std::size_t>(n) * n * n, Scalar::of(field, 0));
    return t;
}

std::string SCTensor::str() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (k) os << ",";
        os << c[k].str();
    }
    os << "]";
    return os.str();
}

std::string UnitVector::str() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (k) os << ",";
        os << a[k].str();
    }
    os << ")";
    return os.str();
}

void Polynomial::add_term(std::int64_t coeff, PolyMonomial mono) {
    if (coeff == 0) return;
    std::sort(mono.vars.begin(), mono.vars.end());
    auto it = std::lower_bound(terms.begin(), terms.end(), mono,
                               [](const auto& t, const PolyMonomial& m) { return t.second < m; });
    if (it != terms.end() && it->second == mono) {
        it->first += coeff;
        if (it->first == 0) terms.erase(it);
    } else {
        terms.insert(it, {coeff, std::move(mono)});
    }
}

Scalar Polynomial::eval(const Field& field, const std::vector<Scalar>& point) const {
    Scalar acc = Scalar::of(field, 0);
    for (const auto& [coeff, mono] : terms) {
        Scalar term = Scalar::of(field, coeff);
        for (int v : mono.vars) term *= point.at(static_cast<std::size_t>(v));
        acc += term;
    }
    return acc;
}

std::string Polynomial::str(const std::vector<std::string>& variables) const {
    if (terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [coeff, mono] : terms) {
        if (!first) os << " + ";
        first = false;
        os << coeff;
        for (int v : mono.vars) os << "*" << variables.at(static_cast<std::size_t>(v));
    }
    return os.str();
}

int sc_var_index(int n, int i, int j, int k) {
    return (i * n + j) * n + k;
}

namespace {

std::vector<std::string> sc_variables(int n) {
    std::vector<std::string> vars;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            for (int k = 1; k <= n; ++k)
                vars.push_back("c_" + std::to_string(i) + "_" + std::to_string(j) + "_" +
                               std::to_string(k));
    return vars;
}

}  // namespace

PolyIdeal assoc_ideal(int n) {
    if (n < 1) throw std::invalid_argument("assoc_ideal: n must be >= 1");
    PolyIdeal ideal;
    ideal.variables = sc_variables(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    Polynomial g;
                    for (int m = 0; m < n; ++m) {
                        g.add_term(+1, {{sc_var_index(n, i, j, m), sc_var_index(n, m, k, l)}});
                        g.add_term(-1, {{sc_var_index(n, i, m, l), sc_var_index(n, j, k, m)}});
                    }
                    ideal.generators.push_back(std::move(g));
                }
    return ideal;
}

PolyIdeal unital_ideal(int n) {
    PolyIdeal ideal = assoc_ideal(n);
    for (int i = 1; i <= n; ++i) ideal.variables.push_back("a_" + std::to_string(i));
    int a0 = n * n * n;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            Polynomial left;   // delta_jk - sum_i a_i c_ijk
            Polynomial right;  // delta_jk - sum_i c_jik a_i
            if (j == k) {
                left.add_term(1, {{}});
                right.add_term(1, {{}});
            }
            for (int i = 0; i < n; ++i) {
                left.add_term(-1, {{a0 + i, sc_var_index(n, i, j, k)}});
                right.add_term(-1, {{sc_var_index(n, j, i, k), a0 + i}});
            }
            ideal.generators.push_back(std::move(left));
            ideal.generators.push_back(std::move(right));
        }
    return ideal;
}

bool is_associative(const SCTensor& c) {
    const int n = c.n;
    Scalar zero = Scalar::of(c.field, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    Scalar acc = zero;
                    for (int m = 0; m < n; ++m)
                        acc += c.at(i, j, m) * c.at(m, k, l) - c.at(i, m, l) * c.at(j, k, m);
                    if (!acc.is_zero()) return false;
                }
    return true;
}

namespace {

/* Assembles the 2n^2 x n unit system: rows are the equations
 * sum_i a_i c_ijk = delta_jk and sum_i c_jik a_i = delta_jk. */
std::pair<DenseMatrix, std::vector<Scalar>> unit_system(const SCTensor& c) {
    const int n = c.n;
    DenseMatrix a(c.field, 2 * n * n, n);
    std::vector<Scalar> b(static_cast<std::size_t>(2 * n * n), Scalar::of(c.field, 0));
    Scalar one = Scalar::of(c.field, 1);
    int row = 0;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            for (int i = 0; i < n; ++i) a.at(row, i) = c.at(i, j, k);
            if (j == k) b[static_cast<std::size_t>(row)] = one;
            ++row;
        }
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            for (int i = 0; i < n; ++i) a.at(row, i) = c.at(j, i, k);
            if (j == k) b[static_cast<std::size_t>(row)] = one;
            ++row;
        }
    return {std::move(a), std::move(b)};
}

}  // namespace

std::optional<UnitVector> find_unit(const SCTensor& c) {
    auto [a, b] = unit_system(c);
    auto x = solve_linear(a, b);
    if (!x) return std::nullopt;
    return UnitVector{std::move(*x)};
}

UnitCertificate unit_uniqueness_certificate(const SCTensor& c) {
    if (!is_associative(c))
        throw std::invalid_argument("unit_uniqueness_certificate: tensor is not associative");
    UnitCertificate cert;
    cert.associative = true;
    auto [a, b] = unit_system(c);
    cert.solution_dim = solution_space_dim(a, b);
    if (cert.solution_dim >= 0) {
        auto x = solve_linear(a, b);
        cert.unit = UnitVector{std::move(*x)};
    }
    return cert;
}

EnumerationResult enumerate_points(int n, std::uint64_t q, bool unital, std::uint64_t budget,
                                   int workers) {
    if (n < 1) throw std::invalid_argument("enumerate_points: n must be >= 1");
    Field field = Field::prime_field(q);
    const int entries = n * n * n;
    // q^(n^3) candidates, overflow-checked against the budget
    std::uint64_t total = 1;
    for (int k = 0; k < entries; ++k) {
        if (total > budget / q)
            throw std::invalid_argument("enumerate_points: q^(n^3) exceeds the budget of " +
                                        std::to_string(budget) + " candidates");
        total *= q;
    }
    if (total > budget)
        throw std::invalid_argument("enumerate_points: q^(n^3) exceeds the budget");

    struct Partial {
        std::vector<EnumeratedPoint> points;
        std::uint64_t assoc = 0, unital = 0;
    };
    auto run = [&](std::size_t begin, std::size_t end) {
        Partial part;
        std::vector<std::uint64_t> digits(static_cast<std::size_t>(entries), 0);
        for (std::uint64_t idx = begin; idx < end; ++idx) {
            std::uint64_t rem = idx;
            for (int k = entries - 1; k >= 0; --k) {
                digits[static_cast<std::size_t>(k)] = rem % q;
                rem /= q;
            }
            SCTensor t;
            t.n = n;
            t.field = field;
            t.c.reserve(static_cast<std::size_t>(entries));
            for (int k = 0; k < entries; ++k)
                t.c.push_back(Scalar::of(field, static_cast<std::int64_t>(digits[static_cast<std::size_t>(k)])));
            if (!is_associative(t)) continue;
            ++part.assoc;
            std::optional<UnitVector> unit_vec = find_unit(t);
            if (unit_vec) ++part.unital;
            if (unital && !unit_vec) continue;
            part.points.push_back({std::move(t), std::move(unit_vec)});
        }
        return part;
    };
    auto chunks = parallel_chunks<Partial>(static_cast<std::size_t>(total), workers, run);

    EnumerationResult result;
    result.n = n;
    result.q = q;
    result.unital_filter = unital;
    result.scanned = total;
    for (auto& part : chunks) {
        result.associative_count += part.assoc;
        result.unital_count += part.unital;
        for (auto& p : part.points) result.points.push_back(std::move(p));
    }
    return result;
}

SCTensor gl_act(const SCTensor& c, const DenseMatrix& g, const DenseMatrix& h) {
    const int n = c.n;
    SCTensor out = SCTensor::zeros(n, c.field);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int u = 0; u < n; ++u) {
                // coefficient of e_u in (g^-1 e_i)(g^-1 e_j)
                Scalar acc = Scalar::of(c.field, 0);
                for (int s = 0; s < n; ++s)
                    for (int t = 0; t < n; ++t)
                        acc += h.at(s, i) * h.at(t, j) * c.at(s, t, u);
                for (int k = 0; k < n; ++k)
                    out.at(i, j, k) += g.at(k, u) * acc;
            }
    return out;
}

OrbitData gl_orbits(const std::vector<SCTensor>& points, int n, std::uint64_t q,
                    std::uint64_t budget) {
    Field field = Field::prime_field(q);
    std::uint64_t matrices = 1;
    for (int k = 0; k < n * n; ++k) {
        if (matrices > budget / q)
            throw std::invalid_argument("gl_orbits: q^(n^2) exceeds the budget");
        matrices *= q;
    }

    std::vector<std::pair<DenseMatrix, DenseMatrix>> group;  // (g, g^-1)
    for (std::uint64_t idx = 0; idx < matrices; ++idx) {
        DenseMatrix g(field, n, n);
        std::uint64_t rem = idx;
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                g.at(r, c) = Scalar::of(field, static_cast<std::int64_t>(rem % q));
                rem /= q;
            }
        auto inv = inverse(g);
        if (inv) group.push_back({std::move(g), std::move(*inv)});
    }

    std::map<std::string, std::size_t> index_of_point;
    for (std::size_t k = 0; k < points.size(); ++k) {
        if (points[k].n != n)
            throw std::invalid_argument("gl_orbits: rank mismatch");
        index_of_point.emplace(points[k].str(), k);
    }

    OrbitData data;
    data.group_order = group.size();
    std::vector<bool> seen(points.size(), false);
    for (std::size_t start = 0; start < points.size(); ++start) {
        if (seen[start]) continue;
        Orbit orbit;
        orbit.representative = start;
        std::uint64_t stabilizer = 0;
        std::map<std::size_t, bool> members;
        for (const auto& [g, h] : group) {
            SCTensor moved = gl_act(points[start], g, h);
            auto it = index_of_point.find(moved.str());
            if (it == index_of_point.end())
                throw std::invalid_argument(
                    "gl_orbits: the point set is not closed under the GL action");
            if (it->second == start) ++stabilizer;
            members.emplace(it->second, true);
        }
        for (const auto& [idx, flag] : members) {
            (void)flag;
            seen[idx] = true;
            orbit.members.push_back(idx);
        }
        orbit.stabilizer_order = stabilizer;
        data.orbits.push_back(std::move(orbit));
    }
    return data;
}

ChainComplex sc_complex(const SCTensor& c) {
    std::vector<BasisElement> basis;
    for (int i = 1; i <= c.n; ++i) basis.push_back({"e" + std::to_string(i), 0});
    return ChainComplex::with_zero_d(make_space(c.field, std::move(basis)));
}

HomogMap sc_product(const SCTensor& c, const ChainComplex& complex) {
    PowerCache powers(complex.space());
    HomogMap m(powers.power(2), complex.space(), 0);
    for (int i = 0; i < c.n; ++i)
        for (int j = 0; j < c.n; ++j)
            for (int k = 0; k < c.n; ++k)
                m.add(k, i * c.n + j, c.at(i, j, k));
    return m;
}

}  // namespace opk

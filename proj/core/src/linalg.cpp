#include "opkern/linalg.hpp"

#include <stdexcept>

namespace opk {

std::vector<int> rref(DenseMatrix& m) {
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
        int pivot = -1;
        for (int r = row; r < m.rows(); ++r) {
            if (!m.at(r, col).is_zero()) { pivot = r; break; }
        }
        if (pivot < 0) continue;
        if (pivot != row)
            for (int c = col; c < m.cols(); ++c) std::swap(m.at(row, c), m.at(pivot, c));
        Scalar inv = m.at(row, col).inverse();
        for (int c = col; c < m.cols(); ++c) m.at(row, c) *= inv;
        for (int r = 0; r < m.rows(); ++r) {
            if (r == row || m.at(r, col).is_zero()) continue;
            Scalar factor = m.at(r, col);
            for (int c = col; c < m.cols(); ++c)
                m.at(r, c) -= factor * m.at(row, c);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

int rank(DenseMatrix m) {
    return static_cast<int>(rref(m).size());
}

std::vector<std::vector<Scalar>> nullspace(const DenseMatrix& m) {
    DenseMatrix r = m;
    std::vector<int> pivots = rref(r);
    std::vector<bool> is_pivot(static_cast<std::size_t>(m.cols()), false);
    for (int p : pivots) is_pivot[static_cast<std::size_t>(p)] = true;
    Scalar zero = Scalar::of(m.field(), 0), one = Scalar::of(m.field(), 1);
    std::vector<std::vector<Scalar>> basis;
    for (int f = 0; f < m.cols(); ++f) {
        if (is_pivot[static_cast<std::size_t>(f)]) continue;
        std::vector<Scalar> v(static_cast<std::size_t>(m.cols()), zero);
        v[static_cast<std::size_t>(f)] = one;
        for (std::size_t k = 0; k < pivots.size(); ++k)
            v[static_cast<std::size_t>(pivots[k])] = -r.at(static_cast<int>(k), f);
        basis.push_back(std::move(v));
    }
    return basis;
}

namespace {

/* RREF of [A | b]; returns rref'd augmented matrix and pivots. */
std::pair<DenseMatrix, std::vector<int>> rref_augmented(const DenseMatrix& a,
                                                        const std::vector<Scalar>& b) {
    if (static_cast<int>(b.size()) != a.rows())
        throw std::invalid_argument("solve_linear: size mismatch");
    DenseMatrix aug(a.field(), a.rows(), a.cols() + 1);
    for (int r = 0; r < a.rows(); ++r) {
        for (int c = 0; c < a.cols(); ++c) aug.at(r, c) = a.at(r, c);
        aug.at(r, a.cols()) = b[static_cast<std::size_t>(r)];
    }
    std::vector<int> pivots = rref(aug);
    return {std::move(aug), std::move(pivots)};
}

}  // namespace

std::optional<std::vector<Scalar>> solve_linear(const DenseMatrix& a, const std::vector<Scalar>& b) {
    auto [aug, pivots] = rref_augmented(a, b);
    if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;  // inconsistent
    std::vector<Scalar> x(static_cast<std::size_t>(a.cols()), Scalar::of(a.field(), 0));
    for (std::size_t k = 0; k < pivots.size(); ++k)
        x[static_cast<std::size_t>(pivots[k])] = aug.at(static_cast<int>(k), a.cols());
    return x;
}

int solution_space_dim(const DenseMatrix& a, const std::vector<Scalar>& b) {
    auto [aug, pivots] = rref_augmented(a, b);
    if (!pivots.empty() && pivots.back() == a.cols()) return -1;
    return a.cols() - static_cast<int>(pivots.size());
}

std::optional<DenseMatrix> inverse(const DenseMatrix& m) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("inverse: matrix not square");
    int n = m.rows();
    DenseMatrix aug(m.field(), n, 2 * n);
    Scalar one = Scalar::of(m.field(), 1);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) aug.at(r, c) = m.at(r, c);
        aug.at(r, n + r) = one;
    }
    std::vector<int> pivots = rref(aug);
    if (static_cast<int>(pivots.size()) != n || pivots.back() != n - 1) return std::nullopt;
    DenseMatrix inv(m.field(), n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) inv.at(r, c) = aug.at(r, n + c);
    return inv;
}

}  // namespace opk

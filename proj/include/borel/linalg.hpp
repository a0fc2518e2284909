#pragma once

#include <borel/errors.hpp>
#include <borel/field.hpp>
#include <borel/matrix.hpp>

#include <cstddef>
#include <string>
#include <vector>

namespace borel {

template <ExactField F>
struct RrefResult {
    Matrix<F> reduced;
    std::size_t rank;
    std::vector<std::size_t> pivot_cols;
};

namespace detail {

// In-place Gauss-Jordan on m. The pivot in each column is the first nonzero
// entry at or below the current row; no magnitude pivoting is needed over an
// exact field. Zero rows end up at the bottom.
template <ExactField F>
std::vector<std::size_t> gauss_jordan(Matrix<F>& m, std::size_t stop_col)
{
    const F& f = m.field();
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < stop_col && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && f.is_zero(m(p, c)))
            ++p;
        if (p == m.rows())
            continue;
        m.swap_rows(r, p);
        if (!f.equal(m(r, c), f.one())) {
            const auto s = f.inv(m(r, c));
            for (std::size_t j = c; j < m.cols(); ++j)
                if (!f.is_zero(m(r, j)))
                    m(r, j) = f.mul(s, m(r, j));
        }
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || f.is_zero(m(i, c)))
                continue;
            const auto factor = m(i, c);
            for (std::size_t j = c; j < m.cols(); ++j)
                if (!f.is_zero(m(r, j)))
                    f.sub_mul(m(i, j), factor, m(r, j));
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

} // namespace detail

/// Reduced row-echelon form, rank and pivot columns of m.
template <ExactField F>
RrefResult<F> rref(Matrix<F> m)
{
    auto pivots = detail::gauss_jordan(m, m.cols());
    const std::size_t rank = pivots.size();
    return {std::move(m), rank, std::move(pivots)};
}

template <ExactField F>
std::size_t rank(const Matrix<F>& m)
{
    return rref(m).rank;
}

/// Basis of the right kernel {x : m x = 0}, one vector per row, in RREF.
template <ExactField F>
Matrix<F> kernel(const Matrix<F>& m)
{
    const F& f = m.field();
    const auto r = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : r.pivot_cols)
        is_pivot[c] = true;

    Matrix<F> basis(f, m.cols() - r.rank, m.cols());
    std::size_t k = 0;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free])
            continue;
        basis(k, free) = f.one();
        for (std::size_t i = 0; i < r.rank; ++i)
            basis(k, r.pivot_cols[i]) = f.neg(r.reduced(i, free));
        ++k;
    }
    return rref(std::move(basis)).reduced;
}

/// Forward substitution for L x = rhs with L lower triangular.
template <ExactField F>
Matrix<F> solve_lower_triangular(const Matrix<F>& lower, const Matrix<F>& rhs)
{
    require_same_field(lower.field(), rhs.field());
    const std::size_t n = lower.rows();
    if (!lower.is_square() || rhs.rows() != n || rhs.cols() != 1)
        throw DimensionMismatch("solve_lower_triangular expects a square system and a column right-hand side");
    if (!lower.is_lower_triangular())
        throw InvalidInput("solve_lower_triangular: matrix is not lower triangular");
    const F& f = lower.field();
    Matrix<F> x(f, n, 1);
    for (std::size_t i = 0; i < n; ++i) {
        if (f.is_zero(lower(i, i)))
            throw SingularSystem("zero diagonal entry at position " + std::to_string(i + 1));
        auto acc = rhs(i, 0);
        for (std::size_t j = 0; j < i; ++j)
            f.sub_mul(acc, lower(i, j), x(j, 0));
        x(i, 0) = f.div(acc, lower(i, i));
    }
    return x;
}

template <ExactField F>
Matrix<F> inverse(const Matrix<F>& m)
{
    if (!m.is_square())
        throw DimensionMismatch("inverse of a non-square matrix");
    const F& f = m.field();
    const std::size_t n = m.rows();
    Matrix<F> aug(f, n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            aug(i, j) = m(i, j);
        aug(i, n + i) = f.one();
    }
    const auto pivots = detail::gauss_jordan(aug, n);
    if (pivots.size() != n)
        throw NotInvertible("matrix is singular (rank " + std::to_string(pivots.size()) + " < " +
                            std::to_string(n) + ")");
    Matrix<F> inv(f, n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            inv(i, j) = aug(i, n + j);
    return inv;
}

template <ExactField F>
bool is_invertible(const Matrix<F>& m)
{
    return m.is_square() && rank(m) == m.rows();
}

} // namespace borel

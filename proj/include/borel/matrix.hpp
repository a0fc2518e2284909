#pragma once

#include <borel/errors.hpp>
#include <borel/field.hpp>

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace borel {

/// Dense row-major matrix over an exact field. Indices are 0-based.
template <ExactField F>
class Matrix {
public:
    using field_type = F;
    using value_type = typename F::value_type;

    Matrix(F field, std::size_t rows, std::size_t cols)
        : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, field_.zero())
    {
    }

    static Matrix zero(F field, std::size_t rows, std::size_t cols) { return Matrix(std::move(field), rows, cols); }

    static Matrix identity(F field, std::size_t n)
    {
        Matrix m(std::move(field), n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = m.field_.one();
        return m;
    }

    /// The elementary matrix e^{i,j} (0-based here).
    static Matrix unit(F field, std::size_t n, std::size_t i, std::size_t j)
    {
        Matrix m(std::move(field), n, n);
        m(i, j) = m.field_.one();
        return m;
    }

    static Matrix from_ints(F field, std::initializer_list<std::initializer_list<long long>> rows)
    {
        const std::size_t r = rows.size();
        const std::size_t c = r == 0 ? 0 : rows.begin()->size();
        Matrix m(std::move(field), r, c);
        std::size_t i = 0;
        for (const auto& row : rows) {
            if (row.size() != c)
                throw DimensionMismatch("ragged matrix literal");
            std::size_t j = 0;
            for (long long v : row)
                m(i, j++) = m.field_.from_int(v);
            ++i;
        }
        return m;
    }

    static Matrix from_rows(F field, const std::vector<std::vector<value_type>>& rows, std::size_t cols)
    {
        Matrix m(std::move(field), rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols)
                throw DimensionMismatch("row " + std::to_string(i) + " has length " +
                                        std::to_string(rows[i].size()) + ", expected " + std::to_string(cols));
            for (std::size_t j = 0; j < cols; ++j)
                m(i, j) = rows[i][j];
        }
        return m;
    }

    /// A single row vector.
    static Matrix row_vector(F field, std::span<const value_type> v)
    {
        Matrix m(std::move(field), 1, v.size());
        for (std::size_t j = 0; j < v.size(); ++j)
            m(0, j) = v[j];
        return m;
    }

    const F& field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    value_type& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const value_type& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<value_type> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const value_type> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    /// Row-major flattening, the coordinates used for gl_n inside k^{n^2}.
    const std::vector<value_type>& entries() const { return data_; }

    void swap_rows(std::size_t a, std::size_t b)
    {
        if (a == b)
            return;
        for (std::size_t j = 0; j < cols_; ++j)
            std::swap((*this)(a, j), (*this)(b, j));
    }

    Matrix transpose() const
    {
        Matrix t(field_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                t(j, i) = (*this)(i, j);
        return t;
    }

    bool is_zero() const
    {
        for (const auto& v : data_)
            if (!field_.is_zero(v))
                return false;
        return true;
    }

    bool is_upper_triangular() const
    {
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < i && j < cols_; ++j)
                if (!field_.is_zero((*this)(i, j)))
                    return false;
        return true;
    }

    bool is_lower_triangular() const
    {
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i + 1; j < cols_; ++j)
                if (!field_.is_zero((*this)(i, j)))
                    return false;
        return true;
    }

    bool has_unit_diagonal() const
    {
        for (std::size_t i = 0; i < rows_ && i < cols_; ++i)
            if (!field_.equal((*this)(i, i), field_.one()))
                return false;
        return true;
    }

    bool has_nonzero_diagonal() const
    {
        for (std::size_t i = 0; i < rows_ && i < cols_; ++i)
            if (field_.is_zero((*this)(i, i)))
                return false;
        return true;
    }

    friend bool operator==(const Matrix& a, const Matrix& b)
    {
        if (!(a.field_ == b.field_) || a.rows_ != b.rows_ || a.cols_ != b.cols_)
            return false;
        for (std::size_t k = 0; k < a.data_.size(); ++k)
            if (!a.field_.equal(a.data_[k], b.data_[k]))
                return false;
        return true;
    }

private:
    F field_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<value_type> data_;
};

template <ExactField F>
Matrix<F> operator*(const Matrix<F>& a, const Matrix<F>& b)
{
    require_same_field(a.field(), b.field());
    if (a.cols() != b.rows())
        throw DimensionMismatch("cannot multiply " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                " by " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    const F& f = a.field();
    Matrix<F> c(f, a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const auto& aik = a(i, k);
            if (f.is_zero(aik))
                continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                if (!f.is_zero(b(k, j)))
                    c(i, j) = f.add(c(i, j), f.mul(aik, b(k, j)));
        }
    return c;
}

template <ExactField F>
Matrix<F> operator+(const Matrix<F>& a, const Matrix<F>& b)
{
    require_same_field(a.field(), b.field());
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("cannot add matrices of different shapes");
    Matrix<F> c = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            c(i, j) = a.field().add(a(i, j), b(i, j));
    return c;
}

template <ExactField F>
Matrix<F> operator-(const Matrix<F>& a, const Matrix<F>& b)
{
    require_same_field(a.field(), b.field());
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("cannot subtract matrices of different shapes");
    Matrix<F> c = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            c(i, j) = a.field().sub(a(i, j), b(i, j));
    return c;
}

template <ExactField F>
Matrix<F> scale(const typename F::value_type& s, const Matrix<F>& a)
{
    Matrix<F> c = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            c(i, j) = a.field().mul(s, a(i, j));
    return c;
}

/// Reshapes a length n^2 row-major vector back into an n x n matrix.
template <ExactField F>
Matrix<F> unflatten(const F& field, std::span<const typename F::value_type> v, std::size_t n)
{
    if (v.size() != n * n)
        throw DimensionMismatch("vector of length " + std::to_string(v.size()) + " is not an n^2 flattening");
    Matrix<F> m(field, n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = v[i * n + j];
    return m;
}

} // namespace borel

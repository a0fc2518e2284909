#pragma once

#include <borel/errors.hpp>
#include <borel/field.hpp>
#include <borel/linalg.hpp>
#include <borel/matrix.hpp>

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace borel {

/*
 * Subspace of k^d stored by its reduced row-echelon basis.
 *
 * The echelon form is canonical, so equality of subspaces is entrywise
 * equality of bases. Borel subalgebras of gl_n are handled as subspaces of
 * k^{n^2} through the row-major flattening of matrices.
 */
template <ExactField F>
class Subspace {
public:
    using value_type = typename F::value_type;

    static Subspace zero(F field, std::size_t ambient) { return Subspace(Matrix<F>(std::move(field), 0, ambient), {}); }

    static Subspace full(F field, std::size_t ambient)
    {
        std::vector<std::size_t> pivots(ambient);
        for (std::size_t i = 0; i < ambient; ++i)
            pivots[i] = i;
        return Subspace(Matrix<F>::identity(std::move(field), ambient), std::move(pivots));
    }

    /// Span of the rows of `vectors`.
    static Subspace from_rows(const Matrix<F>& vectors)
    {
        auto r = rref(vectors);
        return from_rref(std::move(r));
    }

    /// Span of the given vectors, each of length `ambient`.
    static Subspace from_vectors(const F& field, std::size_t ambient, const std::vector<std::vector<value_type>>& vectors)
    {
        return from_rows(Matrix<F>::from_rows(field, vectors, ambient));
    }

    const F& field() const { return basis_.field(); }
    std::size_t ambient_dim() const { return basis_.cols(); }
    std::size_t dim() const { return basis_.rows(); }
    const Matrix<F>& basis() const { return basis_; }
    const std::vector<std::size_t>& pivot_cols() const { return pivots_; }

    /// v minus its projection along the echelon basis; zero iff v lies in the subspace.
    std::vector<value_type> residual(std::span<const value_type> v) const
    {
        check_length(v.size());
        const F& f = field();
        std::vector<value_type> r(v.begin(), v.end());
        for (std::size_t k = 0; k < pivots_.size(); ++k) {
            const auto coeff = r[pivots_[k]];
            if (f.is_zero(coeff))
                continue;
            const auto row = basis_.row(k);
            for (std::size_t j = pivots_[k]; j < r.size(); ++j)
                if (!f.is_zero(row[j]))
                    f.sub_mul(r[j], coeff, row[j]);
        }
        return r;
    }

    bool contains(std::span<const value_type> v) const
    {
        const auto r = residual(v);
        const F& f = field();
        return std::all_of(r.begin(), r.end(), [&](const value_type& x) { return f.is_zero(x); });
    }

    bool contains(const Subspace& other) const
    {
        require_compatible(other);
        for (std::size_t i = 0; i < other.dim(); ++i)
            if (!contains(other.basis_.row(i)))
                return false;
        return true;
    }

    friend bool operator==(const Subspace& a, const Subspace& b) { return a.basis_ == b.basis_; }

    void require_compatible(const Subspace& other) const
    {
        require_same_field(field(), other.field());
        if (ambient_dim() != other.ambient_dim())
            throw DimensionMismatch("subspaces of k^" + std::to_string(ambient_dim()) + " and k^" +
                                    std::to_string(other.ambient_dim()));
    }

private:
    Subspace(Matrix<F> basis, std::vector<std::size_t> pivots) : basis_(std::move(basis)), pivots_(std::move(pivots)) {}

    static Subspace from_rref(RrefResult<F> r)
    {
        Matrix<F> basis(r.reduced.field(), r.rank, r.reduced.cols());
        for (std::size_t i = 0; i < r.rank; ++i)
            for (std::size_t j = 0; j < r.reduced.cols(); ++j)
                basis(i, j) = r.reduced(i, j);
        return Subspace(std::move(basis), std::move(r.pivot_cols));
    }

    void check_length(std::size_t n) const
    {
        if (n != ambient_dim())
            throw DimensionMismatch("vector of length " + std::to_string(n) + " in k^" +
                                    std::to_string(ambient_dim()));
    }

    template <ExactField>
    friend class SpanAccumulator;

    Matrix<F> basis_;
    std::vector<std::size_t> pivots_;
};

/*
 * Incrementally maintained reduced echelon basis. add() reduces the incoming
 * vector against the current basis and, when a nonzero residual remains,
 * inserts it and clears its pivot column from the other rows.
 */
template <ExactField F>
class SpanAccumulator {
public:
    using value_type = typename F::value_type;

    SpanAccumulator(F field, std::size_t ambient) : field_(std::move(field)), ambient_(ambient) {}

    std::size_t dim() const { return rows_.size(); }
    std::size_t ambient_dim() const { return ambient_; }

    /// Returns true when v was not already in the span.
    bool add(std::span<const value_type> v)
    {
        if (v.size() != ambient_)
            throw DimensionMismatch("vector of length " + std::to_string(v.size()) + " in k^" +
                                    std::to_string(ambient_));
        const F& f = field_;
        std::vector<value_type> r(v.begin(), v.end());
        for (std::size_t k = 0; k < rows_.size(); ++k) {
            const auto coeff = r[pivots_[k]];
            if (f.is_zero(coeff))
                continue;
            for (std::size_t j = pivots_[k]; j < ambient_; ++j)
                if (!f.is_zero(rows_[k][j]))
                    f.sub_mul(r[j], coeff, rows_[k][j]);
        }
        std::size_t lead = 0;
        while (lead < ambient_ && f.is_zero(r[lead]))
            ++lead;
        if (lead == ambient_)
            return false;
        if (!f.equal(r[lead], f.one())) {
            const auto s = f.inv(r[lead]);
            for (std::size_t j = lead; j < ambient_; ++j)
                if (!f.is_zero(r[j]))
                    r[j] = f.mul(s, r[j]);
        }
        for (auto& row : rows_) {
            const auto coeff = row[lead];
            if (f.is_zero(coeff))
                continue;
            for (std::size_t j = lead; j < ambient_; ++j)
                if (!f.is_zero(r[j]))
                    f.sub_mul(row[j], coeff, r[j]);
        }
        const auto at = std::lower_bound(pivots_.begin(), pivots_.end(), lead) - pivots_.begin();
        pivots_.insert(pivots_.begin() + at, lead);
        rows_.insert(rows_.begin() + at, std::move(r));
        return true;
    }

    void add(const Subspace<F>& s)
    {
        require_same_field(field_, s.field());
        for (std::size_t i = 0; i < s.dim(); ++i)
            add(s.basis().row(i));
    }

    Subspace<F> result() const
    {
        Matrix<F> basis(field_, rows_.size(), ambient_);
        for (std::size_t i = 0; i < rows_.size(); ++i)
            for (std::size_t j = 0; j < ambient_; ++j)
                basis(i, j) = rows_[i][j];
        return Subspace<F>(std::move(basis), pivots_);
    }

private:
    F field_;
    std::size_t ambient_;
    std::vector<std::vector<value_type>> rows_;
    std::vector<std::size_t> pivots_;
};

/*
 * a ∩ b. Each basis vector v of a is reduced modulo b; the residual map is
 * linear and vanishes exactly on a ∩ b, so eliminating the residuals while
 * carrying the original vectors along leaves, in the rows whose residual
 * became zero, a basis of the intersection.
 */
template <ExactField F>
Subspace<F> intersect(const Subspace<F>& a, const Subspace<F>& b)
{
    a.require_compatible(b);
    const F& f = a.field();
    const std::size_t d = a.ambient_dim();
    if (a.dim() == 0 || b.dim() == 0)
        return Subspace<F>::zero(f, d);

    // [ residual | original ]
    Matrix<F> work(f, a.dim(), 2 * d);
    for (std::size_t i = 0; i < a.dim(); ++i) {
        const auto row = a.basis().row(i);
        const auto res = b.residual(row);
        for (std::size_t j = 0; j < d; ++j) {
            work(i, j) = res[j];
            work(i, d + j) = row[j];
        }
    }

    // forward elimination on the residual block only
    std::size_t r = 0;
    for (std::size_t c = 0; c < d && r < work.rows(); ++c) {
        std::size_t p = r;
        while (p < work.rows() && f.is_zero(work(p, c)))
            ++p;
        if (p == work.rows())
            continue;
        work.swap_rows(r, p);
        const auto pinv = f.inv(work(r, c));
        for (std::size_t i = r + 1; i < work.rows(); ++i) {
            if (f.is_zero(work(i, c)))
                continue;
            const auto factor = f.mul(work(i, c), pinv);
            for (std::size_t j = c; j < 2 * d; ++j)
                if (!f.is_zero(work(r, j)))
                    f.sub_mul(work(i, j), factor, work(r, j));
        }
        ++r;
    }

    Matrix<F> vectors(f, work.rows() - r, d);
    for (std::size_t i = r; i < work.rows(); ++i)
        for (std::size_t j = 0; j < d; ++j)
            vectors(i - r, j) = work(i, d + j);
    return Subspace<F>::from_rows(vectors);
}

template <ExactField F>
Subspace<F> sum(std::span<const Subspace<F>> parts, const F& field, std::size_t ambient)
{
    SpanAccumulator<F> acc(field, ambient);
    for (const auto& s : parts) {
        if (s.ambient_dim() != ambient)
            throw DimensionMismatch("subspace of k^" + std::to_string(s.ambient_dim()) + " in a sum over k^" +
                                    std::to_string(ambient));
        acc.add(s);
    }
    return acc.result();
}

template <ExactField F>
Subspace<F> sum(const Subspace<F>& a, const Subspace<F>& b)
{
    a.require_compatible(b);
    const Subspace<F> parts[] = {a, b};
    return sum<F>(parts, a.field(), a.ambient_dim());
}

} // namespace borel

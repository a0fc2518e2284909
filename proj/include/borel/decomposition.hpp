#pragma once

#include <borel/errors.hpp>
#include <borel/field.hpp>
#include <borel/linalg.hpp>
#include <borel/matrix.hpp>
#include <borel/permutation.hpp>
#include <borel/subspace.hpp>

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace borel {

/// g = u1 * P_s * u2 with u1, u2 invertible upper triangular.
template <ExactField F>
struct BruhatFactors {
    Matrix<F> u1;
    Permutation s;
    Matrix<F> u2;

    Matrix<F> recompose() const { return u1 * perm_matrix(s, u1.field()) * u2; }
};

enum class UlpNormalization { UnipotentUpper, UnipotentLower };

/// Largest n for the exhaustive unit-upper ULP search (2^n subsets).
inline constexpr std::size_t max_ulp_search_degree = 20;

/// m = u * l * P_p with u upper and l lower triangular; the factor named by
/// `normalization` has unit diagonal.
template <ExactField F>
struct UlpFactors {
    Matrix<F> u;
    Matrix<F> l;
    Permutation p;
    UlpNormalization normalization;

    Matrix<F> recompose() const { return u * l * perm_matrix(p, u.field()); }

    bool well_formed() const
    {
        if (!u.is_upper_triangular() || !l.is_lower_triangular())
            return false;
        return normalization == UlpNormalization::UnipotentUpper ? u.has_unit_diagonal() : l.has_unit_diagonal();
    }
};

/*
 * Bruhat cell label of g read off rank data only. With
 *   r(i, j) = rank of the submatrix of rows i..n and columns 1..j,
 * which is invariant under g -> b1 g b2 for upper triangular b1, b2, the
 * label w is characterised by w(j) = the unique i where
 *   r(i, j) - r(i+1, j) - r(i, j-1) + r(i+1, j-1) = 1.
 */
template <ExactField F>
Permutation bruhat_cell(const Matrix<F>& g)
{
    if (!g.is_square())
        throw InvalidInput("bruhat_cell expects a square matrix");
    const F& f = g.field();
    const std::size_t n = g.rows();
    // r[i][j], 0 <= i <= n (row i+1..n in 1-based terms), 0 <= j <= n
    std::vector<std::vector<std::size_t>> r(n + 1, std::vector<std::size_t>(n + 1, 0));
    for (std::size_t j = 1; j <= n; ++j) {
        SpanAccumulator<F> acc(f, j);
        for (std::size_t i = n; i-- > 0;) {
            acc.add(std::span(g.row(i).data(), j));
            r[i][j] = acc.dim();
        }
    }
    if (r[0][n] != n)
        throw NotInvertible("bruhat_cell: matrix is singular");

    std::vector<std::size_t> images(n);
    for (std::size_t j = 1; j <= n; ++j) {
        std::optional<std::size_t> found;
        for (std::size_t i = 0; i < n; ++i) {
            const long long d = static_cast<long long>(r[i][j]) - static_cast<long long>(r[i + 1][j]) -
                                static_cast<long long>(r[i][j - 1]) + static_cast<long long>(r[i + 1][j - 1]);
            if (d == 1) {
                if (found)
                    throw ContractViolation("bruhat_cell: rank data is not a permutation pattern");
                found = i + 1;
            }
        }
        if (!found)
            throw ContractViolation("bruhat_cell: rank data is not a permutation pattern");
        images[j - 1] = *found;
    }
    return Permutation::from_images(std::move(images));
}

/*
 * Bruhat decomposition by two-sided elimination.
 *
 * Columns are processed left to right. In column j the pivot is the lowest
 * nonzero entry among rows not yet used; entries in used rows below it are
 * cleared with right column operations (earlier pivot column into column j),
 * entries above it with left row operations (pivot row into higher rows).
 * Both are upper triangular, and their inverses are accumulated into u1 and
 * u2. What remains is P_s times a diagonal, which is folded into u1, so u2
 * is unipotent.
 */
template <ExactField F>
BruhatFactors<F> bruhat_decompose(const Matrix<F>& g)
{
    if (!g.is_square())
        throw InvalidInput("bruhat_decompose expects a square matrix");
    const F& f = g.field();
    const std::size_t n = g.rows();
    Matrix<F> m = g;
    Matrix<F> u1 = Matrix<F>::identity(f, n);
    Matrix<F> u2 = Matrix<F>::identity(f, n);
    std::vector<std::size_t> pivot_row(n);
    std::vector<std::optional<std::size_t>> column_of_row(n);

    for (std::size_t j = 0; j < n; ++j) {
        std::optional<std::size_t> pivot;
        for (std::size_t i = n; i-- > 0;)
            if (!column_of_row[i] && !f.is_zero(m(i, j))) {
                pivot = i;
                break;
            }
        if (!pivot)
            throw NotInvertible("bruhat_decompose: matrix is singular");
        const std::size_t i = *pivot;

        for (std::size_t r = i + 1; r < n; ++r) {
            if (f.is_zero(m(r, j)))
                continue;
            const std::size_t k = *column_of_row[r];
            const auto c = f.div(m(r, j), m(r, k));
            // column k holds only its pivot, so this clears m(r, j) alone
            m(r, j) = f.zero();
            for (std::size_t t = 0; t < n; ++t)
                if (!f.is_zero(u2(j, t)))
                    u2(k, t) = f.add(u2(k, t), f.mul(c, u2(j, t)));
        }

        const auto pinv = f.inv(m(i, j));
        for (std::size_t r = 0; r < i; ++r) {
            if (f.is_zero(m(r, j)))
                continue;
            const auto c = f.mul(m(r, j), pinv);
            for (std::size_t t = j; t < n; ++t)
                if (!f.is_zero(m(i, t)))
                    f.sub_mul(m(r, t), c, m(i, t));
            for (std::size_t t = 0; t < n; ++t)
                if (!f.is_zero(u1(t, r)))
                    u1(t, i) = f.add(u1(t, i), f.mul(c, u1(t, r)));
        }

        column_of_row[i] = j;
        pivot_row[j] = i;
    }

    std::vector<std::size_t> images(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t i = pivot_row[j];
        images[j] = i + 1;
        const auto d = m(i, j);
        for (std::size_t t = 0; t < n; ++t)
            u1(t, i) = f.mul(u1(t, i), d);
    }
    return {std::move(u1), Permutation::from_images(std::move(images)), std::move(u2)};
}

namespace detail {

/*
 * Exact search for m = u l P with u unit upper triangular.
 *
 * With S_t the set of columns placed at positions <= t, such a factorization
 * exists iff the chain S_0 ⊂ ... ⊂ S_{n-1} can be chosen so that, for every
 * t, row t of m lies in span(rows t+1.., e_c for c in S_t): row t of u^{-1} m
 * is then supported on S_t. Chains are explored by removing one column per
 * level, remembering subsets already known to be dead ends.
 */
template <ExactField F>
std::optional<UlpFactors<F>> ulp_upper_search(const Matrix<F>& m)
{
    const F& f = m.field();
    const std::size_t n = m.rows();
    if (n > max_ulp_search_degree)
        throw ResourceGuard("unipotent-upper ULP search limited to n <= " + std::to_string(max_ulp_search_degree));
    using Mask = std::uint32_t;

    auto admissible = [&](std::size_t t, Mask s) {
        SpanAccumulator<F> acc(f, n);
        for (std::size_t r = t + 1; r < n; ++r)
            acc.add(m.row(r));
        std::vector<typename F::value_type> e(n, f.zero());
        for (std::size_t c = 0; c < n; ++c)
            if (s >> c & 1) {
                e[c] = f.one();
                acc.add(std::span<const typename F::value_type>(e));
                e[c] = f.zero();
            }
        return acc.result().contains(m.row(t));
    };

    std::vector<std::size_t> removed(n); // removed[t]: column placed at position t
    std::vector<bool> dead(std::size_t{1} << n, false);
    // Chooses S_{t-1} inside S_t = s, for t down to 1.
    std::function<bool(std::size_t, Mask)> descend = [&](std::size_t t, Mask s) -> bool {
        if (!admissible(t, s))
            return false;
        if (t == 0) {
            removed[0] = static_cast<std::size_t>(std::countr_zero(s));
            return true;
        }
        for (std::size_t c = n; c-- > 0;) {
            if (!(s >> c & 1))
                continue;
            const Mask next = s & ~(Mask{1} << c);
            if (dead[next])
                continue;
            removed[t] = c;
            if (descend(t - 1, next))
                return true;
            dead[next] = true;
        }
        return false;
    };
    const Mask all = n == 0 ? 0 : static_cast<Mask>((std::uint64_t{1} << n) - 1);
    if (n == 0 || !descend(n - 1, all))
        return std::nullopt;

    // Row t of u^{-1}: e_t + sum_{r>t} y_r e_r, with y read off a kernel vector.
    Matrix<F> u_inv = Matrix<F>::identity(f, n);
    Mask s = all;
    for (std::size_t t = n; t-- > 0;) {
        std::vector<std::size_t> outside;
        for (std::size_t c = 0; c < n; ++c)
            if (!(s >> c & 1))
                outside.push_back(c);
        if (!outside.empty()) {
            Matrix<F> system(f, outside.size(), n - t);
            for (std::size_t k = 0; k < outside.size(); ++k)
                for (std::size_t r = t; r < n; ++r)
                    system(k, r - t) = m(r, outside[k]);
            const Matrix<F> z = kernel(system);
            if (z.rows() == 0 || f.is_zero(z(0, 0)))
                throw ContractViolation("ulp_decompose: admissible chain without a solution");
            const auto scale_by = f.inv(z(0, 0));
            for (std::size_t r = t + 1; r < n; ++r)
                u_inv(t, r) = f.mul(z(0, r - t), scale_by);
        }
        s &= ~(Mask{1} << removed[t]);
    }
    const Matrix<F> a = u_inv * m;
    Matrix<F> l(f, n, n);
    std::vector<std::size_t> images(n);
    for (std::size_t t = 0; t < n; ++t) {
        images[removed[t]] = t + 1;
        for (std::size_t r = 0; r < n; ++r)
            l(r, t) = a(r, removed[t]);
    }
    return UlpFactors<F>{inverse(u_inv), std::move(l), Permutation::from_images(std::move(images)),
                         UlpNormalization::UnipotentUpper};
}

} // namespace detail

/*
 * m = u l P_p for any square m, singular or not.
 *
 * Rows are processed bottom-up. For row r the pivot is the last not yet
 * placed column with a nonzero entry in row r; it is placed at position r
 * (p(c) = r) and row r is cleared elsewhere:
 *   UnipotentUpper - by adding row r into the rows above (u unit upper),
 *   UnipotentLower - by adding column c into the unplaced columns (l unit lower).
 * A row with no usable entry gets the last unplaced column and contributes
 * a zero diagonal entry to the non-normalised factor.
 *
 * The unit-lower form always exists and the elimination always finds it.
 * The unit-upper form exists for every invertible m but not for every
 * singular one ([[1,1],[0,0]] has none); when the elimination gets stuck an
 * exact search decides, and NoFactorization is thrown if there is none.
 */
template <ExactField F>
UlpFactors<F> ulp_decompose(const Matrix<F>& m, UlpNormalization normalization = UlpNormalization::UnipotentUpper)
{
    if (!m.is_square())
        throw InvalidInput("ulp_decompose expects a square matrix");
    const F& f = m.field();
    const std::size_t n = m.rows();
    Matrix<F> a = m;
    std::vector<std::size_t> position(n);
    std::vector<bool> placed(n, false);

    auto choose_column = [&](std::size_t r) {
        std::optional<std::size_t> last_unplaced;
        for (std::size_t c = n; c-- > 0;) {
            if (placed[c])
                continue;
            if (!last_unplaced)
                last_unplaced = c;
            if (!f.is_zero(a(r, c)))
                return std::pair{c, true};
        }
        return std::pair{*last_unplaced, false};
    };

    if (normalization == UlpNormalization::UnipotentUpper) {
        // invariant: m = u * a
        Matrix<F> u = Matrix<F>::identity(f, n);
        bool stuck = false;
        for (std::size_t r = n; r-- > 0 && !stuck;) {
            const auto [c, usable] = choose_column(r);
            placed[c] = true;
            position[c] = r;
            if (!usable) {
                // column c goes to position r; it must already vanish above r
                for (std::size_t above = 0; above < r; ++above)
                    stuck = stuck || !f.is_zero(a(above, c));
                continue;
            }
            const auto pinv = f.inv(a(r, c));
            for (std::size_t above = 0; above < r; ++above) {
                if (f.is_zero(a(above, c)))
                    continue;
                const auto coeff = f.mul(a(above, c), pinv);
                for (std::size_t t = 0; t < n; ++t)
                    if (!f.is_zero(a(r, t)))
                        f.sub_mul(a(above, t), coeff, a(r, t));
                for (std::size_t t = 0; t < n; ++t)
                    if (!f.is_zero(u(t, above)))
                        u(t, r) = f.add(u(t, r), f.mul(coeff, u(t, above)));
            }
        }
        if (stuck) {
            auto found = detail::ulp_upper_search(m);
            if (!found)
                throw NoFactorization("no factorization m = u l P with u unipotent upper triangular exists");
            return std::move(*found);
        }
        Matrix<F> l(f, n, n);
        for (std::size_t c = 0; c < n; ++c)
            for (std::size_t t = 0; t < n; ++t)
                l(t, position[c]) = a(t, c);
        std::vector<std::size_t> images(n);
        for (std::size_t c = 0; c < n; ++c)
            images[c] = position[c] + 1;
        return {std::move(u), std::move(l), Permutation::from_images(std::move(images)), normalization};
    }

    // invariant: m = a * h, columns of a and rows/cols of h in original order
    Matrix<F> h = Matrix<F>::identity(f, n);
    for (std::size_t r = n; r-- > 0;) {
        const auto [c, usable] = choose_column(r);
        placed[c] = true;
        position[c] = r;
        if (!usable)
            continue;
        const auto pinv = f.inv(a(r, c));
        for (std::size_t col = 0; col < n; ++col) {
            if (placed[col] || f.is_zero(a(r, col)))
                continue;
            const auto coeff = f.mul(a(r, col), pinv);
            for (std::size_t t = 0; t <= r; ++t)
                if (!f.is_zero(a(t, c)))
                    f.sub_mul(a(t, col), coeff, a(t, c));
            for (std::size_t t = 0; t < n; ++t)
                if (!f.is_zero(h(col, t)))
                    h(c, t) = f.add(h(c, t), f.mul(coeff, h(col, t)));
        }
    }
    Matrix<F> u(f, n, n);
    Matrix<F> l(f, n, n);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t t = 0; t < n; ++t) {
            u(t, position[c]) = a(t, c);
            l(position[c], position[t]) = h(c, t);
        }
    std::vector<std::size_t> images(n);
    for (std::size_t c = 0; c < n; ++c)
        images[c] = position[c] + 1;
    return {std::move(u), std::move(l), Permutation::from_images(std::move(images)), normalization};
}

} // namespace borel

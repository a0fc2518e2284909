#pragma once

#include <borel/envelope.hpp>
#include <borel/errors.hpp>
#include <borel/field.hpp>
#include <borel/linalg.hpp>
#include <borel/matrix.hpp>
#include <borel/permutation.hpp>
#include <borel/subspace.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace borel {

/*
 * Complete flags in k^n and the tangent-space model of the Grothendieck
 * simultaneous resolution.
 *
 * Conventions differ from envelope.hpp on purpose: the Borel attached to the
 * flag of g (first i columns of g span step i) is its stabilizer g b_0 g^{-1},
 * whereas envelope.hpp writes b_g = g^{-1} b_0 g. The two are related by
 *
 *     stabilizer_algebra(flag_from_matrix(g^{-1})) == borel_from_g(g).algebra()
 *
 * Tangent vectors of G/B at a flag are coordinatised by Lie(U^-), the
 * strictly lower triangular matrices, ordered row-major over i > j; that
 * chart space has dimension n(n-1)/2.
 */
template <ExactField F>
class Flag {
public:
    /// Step i is spanned by the first i columns of `adapted_basis`.
    explicit Flag(Matrix<F> adapted_basis) : basis_(std::move(adapted_basis))
    {
        if (!basis_.is_square())
            throw InvalidInput("flag basis must be square");
        if (!is_invertible(basis_))
            throw NotInvertible("flag basis is singular");
        const std::size_t n = basis_.rows();
        SpanAccumulator<F> acc(basis_.field(), n);
        steps_.push_back(acc.result());
        const Matrix<F> cols = basis_.transpose();
        for (std::size_t i = 0; i < n; ++i) {
            acc.add(cols.row(i));
            steps_.push_back(acc.result());
        }
    }

    std::size_t n() const { return basis_.rows(); }
    const F& field() const { return basis_.field(); }
    const Matrix<F>& adapted_basis() const { return basis_; }

    /// F_0 = 0, F_1, ..., F_n = k^n.
    const std::vector<Subspace<F>>& steps() const { return steps_; }
    const Subspace<F>& step(std::size_t i) const { return steps_.at(i); }

    friend bool operator==(const Flag& a, const Flag& b) { return a.steps_ == b.steps_; }

private:
    Matrix<F> basis_;
    std::vector<Subspace<F>> steps_;
};

template <ExactField F>
Flag<F> flag_from_matrix(const Matrix<F>& g)
{
    return Flag<F>(g);
}

template <ExactField F>
Flag<F> standard_flag(const F& field, std::size_t n)
{
    return Flag<F>(Matrix<F>::identity(field, n));
}

/*
 * {M : M F_i ⊆ F_i for all i}, by solving the linear conditions directly:
 * for the c-th adapted basis vector g_c, M g_c must lie in F_c, i.e.
 * A_c M g_c = 0 where the rows of A_c span the annihilator of F_c.
 */
template <ExactField F>
Subspace<F> stabilizer_algebra(const Flag<F>& flag)
{
    const F& f = flag.field();
    const std::size_t n = flag.n();
    const Matrix<F>& g = flag.adapted_basis();
    std::vector<std::vector<typename F::value_type>> equations;
    for (std::size_t c = 1; c <= n; ++c) {
        const Matrix<F> annihilator = kernel(flag.step(c).basis());
        for (std::size_t r = 0; r < annihilator.rows(); ++r) {
            // coefficient of M_{a,b} in (A M g_c)_r is A[r][a] * g[b][c]
            std::vector<typename F::value_type> eq(n * n, f.zero());
            for (std::size_t a = 0; a < n; ++a) {
                if (f.is_zero(annihilator(r, a)))
                    continue;
                for (std::size_t b = 0; b < n; ++b)
                    eq[a * n + b] = f.mul(annihilator(r, a), g(b, c - 1));
            }
            equations.push_back(std::move(eq));
        }
    }
    if (equations.empty())
        return Subspace<F>::full(f, n * n);
    return Subspace<F>::from_rows(kernel(Matrix<F>::from_rows(f, equations, n * n)));
}

/*
 * Relative position: the unique w with f2 in B_{f1} w(f1). With
 * r(i, j) = dim(F1_i ∩ F2_j), w(j) is the unique i where
 *   r(i,j) - r(i-1,j) - r(i,j-1) + r(i-1,j-1) = 1.
 */
template <ExactField F>
Permutation relative_position(const Flag<F>& f1, const Flag<F>& f2)
{
    require_same_field(f1.field(), f2.field());
    if (f1.n() != f2.n())
        throw DimensionMismatch("flags in k^" + std::to_string(f1.n()) + " and k^" + std::to_string(f2.n()));
    const std::size_t n = f1.n();
    std::vector<std::vector<std::size_t>> r(n + 1, std::vector<std::size_t>(n + 1, 0));
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = 1; j <= n; ++j)
            r[i][j] = intersect(f1.step(i), f2.step(j)).dim();

    std::vector<std::size_t> images(n);
    for (std::size_t j = 1; j <= n; ++j) {
        std::optional<std::size_t> found;
        for (std::size_t i = 1; i <= n; ++i)
            if (r[i][j] + r[i - 1][j - 1] == r[i - 1][j] + r[i][j - 1] + 1) {
                if (found)
                    throw ContractViolation("relative_position: rank matrix is not a permutation pattern");
                found = i;
            }
        if (!found)
            throw ContractViolation("relative_position: rank matrix is not a permutation pattern");
        images[j - 1] = *found;
    }
    return Permutation::from_images(std::move(images));
}

/// The n! coordinate flags flag_from_matrix(P_w), w in lexicographic order.
template <ExactField F>
std::vector<Flag<F>> torus_fixed_flags(std::size_t n, const F& field)
{
    std::vector<Flag<F>> out;
    for (const auto& w : enumerate_group(n))
        out.emplace_back(perm_matrix(w, field));
    return out;
}

inline std::size_t chart_dim(std::size_t n) { return n * (n - 1) / 2; }

/// Tangent space of g~ at (0, gB): stab ⊕ chart inside k^{n^2} ⊕ k^{n(n-1)/2}.
template <ExactField F>
struct TangentSpaceGtilde {
    Flag<F> base_flag;
    Subspace<F> space;
};

/// Tangent space of g~ x_g g~ at (gB, 0, hB): chart ⊕ (stab ∩ stab) ⊕ chart.
template <ExactField F>
struct TangentSpaceFiber {
    Flag<F> first;
    Flag<F> second;
    Subspace<F> space;
};

namespace detail {

// Appends `gl` (in k^{n^2}) at offset `gl_offset` and a full chart block of
// size m at `chart_offset`, as rows of a subspace of k^{total}.
template <ExactField F>
void place_block(std::vector<std::vector<typename F::value_type>>& rows, const Subspace<F>& gl, std::size_t offset,
                 std::size_t total)
{
    const F& f = gl.field();
    for (std::size_t r = 0; r < gl.dim(); ++r) {
        std::vector<typename F::value_type> v(total, f.zero());
        const auto src = gl.basis().row(r);
        for (std::size_t j = 0; j < src.size(); ++j)
            v[offset + j] = src[j];
        rows.push_back(std::move(v));
    }
}

template <ExactField F>
void place_chart(std::vector<std::vector<typename F::value_type>>& rows, const F& f, std::size_t offset, std::size_t m,
                 std::size_t total)
{
    for (std::size_t k = 0; k < m; ++k) {
        std::vector<typename F::value_type> v(total, f.zero());
        v[offset + k] = f.one();
        rows.push_back(std::move(v));
    }
}

} // namespace detail

template <ExactField F>
TangentSpaceGtilde<F> tangent_gtilde(const Flag<F>& flag)
{
    const F& f = flag.field();
    const std::size_t n = flag.n();
    const std::size_t m = chart_dim(n);
    const std::size_t total = n * n + m;
    std::vector<std::vector<typename F::value_type>> rows;
    detail::place_block(rows, stabilizer_algebra(flag), 0, total);
    detail::place_chart(rows, f, n * n, m, total);
    return {flag, Subspace<F>::from_vectors(f, total, rows)};
}

template <ExactField F>
TangentSpaceFiber<F> tangent_fiber(const Flag<F>& f1, const Flag<F>& f2)
{
    require_same_field(f1.field(), f2.field());
    if (f1.n() != f2.n())
        throw DimensionMismatch("flags in k^" + std::to_string(f1.n()) + " and k^" + std::to_string(f2.n()));
    const F& f = f1.field();
    const std::size_t n = f1.n();
    const std::size_t m = chart_dim(n);
    const std::size_t total = m + n * n + m;
    std::vector<std::vector<typename F::value_type>> rows;
    detail::place_chart(rows, f, 0, m, total);
    detail::place_block(rows, intersect(stabilizer_algebra(f1), stabilizer_algebra(f2)), m, total);
    detail::place_chart(rows, f, m + n * n, m, total);
    return {f1, f2, Subspace<F>::from_vectors(f, total, rows)};
}

/// Projection of a fiber tangent space onto its (gl_n, second chart) coordinates.
template <ExactField F>
Subspace<F> dpi2(const TangentSpaceFiber<F>& t)
{
    const F& f = t.space.field();
    const std::size_t n = t.first.n();
    const std::size_t m = chart_dim(n);
    const std::size_t total = n * n + m;
    Matrix<F> rows(f, t.space.dim(), total);
    for (std::size_t r = 0; r < t.space.dim(); ++r) {
        const auto src = t.space.basis().row(r);
        for (std::size_t j = 0; j < total; ++j)
            rows(r, j) = src[m + j];
    }
    return Subspace<F>::from_rows(rows);
}

/// Keeps the first n^2 coordinates (the gl_n part) of a subspace of k^{n^2 + m}.
template <ExactField F>
Subspace<F> gl_part(const Subspace<F>& s, std::size_t n)
{
    Matrix<F> rows(s.field(), s.dim(), n * n);
    for (std::size_t r = 0; r < s.dim(); ++r)
        for (std::size_t j = 0; j < n * n; ++j)
            rows(r, j) = s.basis()(r, j);
    return Subspace<F>::from_rows(rows);
}

struct LedgerEntry {
    Permutation w;
    std::size_t dim; // dim(stab(P_w flag) ∩ stab(h flag))
};

template <ExactField F>
struct TorusSumCheck {
    bool holds;
    std::vector<LedgerEntry> ledger;
    Subspace<F> sum;    // Σ_w dpi2(...)
    Subspace<F> target; // T_{(0, hB)} g~
};

/*
 * Sums dpi2 of the fiber tangent spaces over the n! torus-fixed flags and
 * compares with the tangent space of g~ at (0, hB).
 */
template <ExactField F>
TorusSumCheck<F> theorem26_details(const Matrix<F>& h)
{
    if (!h.is_square() || h.rows() == 0)
        throw InvalidInput("theorem26_check expects a nonempty square matrix");
    if (h.rows() > max_full_group_degree)
        throw ResourceGuard("theorem26_check limited to n <= " + std::to_string(max_full_group_degree));
    const F& f = h.field();
    const std::size_t n = h.rows();
    const Flag<F> fh = flag_from_matrix(h); // throws NotInvertible
    const auto target = tangent_gtilde(fh);
    const Subspace<F> stab_h = stabilizer_algebra(fh);

    SpanAccumulator<F> acc(f, n * n + chart_dim(n));
    std::vector<LedgerEntry> ledger;
    for (const auto& w : enumerate_group(n)) {
        const Flag<F> fw(perm_matrix(w, f));
        const auto fiber = tangent_fiber(fw, fh);
        ledger.push_back({w, fiber.space.dim() - 2 * chart_dim(n)});
        acc.add(dpi2(fiber));
    }
    Subspace<F> total = acc.result();
    const bool holds = total == target.space;
    return {holds, std::move(ledger), std::move(total), target.space};
}

template <ExactField F>
std::pair<bool, std::vector<LedgerEntry>> theorem26_check(const Matrix<F>& h)
{
    auto d = theorem26_details(h);
    return {d.holds, std::move(d.ledger)};
}

} // namespace borel

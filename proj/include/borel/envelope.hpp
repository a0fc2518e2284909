#pragma once

#include <borel/decomposition.hpp>
#include <borel/errors.hpp>
#include <borel/field.hpp>
#include <borel/linalg.hpp>
#include <borel/matrix.hpp>
#include <borel/permutation.hpp>
#include <borel/subspace.hpp>

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace borel {

/*
 * Borel subalgebras in the "b_g = g^{-1} b_0 g" convention, where b_0 is the
 * algebra of upper triangular matrices. For a permutation w, b_w means
 * b_{P_w}. Everything lives in k^{n^2} through the row-major flattening.
 */

inline constexpr std::size_t max_full_group_degree = 6;
inline constexpr std::size_t max_restricted_degree = 12;

template <ExactField F>
Subspace<F> standard_borel(const F& field, std::size_t n)
{
    Matrix<F> rows(field, n * (n + 1) / 2, n * n);
    std::size_t k = 0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b)
            rows(k++, a * n + b) = field.one();
    return Subspace<F>::from_rows(rows);
}

/// b_w = P_w^{-1} b_0 P_w, spanned by e^{w^{-1}(a), w^{-1}(b)} for a <= b.
template <ExactField F>
Subspace<F> weyl_borel(const Permutation& w, const F& field)
{
    const std::size_t n = w.size();
    const Permutation winv = w.inverse();
    Matrix<F> rows(field, n * (n + 1) / 2, n * n);
    std::size_t k = 0;
    for (std::size_t a = 1; a <= n; ++a)
        for (std::size_t b = a; b <= n; ++b)
            rows(k++, (winv(a) - 1) * n + (winv(b) - 1)) = field.one();
    return Subspace<F>::from_rows(rows);
}

/// The conjugate Borel b_g = g^{-1} b_0 g together with the matrix g.
template <ExactField F>
class BorelConjugate {
public:
    explicit BorelConjugate(Matrix<F> g) : g_(std::move(g)), g_inv_(inverse(g_)), algebra_(conjugate_standard()) {}

    std::size_t n() const { return g_.rows(); }
    const F& field() const { return g_.field(); }
    const Matrix<F>& g() const { return g_; }
    const Matrix<F>& g_inverse() const { return g_inv_; }
    const Subspace<F>& algebra() const { return algebra_; }

private:
    Subspace<F> conjugate_standard() const
    {
        const F& f = g_.field();
        const std::size_t n = g_.rows();
        // g^{-1} e^{a,b} g = (column a of g^{-1}) (row b of g)
        Matrix<F> rows(f, n * (n + 1) / 2, n * n);
        std::size_t k = 0;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a; b < n; ++b, ++k)
                for (std::size_t r = 0; r < n; ++r) {
                    if (f.is_zero(g_inv_(r, a)))
                        continue;
                    for (std::size_t c = 0; c < n; ++c)
                        rows(k, r * n + c) = f.mul(g_inv_(r, a), g_(b, c));
                }
        return Subspace<F>::from_rows(rows);
    }

    Matrix<F> g_;
    Matrix<F> g_inv_;
    Subspace<F> algebra_;
};

template <ExactField F>
BorelConjugate<F> borel_from_g(const Matrix<F>& g)
{
    if (!g.is_square())
        throw InvalidInput("borel_from_g expects a square matrix");
    return BorelConjugate<F>(g);
}

/// dim(b_{w1} ∩ b_{w2}), computed by subspace intersection over Q.
inline std::size_t borel_intersection_dim(const Permutation& w1, const Permutation& w2)
{
    if (w1.size() != w2.size())
        throw DimensionMismatch("permutations of different degrees");
    const RationalField q;
    return intersect(weyl_borel(w1, q), weyl_borel(w2, q)).dim();
}

/*
 * Devissage
 *
 * For u upper triangular invertible and i >= j the matrix
 *   a^{i,j} = e^{i,j} + sum_{l=j+1..i} x_l e^{i,l}
 * lies in b_{s u^{-1}} for s the transposition (i, j) once x solves the
 * lower triangular system
 *   sum_{l=j+1..b} u_{l,b} x_l = -u_{j,b},   b = j+1..i.
 * All indices in this section are 1-based.
 */
template <ExactField F>
struct DevissageWitness {
    std::size_t i;
    std::size_t j;
    std::vector<typename F::value_type> x; // x_{j+1} .. x_i
    Matrix<F> a;
    Permutation s;
};

namespace detail {

template <ExactField F>
void require_upper_invertible(const Matrix<F>& u)
{
    if (!u.is_square() || u.rows() == 0)
        throw InvalidInput("expected a nonempty square matrix");
    if (!u.is_upper_triangular())
        throw InvalidInput("expected an upper triangular matrix");
    if (!u.has_nonzero_diagonal())
        throw InvalidInput("upper triangular matrix is singular");
}

/// Whether P_s (u^{-1} a u) P_s^{-1} is upper triangular, i.e. a ∈ b_{s u^{-1}}.
template <ExactField F>
bool in_translated_borel(const Matrix<F>& a, const Matrix<F>& u, const Matrix<F>& u_inv, const Permutation& s)
{
    const F& f = a.field();
    const Matrix<F> ps = perm_matrix(s, f);
    const Matrix<F> conj = ps * (u_inv * a * u) * ps.transpose();
    return conj.is_upper_triangular();
}

/// Whether the flattened matrix v lies in b_w: e^{x,y} ∈ b_w iff w(x) <= w(y).
template <ExactField F>
bool in_weyl_borel(const F& f, std::span<const typename F::value_type> v, const Permutation& w)
{
    const std::size_t n = w.size();
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            if (!f.is_zero(v[x * n + y]) && w(x + 1) > w(y + 1))
                return false;
    return true;
}

template <ExactField F>
DevissageWitness<F> devissage(const Matrix<F>& u, const Matrix<F>& u_inv, std::size_t i, std::size_t j)
{
    const F& f = u.field();
    const std::size_t n = u.rows();
    if (j < 1 || i < j || i > n)
        throw InvalidInput("devissage index (" + std::to_string(i) + "," + std::to_string(j) +
                           ") must satisfy 1 <= j <= i <= " + std::to_string(n));
    const std::size_t size = i - j;
    Matrix<F> system(f, size, size);
    Matrix<F> rhs(f, size, 1);
    // row r <-> b = j+1+r, column c <-> l = j+1+c; entry u_{l,b}
    for (std::size_t r = 0; r < size; ++r) {
        for (std::size_t c = 0; c <= r; ++c)
            system(r, c) = u(j + c, j + r);
        rhs(r, 0) = f.neg(u(j - 1, j + r));
    }
    const Matrix<F> x = solve_lower_triangular(system, rhs);

    Matrix<F> a(f, n, n);
    a(i - 1, j - 1) = f.one();
    std::vector<typename F::value_type> xs;
    xs.reserve(size);
    for (std::size_t c = 0; c < size; ++c) {
        a(i - 1, j + c) = x(c, 0);
        xs.push_back(x(c, 0));
    }
    Permutation s = Permutation::transposition(n, i, j);

    if (!a.is_lower_triangular() || !in_translated_borel(a, u, u_inv, s))
        throw ContractViolation("devissage witness (" + std::to_string(i) + "," + std::to_string(j) +
                                ") failed its membership check");
    return {i, j, std::move(xs), std::move(a), std::move(s)};
}

} // namespace detail

template <ExactField F>
DevissageWitness<F> devissage_witness(const Matrix<F>& u, std::size_t i, std::size_t j)
{
    detail::require_upper_invertible(u);
    return detail::devissage(u, inverse(u), i, j);
}

/// The n(n+1)/2 witnesses in lexicographic (i, j) order; they form a basis
/// of the lower triangular algebra b_{w0}.
template <ExactField F>
std::vector<DevissageWitness<F>> witness_basis(const Matrix<F>& u)
{
    detail::require_upper_invertible(u);
    const Matrix<F> u_inv = inverse(u);
    const std::size_t n = u.rows();
    std::vector<DevissageWitness<F>> out;
    out.reserve(n * (n + 1) / 2);
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = 1; j <= i; ++j)
            out.push_back(detail::devissage(u, u_inv, i, j));
    return out;
}

/*
 * Envelope certificates
 */

enum class EnvelopeMode { Full, Restricted, Custom };

inline std::string to_string(EnvelopeMode mode)
{
    switch (mode) {
    case EnvelopeMode::Full: return "full";
    case EnvelopeMode::Restricted: return "restricted";
    case EnvelopeMode::Custom: return "custom";
    }
    return "?";
}

template <ExactField F>
struct EnvelopeEntry {
    std::vector<typename F::value_type> vector;
    Permutation w;
};

template <ExactField F>
struct EnvelopeCertificate {
    BorelConjugate<F> target;
    EnvelopeMode mode;
    std::vector<Permutation> weyl_set; // the allowed translates; empty in Full mode
    std::vector<EnvelopeEntry<F>> entries;
    bool spans;

    /// Distinct witness permutations, in order of first use.
    std::vector<Permutation> witness_set() const
    {
        std::vector<Permutation> out;
        for (const auto& e : entries)
            if (std::find(out.begin(), out.end(), e.w) == out.end())
                out.push_back(e.w);
        return out;
    }
};

/// The proof's data for g: g = u l p, u2 = w0^{-1} l w0, q = w0^{-1} p.
template <ExactField F>
struct EnvelopeReduction {
    UlpFactors<F> ulp;
    Matrix<F> u2;
    Permutation q;
};

template <ExactField F>
EnvelopeReduction<F> envelope_reduction(const Matrix<F>& g)
{
    const F& f = g.field();
    const std::size_t n = g.rows();
    auto ulp = ulp_decompose(g, UlpNormalization::UnipotentUpper);
    const Permutation w0 = longest_element(n);
    const Matrix<F> pw0 = perm_matrix(w0, f);
    Matrix<F> u2 = pw0.transpose() * ulp.l * pw0;
    Permutation q = compose(w0.inverse(), ulp.p);
    return {std::move(ulp), std::move(u2), std::move(q)};
}

/// The translate T_n q, with q from the ULP factors of g.
template <ExactField F>
std::vector<Permutation> restricted_translate(const Matrix<F>& g)
{
    if (!is_invertible(g))
        throw NotInvertible("restricted_translate: matrix is singular");
    const Permutation q = envelope_reduction(g).q;
    std::vector<Permutation> out;
    for (const auto& t : transposition_set(g.rows()))
        out.push_back(compose(t, q));
    return out;
}

/// Σ_{w in weyl_set} (b_g ∩ b_w), computed directly.
template <ExactField F>
Subspace<F> envelope_bruteforce(const Matrix<F>& g, const std::vector<Permutation>& weyl_set)
{
    if (!g.is_square())
        throw InvalidInput("envelope_bruteforce expects a square matrix");
    if (g.rows() > max_full_group_degree)
        throw ResourceGuard("envelope_bruteforce limited to n <= " + std::to_string(max_full_group_degree));
    const BorelConjugate<F> target = borel_from_g(g);
    const std::size_t n = g.rows();
    SpanAccumulator<F> acc(g.field(), n * n);
    for (const auto& w : weyl_set) {
        if (w.size() != n)
            throw DimensionMismatch("Weyl element of S_" + std::to_string(w.size()) + " used with n = " +
                                    std::to_string(n));
        acc.add(intersect(target.algebra(), weyl_borel(w, g.field())));
    }
    return acc.result();
}

template <ExactField F>
Subspace<F> envelope_bruteforce(const Matrix<F>& g)
{
    return envelope_bruteforce(g, enumerate_group(g.rows()));
}

/// What the certificate may use: all of S_n, the computed translate of T_n,
/// or a caller-supplied set.
struct WeylSelection {
    EnvelopeMode mode = EnvelopeMode::Full;
    std::vector<Permutation> custom;

    static WeylSelection full() { return {EnvelopeMode::Full, {}}; }
    static WeylSelection restricted() { return {EnvelopeMode::Restricted, {}}; }
    static WeylSelection of(std::vector<Permutation> set) { return {EnvelopeMode::Custom, std::move(set)}; }
};

/*
 * Builds the envelope certificate for b_g following the reduction: the
 * devissage witnesses for u2 lie in b_{w0} ∩ b_{s u2^{-1}}; conjugating by
 * u2 P_q carries them into b_g ∩ b_{s q}. With a caller-supplied set, the
 * witnesses whose translate is allowed are kept and the remaining span is
 * filled from the direct intersections b_g ∩ b_w, w in the set.
 */
template <ExactField F>
EnvelopeCertificate<F> envelope_certificate(const Matrix<F>& g, const WeylSelection& selection = WeylSelection::full())
{
    if (!g.is_square() || g.rows() == 0)
        throw InvalidInput("envelope_certificate expects a nonempty square matrix");
    const std::size_t n = g.rows();
    const F& f = g.field();
    if (selection.mode == EnvelopeMode::Full && n > max_full_group_degree)
        throw ResourceGuard("full-group certificates limited to n <= " + std::to_string(max_full_group_degree) +
                            "; use the restricted mode");
    if (n > max_restricted_degree)
        throw ResourceGuard("certificates limited to n <= " + std::to_string(max_restricted_degree));

    BorelConjugate<F> target = borel_from_g(g); // throws NotInvertible
    const auto reduction = envelope_reduction(g);

    std::vector<Permutation> allowed;
    if (selection.mode == EnvelopeMode::Restricted) {
        for (const auto& t : transposition_set(n))
            allowed.push_back(compose(t, reduction.q));
    } else if (selection.mode == EnvelopeMode::Custom) {
        for (const auto& w : selection.custom) {
            if (w.size() != n)
                throw DimensionMismatch("Weyl element of S_" + std::to_string(w.size()) + " used with n = " +
                                        std::to_string(n));
            if (std::find(allowed.begin(), allowed.end(), w) == allowed.end())
                allowed.push_back(w);
        }
    }
    auto is_allowed = [&](const Permutation& w) {
        return selection.mode == EnvelopeMode::Full || std::find(allowed.begin(), allowed.end(), w) != allowed.end();
    };

    // conjugation a -> c^{-1} a c with c = u2 P_q
    const Matrix<F> c = reduction.u2 * perm_matrix(reduction.q, f);
    const Matrix<F> c_inv = inverse(c);

    // Each entry is tagged with the first allowed w (S_n in lexicographic
    // order, or the allowed set in its given order) whose Borel contains it;
    // the devissage translate s q always qualifies.
    auto first_tag = [&](const std::vector<typename F::value_type>& v) -> Permutation {
        if (selection.mode != EnvelopeMode::Full) {
            for (const auto& w : allowed)
                if (detail::in_weyl_borel(f, v, w))
                    return w;
        } else {
            std::vector<std::size_t> images = Permutation(n).images();
            do {
                auto w = Permutation::from_images(images);
                if (detail::in_weyl_borel(f, v, w))
                    return w;
            } while (std::next_permutation(images.begin(), images.end()));
        }
        throw ContractViolation("certificate vector lies in no allowed Weyl translate");
    };

    SpanAccumulator<F> acc(f, n * n);
    std::vector<EnvelopeEntry<F>> entries;
    for (const auto& witness : witness_basis(reduction.u2)) {
        if (!is_allowed(compose(witness.s, reduction.q)))
            continue;
        const Matrix<F> conj = c_inv * witness.a * c;
        if (acc.add(conj.entries()))
            entries.push_back({conj.entries(), first_tag(conj.entries())});
    }

    if (selection.mode == EnvelopeMode::Custom && acc.dim() < target.algebra().dim()) {
        for (const auto& w : allowed) {
            const Subspace<F> piece = intersect(target.algebra(), weyl_borel(w, f));
            for (std::size_t r = 0; r < piece.dim(); ++r) {
                const auto row = piece.basis().row(r);
                if (acc.add(row)) {
                    std::vector<typename F::value_type> v(row.begin(), row.end());
                    Permutation tag = first_tag(v);
                    entries.push_back({std::move(v), std::move(tag)});
                }
            }
        }
    }

    for (const auto& e : entries)
        if (!target.algebra().contains(e.vector) || !weyl_borel(e.w, f).contains(e.vector))
            throw ContractViolation("certificate entry outside its claimed intersection (w = " + e.w.to_string() + ")");

    const bool spans = acc.result() == target.algebra();
    if (selection.mode != EnvelopeMode::Custom && !spans)
        throw ContractViolation("devissage witnesses failed to span b_g");
    return {std::move(target), selection.mode, std::move(allowed), std::move(entries), spans};
}

/// Independent re-check of a certificate: membership of every entry, the
/// allowed-set constraint, and the spans flag against the recomputed span.
template <ExactField F>
bool verify_certificate(const EnvelopeCertificate<F>& cert)
{
    const F& f = cert.target.field();
    const std::size_t n = cert.target.n();
    SpanAccumulator<F> acc(f, n * n);
    for (const auto& e : cert.entries) {
        if (e.w.size() != n || e.vector.size() != n * n)
            return false;
        if (cert.mode != EnvelopeMode::Full &&
            std::find(cert.weyl_set.begin(), cert.weyl_set.end(), e.w) == cert.weyl_set.end())
            return false;
        if (!cert.target.algebra().contains(e.vector) || !weyl_borel(e.w, f).contains(e.vector))
            return false;
        acc.add(e.vector);
    }
    return (acc.result() == cert.target.algebra()) == cert.spans;
}

} // namespace borel

#pragma once

// Brute-force reference computations used by the test suites and the verify
// harness. None of these share code paths with the routines they check.

#include <borel/field.hpp>
#include <borel/matrix.hpp>
#include <borel/permutation.hpp>

#include <cstddef>
#include <cstdint>
#include <vector>

namespace borel::oracle {

/// A reduced word for w as adjacent-transposition indices k (s_k = (k, k+1)),
/// so that w = s_{k_1} * ... * s_{k_l}.
inline std::vector<std::size_t> reduced_word(Permutation w)
{
    std::vector<std::size_t> word;
    const std::size_t n = w.size();
    for (;;) {
        std::size_t k = 1;
        while (k < n && w(k) < w(k + 1))
            ++k;
        if (k == n)
            break;
        // w = (w * s_k) * s_k with the first factor one shorter
        w = compose(w, Permutation::transposition(n, k, k + 1));
        word.insert(word.begin(), k);
    }
    return word;
}

inline Permutation word_product(std::size_t n, const std::vector<std::size_t>& word)
{
    Permutation p(n);
    for (auto k : word)
        p = compose(p, Permutation::transposition(n, k, k + 1));
    return p;
}

/// Subword property: u <= w iff some subword of a reduced word of w is a
/// reduced word of u.
inline bool subword_bruhat_leq(const Permutation& u, const Permutation& w)
{
    const auto word = reduced_word(w);
    const std::size_t target = u.length();
    const std::size_t l = word.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << l); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcountll(mask)) != target)
            continue;
        std::vector<std::size_t> sub;
        for (std::size_t b = 0; b < l; ++b)
            if (mask >> b & 1)
                sub.push_back(word[b]);
        if (word_product(u.size(), sub) == u)
            return true;
    }
    return false;
}

/// Leibniz expansion.
template <ExactField F>
typename F::value_type determinant(const Matrix<F>& m)
{
    const F& f = m.field();
    const std::size_t n = m.rows();
    auto acc = f.zero();
    for (const auto& w : enumerate_group(n)) {
        auto term = (w.length() % 2 == 0) ? f.one() : f.neg(f.one());
        for (std::size_t j = 1; j <= n; ++j)
            term = f.mul(term, m(w(j) - 1, j - 1));
        acc = f.add(acc, term);
    }
    return acc;
}

/// Largest r with a nonzero r x r minor.
template <ExactField F>
std::size_t rank_by_minors(const Matrix<F>& m)
{
    const std::size_t rows = m.rows(), cols = m.cols();
    std::size_t best = 0;
    for (std::uint64_t rmask = 1; rmask < (std::uint64_t{1} << rows); ++rmask)
        for (std::uint64_t cmask = 1; cmask < (std::uint64_t{1} << cols); ++cmask) {
            const auto r = static_cast<std::size_t>(__builtin_popcountll(rmask));
            if (r != static_cast<std::size_t>(__builtin_popcountll(cmask)) || r <= best)
                continue;
            Matrix<F> sub(m.field(), r, r);
            std::size_t a = 0;
            for (std::size_t i = 0; i < rows; ++i) {
                if (!(rmask >> i & 1))
                    continue;
                std::size_t b = 0;
                for (std::size_t j = 0; j < cols; ++j)
                    if (cmask >> j & 1)
                        sub(a, b++) = m(i, j);
                ++a;
            }
            if (!m.field().is_zero(determinant(sub)))
                best = r;
        }
    return best;
}

/// Every n x n matrix over F_p, optionally only the invertible ones.
inline std::vector<Matrix<PrimeField>> enumerate_matrices(const PrimeField& f, std::size_t n, bool invertible_only)
{
    const std::uint64_t p = f.modulus();
    std::uint64_t total = 1;
    for (std::size_t k = 0; k < n * n; ++k)
        total *= p;
    std::vector<Matrix<PrimeField>> out;
    for (std::uint64_t code = 0; code < total; ++code) {
        Matrix<PrimeField> m(f, n, n);
        std::uint64_t c = code;
        for (std::size_t k = 0; k < n * n; ++k, c /= p)
            m(k / n, k % n) = c % p;
        if (!invertible_only || !f.is_zero(determinant(m)))
            out.push_back(std::move(m));
    }
    return out;
}

/// Every invertible upper triangular n x n matrix over F_p.
inline std::vector<Matrix<PrimeField>> enumerate_upper_invertible(const PrimeField& f, std::size_t n)
{
    std::vector<Matrix<PrimeField>> out;
    for (auto& m : enumerate_matrices(f, n, true))
        if (m.is_upper_triangular())
            out.push_back(std::move(m));
    return out;
}

} // namespace borel::oracle

#pragma once

#include <borel/field.hpp>
#include <borel/linalg.hpp>
#include <borel/matrix.hpp>

#include <cstddef>
#include <cstdint>
#include <random>
#include <type_traits>

namespace borel {

/*
 * Seeded sampling for the property suites.
 *
 * The engine is std::mt19937_64, whose output sequence is fixed by the C++
 * standard; bounded integers are drawn by rejection rather than through
 * std::uniform_int_distribution (whose algorithm is implementation-defined),
 * so a seed reproduces the same matrices on every platform.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Independent stream for trial `trial` of stream `stream` under `seed`.
    static Rng for_trial(std::uint64_t seed, std::uint64_t stream, std::uint64_t trial)
    {
        return Rng(seed ^ (0x9E3779B97F4A7C15ull * (stream + 1)) ^ (0xBF58476D1CE4E5B9ull * (trial + 1)));
    }

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, bound).
    std::uint64_t below(std::uint64_t bound)
    {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

    /// Uniform in [lo, hi].
    long long between(long long lo, long long hi)
    {
        return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

private:
    std::mt19937_64 engine_;
};

/// Rational test entries are integers in [-bound, bound].
inline constexpr long long rational_entry_bound = 9;

template <ExactField F>
typename F::value_type random_scalar(const F& field, Rng& rng)
{
    if constexpr (std::is_same_v<F, RationalField>)
        return field.from_int(rng.between(-rational_entry_bound, rational_entry_bound));
    else
        return static_cast<typename F::value_type>(rng.below(field.modulus()));
}

template <ExactField F>
typename F::value_type random_nonzero_scalar(const F& field, Rng& rng)
{
    for (;;) {
        auto v = random_scalar(field, rng);
        if (!field.is_zero(v))
            return v;
    }
}

template <ExactField F>
Matrix<F> random_matrix(const F& field, std::size_t rows, std::size_t cols, Rng& rng)
{
    Matrix<F> m(field, rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            m(i, j) = random_scalar(field, rng);
    return m;
}

/// Rejection sampling: redraw until invertible.
template <ExactField F>
Matrix<F> random_invertible(const F& field, std::size_t n, Rng& rng)
{
    for (;;) {
        Matrix<F> m = random_matrix(field, n, n, rng);
        if (is_invertible(m))
            return m;
    }
}

template <ExactField F>
Matrix<F> random_upper_invertible(const F& field, std::size_t n, Rng& rng)
{
    Matrix<F> m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = random_nonzero_scalar(field, rng);
        for (std::size_t j = i + 1; j < n; ++j)
            m(i, j) = random_scalar(field, rng);
    }
    return m;
}

/// Product of random n x r and r x n factors, r < n, so rank < n.
template <ExactField F>
Matrix<F> random_singular(const F& field, std::size_t n, Rng& rng)
{
    if (n == 0)
        return Matrix<F>(field, 0, 0);
    const std::size_t r = static_cast<std::size_t>(rng.below(n));
    return random_matrix(field, n, r, rng) * random_matrix(field, r, n, rng);
}

} // namespace borel

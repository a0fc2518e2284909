#pragma once

#include <borel/borel.hpp>
#include <borel/oracles.hpp>

#include <gtest/gtest.h>

#include <initializer_list>

namespace borel::test {

inline const RationalField Q{};

using QMatrix = Matrix<RationalField>;
using PMatrix = Matrix<PrimeField>;

inline QMatrix qm(std::initializer_list<std::initializer_list<long long>> rows)
{
    return QMatrix::from_ints(Q, rows);
}

inline PMatrix pm(std::uint64_t p, std::initializer_list<std::initializer_list<long long>> rows)
{
    return PMatrix::from_ints(PrimeField(p), rows);
}

inline Permutation perm(std::initializer_list<std::size_t> images)
{
    return Permutation::from_images(std::vector<std::size_t>(images));
}

/// Flattened n x n matrices spanning a subspace of gl_n.
template <ExactField F>
Subspace<F> span_of(const F& f, std::size_t n, std::initializer_list<Matrix<F>> ms)
{
    SpanAccumulator<F> acc(f, n * n);
    for (const auto& m : ms)
        acc.add(m.entries());
    return acc.result();
}

/// Runs `body(field)` for Q and a spread of prime fields.
template <class Body>
void for_each_field(Body&& body)
{
    body(RationalField{});
    for (std::uint64_t p : {2u, 3u, 5u, 101u})
        body(PrimeField(p));
}

} // namespace borel::test

#include "support.hpp"

using namespace borel;
using namespace borel::test;

TEST(Field, RationalArithmeticIsExact)
{
    const auto a = Q.parse("2/3");
    const auto b = Q.parse("-1/6");
    EXPECT_EQ(Q.to_string(Q.add(a, b)), "1/2");
    EXPECT_EQ(Q.to_string(Q.mul(a, b)), "-1/9");
    EXPECT_EQ(Q.to_string(Q.inv(a)), "3/2");
    EXPECT_EQ(Q.to_string(Q.parse("4/-6")), "-2/3");
    EXPECT_THROW(Q.inv(Q.zero()), Error);
    EXPECT_THROW(Q.parse("1/0"), InvalidInput);
    EXPECT_THROW(Q.parse("x"), InvalidInput);
}

TEST(Field, PrimeFieldInverses)
{
    for (std::uint64_t p : {2u, 3u, 5u, 101u, 4294967291u}) {
        const PrimeField f(p);
        for (std::uint64_t a : {std::uint64_t{1}, std::uint64_t{2} % p, p - 1}) {
            if (f.is_zero(a))
                continue;
            EXPECT_TRUE(f.equal(f.mul(a, f.inv(a)), f.one())) << "p=" << p << " a=" << a;
        }
    }
}

TEST(Field, SpecParsingAndValidation)
{
    EXPECT_EQ(FieldSpec::parse("q"), FieldSpec::rational());
    EXPECT_EQ(FieldSpec::parse("fp:7"), FieldSpec::prime(7));
    EXPECT_EQ(FieldSpec::prime(101).to_string(), "fp:101");
    EXPECT_THROW(FieldSpec::parse("fp:4"), InvalidInput);
    EXPECT_THROW(FieldSpec::parse("fp:1"), InvalidInput);
    EXPECT_THROW(FieldSpec::parse("fp:4294967311"), InvalidInput); // prime but >= 2^32
    EXPECT_THROW(FieldSpec::parse("r"), InvalidInput);
    EXPECT_THROW(PrimeField(5).parse("5"), InvalidInput);
}

TEST(Field, MixingFieldsIsRejected)
{
    const auto a = pm(3, {{1, 0}, {0, 1}});
    const auto b = pm(5, {{1, 0}, {0, 1}});
    EXPECT_THROW(a * b, FieldMismatch);
    EXPECT_THROW(intersect(Subspace<PrimeField>::full(PrimeField(3), 2), Subspace<PrimeField>::full(PrimeField(5), 2)),
                 FieldMismatch);
}

TEST(Rref, Examples)
{
    const auto id = rref(QMatrix::identity(Q, 3));
    EXPECT_EQ(id.reduced, QMatrix::identity(Q, 3));
    EXPECT_EQ(id.rank, 3u);
    EXPECT_EQ(id.pivot_cols, (std::vector<std::size_t>{0, 1, 2}));

    const auto z = rref(QMatrix(Q, 2, 2));
    EXPECT_TRUE(z.reduced.is_zero());
    EXPECT_EQ(z.rank, 0u);
    EXPECT_TRUE(z.pivot_cols.empty());

    const auto r = rref(qm({{2, 4}, {1, 2}}));
    EXPECT_EQ(r.reduced, qm({{1, 2}, {0, 0}}));
    EXPECT_EQ(r.rank, 1u);
    EXPECT_EQ(r.pivot_cols, (std::vector<std::size_t>{0}));
    EXPECT_EQ(oracle::rank_by_minors(qm({{2, 4}, {1, 2}})), 1u);
}

TEST(Rref, RankAgreesWithMinorsOracle)
{
    for_each_field([](const auto& f) {
        for (std::size_t t = 0; t < 40; ++t) {
            Rng rng = Rng::for_trial(7, 1, t);
            const std::size_t rows = 1 + rng.below(4), cols = 1 + rng.below(4);
            const auto m = t % 2 ? random_matrix(f, rows, cols, rng) : random_singular(f, 4, rng);
            const auto r = rref(m);
            EXPECT_EQ(r.rank, oracle::rank_by_minors(m));
            EXPECT_EQ(rref(r.reduced).reduced, r.reduced); // idempotent
            EXPECT_EQ(r.pivot_cols.size(), r.rank);
        }
    });
}

TEST(Kernel, VectorsAreAnnihilatedAndDimensionIsComplementary)
{
    for_each_field([](const auto& f) {
        for (std::size_t t = 0; t < 30; ++t) {
            Rng rng = Rng::for_trial(7, 2, t);
            const auto m = random_matrix(f, 1 + rng.below(4), 1 + rng.below(5), rng);
            const auto k = kernel(m);
            EXPECT_EQ(k.rows() + rank(m), m.cols());
            if (k.rows() > 0)
                EXPECT_TRUE((m * k.transpose()).is_zero());
        }
    });
}

TEST(SolveLowerTriangular, Examples)
{
    EXPECT_EQ(solve_lower_triangular(qm({{1}}), qm({{-1}})), qm({{-1}}));
    const auto rhs = qm({{3}, {-7}, {5}});
    EXPECT_EQ(solve_lower_triangular(QMatrix::identity(Q, 3), rhs), rhs);
    const auto L = qm({{2, 0}, {1, 3}});
    const auto x = solve_lower_triangular(L, qm({{4}, {5}}));
    EXPECT_EQ(x, qm({{2}, {1}}));
    EXPECT_EQ(L * x, qm({{4}, {5}}));
}

TEST(SolveLowerTriangular, Errors)
{
    EXPECT_THROW(solve_lower_triangular(qm({{1, 0}, {1, 0}}), qm({{1}, {1}})), SingularSystem);
    EXPECT_THROW(solve_lower_triangular(qm({{1, 1}, {0, 1}}), qm({{1}, {1}})), InvalidInput);
    EXPECT_THROW(solve_lower_triangular(qm({{1, 0}, {0, 1}}), qm({{1}})), DimensionMismatch);
}

TEST(Inverse, Examples)
{
    EXPECT_EQ(inverse(QMatrix::identity(Q, 3)), QMatrix::identity(Q, 3));
    EXPECT_EQ(inverse(qm({{1, 1}, {0, 1}})), qm({{1, -1}, {0, 1}}));
    EXPECT_EQ(inverse(qm({{0, 1}, {1, 0}})), qm({{0, 1}, {1, 0}}));
    EXPECT_THROW(inverse(qm({{1, 2}, {2, 4}})), NotInvertible);
    EXPECT_THROW(inverse(qm({{1, 2}})), DimensionMismatch);
}

TEST(Inverse, RandomRoundTrip)
{
    for_each_field([](const auto& f) {
        for (std::size_t t = 0; t < 20; ++t) {
            Rng rng = Rng::for_trial(7, 3, t);
            const std::size_t n = 1 + rng.below(5);
            const auto g = random_invertible(f, n, rng);
            EXPECT_EQ(g * inverse(g), (Matrix<std::decay_t<decltype(f)>>::identity(f, n)));
            EXPECT_FALSE(f.is_zero(oracle::determinant(g)));
        }
    });
}

TEST(Subspace, FromRowsExamples)
{
    const auto plane = Subspace<RationalField>::from_rows(qm({{1, 0}, {0, 1}}));
    EXPECT_EQ(plane.dim(), 2u);
    EXPECT_EQ(plane, (Subspace<RationalField>::full(Q, 2)));

    const auto line = Subspace<RationalField>::from_rows(qm({{1, 1}, {2, 2}}));
    EXPECT_EQ(line.dim(), 1u);
    EXPECT_EQ(line.basis(), qm({{1, 1}}));

    const auto empty = Subspace<RationalField>::from_vectors(Q, 3, {});
    EXPECT_EQ(empty.dim(), 0u);
    EXPECT_EQ(empty, (Subspace<RationalField>::zero(Q, 3)));
}

TEST(Subspace, IntersectionExamples)
{
    const auto e1 = Subspace<RationalField>::from_rows(qm({{1, 0}}));
    const auto e2 = Subspace<RationalField>::from_rows(qm({{0, 1}}));
    EXPECT_EQ(intersect(e1, e1), e1);
    EXPECT_EQ(intersect(e1, e2).dim(), 0u);

    // upper and lower triangular 2x2 meet in the diagonal
    const auto diag = span_of(Q, 2, {qm({{1, 0}, {0, 0}}), qm({{0, 0}, {0, 1}})});
    EXPECT_EQ(intersect(standard_borel(Q, 2), weyl_borel(longest_element(2), Q)), diag);
}

TEST(Subspace, SumExamples)
{
    const auto e1 = Subspace<RationalField>::from_rows(qm({{1, 0}}));
    const auto e2 = Subspace<RationalField>::from_rows(qm({{0, 1}}));
    const std::vector<Subspace<RationalField>> one{e1};
    EXPECT_EQ(sum(std::span<const Subspace<RationalField>>(one), Q, 2), e1);
    EXPECT_EQ(sum(e1, e2), (Subspace<RationalField>::full(Q, 2)));

    const auto b0 = standard_borel(Q, 2);
    const auto s = sum(intersect(b0, weyl_borel(Permutation(2), Q)), intersect(b0, weyl_borel(longest_element(2), Q)));
    EXPECT_EQ(s, b0);
    EXPECT_EQ(s.dim(), 3u);
}

TEST(Subspace, GrassmannFormulaAndCanonicalForm)
{
    for_each_field([](const auto& f) {
        using F = std::decay_t<decltype(f)>;
        for (std::size_t t = 0; t < 40; ++t) {
            Rng rng = Rng::for_trial(7, 4, t);
            const std::size_t d = 2 + rng.below(4);
            const auto a = Subspace<F>::from_rows(random_matrix(f, rng.below(d + 1), d, rng));
            const auto b = Subspace<F>::from_rows(random_matrix(f, rng.below(d + 1), d, rng));
            const auto i = intersect(a, b);
            const auto s = sum(a, b);
            EXPECT_EQ(i.dim() + s.dim(), a.dim() + b.dim());
            EXPECT_TRUE(a.contains(i) && b.contains(i));
            EXPECT_TRUE(s.contains(a) && s.contains(b));
            EXPECT_EQ(intersect(a, b), intersect(b, a));
            // a different spanning set gives the identical canonical basis
            const auto mixed = random_invertible(f, a.dim(), rng);
            if (a.dim() > 0)
                EXPECT_EQ(Subspace<F>::from_rows(mixed * a.basis()), a);
        }
    });
}

TEST(Subspace, AmbientMismatchIsRejected)
{
    EXPECT_THROW(intersect(Subspace<RationalField>::full(Q, 2), Subspace<RationalField>::full(Q, 3)),
                 DimensionMismatch);
}

TEST(Random, StreamsAreReproducible)
{
    Rng a = Rng::for_trial(42, 3, 9), b = Rng::for_trial(42, 3, 9), c = Rng::for_trial(42, 3, 10);
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    EXPECT_NE(x, c.next());
    Rng r(1);
    for (int k = 0; k < 1000; ++k) {
        const auto v = r.between(-9, 9);
        EXPECT_GE(v, -9);
        EXPECT_LE(v, 9);
    }
}

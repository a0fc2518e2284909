#include "support.hpp"

using namespace borel;
using namespace borel::test;

TEST(Permutation, Construction)
{
    EXPECT_TRUE(Permutation(3).is_identity());
    EXPECT_EQ(perm({2, 3, 1}).to_string(), "2,3,1");
    EXPECT_THROW(perm({1, 1}), InvalidInput);
    EXPECT_THROW(perm({0, 1}), InvalidInput);
    EXPECT_THROW(perm({1, 3}), InvalidInput);
    EXPECT_THROW(Permutation::transposition(3, 1, 4), InvalidInput);
}

TEST(Compose, Examples)
{
    const auto w = perm({3, 1, 2});
    EXPECT_EQ(compose(Permutation(3), w), w);
    for (std::size_t i = 1; i <= 4; ++i)
        for (std::size_t j = i + 1; j <= 4; ++j) {
            const auto s = Permutation::transposition(4, i, j);
            EXPECT_TRUE(compose(s, s).is_identity());
        }
    // (u o w)(j) = u(w(j))
    EXPECT_EQ(compose(perm({2, 3, 1}), perm({2, 1, 3})), perm({3, 2, 1}));
    EXPECT_THROW(compose(Permutation(2), Permutation(3)), DimensionMismatch);
}

TEST(Compose, GroupAxiomsOnS4)
{
    const auto g = enumerate_group(4);
    for (const auto& u : g) {
        EXPECT_TRUE(compose(u, u.inverse()).is_identity());
        EXPECT_TRUE(compose(u.inverse(), u).is_identity());
        for (std::size_t k = 0; k < g.size(); k += 5)
            for (std::size_t m = 0; m < g.size(); m += 7)
                EXPECT_EQ(compose(compose(u, g[k]), g[m]), compose(u, compose(g[k], g[m])));
    }
}

TEST(Length, Examples)
{
    EXPECT_EQ(Permutation(4).length(), 0u);
    EXPECT_EQ(longest_element(4).length(), 6u);
    EXPECT_EQ(perm({3, 1, 2}).length(), 2u);
}

TEST(Length, EqualsReducedWordLengthAndIsInverseInvariant)
{
    for (std::size_t n = 1; n <= 5; ++n)
        for (const auto& w : enumerate_group(n)) {
            const auto word = oracle::reduced_word(w);
            EXPECT_EQ(word.size(), w.length());
            EXPECT_EQ(oracle::word_product(n, word), w);
            EXPECT_EQ(w.inverse().length(), w.length());
        }
}

TEST(LongestElement, Examples)
{
    EXPECT_TRUE(longest_element(1).is_identity());
    EXPECT_EQ(longest_element(2), perm({2, 1}));
    EXPECT_EQ(longest_element(4), perm({4, 3, 2, 1}));
    EXPECT_EQ(longest_element(4).length(), 6u);
    // product of the transpositions (1,n)(2,n-1)...
    for (std::size_t n = 1; n <= 7; ++n) {
        Permutation p(n);
        for (std::size_t i = 1; i <= n / 2; ++i)
            p = compose(p, Permutation::transposition(n, i, n + 1 - i));
        EXPECT_EQ(p, longest_element(n));
    }
}

TEST(BruhatLeq, Examples)
{
    for (const auto& w : enumerate_group(3)) {
        EXPECT_TRUE(bruhat_leq(Permutation(3), w));
        EXPECT_TRUE(bruhat_leq(w, longest_element(3)));
    }
    EXPECT_FALSE(bruhat_leq(perm({3, 1, 2}), perm({2, 3, 1})));
    EXPECT_FALSE(bruhat_leq(perm({2, 3, 1}), perm({3, 1, 2})));
    EXPECT_FALSE(oracle::subword_bruhat_leq(perm({3, 1, 2}), perm({2, 3, 1})));
    EXPECT_THROW(bruhat_leq(Permutation(2), Permutation(3)), DimensionMismatch);
}

TEST(BruhatLeq, AgreesWithSubwordOracleExhaustively)
{
    for (std::size_t n = 1; n <= 4; ++n) {
        const auto g = enumerate_group(n);
        for (const auto& u : g)
            for (const auto& w : g)
                ASSERT_EQ(bruhat_leq(u, w), oracle::subword_bruhat_leq(u, w)) << u.to_string() << " vs " << w.to_string();
    }
}

TEST(BruhatLeq, StrictRelationRaisesLength)
{
    const auto g = enumerate_group(4);
    for (const auto& u : g)
        for (const auto& w : g)
            if (bruhat_leq(u, w) && !(u == w))
                EXPECT_LT(u.length(), w.length());
}

TEST(PermMatrix, Examples)
{
    EXPECT_EQ(perm_matrix(Permutation(3), Q), QMatrix::identity(Q, 3));
    EXPECT_EQ(perm_matrix(perm({2, 1}), Q), qm({{0, 1}, {1, 0}}));
    const auto ps = perm_matrix(perm({2, 1}), Q);
    EXPECT_EQ(inverse(ps) * QMatrix::unit(Q, 2, 0, 1) * ps, QMatrix::unit(Q, 2, 1, 0));
}

TEST(PermMatrix, HomomorphismAndRoundTrip)
{
    const PrimeField f(7);
    const auto g = enumerate_group(4);
    for (const auto& u : g) {
        const auto pu = perm_matrix(u, f);
        EXPECT_EQ(permutation_of_matrix(pu), u);
        EXPECT_EQ(pu.transpose(), perm_matrix(u.inverse(), f));
        for (std::size_t k = 0; k < g.size(); k += 3)
            EXPECT_EQ(perm_matrix(compose(u, g[k]), f), pu * perm_matrix(g[k], f));
    }
    EXPECT_THROW(permutation_of_matrix(qm({{1, 1}, {0, 1}})), InvalidInput);
}

TEST(TranspositionSet, Examples)
{
    EXPECT_EQ(transposition_set(1), std::vector<Permutation>{Permutation(1)});
    EXPECT_EQ(transposition_set(3).size(), 4u);
    EXPECT_EQ(transposition_set(4).size(), 7u);
    for (std::size_t n = 1; n <= 8; ++n) {
        const auto t = transposition_set(n);
        EXPECT_EQ(t.size(), (n * n - n + 2) / 2);
        EXPECT_TRUE(t.front().is_identity());
        for (std::size_t k = 1; k < t.size(); ++k) {
            EXPECT_EQ(compose(t[k], t[k]), Permutation(n));
            std::size_t moved = 0;
            for (std::size_t j = 1; j <= n; ++j)
                moved += t[k](j) != j;
            EXPECT_EQ(moved, 2u);
        }
    }
}

TEST(EnumerateGroup, Examples)
{
    EXPECT_EQ(enumerate_group(1), std::vector<Permutation>{Permutation(1)});
    EXPECT_EQ(enumerate_group(3).size(), 6u);
    const auto s4 = enumerate_group(4);
    ASSERT_EQ(s4.size(), 24u);
    EXPECT_TRUE(s4.front().is_identity());
    EXPECT_EQ(s4.back(), longest_element(4));
    EXPECT_TRUE(std::is_sorted(s4.begin(), s4.end()));
    EXPECT_THROW(enumerate_group(9), ResourceGuard);
}

TEST(IntersectionDimension, Examples)
{
    for (std::size_t n = 1; n <= 4; ++n) {
        EXPECT_EQ(borel_intersection_dim(longest_element(n), longest_element(n)), n * (n + 1) / 2);
        EXPECT_EQ(borel_intersection_dim(Permutation(n), longest_element(n)), n);
    }
    EXPECT_EQ(borel_intersection_dim(Permutation(3), perm({2, 1, 3})), 5u);
}

TEST(IntersectionDimension, LengthLawExhaustive)
{
    for (std::size_t n = 1; n <= 4; ++n)
        for (const auto& w : enumerate_group(n))
            EXPECT_EQ(borel_intersection_dim(Permutation(n), w), n * (n + 1) / 2 - w.length()) << w.to_string();
}

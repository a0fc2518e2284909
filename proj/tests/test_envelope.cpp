#include "support.hpp"

using namespace borel;
using namespace borel::test;

namespace {

// g^{-1} b_0 g, spanned by the conjugated elementary matrices.
template <ExactField F>
Subspace<F> conjugate_by_hand(const Matrix<F>& g)
{
    const F& f = g.field();
    const std::size_t n = g.rows();
    const auto gi = inverse(g);
    SpanAccumulator<F> acc(f, n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b)
            acc.add((gi * Matrix<F>::unit(f, n, a, b) * g).entries());
    return acc.result();
}

// Independent membership tests straight from the definitions.
template <ExactField F>
bool in_b_g(const Matrix<F>& g, const Matrix<F>& x)
{
    return (g * x * inverse(g)).is_upper_triangular();
}

template <ExactField F>
bool in_b_w(const Permutation& w, const Matrix<F>& x)
{
    const auto p = perm_matrix(w, x.field());
    return (p * x * p.transpose()).is_upper_triangular();
}

template <ExactField F>
Subspace<F> lower_triangular_algebra(const F& f, std::size_t n)
{
    SpanAccumulator<F> acc(f, n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b <= a; ++b)
            acc.add(Matrix<F>::unit(f, n, a, b).entries());
    return acc.result();
}

} // namespace

TEST(WeylBorel, CoordinateDescriptionMatchesConjugation)
{
    for (std::size_t n = 1; n <= 4; ++n)
        for (const auto& w : enumerate_group(n)) {
            const auto bw = weyl_borel(w, Q);
            EXPECT_EQ(bw, conjugate_by_hand(perm_matrix(w, Q))) << w.to_string();
            EXPECT_EQ(bw, borel_from_g(perm_matrix(w, Q)).algebra());
        }
    EXPECT_EQ(weyl_borel(Permutation(3), Q), standard_borel(Q, 3));
}

TEST(BorelFromG, Examples)
{
    const auto b0 = borel_from_g(QMatrix::identity(Q, 3));
    EXPECT_EQ(b0.algebra(), standard_borel(Q, 3));
    EXPECT_EQ(b0.algebra().dim(), 6u);

    EXPECT_EQ(borel_from_g(perm_matrix(longest_element(3), Q)).algebra(), lower_triangular_algebra(Q, 3));

    // b_g = g^{-1} b_0 g for g = [[1,0],[1,1]]: spanned by
    // g^{-1} e^{11} g = [[1,0],[-1,0]], g^{-1} e^{12} g = [[1,1],[-1,-1]], g^{-1} e^{22} g = [[0,0],[1,1]]
    const auto g = qm({{1, 0}, {1, 1}});
    const auto bg = borel_from_g(g).algebra();
    EXPECT_EQ(bg.dim(), 3u);
    EXPECT_EQ(bg, span_of(Q, 2, {qm({{1, 0}, {-1, 0}}), qm({{1, 1}, {-1, -1}}), qm({{0, 0}, {1, 1}})}));
    // [[1,0],[1,0]] is not in g^{-1} b_0 g (g X g^{-1} has a 2 below the diagonal) ...
    EXPECT_FALSE(bg.contains(qm({{1, 0}, {1, 0}}).entries()));
    EXPECT_FALSE(in_b_g(g, qm({{1, 0}, {1, 0}})));
    // ... it lies in g b_0 g^{-1}, the Borel of g^{-1} in this convention
    EXPECT_TRUE(borel_from_g(inverse(g)).algebra().contains(qm({{1, 0}, {1, 0}}).entries()));
}

TEST(BorelFromG, MatchesHandConjugationAndMembership)
{
    for_each_field([](const auto& f) {
        for (std::size_t t = 0; t < 20; ++t) {
            Rng rng = Rng::for_trial(13, 1, t);
            const std::size_t n = 1 + rng.below(5);
            const auto g = random_invertible(f, n, rng);
            const auto bg = borel_from_g(g);
            EXPECT_EQ(bg.algebra(), conjugate_by_hand(g));
            EXPECT_EQ(bg.algebra().dim(), n * (n + 1) / 2);
            for (std::size_t r = 0; r < bg.algebra().dim(); ++r)
                EXPECT_TRUE(in_b_g(g, unflatten(f, bg.algebra().basis().row(r), n)));
            // b_{bg} = b_g for b upper triangular invertible
            EXPECT_EQ(borel_from_g(random_upper_invertible(f, n, rng) * g).algebra(), bg.algebra());
        }
    });
    EXPECT_THROW(borel_from_g(qm({{1, 2}, {2, 4}})), NotInvertible);
}

TEST(Devissage, Examples)
{
    for (std::size_t i = 1; i <= 3; ++i) {
        const auto d = devissage_witness(qm({{2, 1, 3}, {0, 1, -1}, {0, 0, 4}}), i, i);
        EXPECT_TRUE(d.x.empty());
        EXPECT_EQ(d.a, QMatrix::unit(Q, 3, i - 1, i - 1));
        EXPECT_TRUE(d.s.is_identity());
    }

    const auto id = devissage_witness(QMatrix::identity(Q, 3), 3, 1);
    ASSERT_EQ(id.x.size(), 2u);
    EXPECT_TRUE(Q.is_zero(id.x[0]) && Q.is_zero(id.x[1]));
    EXPECT_EQ(id.a, QMatrix::unit(Q, 3, 2, 0));

    const auto u = qm({{1, 1}, {0, 1}});
    const auto d = devissage_witness(u, 2, 1);
    ASSERT_EQ(d.x.size(), 1u);
    EXPECT_EQ(Q.to_string(d.x[0]), "-1");
    EXPECT_EQ(d.a, qm({{0, 0}, {1, -1}}));
    EXPECT_EQ(d.s, perm({2, 1}));
    const auto ps = perm_matrix(d.s, Q);
    EXPECT_EQ(ps * (inverse(u) * d.a * u) * inverse(ps), qm({{0, 1}, {0, -1}}));
}

TEST(Devissage, Errors)
{
    EXPECT_THROW(devissage_witness(qm({{1, 0}, {1, 1}}), 2, 1), InvalidInput);
    EXPECT_THROW(devissage_witness(qm({{1, 1}, {0, 0}}), 2, 1), InvalidInput);
    EXPECT_THROW(devissage_witness(qm({{1, 1}, {0, 1}}), 1, 2), InvalidInput);
    EXPECT_THROW(devissage_witness(qm({{1, 1}, {0, 1}}), 3, 1), InvalidInput);
}

TEST(WitnessBasis, Examples)
{
    const auto ws = witness_basis(QMatrix::identity(Q, 3));
    ASSERT_EQ(ws.size(), 6u);
    std::size_t k = 0;
    for (std::size_t i = 1; i <= 3; ++i)
        for (std::size_t j = 1; j <= i; ++j, ++k)
            EXPECT_EQ(ws[k].a, QMatrix::unit(Q, 3, i - 1, j - 1));

    const auto w2 = witness_basis(qm({{1, 1}, {0, 1}}));
    ASSERT_EQ(w2.size(), 3u);
    EXPECT_EQ(w2[0].a, QMatrix::unit(Q, 2, 0, 0));
    EXPECT_EQ(w2[1].a, qm({{0, 0}, {1, -1}}));
    EXPECT_EQ(w2[2].a, QMatrix::unit(Q, 2, 1, 1));
}

TEST(WitnessBasis, RandomUpperTriangular)
{
    for_each_field([](const auto& f) {
        using F = std::decay_t<decltype(f)>;
        for (std::size_t t = 0; t < 25; ++t) {
            Rng rng = Rng::for_trial(13, 2, t);
            const std::size_t n = 1 + rng.below(6);
            const auto u = random_upper_invertible(f, n, rng);
            const auto ws = witness_basis(u);
            ASSERT_EQ(ws.size(), n * (n + 1) / 2);
            SpanAccumulator<F> acc(f, n * n);
            for (const auto& w : ws) {
                EXPECT_TRUE(w.a.is_lower_triangular());
                EXPECT_TRUE(f.equal(w.a(w.i - 1, w.j - 1), f.one()));
                // a lies in b_h for h = P_s u^{-1}
                EXPECT_TRUE(in_b_g(perm_matrix(w.s, f) * inverse(u), w.a));
                acc.add(w.a.entries());
            }
            EXPECT_EQ(acc.result(), lower_triangular_algebra(f, n));
        }
    });
}

TEST(EnvelopeBruteforce, Examples)
{
    EXPECT_EQ(envelope_bruteforce(QMatrix::identity(Q, 3), {Permutation(3)}), standard_borel(Q, 3));
    const auto lower = envelope_bruteforce(perm_matrix(longest_element(3), Q));
    EXPECT_EQ(lower, lower_triangular_algebra(Q, 3));
    EXPECT_EQ(lower.dim(), 6u);
    EXPECT_THROW(envelope_bruteforce(QMatrix::identity(Q, 7)), ResourceGuard);
    EXPECT_THROW(envelope_bruteforce(QMatrix::identity(Q, 2), {Permutation(3)}), DimensionMismatch);
}

TEST(EnvelopeIdentity, ExhaustiveGL2OverF2AndF3)
{
    for (std::uint64_t p : {2u, 3u}) {
        const auto group = oracle::enumerate_matrices(PrimeField(p), 2, true);
        EXPECT_EQ(group.size(), p == 2 ? 6u : 48u);
        for (const auto& g : group) {
            EXPECT_EQ(envelope_bruteforce(g), conjugate_by_hand(g));
            for (auto sel : {WeylSelection::full(), WeylSelection::restricted()}) {
                const auto cert = envelope_certificate(g, sel);
                EXPECT_TRUE(cert.spans);
                EXPECT_TRUE(verify_certificate(cert));
            }
        }
    }
}

TEST(EnvelopeCertificate, IdentityIsTaggedTrivially)
{
    for (std::size_t n = 1; n <= 4; ++n) {
        const auto cert = envelope_certificate(QMatrix::identity(Q, n));
        EXPECT_TRUE(cert.spans);
        EXPECT_EQ(cert.entries.size(), n * (n + 1) / 2);
        for (const auto& e : cert.entries)
            EXPECT_TRUE(e.w.is_identity());
        EXPECT_EQ(cert.witness_set(), std::vector<Permutation>{Permutation(n)});
    }
}

TEST(EnvelopeCertificate, SwapWithOnlyIdentityDoesNotSpan)
{
    const auto cert = envelope_certificate(qm({{0, 1}, {1, 0}}), WeylSelection::of({Permutation(2)}));
    EXPECT_FALSE(cert.spans);
    EXPECT_TRUE(verify_certificate(cert));
    // b_{w0} ∩ b_e is the diagonal
    EXPECT_EQ(cert.entries.size(), 2u);
    EXPECT_EQ(envelope_bruteforce(qm({{0, 1}, {1, 0}}), {Permutation(2)}).dim(), 2u);
}

TEST(EnvelopeCertificate, RestrictedRandomOverF5)
{
    const PrimeField f(5);
    for (std::size_t t = 0; t < 20; ++t) {
        Rng rng = Rng::for_trial(13, 3, t);
        const auto g = random_invertible(f, 3, rng);
        const auto cert = envelope_certificate(g, WeylSelection::restricted());
        EXPECT_TRUE(cert.spans);
        EXPECT_EQ(cert.weyl_set.size(), 4u);
        EXPECT_EQ(cert.weyl_set, restricted_translate(g));
        EXPECT_EQ(envelope_bruteforce(g, cert.weyl_set), borel_from_g(g).algebra());
    }
}

TEST(EnvelopeCertificate, EntriesSatisfyDefinitionsDirectly)
{
    for_each_field([](const auto& f) {
        for (std::size_t t = 0; t < 12; ++t) {
            Rng rng = Rng::for_trial(13, 4, t);
            const std::size_t n = 1 + rng.below(5);
            const auto g = random_invertible(f, n, rng);
            for (auto sel : {WeylSelection::full(), WeylSelection::restricted()}) {
                const auto cert = envelope_certificate(g, sel);
                EXPECT_EQ(cert.entries.size(), n * (n + 1) / 2);
                for (const auto& e : cert.entries) {
                    const auto x = unflatten(f, std::span<const typename std::decay_t<decltype(f)>::value_type>(e.vector), n);
                    EXPECT_TRUE(in_b_g(g, x));
                    EXPECT_TRUE(in_b_w(e.w, x));
                }
            }
        }
    });
}

TEST(EnvelopeCertificate, CustomSetsAgreeWithBruteforce)
{
    const PrimeField f(3);
    const auto s3 = enumerate_group(3);
    for (std::size_t t = 0; t < 40; ++t) {
        Rng rng = Rng::for_trial(13, 5, t);
        const auto g = random_invertible(f, 3, rng);
        std::vector<Permutation> set;
        for (const auto& w : s3)
            if (rng.below(2))
                set.push_back(w);
        if (set.empty())
            continue;
        const auto cert = envelope_certificate(g, WeylSelection::of(set));
        EXPECT_TRUE(verify_certificate(cert));
        EXPECT_EQ(cert.spans, envelope_bruteforce(g, set) == borel_from_g(g).algebra());
    }
}

TEST(EnvelopeCertificate, TamperedCertificateIsRejected)
{
    auto cert = envelope_certificate(qm({{2, 1, 0}, {1, 1, 3}, {0, 1, 1}}));
    ASSERT_TRUE(verify_certificate(cert));
    auto bad = cert;
    bad.spans = false;
    EXPECT_FALSE(verify_certificate(bad));
    bad = cert;
    bad.entries.pop_back();
    EXPECT_FALSE(verify_certificate(bad));
    bad = cert;
    bad.entries[0].w = longest_element(3);
    if (!weyl_borel(longest_element(3), Q).contains(bad.entries[0].vector))
        EXPECT_FALSE(verify_certificate(bad));
}

TEST(EnvelopeCertificate, GuardsAndErrors)
{
    EXPECT_THROW(envelope_certificate(QMatrix::identity(Q, 7)), ResourceGuard);
    const auto big = envelope_certificate(QMatrix::identity(Q, 7), WeylSelection::restricted());
    EXPECT_TRUE(big.spans);
    EXPECT_THROW(envelope_certificate(QMatrix::identity(Q, 13), WeylSelection::restricted()), ResourceGuard);
    EXPECT_THROW(envelope_certificate(qm({{1, 2}, {2, 4}})), NotInvertible);
    EXPECT_THROW(envelope_certificate(qm({{1, 2}})), InvalidInput);
    EXPECT_THROW(envelope_certificate(QMatrix::identity(Q, 2), WeylSelection::of({Permutation(3)})), DimensionMismatch);
}

TEST(EnvelopeCertificate, RestrictedModeScalesPastTheFullGroup)
{
    for (std::uint64_t p : {2u, 101u}) {
        const PrimeField f(p);
        Rng rng = Rng::for_trial(13, 6, p);
        const auto g = random_invertible(f, 9, rng);
        const auto cert = envelope_certificate(g, WeylSelection::restricted());
        EXPECT_TRUE(cert.spans);
        EXPECT_EQ(cert.weyl_set.size(), 37u);
        EXPECT_TRUE(verify_certificate(cert));
    }
}

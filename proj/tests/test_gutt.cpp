#include "dq/gutt.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace dq;

namespace {

FnSeries gutt_apply(GuttEngine &G, const CoeffFn &f, const CoeffFn &g, int N)
{
    return G.to_series(G.mul(G.from(f), G.from(g)), N);
}

} // namespace

TEST(Lie, JacobiIsEnforced)
{
    // [a,b] = a, [a,c] = b, [b,c] = 0: the Jacobi sum on (a, b, c) is -b
    EXPECT_THROW(LieAlgebraData::make({"a", "b", "c"}, {{0, 1, 0, Scalar(1)}, {0, 2, 1, Scalar(1)}}),
                 std::invalid_argument);
    EXPECT_NO_THROW(LieAlgebraData::so3());
}

TEST(Gutt, HeisenbergIsMoyalWithCentralCoefficient)
{
    // Z is central, so symmetrization gives exp(nu Z (dX (x) dY - dY (x) dX))
    GuttEngine G(LieAlgebraData::heisenberg3());
    const UniverseP &U = G.universe();
    CoeffFn Z = CoeffFn::var(U, "Z");
    std::vector<oracle::Entry> E{{0, 1, Scalar(1)}, {1, 0, Scalar(-1)}};
    std::mt19937 rng(3);
    const int N = 4;
    for (int t = 0; t < 10; ++t) {
        CoeffFn f = oracle::random_poly(U, rng, 3, 3), g = oracle::random_poly(U, rng, 3, 3);
        FnSeries got = gutt_apply(G, f, g, N);
        for (int k = 0; k <= N; ++k)
            EXPECT_EQ(got[k], oracle::exp_product(E, f, g, k) * pow(Z, k)) << "order " << k;
    }
}

TEST(Gutt, LinearCommutatorsAreTheScaledBracket)
{
    for (auto lie : {LieAlgebraData::heisenberg3(), LieAlgebraData::so3()}) {
        GuttEngine G(lie);
        const UniverseP &U = G.universe();
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                CoeffFn a = CoeffFn::monomial(U, Monomial::unit(i)), b = CoeffFn::monomial(U, Monomial::unit(j));
                FnSeries c = gutt_apply(G, a, b, 2) - gutt_apply(G, b, a, 2);
                CoeffFn want(U);
                for (auto &[k, v] : lie.c[i][j])
                    want += CoeffFn::monomial(U, Monomial::unit(k), Scalar(2) * v);
                EXPECT_TRUE(c[0].is_zero());
                EXPECT_EQ(c[1], want);
                EXPECT_TRUE(c[2].is_zero());
            }
    }
}

TEST(Gutt, So3CasimirIsCentral)
{
    GuttEngine G(LieAlgebraData::so3());
    const UniverseP &U = G.universe();
    CoeffFn C(U);
    for (const char *n : {"e1", "e2", "e3"})
        C += CoeffFn::var(U, n, 2);
    std::mt19937 rng(5);
    for (int t = 0; t < 6; ++t) {
        CoeffFn f = oracle::random_poly(U, rng, 3, 3);
        EXPECT_EQ(gutt_apply(G, C, f, 6), gutt_apply(G, f, C, 6));
    }
}

TEST(Gutt, IdentitiesAndBidifferentialForm)
{
    for (auto lie : {LieAlgebraData::heisenberg3(), LieAlgebraData::so3(), LieAlgebraData::abelian({"a", "b"})}) {
        GuttEngine G(lie);
        EXPECT_TRUE(check_gutt_identities(G, 3, 2).pass) << lie.names[0];
    }
    GuttEngine G(LieAlgebraData::so3());
    StarProduct S = G.as_star_product(3);
    EXPECT_TRUE(check_star_axioms(S, {2, 1}).pass);
    std::mt19937 rng(7);
    for (int t = 0; t < 5; ++t) {
        CoeffFn f = oracle::random_poly(G.universe(), rng, 3, 2), g = oracle::random_poly(G.universe(), rng, 3, 2);
        EXPECT_EQ(S.apply(f, g), gutt_apply(G, f, g, 3));
    }
}

TEST(Bch, HeisenbergClosesAfterOneBracket)
{
    // log(e^{sX} e^{tY}) = sX + tY + nu s t Z for the 2nu-scaled bracket
    auto lie = LieAlgebraData::heisenberg3();
    std::vector<Scalar> xi{Scalar(1), Scalar(0), Scalar(0)}, eta{Scalar(0), Scalar(1), Scalar(0)};
    BchSeries H = bch_truncated(lie, xi, eta, 4);
    for (auto &[ab, v] : H.terms) {
        std::vector<Scalar> want(3);
        if (ab == std::make_pair(1, 0))
            want = xi;
        else if (ab == std::make_pair(0, 1))
            want = eta;
        else if (ab == std::make_pair(1, 1))
            want[2] = Scalar(1);
        EXPECT_EQ(v, want) << ab.first << "," << ab.second;
    }
    GuttEngine G(lie);
    EXPECT_TRUE(check_bch_exponentials(G, xi, eta, 4).pass);
    EXPECT_THROW(bch_truncated(lie, xi, eta, kMaxBchDepth + 1), std::invalid_argument);
}

TEST(Bch, So3ExponentialsAgree)
{
    GuttEngine G(LieAlgebraData::so3());
    std::vector<Scalar> xi{Scalar(1), Scalar(0), Scalar(0)}, eta{Scalar(0), Scalar(1), Scalar(0)};
    EXPECT_TRUE(check_bch_exponentials(G, xi, eta, 3).pass);
}

TEST(MomentMap, CanonicalPairRealizesHeisenberg)
{
    // J(X) = q, J(Y) = p, J(Z) = 1 on the plane
    using Pairs = std::vector<std::pair<std::string, std::string>>;
    auto U = poly_universe({"q", "p"});
    Chart ch = Chart::darboux(U, Pairs{{"q", "p"}});
    GuttEngine G(LieAlgebraData::heisenberg3());
    std::vector<CoeffFn> J{CoeffFn::var(U, "q"), CoeffFn::var(U, "p"), CoeffFn(U, Scalar(1))};
    for (auto ord : {Ordering::WEYL, Ordering::STANDARD})
        EXPECT_TRUE(quantum_moment_check(G, J, build_exponential_star(ch, ord, 3), 3).pass);
    J[2] = CoeffFn(U, Scalar(2));
    Report bad = quantum_moment_check(G, J, build_exponential_star(ch, Ordering::WEYL, 3), 3);
    EXPECT_FALSE(bad.pass);
    EXPECT_FALSE(bad.witness.empty());
}

TEST(MomentMap, GuttProductIsItsOwnMomentMap)
{
    GuttEngine G(LieAlgebraData::so3());
    StarProduct S = G.as_star_product(3);
    std::vector<CoeffFn> J;
    for (const char *n : {"e1", "e2", "e3"})
        J.push_back(CoeffFn::var(G.universe(), n));
    EXPECT_TRUE(quantum_moment_check(G, J, S, 2).pass);
    J[0] = J[0] * Scalar(-1);
    EXPECT_FALSE(quantum_moment_check(G, J, S, 2).pass);
}

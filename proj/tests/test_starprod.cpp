#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace dq;
using Pairs = std::vector<std::pair<std::string, std::string>>;

namespace {

struct R4 {
    UniverseP U = poly_universe({"q1", "p1", "q2", "p2"});
    Chart ch = Chart::darboux(U, Pairs{{"q1", "p1"}, {"q2", "p2"}});
    std::vector<std::pair<int, int>> idx{{0, 1}, {2, 3}};
};

CoeffFn var(const UniverseP &U, const char *n) { return CoeffFn::var(U, n); }

} // namespace

TEST(StarProduct, StandardMatchesBruteForceExponential)
{
    R4 r;
    StarProduct S = build_exponential_star(r.ch, Ordering::STANDARD, 4);
    std::mt19937 rng(1);
    auto G = oracle::standard_generator(r.idx);
    for (int t = 0; t < 15; ++t) {
        CoeffFn f = oracle::random_poly(r.U, rng, 3, 4), g = oracle::random_poly(r.U, rng, 3, 4);
        EXPECT_EQ(S.apply(f, g), oracle::exp_product_series(G, f, g, 4));
    }
}

TEST(StarProduct, WeylMatchesBruteForceExponential)
{
    R4 r;
    StarProduct S = build_exponential_star(r.ch, Ordering::WEYL, 4);
    std::mt19937 rng(2);
    auto G = oracle::weyl_generator(r.idx);
    for (int t = 0; t < 15; ++t) {
        CoeffFn f = oracle::random_poly(r.U, rng, 3, 4), g = oracle::random_poly(r.U, rng, 3, 4);
        EXPECT_EQ(S.apply(f, g), oracle::exp_product_series(G, f, g, 4));
    }
}

TEST(StarProduct, LowOrderValues)
{
    R4 r;
    auto q = var(r.U, "q1"), p = var(r.U, "p1");
    StarProduct S = build_exponential_star(r.ch, Ordering::STANDARD, 3);
    StarProduct W = build_exponential_star(r.ch, Ordering::WEYL, 3);
    FnSeries pq = S.apply(p, q), qp = W.apply(q, p);
    // p * q = qp - 2 nu, q *_W p = qp + nu
    EXPECT_EQ(pq[0], q * p);
    EXPECT_EQ(pq[1], CoeffFn(r.U, Scalar(-2)));
    EXPECT_TRUE(pq[2].is_zero());
    EXPECT_EQ(qp[1], CoeffFn(r.U, Scalar(1)));
}

TEST(StarProduct, UnitAndBracketProperties)
{
    R4 r;
    std::mt19937 rng(3);
    for (auto ord : {Ordering::STANDARD, Ordering::WEYL}) {
        StarProduct S = build_exponential_star(r.ch, ord, 3);
        CoeffFn one(r.U, Scalar(1));
        for (int t = 0; t < 10; ++t) {
            CoeffFn f = oracle::random_poly(r.U, rng, 3, 3), g = oracle::random_poly(r.U, rng, 3, 3);
            EXPECT_EQ(S.apply(f, one), S.lift(f));
            EXPECT_EQ(S.apply(one, f), S.lift(f));
            EXPECT_EQ(S.C[1].apply(f, g) - S.C[1].apply(g, f), Scalar(2) * r.ch.bracket(f, g));
        }
    }
}

TEST(StarProduct, AssociativityOnRandomTriples)
{
    R4 r;
    std::mt19937 rng(4);
    StarProduct S = build_exponential_star(r.ch, Ordering::WEYL, 4);
    auto mul = [&](const FnSeries &a, const FnSeries &b) { return S.apply(a, b); };
    for (int t = 0; t < 8; ++t) {
        FnSeries f = S.lift(oracle::random_poly(r.U, rng, 2, 3)), g = S.lift(oracle::random_poly(r.U, rng, 2, 3)),
                 h = S.lift(oracle::random_poly(r.U, rng, 2, 3));
        EXPECT_EQ(mul(mul(f, g), h), mul(f, mul(g, h)));
    }
}

TEST(StarProduct, AxiomCheckerCatchesBrokenProduct)
{
    R4 r;
    StarProduct S = build_exponential_star(r.ch, Ordering::STANDARD, 3);
    EXPECT_TRUE(check_star_axioms(S, {2, 1}).pass);
    // first-order in both slots would be a Hochschild cocycle and only show at order 3
    S.C[2].add(Monomial::unit(0, 2), Monomial::unit(2), CoeffFn::var(r.U, "p1"));
    Report bad = check_star_axioms(S, {2, 1});
    EXPECT_FALSE(bad.pass);
    EXPECT_EQ(bad.order, 2);
    EXPECT_FALSE(bad.witness.empty());
}

TEST(StarProduct, OppositeSwapsArguments)
{
    R4 r;
    std::mt19937 rng(5);
    StarProduct S = build_exponential_star(r.ch, Ordering::STANDARD, 3);
    StarProduct O = opposite_star(S);
    for (int t = 0; t < 5; ++t) {
        CoeffFn f = oracle::random_poly(r.U, rng, 3, 3), g = oracle::random_poly(r.U, rng, 3, 3);
        EXPECT_EQ(O.apply(f, g), S.apply(g, f));
    }
    EXPECT_TRUE(check_star_axioms(O, {2, 1}).pass);
}

TEST(Equivalence, ExpOfLaplacianTakesStandardToWeyl)
{
    // T = exp(nu sum dq dp) moves the standard ordering to the symmetric one
    R4 r;
    int N = 4;
    EquivalenceTransform T = EquivalenceTransform::identity(r.U, N);
    DiffOp lap(r.U);
    lap.add(Monomial::unit(0) + Monomial::unit(1), CoeffFn(r.U, Scalar(1)));
    lap.add(Monomial::unit(2) + Monomial::unit(3), CoeffFn(r.U, Scalar(1)));
    DiffOp pw = DiffOp::identity(r.U);
    for (int k = 1; k <= N; ++k) {
        pw = compose(lap, pw);
        T.S[k] = pw * (Scalar(1) / factorial(k));
    }
    ASSERT_TRUE(T.valid());
    StarProduct S = build_exponential_star(r.ch, Ordering::STANDARD, N);
    StarProduct W = build_exponential_star(r.ch, Ordering::WEYL, N);
    StarProduct TS = apply_equivalence(T, S);
    for (int k = 0; k <= N; ++k)
        EXPECT_EQ(TS.C[k], W.C[k]) << "order " << k;
}

TEST(Equivalence, InverseAndDefiningFormula)
{
    R4 r;
    int N = 3;
    std::mt19937 rng(6);
    EquivalenceTransform T = EquivalenceTransform::identity(r.U, N);
    T.S[1].add(Monomial::unit(1), CoeffFn::var(r.U, "q1") * CoeffFn::var(r.U, "q2"));
    T.S[2].add(Monomial::unit(0, 2), CoeffFn::var(r.U, "p2"));
    T.S[3].add(Monomial::unit(3), CoeffFn(r.U, Scalar::frac(1, 3)));
    EquivalenceTransform Ti = T.inverse();
    EXPECT_TRUE(Ti.valid());
    StarProduct S = build_exponential_star(r.ch, Ordering::STANDARD, N);
    StarProduct S2 = apply_equivalence(T, S);
    for (int t = 0; t < 6; ++t) {
        CoeffFn f = oracle::random_poly(r.U, rng, 3, 3), g = oracle::random_poly(r.U, rng, 3, 3);
        FnSeries F = S.lift(f);
        EXPECT_EQ(Ti.apply(T.apply(F)), F);
        EXPECT_EQ(S2.apply(f, g), T.apply(S.apply(Ti.apply(S.lift(f)), Ti.apply(S.lift(g)))));
    }
    EXPECT_TRUE(check_star_axioms(S2, {2, 1}).pass);
}

TEST(Deligne, FirstOrderReadingAgreesWithLinearEvaluation)
{
    // the order-zero form is read from the d_a (x) d_b coefficients of C2; on polynomial
    // charts this equals C2(x^a, x^b) - C2(x^b, x^a)
    R4 r;
    BiDiffOp G1 = BiDiffOp::term(r.U, Monomial::unit(1), Monomial::unit(0), CoeffFn(r.U, Scalar(-2))) +
                  BiDiffOp::term(r.U, Monomial::unit(3), Monomial::unit(2), CoeffFn(r.U, Scalar(-2)));
    BiDiffOp G2 = BiDiffOp::term(r.U, Monomial::unit(0), Monomial::unit(2), CoeffFn(r.U, Scalar(3))) +
                  BiDiffOp::term(r.U, Monomial::unit(1), Monomial::unit(1), CoeffFn(r.U, Scalar(5)));
    StarProduct S = exponential_of_generator(r.ch, {BiDiffOp(r.U), G1, G2}, 3, "test");
    DeligneResult d = deligne_order0(S);
    ASSERT_TRUE(d.constant);
    auto sv = r.ch.symplectic_vars();
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            CoeffFn xa = CoeffFn::monomial(r.U, Monomial::unit(sv[a])),
                    xb = CoeffFn::monomial(r.U, Monomial::unit(sv[b]));
            CoeffFn direct = S.C[2].apply(xa, xb) - S.C[2].apply(xb, xa);
            EXPECT_EQ(d.antisym_c2[a][b], direct.constant_term());
        }
    EXPECT_EQ(d.antisym_c2[0][2], Scalar(3));
    EXPECT_TRUE(deligne_order0(build_exponential_star(r.ch, Ordering::WEYL, 3)).form[0][1].is_zero());
}

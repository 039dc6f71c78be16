#include "dq/casebook.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace dq;

namespace {

// Laurent in u, v times polynomial in p, J
CoeffFn random_torus_fn(const UniverseP &U, std::mt19937 &rng, int terms)
{
    std::uniform_int_distribution<int> mode(-2, 2), deg(0, 2), c(-3, 3);
    CoeffFn f(U);
    for (int t = 0; t < terms; ++t) {
        Monomial m;
        m.set(U->at("u"), mode(rng));
        m.set(U->at("v"), mode(rng));
        m.set(U->at("p"), deg(rng));
        m.set(U->at("J"), deg(rng));
        f.add_term(m, Scalar(c(rng)));
    }
    return f;
}

ScalarSeries series(std::vector<Scalar> c, int N)
{
    c.resize(N + 1);
    return ScalarSeries(c);
}

// e^{a(lambda) x} expanded directly: e^{a0 x} sum_k (x (a - a0))^k / k!
CoeffFn exp_rate_oracle(const UniverseP &U, const std::vector<Scalar> &a, int N)
{
    CoeffFn x = CoeffFn::var(U, "x"), s(U);
    for (int m = 1; m < (int)a.size() && m <= N; ++m)
        s += CoeffFn::var(U, "lambda", m) * a[m];
    CoeffFn sum(U), pw(U, Scalar(1));
    for (int k = 0; k <= N; ++k) {
        sum += pw * (Scalar(1) / factorial(k));
        pw = pw * x * s;
    }
    return CoeffFn::exponential(U, a[0]) * sum;
}

} // namespace

TEST(Torus, StarMatchesExponentialOracleOnLaurentModes)
{
    TorusProducts T = torus_products(3);
    const UniverseP &U = T.U();
    int u = U->at("u"), v = U->at("v"), p = U->at("p"), J = U->at("J");
    std::vector<oracle::Entry> G{{p, u, Scalar(-2)}, {J, v, Scalar(-2)}};
    std::mt19937 rng(4);
    for (int t = 0; t < 8; ++t) {
        CoeffFn f = random_torus_fn(U, rng, 3), g = random_torus_fn(U, rng, 3);
        EXPECT_EQ(T.star.apply(f, g), oracle::exp_product_series(G, f, g, 3));
        EXPECT_EQ(T.star.apply(f, CoeffFn(U, Scalar(1))), T.star.lift(f));
    }
}

TEST(Torus, PrimeIsTheDisplayedProductAndGivesTheWitness)
{
    TorusProducts T = torus_products(4);
    const UniverseP &U = T.U();
    for (int k = 0; k <= 4; ++k)
        EXPECT_EQ(T.prime.C[k], T.prime_displayed.C[k]) << "order " << k;
    CoeffFn u = CoeffFn::var(U, "u"), v = CoeffFn::var(U, "v"), J = CoeffFn::var(U, "J");
    // (J e^{i psi}) *' e^{i phi} = (J - 4 nu^2) e^{i(phi + psi)}
    FnSeries w = T.prime.apply(J * v, u);
    FnSeries want(4, CoeffFn(U));
    want[0] = J * u * v;
    want[2] = u * v * Scalar(-4);
    EXPECT_EQ(w, want);
    for (auto *S : {&T.star, &T.prime, &T.second})
        EXPECT_TRUE(check_star_axioms(*S, {1, 1}).pass) << S->name;
}

TEST(Torus, AdaptednessProjectabilityAndReduction)
{
    TorusProducts T = torus_products(3);
    for (auto *S : {&T.star, &T.prime, &T.second}) {
        EXPECT_TRUE(check_adapted(*S, T.cc).pass) << S->name;
        EXPECT_EQ(check_ideal_sidedness(*S, T.cc), Sidedness::LEFT) << S->name;
    }
    EXPECT_TRUE(check_projectable(T.star, T.cc).pass);
    EXPECT_FALSE(check_projectable(T.prime, T.cc).pass);
    StarProduct R = reduced_product(T.star, T.cc);
    const UniverseP &V = R.universe();
    ASSERT_EQ(V->size(), 2);
    std::vector<oracle::Entry> G{{V->at("p"), V->at("u"), Scalar(-2)}};
    std::mt19937 rng(6);
    std::uniform_int_distribution<int> mode(-2, 2), deg(0, 3), c(-3, 3);
    for (int t = 0; t < 6; ++t) {
        CoeffFn f(V), g(V);
        for (int s = 0; s < 3; ++s) {
            Monomial a, b;
            a.set(V->at("u"), mode(rng));
            a.set(V->at("p"), deg(rng));
            b.set(V->at("u"), mode(rng));
            b.set(V->at("p"), deg(rng));
            f.add_term(a, Scalar(c(rng)));
            g.add_term(b, Scalar(c(rng)));
        }
        EXPECT_EQ(R.apply(f, g), oracle::exp_product_series(G, f, g, 3));
    }
}

TEST(Torus, FullReportMeetsEveryExpectation)
{
    Report r = torus_report();
    EXPECT_TRUE(r.pass) << r.witness;
}

TEST(Radial, StarValues)
{
    const int N = 5;
    UniverseP U = cpn_universe(N);
    CoeffFn x = CoeffFn::var(U, "x"), lam = CoeffFn::var(U, "lambda");
    // x * x = x^2 + lambda x
    EXPECT_EQ(cpn_radial_star(RadialFn::from(x), RadialFn::from(x)), RadialFn::from(x * x + lam * x));
    RadialFn one = RadialFn::from(CoeffFn(U, Scalar(1)));
    RadialFn phi = RadialFn::from(CoeffFn::exponential(U, Scalar(3)) * x);
    phi.add(x * x);
    EXPECT_EQ(cpn_radial_star(one, phi), phi);
    EXPECT_EQ(cpn_radial_star(phi, one), phi);
    // e_a * e_b = e^{(a+b)x} sum_r lambda^r x^r a^r b^r / r!
    for (auto [a, b] : std::vector<std::pair<int, int>>{{1, 1}, {1, 2}, {-1, 3}}) {
        CoeffFn sum(U);
        for (int r = 0; r <= N; ++r)
            sum += pow(lam * x, r) * (Scalar(a * b).pow(r) / factorial(r));
        RadialFn want = RadialFn::from(CoeffFn::exponential(U, Scalar(a + b)) * sum);
        EXPECT_EQ(cpn_radial_star(RadialFn::exp(U, Scalar(a)), RadialFn::exp(U, Scalar(b))), want);
    }
}

TEST(Radial, SymbolOfTheUnitTransform)
{
    // S_1(e_1) = e^{x ln(1 + lambda)/lambda} = e^x (1 - x lambda/2 + lambda^2 (x/3 + x^2/8) + ...)
    const int N = 2;
    UniverseP U = cpn_universe(N);
    CoeffFn x = CoeffFn::var(U, "x"), lam = CoeffFn::var(U, "lambda");
    ScalarSeries D = series({Scalar(1)}, N);
    CoeffFn want = CoeffFn::exponential(U, Scalar(1)) *
                   (CoeffFn(U, Scalar(1)) - x * lam * Scalar::frac(1, 2) +
                    lam * lam * (x * Scalar::frac(1, 3) + x * x * Scalar::frac(1, 8)));
    EXPECT_EQ(cpn_SD(RadialFn::exp(U, Scalar(1)), D), RadialFn::from(want));
}

TEST(Radial, SymbolsAgainstDirectExpansion)
{
    // S_D(e_a) = e_{D ln(1 + lambda a)/lambda}, S_D^{-1}(e_a) = e_{(exp(lambda a/D) - 1)/lambda}
    const int N = 5;
    UniverseP U = cpn_universe(N);
    for (int d1 : {0, 1, -2})
        for (int a : {1, 2, -3}) {
            std::vector<Scalar> D(N + 2);
            D[0] = Scalar(1);
            D[1] = Scalar(d1);
            // ln(1 + lambda a)/lambda = sum_m (-1)^{m-1} a^m lambda^{m-1}/m
            std::vector<Scalar> L(N + 1), rate(N + 1);
            for (int m = 1; m <= N + 1; ++m)
                L[m - 1] = Scalar(m % 2 ? 1 : -1) * Scalar(a).pow(m) / Scalar(m);
            for (int i = 0; i <= N; ++i)
                for (int j = 0; i + j <= N; ++j)
                    rate[i + j] += D[i] * L[j];
            ScalarSeries Ds = series({D[0], D[1]}, N);
            EXPECT_EQ(cpn_SD(RadialFn::exp(U, Scalar(a)), Ds), RadialFn::from(exp_rate_oracle(U, rate, N)));
            if (d1 == 0) {
                // (exp(lambda a) - 1)/lambda = sum_m a^m lambda^{m-1}/m!
                std::vector<Scalar> inv(N + 1);
                for (int m = 1; m <= N + 1; ++m)
                    inv[m - 1] = Scalar(a).pow(m) / factorial(m);
                EXPECT_EQ(cpn_SD_inverse(RadialFn::exp(U, Scalar(a)), Ds),
                          RadialFn::from(exp_rate_oracle(U, inv, N)));
            }
        }
}

TEST(Radial, TransformIsAHomomorphism)
{
    const int N = 4;
    ScalarSeries D = series({Scalar(1), Scalar(1)}, N);
    EXPECT_TRUE(cpn_check_homomorphism(D, Scalar(1), Scalar(2), N).pass);
    EXPECT_TRUE(cpn_check_inverse(D, Scalar(2), N).pass);
    EXPECT_TRUE(cpn_check_change(D, series({Scalar(2), Scalar(-1)}, N), Scalar(1), N).pass);
    // mutation: a mismatched transform on one factor breaks the identity
    UniverseP U = cpn_universe(N);
    ScalarSeries Dp = series({Scalar(1), Scalar(2)}, N);
    RadialFn ea = RadialFn::exp(U, Scalar(1)), eb = RadialFn::exp(U, Scalar(2));
    RadialFn lhs = cpn_SD(cpn_radial_star(ea, eb), D);
    EXPECT_EQ(lhs, cpn_SD(ea, D) * cpn_SD(eb, D));
    EXPECT_NE(lhs, cpn_SD(ea, D) * cpn_SD(eb, Dp));
}

TEST(Radial, FullPanel)
{
    Report r = cpn_report(6);
    EXPECT_TRUE(r.pass) << r.witness;
}

TEST(Radial, SeriesInverse)
{
    ScalarSeries a = series({Scalar(2), Scalar(1), Scalar(-3)}, 5);
    ScalarSeries b = series_inverse(a);
    for (int k = 0; k <= 5; ++k) {
        Scalar s(0);
        for (int i = 0; i <= k; ++i)
            s += a[i] * b[k - i];
        EXPECT_EQ(s, Scalar(k == 0 ? 1 : 0));
    }
}

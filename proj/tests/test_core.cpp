#include "dq/diffop.hpp"
#include "dq/textio.hpp"

#include <gtest/gtest.h>
#include <random>

using namespace dq;

namespace {

CoeffFn random_poly(const UniverseP &U, std::mt19937 &rng, int terms, int maxexp)
{
    std::uniform_int_distribution<int> e(0, maxexp), c(-5, 5);
    CoeffFn f(U);
    for (int t = 0; t < terms; ++t) {
        Monomial m;
        for (int v = 0; v < U->size(); ++v)
            m.set(v, U->periodic(v) ? e(rng) - maxexp / 2 : e(rng));
        f.add_term(m, Scalar(c(rng)));
    }
    return f;
}

} // namespace

TEST(Scalar, GaussianRationalArithmetic)
{
    Scalar a(mpq_class(1, 2), mpq_class(1, 3));
    Scalar b(mpq_class(-3, 4), mpq_class(2));
    // (1/2 + i/3)(-3/4 + 2i) = -3/8 - 2/3 + i(1 - 1/4)
    EXPECT_EQ(a * b, Scalar(mpq_class(-25, 24), mpq_class(3, 4)));
    EXPECT_EQ((a * b) / b, a);
    EXPECT_EQ(Scalar::I() * Scalar::I(), Scalar(-1));
    EXPECT_EQ(Scalar::frac(2, 4), Scalar::frac(1, 2));
    EXPECT_THROW(a / Scalar(0), std::exception);
}

TEST(Scalar, ParsePrintIdentity)
{
    for (std::string s : {"0", "3/4", "-1/2i", "1/3+2i", "-7", "5i", "-2/9-1/5i"}) {
        Scalar x = Scalar::parse(s);
        EXPECT_EQ(x.str(), s);
        EXPECT_EQ(Scalar::parse(x.str()), x);
    }
    EXPECT_THROW(Scalar::parse("1/0"), std::exception);
    EXPECT_THROW(Scalar::parse("abc"), std::exception);
}

TEST(Scalar, FactorialBinomial)
{
    EXPECT_EQ(factorial(6), Scalar(720));
    EXPECT_EQ(binomial(7, 3), Scalar(35));
    EXPECT_EQ(binomial(3, 5), Scalar(0));
}

TEST(Universe, RejectsDuplicatesAndMixedFlavors)
{
    EXPECT_THROW(make_universe({{"a", VarKind::Poly}, {"a", VarKind::Poly}}), std::exception);
    auto L = make_universe({{"u", VarKind::Periodic}, {"p", VarKind::Poly}});
    EXPECT_EQ(L->flavor(), Flavor::LAURENT);
    auto E = make_universe({{"x", VarKind::Radial}, {"lambda", VarKind::Param}}, 3);
    EXPECT_EQ(E->flavor(), Flavor::EXPPOLY);
    EXPECT_EQ(E->param_trunc(), 3);
}

TEST(Universe, WeightedMonomialCount)
{
    // signed exponent on one periodic unit plus one polynomial variable: |a| + c <= 2
    auto L = make_universe({{"u", VarKind::Periodic}, {"p", VarKind::Poly}});
    EXPECT_EQ(weighted_monomials(*L, {0, 1}, 2).size(), 5u + 3u + 1u);
    auto P = poly_universe({"a", "b", "c"});
    EXPECT_EQ(monomials_up_to({0, 1, 2}, 3).size(), 20u);
    (void)P;
}

TEST(CoeffFn, PolynomialProductAndDerivative)
{
    auto U = poly_universe({"x", "y"});
    CoeffFn x = CoeffFn::var(U, "x"), y = CoeffFn::var(U, "y");
    CoeffFn f = x * x * y + Scalar(3) * y;
    EXPECT_EQ(f.derive(0), Scalar(2) * x * y);
    EXPECT_EQ(f.derive(1), x * x + CoeffFn(U, Scalar(3)));
    EXPECT_EQ(pow(x + y, 2), x * x + Scalar(2) * x * y + y * y);
    EXPECT_TRUE((f - f).is_zero());
}

TEST(CoeffFn, AngleDerivativeOnLaurentUnits)
{
    // u = e^{i phi}: d/dphi u^k = i k u^k
    auto U = make_universe({{"u", VarKind::Periodic}});
    for (int k : {-3, -1, 1, 2}) {
        CoeffFn f = CoeffFn::monomial(U, Monomial::unit(0, k));
        EXPECT_EQ(f.derive(0), CoeffFn::monomial(U, Monomial::unit(0, k), Scalar::I() * Scalar(k)));
    }
    EXPECT_TRUE(CoeffFn(U, Scalar(7)).derive(0).is_zero());
}

TEST(CoeffFn, ExponentialPolynomialDerivative)
{
    auto U = make_universe({{"x", VarKind::Radial}, {"lambda", VarKind::Param}}, 4);
    Scalar a = Scalar::frac(3, 2);
    CoeffFn e = CoeffFn::exponential(U, a);
    CoeffFn x2e = e * CoeffFn::var(U, "x", 2);
    // d/dx (x^2 e^{ax}) = 2x e^{ax} + a x^2 e^{ax}
    EXPECT_EQ(x2e.derive(0), e * (Scalar(2) * CoeffFn::var(U, "x") + a * CoeffFn::var(U, "x", 2)));
    // the parameter is truncated
    CoeffFn l = CoeffFn::var(U, "lambda", 3);
    EXPECT_TRUE((l * l).is_zero());
}

TEST(DiffOp, CompositionMatchesSequentialApplication)
{
    auto U = poly_universe({"x", "y"});
    std::mt19937 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        DiffOp a(U), b(U);
        for (int k = 0; k < 3; ++k) {
            a.add(Monomial::unit(k % 2, 1 + k / 2), random_poly(U, rng, 2, 2));
            b.add(Monomial::unit((k + 1) % 2, 1 + k % 2), random_poly(U, rng, 2, 2));
        }
        CoeffFn f = random_poly(U, rng, 4, 4);
        EXPECT_EQ(compose(a, b).apply(f), a.apply(b.apply(f)));
    }
}

TEST(BiDiffOp, CompositionsAndCoboundary)
{
    auto U = poly_universe({"x", "y"});
    std::mt19937 rng(5);
    BiDiffOp C(U);
    C.add(Monomial::unit(0), Monomial::unit(1), CoeffFn::var(U, "x"));
    C.add(Monomial::unit(1, 2), Monomial(), CoeffFn(U, Scalar(2)));
    DiffOp A = DiffOp::partial(U, Monomial::unit(1), CoeffFn::var(U, "y"));
    DiffOp T = DiffOp::partial(U, Monomial::unit(0, 2), CoeffFn(U, Scalar(1)));
    for (int trial = 0; trial < 10; ++trial) {
        CoeffFn f = random_poly(U, rng, 3, 3), g = random_poly(U, rng, 3, 3);
        EXPECT_EQ(compose(T, C).apply(f, g), T.apply(C.apply(f, g)));
        EXPECT_EQ(compose(C, A, T).apply(f, g), C.apply(A.apply(f), T.apply(g)));
        // (bU)(f,g) = f U(g) - U(fg) + U(f) g
        EXPECT_EQ(hochschild_coboundary(A).apply(f, g), f * A.apply(g) - A.apply(f * g) + A.apply(f) * g);
        EXPECT_EQ(C.swapped().apply(f, g), C.apply(g, f));
    }
}

TEST(BiDiffOp, ExtractionRecoversOperator)
{
    auto U = poly_universe({"x", "y"});
    BiDiffOp C(U);
    C.add(Monomial::unit(0), Monomial::unit(1), CoeffFn::var(U, "x") * CoeffFn::var(U, "y"));
    C.add(Monomial::unit(1, 2), Monomial::unit(0), CoeffFn(U, Scalar::frac(-1, 3)));
    C.add(Monomial(), Monomial::unit(0, 2), CoeffFn::var(U, "y", 2));
    BiDiffOp E = extract_bidiffop(U, {0, 1}, 2, 2, [&](const CoeffFn &f, const CoeffFn &g) { return C.apply(f, g); });
    EXPECT_EQ(E, C);
}

TEST(TextIO, CoefficientDocumentsRoundTrip)
{
    auto U = make_universe({{"u", VarKind::Periodic}, {"p", VarKind::Poly}});
    CoeffFn f = CoeffFn::monomial(U, Monomial::unit(0, -2) + Monomial::unit(1, 3), Scalar::parse("1/3+2i"));
    f.add_term(Monomial(), Scalar(-4));
    std::string doc = document(*U, print_coeff(f));
    EXPECT_EQ(parse_coeff_document(doc), f);
    EXPECT_EQ(document(*U, print_coeff(parse_coeff_document(doc))), doc);
}

TEST(TextIO, PrettyAndCompactOperatorsAgree)
{
    auto U = poly_universe({"x", "y"});
    BiDiffOp C(U);
    C.add(Monomial::unit(0), Monomial::unit(1), CoeffFn::var(U, "x"));
    C.add(Monomial(), Monomial::unit(0, 2), CoeffFn(U, Scalar::frac(5, 7)));
    EXPECT_EQ(parse_bidiffop_document(document(*U, print_bidiffop(C, true))), C);
    EXPECT_EQ(parse_bidiffop_document(document(*U, print_bidiffop(C, false))), C);
    DiffOp D = DiffOp::partial(U, Monomial::unit(1, 3), CoeffFn::var(U, "y"));
    EXPECT_EQ(parse_diffop_document(document(*U, print_diffop(D, true))), D);
}

TEST(TextIO, GrammarViolationsAreReported)
{
    EXPECT_THROW(parse_coeff_document("dq-text 2\nuniverse x:poly\npoly { (1) * x }\n"), ParseError);
    EXPECT_THROW(parse_coeff_document("dq-text 1\nuniverse x:poly x:poly\npoly { (1) }\n"), ParseError);
    EXPECT_THROW(parse_coeff_document("dq-text 1\nuniverse x:poly\npoly { (1) * z }\n"), ParseError);
    EXPECT_THROW(parse_coeff_document("dq-text 1\nuniverse x:poly\npoly { (1) * x^-1 }\n"), ParseError);
    EXPECT_THROW(parse_coeff_document("dq-text 1\nuniverse x:poly\npoly { (1) * x } trailing\n"), ParseError);
    try {
        parse_coeff_document("dq-text 1\nuniverse x:poly\npoly { (1) * q }\n");
        FAIL();
    } catch (const ParseError &e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }
}

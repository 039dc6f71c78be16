#include "dq/casebook.hpp"
#include "dq/textio.hpp"

#include <algorithm>

namespace dq {

// ================================================================ torus

TorusProducts torus_products(int N)
{
    UniverseP U = make_universe({{"u", VarKind::Periodic}, {"v", VarKind::Periodic}, {"p", VarKind::Poly},
                                 {"J", VarKind::Poly}});
    TorusProducts T;
    T.cc = CoisotropicChart::make(U, {{"u", "p"}}, {{"v", "J"}});
    const Chart &ch = T.cc.chart;
    int u = U->at("u"), p = U->at("p"), J = U->at("J");

    T.star = build_exponential_star(ch, Ordering::STANDARD, N);
    T.star.name = "torus-star";

    // S = exp(2 i nu p dJ): S_k = (2 i p)^k / k! dJ^k
    T.S = EquivalenceTransform::identity(U, N);
    for (int k = 1; k <= N; ++k) {
        CoeffFn c = CoeffFn::monomial(U, Monomial::unit(p, k), (Scalar(2) * Scalar::I()).pow(k) / factorial(k));
        T.S.S[k] = DiffOp::partial(U, Monomial::unit(J, k), c);
    }
    T.prime = apply_equivalence(T.S, T.star);
    T.prime.name = "torus-star-prime";

    BiDiffOp G1 = BiDiffOp::term(U, Monomial::unit(p), Monomial::unit(u), CoeffFn(U, Scalar(-2))) +
                  BiDiffOp::term(U, Monomial::unit(J), Monomial::unit(U->at("v")), CoeffFn(U, Scalar(-2)));
    Scalar four_i = Scalar(4) * Scalar::I();
    BiDiffOp G2p = BiDiffOp::term(U, Monomial::unit(J), Monomial::unit(u), CoeffFn(U, four_i));
    BiDiffOp G2s = BiDiffOp::term(U, Monomial::unit(J), Monomial::unit(p), CoeffFn(U, four_i));
    T.prime_displayed = exponential_of_generator(ch, {BiDiffOp(U), G1, G2p}, N, "torus-star-prime-displayed");
    T.second = exponential_of_generator(ch, {BiDiffOp(U), G1, G2s}, N, "torus-star-second");
    return T;
}

namespace {

struct Expectations {
    Report rep;
    void expect(Json &node, const std::string &what, bool got, bool want, int order = -1)
    {
        node["expected"] = want;
        node["observed"] = got;
        if (got != want)
            rep.fail(order, what + ": expected " + (want ? "true" : "false"));
    }
};

Json matrix_json(const Matrix &M)
{
    Json j = Json::array();
    for (auto &row : M) {
        Json r = Json::array();
        for (auto &x : row)
            r.push_back(x.str());
        j.push_back(r);
    }
    return j;
}

// true iff the certified spaces are exactly spanned by the pattern monomials
bool idealizer_matches(const IdealizerResult &R, const std::vector<Monomial> &pattern, Json &node)
{
    bool ok = !R.certified.empty();
    Json per = Json::array();
    for (size_t k = 0; k < R.certified.size(); ++k) {
        bool inside = std::all_of(R.support[k].begin(), R.support[k].end(), [&](const Monomial &m) {
            return std::find(pattern.begin(), pattern.end(), m) != pattern.end();
        });
        bool full = R.certified[k].size() == pattern.size();
        per.push_back({{"order", k}, {"support_in_pattern", inside}, {"dimension_matches", full}});
        ok = ok && inside && full;
    }
    node["per_order"] = per;
    return ok;
}

} // namespace

Report torus_report(const TorusOptions &opt)
{
    TorusProducts T = torus_products(opt.order);
    const UniverseP &U = T.U();
    const auto &cc = T.cc;
    int u = U->at("u"), v = U->at("v"), p = U->at("p"), J = U->at("J");
    Expectations E;
    E.rep.check = "casebook-torus";
    E.rep.order = opt.order;
    Json &d = E.rep.detail;
    d["order"] = opt.order;
    d["fourier_bound"] = opt.fourier;
    d["variables"] = "u = e^{i phi}, v = e^{i psi}, momenta p, J; C = {J = 0}";
    d["scope"] = "certified on Laurent polynomials in (u, v) times polynomials in (p, J); smooth-function "
                 "statements are checked mode by mode";

    // axioms
    Json ax;
    for (auto *S : {&T.star, &T.prime, &T.second}) {
        AxiomOptions ao;
        ao.degree = opt.axiom_degree;
        Report r = check_star_axioms(*S, ao);
        Json n;
        n["report"] = r.to_json();
        E.expect(n, S->name + " axioms", r.pass, true, r.order);
        ax[S->name] = n;
    }
    d["axioms"] = ax;

    // equivalence S(star) = displayed prime
    Json eq;
    E.expect(eq["transform_valid"], "S valid", T.S.valid(), true);
    bool same = true;
    for (int r = 0; r <= opt.order; ++r)
        same = same && T.prime.C[r] == T.prime_displayed.C[r];
    E.expect(eq["S_star_equals_displayed"], "S(star) equals the displayed prime product", same, true);
    StarProduct back = apply_equivalence(T.S.inverse(), T.prime);
    bool back_ok = true;
    for (int r = 0; r <= opt.order; ++r)
        back_ok = back_ok && back.C[r] == T.star.C[r];
    E.expect(eq["inverse_recovers_star"], "S^{-1}(prime) equals star", back_ok, true);
    d["equivalence"] = eq;

    // the witness pair g = J v, h = u
    Json wit;
    CoeffFn g = CoeffFn::monomial(U, Monomial::unit(J) + Monomial::unit(v));
    CoeffFn h = CoeffFn::monomial(U, Monomial::unit(u));
    FnSeries prod(opt.order, CoeffFn(U));
    bool viol = violates_right_ideal(T.prime, cc, g, h, &prod);
    FnSeries want(opt.order, CoeffFn(U));
    Monomial uv = Monomial::unit(u) + Monomial::unit(v);
    want[0] = CoeffFn::monomial(U, uv + Monomial::unit(J));
    if (opt.order >= 2)
        want[2] = CoeffFn::monomial(U, uv, Scalar(-4));
    wit["g"] = print_terms(g);
    wit["h"] = print_terms(h);
    wit["product"] = show(prod);
    wit["expected"] = show(want);
    E.expect(wit["value_matches"], "witness value (J - 4 nu^2) u v", prod == want, true);
    E.expect(wit["violates_ideal"], "witness leaves the ideal", viol, true);
    d["witness"] = wit;

    // adaptedness, sidedness, projectability
    Json ad, side, proj;
    const std::vector<std::pair<StarProduct *, bool>> projectable_expect = {
        {&T.star, true}, {&T.prime, false}, {&T.second, false}};
    for (auto [S, want_proj] : projectable_expect) {
        Report a = check_adapted(*S, cc);
        Json n;
        n["report"] = a.to_json();
        E.expect(n, S->name + " adapted", a.pass, true, a.order);
        ad[S->name] = n;
        side[S->name] = to_string(check_ideal_sidedness(*S, cc));
        Report pr = check_projectable(*S, cc);
        Json m;
        m["report"] = pr.to_json();
        E.expect(m, S->name + " projectable", pr.pass, want_proj, pr.order);
        proj[S->name] = m;
    }
    d["adapted"] = ad;
    d["sidedness"] = side;
    d["projectable"] = proj;

    // reduction of star against the displayed reduced product
    Json red;
    StarProduct R = reduced_product(T.star, cc);
    Chart rc = Chart::darboux(R.universe(), std::vector<std::pair<std::string, std::string>>{{"u", "p"}});
    StarProduct Rd = build_exponential_star(rc, Ordering::STANDARD, opt.order);
    bool red_ok = R.order() == Rd.order();
    for (int r = 0; red_ok && r <= R.order(); ++r)
        red_ok = R.C[r] == Rd.C[r];
    red["reduced_universe"] = R.universe()->describe();
    E.expect(red["equals_displayed"], "reduced product equals mu o exp(-2 nu dp x dphi)", red_ok, true);
    d["reduction"] = red;

    // idealizers: expected surviving modes
    auto cvars = cc.c_vars();
    auto all = weighted_monomials(*U, cvars, opt.fourier);
    auto pick = [&](auto pred) {
        std::vector<Monomial> out;
        for (auto &m : all)
            if (pred(m))
                out.push_back(m);
        return out;
    };
    struct Case {
        StarProduct *S;
        std::string pattern;
        std::vector<Monomial> mons;
    };
    std::vector<Case> cases = {
        {&T.star, "functions of (u, p)", pick([&](const Monomial &m) { return m[v] == 0; })},
        {&T.prime, "functions of p only", pick([&](const Monomial &m) { return m[v] == 0 && m[u] == 0; })},
        {&T.second, "functions of u only", pick([&](const Monomial &m) { return m[v] == 0 && m[p] == 0; })},
    };
    Json idl;
    for (auto &c : cases) {
        IdealizerResult res = idealizer_commutant(*c.S, cc, opt.fourier);
        Json n;
        n["pattern"] = c.pattern;
        n["pattern_dimension"] = c.mons.size();
        n["result"] = res.to_json(*U);
        bool ok = idealizer_matches(res, c.mons, n);
        E.expect(n, c.S->name + " idealizer pattern", ok, true);
        idl[c.S->name] = n;
    }
    d["idealizer"] = idl;

    // order-zero Deligne representatives; only the (u, v) entry is a class on the torus
    Json del;
    auto sv = T.star.chart.symplectic_vars();
    int iu = (int)(std::find(sv.begin(), sv.end(), u) - sv.begin());
    int iv = (int)(std::find(sv.begin(), sv.end(), v) - sv.begin());
    const std::vector<std::pair<StarProduct *, bool>> class_expect = {
        {&T.star, true}, {&T.prime, true}, {&T.second, false}};
    for (auto [S, want_zero] : class_expect) {
        DeligneResult dr = deligne_order0(*S);
        Json n;
        n["constant"] = dr.constant;
        n["form"] = matrix_json(dr.form);
        n["angle_component"] = dr.form[iu][iv].str();
        E.expect(n, S->name + " angle class vanishes", dr.constant && dr.form[iu][iv].is_zero(), want_zero);
        del[S->name] = n;
    }
    d["deligne"] = del;
    return E.rep;
}

// ================================================================ radial calculus

namespace {

int cmp_scalar(const Scalar &a, const Scalar &b)
{
    int c = cmp(a.re, b.re);
    return c ? c : cmp(a.im, b.im);
}

} // namespace

RadialFn RadialFn::exp(UniverseP U, const Scalar &rate)
{
    RadialFn f(U);
    f.add(CoeffFn::exponential(U, rate));
    return f;
}

RadialFn RadialFn::from(const CoeffFn &f)
{
    RadialFn r(f.universe());
    r.add(f);
    return r;
}

void RadialFn::add(const CoeffFn &f)
{
    if (f.is_zero())
        return;
    if (!U_)
        U_ = f.universe();
    auto it = std::lower_bound(parts_.begin(), parts_.end(), f, [](const CoeffFn &a, const CoeffFn &b) {
        return cmp_scalar(a.exp_rate(), b.exp_rate()) < 0;
    });
    if (it != parts_.end() && it->exp_rate() == f.exp_rate()) {
        *it += f;
        if (it->is_zero())
            parts_.erase(it);
    } else {
        parts_.insert(it, f);
    }
}

RadialFn &RadialFn::operator+=(const RadialFn &o)
{
    for (auto &f : o.parts_)
        add(f);
    return *this;
}

RadialFn &RadialFn::operator-=(const RadialFn &o)
{
    for (auto &f : o.parts_)
        add(-f);
    return *this;
}

RadialFn operator*(const RadialFn &a, const RadialFn &b)
{
    RadialFn r(a.U_);
    for (auto &f : a.parts_)
        for (auto &g : b.parts_)
            r.add(f * g);
    return r;
}

bool RadialFn::operator==(const RadialFn &o) const
{
    return parts_ == o.parts_;
}

std::string RadialFn::str() const
{
    if (parts_.empty())
        return "0";
    std::string s;
    for (auto &f : parts_) {
        if (!s.empty())
            s += " + ";
        s += "e^{" + f.exp_rate().str() + " x}(" + print_terms(f) + ")";
    }
    return s;
}

UniverseP cpn_universe(int N)
{
    return make_universe({{"x", VarKind::Radial}, {"lambda", VarKind::Param}}, N);
}

RadialFn cpn_radial_star(const RadialFn &a, const RadialFn &b)
{
    const UniverseP &U = a.universe() ? a.universe() : b.universe();
    RadialFn out(U);
    if (!U)
        return out;
    int N = U->param_trunc();
    int x = U->radial(), lam = U->at("lambda");
    for (auto &f : a.parts())
        for (auto &g : b.parts()) {
            CoeffFn df = f, dg = g;
            for (int r = 0; r <= N; ++r) {
                CoeffFn w = CoeffFn::monomial(U, Monomial::unit(x, r) + Monomial::unit(lam, r),
                                              Scalar(1) / factorial(r));
                out.add(w * df * dg);
                df = df.derive(x);
                dg = dg.derive(x);
            }
        }
    return out;
}

ScalarSeries series_inverse(const ScalarSeries &a)
{
    if (a[0].is_zero())
        throw AlgebraError("series has no inverse: zero constant term");
    int N = a.order();
    ScalarSeries b(N, Scalar(0));
    b[0] = Scalar(1) / a[0];
    for (int k = 1; k <= N; ++k) {
        Scalar s;
        for (int j = 1; j <= k; ++j)
            s += a[j] * b[k - j];
        b[k] = -s * b[0];
    }
    return b;
}

namespace {

// exponent g(alpha) = sum_m a[m](lambda) alpha^m; apply e_alpha -> e^{x g(alpha)} to x^k e^{alpha0 x}
// through k! [eps^k] exp(x g(alpha0 + eps)), expanded in a scratch polynomial ring
CoeffFn apply_symbol(const UniverseP &U, const std::vector<ScalarSeries> &a, const Scalar &alpha0, int k)
{
    int N = U->param_trunc();
    UniverseP W = poly_universe({"x", "lam", "eps"});
    auto cut = [&](const CoeffFn &f) {
        return f.filter([&](const Monomial &m) { return m[1] <= N && m[2] <= k; });
    };
    // (alpha0 + eps)^m
    CoeffFn base(W);
    base.add_term(Monomial(), alpha0);
    base.add_term(Monomial::unit(2), Scalar(1));
    CoeffFn G(W), pw(W, Scalar(1));
    for (size_t m = 1; m < a.size(); ++m) {
        pw = cut(pw * base);
        CoeffFn am(W);
        for (int l = 0; l <= N && l <= a[m].order(); ++l)
            if (!a[m][l].is_zero())
                am.add_term(Monomial::unit(1, l), a[m][l]);
        G += cut(am * pw);
    }
    Scalar rho = G.coeff(Monomial());
    CoeffFn Y = (G - CoeffFn(W, rho)) * CoeffFn::monomial(W, Monomial::unit(0));
    CoeffFn ex(W, Scalar(1)), term(W, Scalar(1));
    for (int n = 1; n <= N + k; ++n) {
        term = cut(term * Y) * (Scalar(1) / Scalar(n));
        if (term.is_zero())
            break;
        ex += term;
    }
    int x = U->radial(), lam = U->at("lambda");
    CoeffFn poly(U);
    for (auto &[m, c] : ex.terms())
        if (m[2] == k)
            poly.add_term(Monomial::unit(x, m[0]) + Monomial::unit(lam, m[1]), c * factorial(k));
    return CoeffFn::exponential(U, rho) * poly;
}

RadialFn apply_symbol(const RadialFn &f, const std::vector<ScalarSeries> &a)
{
    const UniverseP &U = f.universe();
    RadialFn out(U);
    if (!U)
        return out;
    int x = U->radial(), lam = U->at("lambda");
    for (auto &part : f.parts()) {
        const Scalar &alpha0 = part.exp_rate();
        for (auto &[m, c] : part.terms()) {
            CoeffFn img = apply_symbol(U, a, alpha0, m[x]);
            out.add(img * CoeffFn::monomial(U, Monomial::unit(lam, m[lam]), c));
        }
    }
    return out;
}

int trunc_of(const UniverseP &U)
{
    if (!U || U->flavor() != Flavor::EXPPOLY || U->param_trunc() < 0)
        throw AlgebraError("radial functions need an exponential universe with a lambda truncation");
    return U->param_trunc();
}

} // namespace

RadialFn cpn_SD(const RadialFn &f, const ScalarSeries &D)
{
    int N = trunc_of(f.universe());
    ScalarSeries Dn = D.truncated(N, Scalar(0));
    // D ln(1 + lambda alpha) / lambda
    std::vector<ScalarSeries> a(N + 2, ScalarSeries(N, Scalar(0)));
    for (int m = 1; m <= N + 1; ++m) {
        ScalarSeries e(N, Scalar(0));
        e[m - 1] = Scalar::frac(m % 2 ? 1 : -1, m);
        a[m] = scalar_series_mul(Dn, e);
    }
    return apply_symbol(f, a);
}

RadialFn cpn_SD_inverse(const RadialFn &f, const ScalarSeries &D)
{
    int N = trunc_of(f.universe());
    ScalarSeries Di = series_inverse(D.truncated(N, Scalar(0)));
    // (exp(lambda alpha / D) - 1) / lambda
    std::vector<ScalarSeries> a(N + 2, ScalarSeries(N, Scalar(0)));
    ScalarSeries pw(N, Scalar(0));
    pw[0] = Scalar(1);
    for (int m = 1; m <= N + 1; ++m) {
        pw = scalar_series_mul(pw, Di);
        ScalarSeries e(N, Scalar(0));
        e[m - 1] = Scalar(1) / factorial(m);
        a[m] = scalar_series_mul(pw, e);
    }
    return apply_symbol(f, a);
}

RadialFn cpn_exp_series(UniverseP U, const ScalarSeries &rate)
{
    int N = trunc_of(U);
    std::vector<ScalarSeries> a(2, ScalarSeries(N, Scalar(0)));
    a[1] = rate.truncated(N, Scalar(0));
    return apply_symbol(RadialFn::exp(U, Scalar(1)), a);
}

namespace {

std::string series_str(const ScalarSeries &s)
{
    std::string out;
    for (int k = 0; k <= s.order(); ++k) {
        if (s[k].is_zero())
            continue;
        if (!out.empty())
            out += " + ";
        out += "(" + s[k].str() + ")";
        if (k)
            out += "*lambda" + (k > 1 ? "^" + std::to_string(k) : std::string());
    }
    return out.empty() ? "0" : out;
}

int first_lambda_order(const RadialFn &diff)
{
    int lam = diff.universe()->at("lambda");
    int best = -1;
    for (auto &f : diff.parts())
        for (auto &[m, c] : f.terms())
            if (best < 0 || m[lam] < best)
                best = m[lam];
    return best;
}

} // namespace

Report cpn_check_homomorphism(const ScalarSeries &D, const Scalar &alpha, const Scalar &beta, int N)
{
    UniverseP U = cpn_universe(N);
    Report rep;
    rep.check = "cpn-homomorphism";
    rep.order = N;
    rep.detail["D"] = series_str(D);
    rep.detail["alpha"] = alpha.str();
    rep.detail["beta"] = beta.str();
    RadialFn ea = RadialFn::exp(U, alpha), eb = RadialFn::exp(U, beta);
    RadialFn lhs = cpn_SD(cpn_radial_star(ea, eb), D);
    RadialFn rhs = cpn_SD(ea, D) * cpn_SD(eb, D);
    RadialFn diff = lhs - rhs;
    rep.detail["lhs_terms"] = lhs.parts().empty() ? 0 : lhs.parts()[0].size();
    if (!diff.is_zero())
        rep.fail(first_lambda_order(diff), "S_D(e_a * e_b) - S_D(e_a) S_D(e_b) = " + diff.str());
    return rep;
}

Report cpn_check_inverse(const ScalarSeries &D, const Scalar &alpha, int N)
{
    UniverseP U = cpn_universe(N);
    Report rep;
    rep.check = "cpn-inverse";
    rep.order = N;
    rep.detail["D"] = series_str(D);
    rep.detail["alpha"] = alpha.str();
    RadialFn e = RadialFn::exp(U, alpha);
    RadialFn a = cpn_SD(cpn_SD_inverse(e, D), D) - e;
    RadialFn b = cpn_SD_inverse(cpn_SD(e, D), D) - e;
    if (!a.is_zero())
        rep.fail(first_lambda_order(a), "S_D S_D^{-1} e_a - e_a = " + a.str());
    else if (!b.is_zero())
        rep.fail(first_lambda_order(b), "S_D^{-1} S_D e_a - e_a = " + b.str());
    return rep;
}

Report cpn_check_change(const ScalarSeries &D, const ScalarSeries &Dp, const Scalar &alpha, int N)
{
    UniverseP U = cpn_universe(N);
    Report rep;
    rep.check = "cpn-change-of-transform";
    rep.order = N;
    rep.detail["D"] = series_str(D);
    rep.detail["D_prime"] = series_str(Dp);
    rep.detail["alpha"] = alpha.str();
    ScalarSeries ratio = scalar_series_mul(Dp.truncated(N, Scalar(0)), series_inverse(D.truncated(N, Scalar(0))));
    ScalarSeries rate(N, Scalar(0));
    for (int k = 0; k <= N; ++k)
        rate[k] = ratio[k] * alpha;
    RadialFn got = cpn_SD(cpn_SD_inverse(RadialFn::exp(U, alpha), D), Dp);
    RadialFn diff = got - cpn_exp_series(U, rate);
    if (!diff.is_zero())
        rep.fail(first_lambda_order(diff), "S_D' S_D^{-1} e_a - e_{(D'/D) a} = " + diff.str());
    return rep;
}

Report cpn_report(int N)
{
    Report rep;
    rep.check = "casebook-cpn";
    rep.order = N;
    ScalarSeries one(N, Scalar(0)), onel(N, Scalar(0));
    one[0] = Scalar(1);
    onel[0] = Scalar(1);
    if (N >= 1)
        onel[1] = Scalar(1);
    std::vector<ScalarSeries> Ds = {one, onel};
    std::vector<Scalar> rates = {Scalar(1), Scalar(2)};
    Json cases = Json::array();
    auto take = [&](const Report &r) {
        cases.push_back(r.to_json());
        if (!r.pass)
            rep.fail(r.order, r.check + ": " + r.witness);
    };
    for (auto &D : Ds)
        for (auto &a : rates)
            for (auto &b : rates)
                take(cpn_check_homomorphism(D, a, b, N));
    for (auto &D : Ds)
        for (auto &a : rates)
            take(cpn_check_inverse(D, a, N));
    for (auto &a : rates) {
        take(cpn_check_change(one, onel, a, N));
        take(cpn_check_change(onel, one, a, N));
    }
    rep.detail["checks"] = cases;
    return rep;
}

} // namespace dq

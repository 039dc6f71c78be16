#include "dq/coiso.hpp"
#include "dq/textio.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <tuple>

namespace dq {

// ---------------------------------------------------------------- chart

CoisotropicChart CoisotropicChart::make(UniverseP U, const std::vector<std::pair<std::string, std::string>> &basic,
                                        const std::vector<std::pair<std::string, std::string>> &leaf_transverse)
{
    CoisotropicChart cc;
    std::vector<std::pair<int, int>> pairs;
    for (auto &[q, p] : basic) {
        cc.basic.emplace_back(U->at(q), U->at(p));
        pairs.push_back(cc.basic.back());
    }
    for (auto &[x, y] : leaf_transverse) {
        int xi = U->at(x), yi = U->at(y);
        if (U->periodic(yi))
            throw std::invalid_argument("transverse variables must be polynomial");
        cc.leaf.push_back(xi);
        cc.transverse.push_back(yi);
        pairs.emplace_back(xi, yi);
    }
    cc.chart = Chart::darboux(U, pairs);
    return cc;
}

bool CoisotropicChart::is_transverse(int v) const
{
    return std::find(transverse.begin(), transverse.end(), v) != transverse.end();
}

bool CoisotropicChart::has_transverse(const MultiIndex &I) const
{
    for (int y : transverse)
        if (I.e[y] > 0)
            return true;
    return false;
}

std::vector<int> CoisotropicChart::basic_vars() const
{
    std::vector<int> v;
    for (auto [q, p] : basic) {
        v.push_back(q);
        v.push_back(p);
    }
    std::sort(v.begin(), v.end());
    return v;
}

std::vector<int> CoisotropicChart::c_vars() const
{
    std::vector<int> v;
    for (int i : chart.function_vars())
        if (!is_transverse(i))
            v.push_back(i);
    return v;
}

bool ideal_member(const CoeffFn &f, const CoisotropicChart &cc)
{
    for (auto &[m, c] : f.terms())
        if (!cc.has_transverse(m))
            return false;
    return true;
}

bool series_in_ideal(const FnSeries &f, const CoisotropicChart &cc)
{
    for (int r = 0; r <= f.order(); ++r)
        if (!ideal_member(f[r], cc))
            return false;
    return true;
}

CoeffFn restrict_to_c(const CoeffFn &f, const CoisotropicChart &cc) { return f.restrict_zero(cc.transverse); }

std::vector<CoeffFn> koszul_split(const CoeffFn &g, const CoisotropicChart &cc)
{
    if (!ideal_member(g, cc))
        throw AlgebraError("koszul_split: function is not in the vanishing ideal");
    std::vector<CoeffFn> out(cc.codim(), CoeffFn(g.universe()));
    for (auto &[m, c] : g.terms()) {
        int total = 0;
        for (int y : cc.transverse)
            total += m.e[y];
        for (int i = 0; i < cc.codim(); ++i) {
            int y = cc.transverse[i];
            if (!m.e[y])
                continue;
            Monomial n = m;
            n.set(y, m.e[y] - 1);
            out[i].add_term(n, c * Scalar(mpq_class(m.e[y], total)));
        }
    }
    return out;
}

// ---------------------------------------------------------------- adaptedness

int adapted_through(const StarProduct &S, const CoisotropicChart &cc, std::string *witness)
{
    const auto &U = *S.universe();
    for (int r = 0; r <= S.order(); ++r)
        for (auto &[k, c] : S.C[r].terms())
            if (cc.has_transverse(k.second) && !restrict_to_c(c, cc).is_zero()) {
                if (witness)
                    *witness = "order " + std::to_string(r) + ", term D[" + print_monomial(U, k.first) + " | " +
                               print_monomial(U, k.second) + "] with restricted coefficient " +
                               print_terms(restrict_to_c(c, cc));
                return r - 1;
            }
    return S.order();
}

Report check_adapted(const StarProduct &S, const CoisotropicChart &cc)
{
    Report rep;
    rep.check = "adapted";
    std::string w;
    int a = adapted_through(S, cc, &w);
    rep.detail["product"] = S.name;
    rep.detail["adapted_through"] = a;
    if (a < S.order())
        rep.fail(a + 1, w);
    else
        rep.order = a;
    return rep;
}

const char *to_string(Sidedness s)
{
    switch (s) {
    case Sidedness::LEFT: return "LEFT";
    case Sidedness::RIGHT: return "RIGHT";
    case Sidedness::TWO_SIDED: return "TWO_SIDED";
    case Sidedness::NEITHER: return "NEITHER";
    case Sidedness::NOT_SUBALGEBRA: return "NOT_SUBALGEBRA";
    }
    return "?";
}

Sidedness check_ideal_sidedness(const StarProduct &S, const CoisotropicChart &cc)
{
    bool left = true, right = true, sub = true;
    for (int r = 0; r <= S.order(); ++r)
        for (auto &[k, c] : S.C[r].terms()) {
            bool ti = cc.has_transverse(k.first), tj = cc.has_transverse(k.second);
            if (!ti && !tj)
                continue;
            if (restrict_to_c(c, cc).is_zero())
                continue;
            if (tj)
                left = false;
            if (ti)
                right = false;
            if (ti && tj)
                sub = false;
        }
    if (left && right)
        return Sidedness::TWO_SIDED;
    if (left)
        return Sidedness::LEFT;
    if (right)
        return Sidedness::RIGHT;
    return sub ? Sidedness::NEITHER : Sidedness::NOT_SUBALGEBRA;
}

// ---------------------------------------------------------------- projectability

static bool basic_restriction(const CoeffFn &f, const CoisotropicChart &cc)
{
    CoeffFn r = restrict_to_c(f, cc);
    for (int x : cc.leaf)
        if (r.depends_on(x))
            return false;
    return true;
}

bool violates_right_ideal(const StarProduct &S, const CoisotropicChart &cc, const CoeffFn &g, const CoeffFn &h,
                          FnSeries *product)
{
    FnSeries gh = S.apply(g, h);
    if (product)
        *product = gh;
    return !series_in_ideal(gh, cc);
}

Report check_projectable(const StarProduct &S, const CoisotropicChart &cc, int D)
{
    Report rep;
    rep.check = "projectable";
    const UniverseP &U = S.universe();
    if (D < 0) {
        int coef = 0;
        for (auto &c : S.C)
            for (auto &[k, f] : c.terms())
                for (auto &[m, x] : f.terms())
                    coef = std::max(coef, m.weight());
        D = S.max_derivative_order() + coef + 1;
    }
    rep.detail["product"] = S.name;
    rep.detail["degree_bound"] = D;
    std::vector<CoeffFn> basic, ideal;
    for (auto &m : weighted_monomials(*U, cc.basic_vars(), D))
        basic.push_back(CoeffFn::monomial(U, m));
    for (auto &m : weighted_monomials(*U, cc.chart.function_vars(), D))
        if (cc.has_transverse(m))
            ideal.push_back(CoeffFn::monomial(U, m));
    std::vector<CoeffFn> normalizer = basic;
    normalizer.insert(normalizer.end(), ideal.begin(), ideal.end());
    auto first_bad = [](const FnSeries &s, auto pred) {
        for (int r = 0; r <= s.order(); ++r)
            if (!pred(s[r]))
                return r;
        return -1;
    };
    auto in_ideal = [&](const CoeffFn &f) { return ideal_member(f, cc); };
    auto in_norm = [&](const CoeffFn &f) { return basic_restriction(f, cc); };
    // I * N and N * I inside I
    for (auto &g : ideal)
        for (auto &h : normalizer) {
            int r = first_bad(S.apply(g, h), in_ideal);
            if (r >= 0) {
                rep.fail(r, "g=" + print_terms(g) + " in I, h=" + print_terms(h) + " in N: g*h not in I");
                return rep;
            }
            r = first_bad(S.apply(h, g), in_ideal);
            if (r >= 0) {
                rep.fail(r, "h=" + print_terms(h) + " in N, g=" + print_terms(g) + " in I: h*g not in I");
                return rep;
            }
        }
    // N closed
    for (auto &a : basic)
        for (auto &b : basic) {
            int r = first_bad(S.apply(a, b), in_norm);
            if (r >= 0) {
                rep.fail(r, "f1=" + print_terms(a) + ", f2=" + print_terms(b) + ": product leaves N");
                return rep;
            }
        }
    rep.order = S.order();
    return rep;
}

// ---------------------------------------------------------------- representations

Representation canonical_representation(const StarProduct &S, const CoisotropicChart &cc)
{
    std::string w;
    if (adapted_through(S, cc, &w) < S.order())
        throw AlgebraError("canonical representation requires an adapted product: " + w);
    Representation rho;
    rho.U = S.universe();
    rho.transverse = cc.transverse;
    for (auto &c : S.C) {
        BiDiffOp R(rho.U);
        for (auto &[k, f] : c.terms())
            if (!cc.has_transverse(k.second))
                R.add(k.first, k.second, restrict_to_c(f, cc));
        rho.R.push_back(R);
    }
    return rho;
}

NormalizedRep normalize_representation(const Representation &rho, const StarProduct &S, const CoisotropicChart &cc)
{
    const UniverseP &U = S.universe();
    int N = S.order();
    if (rho.order() != N)
        throw AlgebraError("representation order mismatch");
    if (rho.R[0] != BiDiffOp::product(U))
        throw AlgebraError("representation does not deform the restriction map at order 0");
    NormalizedRep out;
    out.T = EquivalenceTransform::identity(U, N);
    for (int r = 1; r <= N; ++r)
        for (auto &[k, c] : rho.R[r].terms())
            if (k.second.is_one()) {
                if (k.first.is_one())
                    throw AlgebraError("rho(1) is not the identity");
                out.T.S[r].add(k.first, c);
            }
    out.S = apply_equivalence(out.T, S);
    EquivalenceTransform Ti = out.T.inverse();
    out.rho.U = U;
    out.rho.transverse = cc.transverse;
    out.rho.R.assign(N + 1, BiDiffOp(U));
    DiffOp id = DiffOp::identity(U);
    for (int a = 0; a <= N; ++a)
        for (int b = 0; a + b <= N; ++b) {
            if (rho.R[a].is_zero() || Ti.S[b].is_zero())
                continue;
            out.rho.R[a + b] += compose(rho.R[a], Ti.S[b], id).restrict_coeffs(cc.transverse);
        }
    return out;
}

// ---------------------------------------------------------------- obstructions

bool ObstructionCocycle::is_zero() const
{
    for (auto &row : beta)
        for (auto &f : row)
            if (!f.is_zero())
                return false;
    return true;
}

ObstructionCocycle obstruction_cocycle(const StarProduct &S, const CoisotropicChart &cc, int r)
{
    if (r + 1 > S.order())
        throw AlgebraError("obstruction order exceeds truncation");
    if (adapted_through(S, cc) < r)
        throw AlgebraError("obstruction_cocycle: product is not adapted through order " + std::to_string(r));
    const UniverseP &U = S.universe();
    int k = cc.codim();
    ObstructionCocycle oc;
    oc.order = r + 1;
    oc.beta.assign(k, std::vector<CoeffFn>(k, CoeffFn(U)));
    const BiDiffOp &C = S.C[r + 1];
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            CoeffFn yi = CoeffFn::monomial(U, Monomial::unit(cc.transverse[i]));
            CoeffFn yj = CoeffFn::monomial(U, Monomial::unit(cc.transverse[j]));
            oc.beta[i][j] = restrict_to_c(C.apply(yi, yj) - C.apply(yj, yi), cc);
        }
    return oc;
}

namespace {

struct Panel {
    const CoisotropicChart &cc;
    std::mt19937 rng;
    std::vector<Monomial> mons;
    Panel(const CoisotropicChart &c, unsigned seed) : cc(c), rng(seed)
    {
        mons = weighted_monomials(*cc.U(), cc.chart.function_vars(), 2);
    }
    CoeffFn poly(int terms)
    {
        CoeffFn f(cc.U());
        std::uniform_int_distribution<int> pick(0, (int)mons.size() - 1), val(-3, 3);
        for (int t = 0; t < terms; ++t)
            f.add_term(mons[pick(rng)], Scalar(val(rng)));
        return f;
    }
    CoeffFn ideal(int terms)
    {
        CoeffFn g(cc.U());
        for (int y : cc.transverse)
            g += CoeffFn::monomial(cc.U(), Monomial::unit(y)) * poly(terms);
        if (g.is_zero())
            g = CoeffFn::monomial(cc.U(), Monomial::unit(cc.transverse[0]));
        return g;
    }
};

} // namespace

Report check_cocycle_identities(const StarProduct &S, const CoisotropicChart &cc, int r, int panel, unsigned seed)
{
    Report rep;
    rep.check = "cocycle_identities";
    rep.detail["order"] = r + 1;
    rep.detail["panel"] = panel;
    rep.detail["seed"] = seed;
    if (adapted_through(S, cc) < r)
        throw AlgebraError("cocycle identities need a product adapted through order " + std::to_string(r));
    const BiDiffOp &C = S.C[r + 1];
    auto B = [&](const CoeffFn &f, const CoeffFn &g) { return restrict_to_c(C.apply(f, g), cc); };
    auto Bm = [&](const CoeffFn &f, const CoeffFn &g) { return B(f, g) - B(g, f); };
    auto X = [&](const CoeffFn &g, const CoeffFn &phi) { return restrict_to_c(cc.chart.bracket(phi, g), cc); };
    Panel P(cc, seed);
    for (int n = 0; n < panel; ++n) {
        CoeffFn f1 = P.poly(3), f2 = P.poly(3), f = P.poly(2);
        CoeffFn g1 = P.ideal(2), g2 = P.ideal(2), g3 = P.ideal(2), g = P.ideal(2);
        std::string tag = "instance " + std::to_string(n) + ": ";
        CoeffFn e1 = restrict_to_c(f1, cc) * B(f2, g) - B(f1 * f2, g) + B(f1, f2 * g);
        if (!e1.is_zero()) {
            rep.fail(r + 1, tag + "identity 1 residual " + print_terms(e1));
            return rep;
        }
        CoeffFn a = Bm(f * g1, g2), b = Bm(g1, f * g2), c = restrict_to_c(f, cc) * Bm(g1, g2);
        if (a != c || b != c) {
            rep.fail(r + 1, tag + "identity 2 violated");
            return rep;
        }
        CoeffFn e3 = Bm(g1 * g2, g3);
        if (!e3.is_zero()) {
            rep.fail(r + 1, tag + "identity 3 residual " + print_terms(e3));
            return rep;
        }
        const Chart &ch = cc.chart;
        CoeffFn e4 = -X(g1, Bm(g2, g3)) - X(g2, Bm(g3, g1)) - X(g3, Bm(g1, g2)) - Bm(ch.bracket(g1, g2), g3) -
                     Bm(ch.bracket(g2, g3), g1) - Bm(ch.bracket(g3, g1), g2);
        if (!e4.is_zero()) {
            rep.fail(r + 1, tag + "identity 4 residual " + print_terms(e4));
            return rep;
        }
    }
    rep.order = r + 1;
    return rep;
}

// ---------------------------------------------------------------- vertical forms

VerticalForm vertical_d(const VerticalForm &w, const CoisotropicChart &cc)
{
    int k = (int)cc.leaf.size();
    const UniverseP &U = cc.U();
    VerticalForm out;
    if (w.degree == 1) {
        out.degree = 2;
        out.two.assign(k, std::vector<CoeffFn>(k, CoeffFn(U)));
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                out.two[i][j] = w.one[j].derive(cc.leaf[i]) - w.one[i].derive(cc.leaf[j]);
        return out;
    }
    // degree 3, stored flattened into `two` rows: index i*k + j, column l
    out.degree = 3;
    out.two.assign(k * k, std::vector<CoeffFn>(k, CoeffFn(U)));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            for (int l = 0; l < k; ++l)
                out.two[i * k + j][l] = w.two[j][l].derive(cc.leaf[i]) + w.two[l][i].derive(cc.leaf[j]) +
                                        w.two[i][j].derive(cc.leaf[l]);
    return out;
}

bool vertical_equal(const VerticalForm &a, const VerticalForm &b)
{
    return a.degree == b.degree && a.one == b.one && a.two == b.two;
}

static bool vertical_zero(const VerticalForm &w)
{
    for (auto &f : w.one)
        if (!f.is_zero())
            return false;
    for (auto &row : w.two)
        for (auto &f : row)
            if (!f.is_zero())
                return false;
    return true;
}

VerticalForm vertical_primitive(const VerticalForm &beta, const CoisotropicChart &cc)
{
    if (beta.degree != 2)
        throw AlgebraError("vertical_primitive expects a 2-form");
    int k = (int)cc.leaf.size();
    const UniverseP &U = cc.U();
    for (int x : cc.leaf)
        if (U->periodic(x))
            for (auto &row : beta.two)
                for (auto &f : row)
                    if (f.depends_on(x))
                        throw AlgebraError("vertical_primitive supports polynomial leaf variables only");
    if (!vertical_zero(vertical_d(beta, cc)))
        throw AlgebraError("vertical_primitive: form is not closed");
    // gamma_j = sum_i x^i int_0^1 t beta_ij(t x) dt (homotopy along leaf coordinates)
    VerticalForm g;
    g.degree = 1;
    g.one.assign(k, CoeffFn(U));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            for (auto &[m, c] : beta.two[i][j].terms()) {
                int w = 0;
                for (int x : cc.leaf)
                    w += m.e[x];
                Monomial n = m;
                n.set(cc.leaf[i], m.e[cc.leaf[i]] + 1);
                g.one[j].add_term(n, c * Scalar(mpq_class(1, w + 2)));
            }
    if (!vertical_equal(vertical_d(g, cc), beta))
        throw AlgebraError("vertical_primitive: homotopy check failed");
    return g;
}

// ---------------------------------------------------------------- adaptation

static std::string fn_matrix_str(const FnMatrix &m)
{
    std::string s = "[";
    for (size_t i = 0; i < m.size(); ++i) {
        s += i ? "; " : "";
        for (size_t j = 0; j < m[i].size(); ++j)
            s += (j ? ", " : "") + print_terms(m[i][j]);
    }
    return s + "]";
}

AdaptResult adapt(const StarProduct &S0, const CoisotropicChart &cc)
{
    AdaptResult res;
    const UniverseP &U = S0.universe();
    int N = S0.order();
    res.S = S0;
    res.T = EquivalenceTransform::identity(U, N);
    auto step = [&](int order, const DiffOp &X) {
        EquivalenceTransform t = EquivalenceTransform::identity(U, N);
        t.S[order] = X;
        res.S = apply_equivalence(t, res.S);
        res.T = res.T.then(t);
    };
    res.adapted_after_step.push_back(std::min(adapted_through(res.S, cc), 0));
    for (int r = 0; r < N; ++r) {
        Json entry;
        entry["order"] = r + 1;
        if (adapted_through(res.S, cc) >= r + 1) {
            entry["action"] = "already adapted";
            res.log.push_back(entry);
            res.adapted_after_step.push_back(adapted_through(res.S, cc) >= r + 1 ? r + 1 : r);
            continue;
        }
        // antisymmetric part: beta_{r+1} = d_v gamma, corrected by -1/2 gamma^i d/dy_i at order r
        ObstructionCocycle oc = obstruction_cocycle(res.S, cc, r);
        entry["obstruction_matrix"] = fn_matrix_str(oc.beta);
        entry["primitive_found"] = true;
        if (!oc.is_zero()) {
            VerticalForm beta;
            beta.degree = 2;
            beta.two = oc.beta;
            VerticalForm gamma;
            try {
                gamma = vertical_primitive(beta, cc);
            } catch (const AlgebraError &e) {
                entry["primitive_found"] = false;
                entry["error"] = e.what();
                res.log.push_back(entry);
                res.success = false;
                res.certificate = oc.beta;
                return res;
            }
            if (r == 0)
                throw AlgebraError("nonzero first-order obstruction: chart is not coisotropic for this product");
            DiffOp X(U);
            for (int i = 0; i < cc.codim(); ++i)
                X.add(Monomial::unit(cc.transverse[i]), gamma.one[i] * Scalar::frac(-1, 2));
            step(r, X);
            entry["antisymmetric_correction"] = print_diffop(X);
            if (!obstruction_cocycle(res.S, cc, r).is_zero())
                throw AlgebraError("antisymmetric correction did not remove the obstruction");
        }
        // symmetric part: T_{r+1} = - prolongation of g -> sum_i i*C_{r+1}(g^i, y_i)
        DiffOp T(U);
        for (auto &[k, c] : res.S.C[r + 1].terms()) {
            for (int i = 0; i < cc.codim(); ++i) {
                int y = cc.transverse[i];
                if (k.second != Monomial::unit(y))
                    continue;
                int ydeg = 0;
                for (int t : cc.transverse)
                    ydeg += k.first.e[t];
                MultiIndex I = k.first;
                I.set(y, I.e[y] + 1);
                T.add(I, restrict_to_c(c, cc) * Scalar(mpq_class(-1, ydeg + 1)));
            }
        }
        if (!T.is_zero())
            step(r + 1, T);
        entry["symmetric_correction"] = print_diffop(T);
        int a = adapted_through(res.S, cc);
        entry["adapted_through"] = a;
        res.log.push_back(entry);
        res.adapted_after_step.push_back(a);
        if (a < r + 1) {
            res.success = false;
            return res;
        }
    }
    return res;
}

// ---------------------------------------------------------------- reduction

StarProduct reduced_product(const StarProduct &S, const CoisotropicChart &cc)
{
    const UniverseP &U = S.universe();
    auto bv = cc.basic_vars();
    std::vector<Var> vars;
    for (int v : bv)
        vars.push_back(U->var(v));
    UniverseP R = make_universe(vars);
    std::vector<std::pair<std::string, std::string>> pairs;
    for (auto [q, p] : cc.basic)
        pairs.emplace_back(U->var(q).name, U->var(p).name);
    StarProduct out;
    out.chart = Chart::darboux(R, pairs);
    out.name = S.name + "-red";
    auto only_basic = [&](const MultiIndex &I) {
        for (int v = 0; v < U->size(); ++v)
            if (I.e[v] && std::find(bv.begin(), bv.end(), v) == bv.end())
                return false;
        return true;
    };
    for (int r = 0; r <= S.order(); ++r) {
        BiDiffOp B(U);
        for (auto &[k, c] : S.C[r].terms()) {
            if (!only_basic(k.first) || !only_basic(k.second))
                continue;
            CoeffFn rc = restrict_to_c(c, cc);
            for (int x : cc.leaf)
                if (rc.depends_on(x))
                    throw AlgebraError("restriction is not basic at order " + std::to_string(r) + ": term D[" +
                                       print_monomial(*U, k.first) + " | " + print_monomial(*U, k.second) +
                                       "] coefficient " + print_terms(rc));
            B.add(k.first, k.second, rc);
        }
        out.C.push_back(B.remap(R));
    }
    return out;
}

// ---------------------------------------------------------------- idealizer

Json IdealizerResult::to_json(const Universe &U) const
{
    Json j;
    j["truncation"] = truncation;
    j["degree_bound"] = degree_bound;
    j["unknowns"] = unknowns;
    j["solution_dim"] = solution_dim;
    Json orders = Json::array();
    for (size_t k = 0; k < certified.size(); ++k) {
        Json o;
        o["order"] = k;
        o["dimension"] = certified[k].size();
        Json sup = Json::array();
        for (auto &m : support[k]) {
            std::string s = print_monomial(U, m);
            sup.push_back(s.empty() ? "1" : s);
        }
        o["support"] = sup;
        orders.push_back(o);
    }
    j["certified_orders"] = orders;
    return j;
}

IdealizerResult idealizer_commutant(const StarProduct &S, const CoisotropicChart &cc, int D)
{
    std::string w;
    if (adapted_through(S, cc, &w) < S.order())
        throw AlgebraError("idealizer requires an adapted product: " + w);
    const UniverseP &U = S.universe();
    int N = S.order();
    IdealizerResult res;
    res.truncation = N;
    res.degree_bound = D;
    auto basis = weighted_monomials(*U, cc.c_vars(), D);
    int nb = (int)basis.size();
    // L^r_i = sum_J i*c_{e_{y_i}, J} d^J  (J tangential)
    std::vector<std::vector<DiffOp>> L(N + 1, std::vector<DiffOp>(cc.codim(), DiffOp(U)));
    for (int r = 1; r <= N; ++r)
        for (auto &[k, c] : S.C[r].terms())
            for (int i = 0; i < cc.codim(); ++i)
                if (k.first == Monomial::unit(cc.transverse[i]) && !cc.has_transverse(k.second))
                    L[r][i].add(k.second, restrict_to_c(c, cc));
    int nk = std::max(N, 1);
    res.unknowns = nk * nb;
    std::map<std::tuple<int, int, Monomial>, SparseRow> rows;
    for (int kk = 0; kk < N; ++kk)
        for (int b = 0; b < nb; ++b) {
            CoeffFn h = CoeffFn::monomial(U, basis[b]);
            for (int m = kk + 1; m <= N; ++m)
                for (int i = 0; i < cc.codim(); ++i) {
                    CoeffFn img = L[m - kk][i].apply(h);
                    for (auto &[mono, c] : img.terms())
                        rows[{m, i, mono}][kk * nb + b] += c;
                }
        }
    std::vector<SparseRow> eqs;
    for (auto &[key, row] : rows)
        eqs.push_back(row);
    auto null = nullspace(eqs, res.unknowns);
    res.solution_dim = (int)null.size();
    int certified = N >= 2 ? N - 1 : (N == 0 ? 1 : 0);
    for (int kk = 0; kk < certified; ++kk) {
        std::vector<SparseRow> proj;
        for (auto &v : null) {
            SparseRow p;
            for (auto &[col, x] : v)
                if (col / nb == kk)
                    p[col % nb] = x;
            if (!p.empty())
                proj.push_back(p);
        }
        auto rref = row_reduce(proj);
        std::vector<CoeffFn> fs;
        std::set<Monomial> sup;
        for (auto &row : rref) {
            CoeffFn f(U);
            for (auto &[col, x] : row) {
                f.add_term(basis[col], x);
                sup.insert(basis[col]);
            }
            fs.push_back(f);
        }
        res.certified.push_back(fs);
        res.support.emplace_back(sup.begin(), sup.end());
    }
    return res;
}

FnSeries commutant_apply(const StarProduct &S, const CoisotropicChart &cc, const FnSeries &h, const CoeffFn &phi)
{
    FnSeries out = S.apply(S.lift(phi), h);
    for (int r = 0; r <= out.order(); ++r)
        out[r] = restrict_to_c(out[r], cc);
    return out;
}

} // namespace dq

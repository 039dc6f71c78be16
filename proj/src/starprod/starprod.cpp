#include "dq/starprod.hpp"
#include "dq/textio.hpp"

#include <algorithm>
#include <thread>
#include <unordered_map>

namespace dq {

// ---------------------------------------------------------------- chart

Chart Chart::darboux(UniverseP U, const std::vector<std::pair<std::string, std::string>> &pairs)
{
    std::vector<std::pair<int, int>> idx;
    for (auto &[q, p] : pairs)
        idx.emplace_back(U->at(q), U->at(p));
    return darboux(U, idx);
}

Chart Chart::darboux(UniverseP U, const std::vector<std::pair<int, int>> &pairs)
{
    Chart c;
    c.U = U;
    c.pairs = pairs;
    int n = U->size();
    c.P.assign(n, std::vector<Scalar>(n));
    std::vector<char> used(n, 0);
    for (auto [q, p] : pairs) {
        if (q == p || used[q] || used[p])
            throw std::invalid_argument("conjugate pairs must use distinct variables");
        if (U->var(q).kind == VarKind::Param || U->var(p).kind == VarKind::Param)
            throw std::invalid_argument("parameters cannot be conjugate variables");
        used[q] = used[p] = 1;
        c.P[q][p] = Scalar(1);
        c.P[p][q] = Scalar(-1);
    }
    return c;
}

std::vector<int> Chart::function_vars() const
{
    std::vector<int> v;
    for (int i = 0; i < U->size(); ++i)
        if (U->var(i).kind != VarKind::Param)
            v.push_back(i);
    return v;
}

std::vector<int> Chart::symplectic_vars() const
{
    std::vector<int> v;
    for (auto [q, p] : pairs) {
        v.push_back(q);
        v.push_back(p);
    }
    std::sort(v.begin(), v.end());
    return v;
}

BiDiffOp Chart::poisson_op() const
{
    BiDiffOp b(U);
    if (!Pfn.empty()) {
        for (int i = 0; i < U->size(); ++i)
            for (int j = 0; j < U->size(); ++j)
                b.add(Monomial::unit(i), Monomial::unit(j), Pfn[i][j]);
        return b;
    }
    for (int i = 0; i < U->size(); ++i)
        for (int j = 0; j < U->size(); ++j)
            if (!P[i][j].is_zero())
                b.add(Monomial::unit(i), Monomial::unit(j), CoeffFn(U, P[i][j]));
    return b;
}

CoeffFn Chart::bracket(const CoeffFn &f, const CoeffFn &g) const { return poisson_op().apply(f, g); }

Chart Chart::negated() const
{
    Chart c = *this;
    for (auto &pr : c.pairs)
        std::swap(pr.first, pr.second);
    for (auto &row : c.P)
        for (auto &x : row)
            x = -x;
    for (auto &row : c.Pfn)
        for (auto &x : row)
            x = -x;
    return c;
}

// ---------------------------------------------------------------- star products

FnSeries StarProduct::apply(const FnSeries &f, const FnSeries &g) const
{
    int N = order();
    if (f.order() != N || g.order() != N)
        throw AlgebraError("series order does not match the star product");
    FnSeries out(N, CoeffFn(universe()));
    for (int b = 0; b <= N; ++b) {
        if (f[b].is_zero())
            continue;
        for (int c = 0; b + c <= N; ++c) {
            if (g[c].is_zero())
                continue;
            for (int a = 0; a + b + c <= N; ++a)
                out[a + b + c] += C[a].apply(f[b], g[c]);
        }
    }
    return out;
}

FnSeries StarProduct::apply(const CoeffFn &f, const CoeffFn &g) const
{
    FnSeries out(order(), CoeffFn(universe()));
    for (int a = 0; a <= order(); ++a)
        out[a] = C[a].apply(f, g);
    return out;
}

int StarProduct::max_derivative_order() const
{
    int k = 0;
    for (auto &c : C)
        k = std::max(k, c.max_order());
    return k;
}

StarProduct pointwise_product(const Chart &chart, int N)
{
    StarProduct S;
    S.chart = chart;
    S.name = "pointwise";
    S.C.assign(N + 1, BiDiffOp(chart.U));
    S.C[0] = BiDiffOp::product(chart.U);
    return S;
}

StarProduct exponential_of_generator(const Chart &chart, const std::vector<BiDiffOp> &G, int N, std::string name)
{
    for (auto &g : G)
        if (!g.constant_coefficients())
            throw AlgebraError("exponential generator must have constant coefficients");
    std::vector<BiDiffOp> X(N + 1, BiDiffOp(chart.U));
    for (int k = 1; k <= N && k < (int)G.size(); ++k)
        X[k] = G[k];
    std::vector<BiDiffOp> out(N + 1, BiDiffOp(chart.U)), power(N + 1, BiDiffOp(chart.U));
    power[0] = BiDiffOp::product(chart.U);
    out[0] = power[0];
    for (int m = 1; m <= N; ++m) {
        std::vector<BiDiffOp> next(N + 1, BiDiffOp(chart.U));
        for (int a = 0; a <= N; ++a)
            if (!power[a].is_zero())
                for (int k = 1; a + k <= N; ++k)
                    if (!X[k].is_zero())
                        next[a + k] += symbol_product(power[a], X[k]);
        power.swap(next);
        Scalar inv = Scalar(1) / factorial(m);
        for (int r = 0; r <= N; ++r)
            if (!power[r].is_zero())
                out[r] += power[r] * inv;
    }
    StarProduct S;
    S.chart = chart;
    S.C = std::move(out);
    S.name = std::move(name);
    return S;
}

StarProduct build_exponential_star(const Chart &chart, Ordering ordering, int N)
{
    if (chart.pairs.empty())
        throw std::invalid_argument("chart has no conjugate pairs");
    BiDiffOp G(chart.U);
    if (ordering == Ordering::STANDARD) {
        for (auto [q, p] : chart.pairs)
            G.add(Monomial::unit(p), Monomial::unit(q), CoeffFn(chart.U, Scalar(-2)));
    } else {
        G = chart.poisson_op();
    }
    return exponential_of_generator(chart, {BiDiffOp(chart.U), G}, N,
                                    ordering == Ordering::STANDARD ? "standard" : "weyl");
}

StarProduct opposite_star(const StarProduct &S)
{
    StarProduct O;
    O.chart = S.chart.negated();
    O.name = S.name + "-opp";
    for (auto &c : S.C)
        O.C.push_back(c.swapped());
    return O;
}

StarProduct truncate_star(const StarProduct &S, int N)
{
    StarProduct T = S;
    T.C.resize(N + 1, BiDiffOp(S.universe()));
    return T;
}

StarProduct tensor_star(const StarProduct &S1, const StarProduct &S2)
{
    if (S1.order() != S2.order())
        throw AlgebraError("tensor product of products with different orders");
    std::vector<Var> vars = S1.universe()->vars();
    for (auto &v : S2.universe()->vars()) {
        if (S1.universe()->index(v.name) >= 0)
            throw AlgebraError("variable collision in tensor product: " + v.name);
        vars.push_back(v);
    }
    UniverseP U = make_universe(vars);
    std::vector<std::pair<int, int>> pairs;
    for (auto [q, p] : S1.chart.pairs)
        pairs.emplace_back(U->at(S1.universe()->var(q).name), U->at(S1.universe()->var(p).name));
    for (auto [q, p] : S2.chart.pairs)
        pairs.emplace_back(U->at(S2.universe()->var(q).name), U->at(S2.universe()->var(p).name));
    StarProduct T;
    T.chart = Chart::darboux(U, pairs);
    // keep the exact Poisson tensors (the opposite of a Darboux chart is still Darboux up to order)
    auto embed = [&](const Chart &c) {
        for (int i = 0; i < c.U->size(); ++i)
            for (int j = 0; j < c.U->size(); ++j)
                T.chart.P[U->at(c.U->var(i).name)][U->at(c.U->var(j).name)] = c.P[i][j];
    };
    embed(S1.chart);
    embed(S2.chart);
    T.name = S1.name + "(x)" + S2.name;
    int N = S1.order();
    T.C.assign(N + 1, BiDiffOp(U));
    std::vector<BiDiffOp> A, B;
    for (auto &c : S1.C)
        A.push_back(c.remap(U));
    for (auto &c : S2.C)
        B.push_back(c.remap(U));
    for (int s = 0; s <= N; ++s)
        for (int t = 0; s + t <= N; ++t)
            for (auto &[k1, c1] : A[s].terms())
                for (auto &[k2, c2] : B[t].terms())
                    T.C[s + t].add(k1.first + k2.first, k1.second + k2.second, c1 * c2);
    return T;
}

// ---------------------------------------------------------------- equivalences

EquivalenceTransform EquivalenceTransform::identity(UniverseP U, int N)
{
    EquivalenceTransform T;
    T.S.assign(N + 1, DiffOp(U));
    T.S[0] = DiffOp::identity(U);
    return T;
}

bool EquivalenceTransform::valid() const
{
    if (S.empty() || !S[0].universe() || S[0] != DiffOp::identity(S[0].universe()))
        return false;
    for (size_t r = 1; r < S.size(); ++r)
        if (!S[r].kills_constants())
            return false;
    return true;
}

static std::vector<DiffOp> series_compose(const std::vector<DiffOp> &a, const std::vector<DiffOp> &b, UniverseP U)
{
    int N = (int)a.size() - 1;
    std::vector<DiffOp> out(N + 1, DiffOp(U));
    for (int i = 0; i <= N; ++i)
        for (int j = 0; i + j <= N; ++j)
            if (!a[i].is_zero() && !b[j].is_zero())
                out[i + j] += compose(a[i], b[j]);
    return out;
}

EquivalenceTransform EquivalenceTransform::inverse() const
{
    if (!valid())
        throw AlgebraError("equivalence transform must start with the identity");
    UniverseP U = S[0].universe();
    int N = order();
    // T = id + X, T^{-1} = sum_k (-X)^k
    std::vector<DiffOp> minusX(N + 1, DiffOp(U));
    for (int r = 1; r <= N; ++r)
        minusX[r] = -S[r];
    EquivalenceTransform inv = identity(U, N);
    std::vector<DiffOp> power = inv.S;
    for (int k = 1; k <= N; ++k) {
        power = series_compose(power, minusX, U);
        for (int r = 0; r <= N; ++r)
            inv.S[r] += power[r];
    }
    return inv;
}

EquivalenceTransform EquivalenceTransform::then(const EquivalenceTransform &next) const
{
    EquivalenceTransform T;
    T.S = series_compose(next.S, S, S[0].universe());
    return T;
}

FnSeries EquivalenceTransform::apply(const FnSeries &f) const
{
    int N = order();
    FnSeries out(N, CoeffFn(f[0].universe()));
    for (int a = 0; a <= N; ++a)
        for (int b = 0; a + b <= N; ++b)
            if (!f[b].is_zero())
                out[a + b] += S[a].apply(f[b]);
    return out;
}

StarProduct apply_equivalence(const EquivalenceTransform &T, const StarProduct &S)
{
    if (T.order() != S.order())
        throw AlgebraError("equivalence order mismatch");
    if (!T.valid())
        throw AlgebraError("equivalence transform is not invertible (order-0 term must be the identity)");
    UniverseP U = S.universe();
    int N = S.order();
    EquivalenceTransform Ti = T.inverse();
    // R_m = sum_{b+c+d=m} C_b o (Ti_c x Ti_d)
    std::vector<BiDiffOp> R(N + 1, BiDiffOp(U));
    for (int b = 0; b <= N; ++b)
        for (int c = 0; b + c <= N; ++c)
            for (int d = 0; b + c + d <= N; ++d) {
                if (S.C[b].is_zero() || Ti.S[c].is_zero() || Ti.S[d].is_zero())
                    continue;
                if (c == 0 && d == 0)
                    R[b] += S.C[b];
                else
                    R[b + c + d] += compose(S.C[b], Ti.S[c], Ti.S[d]);
            }
    StarProduct out;
    out.chart = S.chart;
    out.name = S.name + "'";
    out.C.assign(N + 1, BiDiffOp(U));
    for (int a = 0; a <= N; ++a)
        for (int m = 0; a + m <= N; ++m) {
            if (T.S[a].is_zero() || R[m].is_zero())
                continue;
            if (a == 0)
                out.C[m] += R[m];
            else
                out.C[a + m] += compose(T.S[a], R[m]);
        }
    return out;
}

// ---------------------------------------------------------------- axiom checker

std::vector<Monomial> test_monomials(const Chart &chart, const std::vector<int> &vars, int D)
{
    return weighted_monomials(*chart.U, vars, D);
}

std::string show(const FnSeries &s) { return print_series(s); }

namespace {

struct PairKey {
    Monomial a, b;
    bool operator==(const PairKey &o) const { return a == o.a && b == o.b; }
};
struct PairHash {
    size_t operator()(const PairKey &k) const { return MonomialHash()(k.a) * 31 + MonomialHash()(k.b); }
};

class ProductCache {
  public:
    explicit ProductCache(const StarProduct &S) : S_(S) {}
    const FnSeries &get(const Monomial &a, const Monomial &b)
    {
        PairKey k{a, b};
        auto it = memo_.find(k);
        if (it != memo_.end())
            return it->second;
        auto U = S_.universe();
        return memo_.emplace(k, S_.apply(CoeffFn::monomial(U, a), CoeffFn::monomial(U, b))).first->second;
    }
    // (sum_r nu^r F_r) * h with F given as a series, using monomial products
    FnSeries left(const FnSeries &F, const Monomial &h)
    {
        int N = S_.order();
        FnSeries out(N, CoeffFn(S_.universe()));
        for (int r = 0; r <= N; ++r)
            for (auto &[m, c] : F[r].terms()) {
                const FnSeries &mh = get(m, h);
                for (int s = 0; r + s <= N; ++s)
                    if (!mh[s].is_zero())
                        out[r + s] += mh[s] * c;
            }
        return out;
    }
    FnSeries right(const Monomial &f, const FnSeries &G)
    {
        int N = S_.order();
        FnSeries out(N, CoeffFn(S_.universe()));
        for (int r = 0; r <= N; ++r)
            for (auto &[m, c] : G[r].terms()) {
                const FnSeries &fm = get(f, m);
                for (int s = 0; r + s <= N; ++s)
                    if (!fm[s].is_zero())
                        out[r + s] += fm[s] * c;
            }
        return out;
    }

  private:
    const StarProduct &S_;
    std::unordered_map<PairKey, FnSeries, PairHash> memo_;
};

int first_diff(const FnSeries &a, const FnSeries &b)
{
    for (int r = 0; r <= a.order(); ++r)
        if (a[r] != b[r])
            return r;
    return -1;
}

} // namespace

Report check_star_axioms(const StarProduct &S, AxiomOptions opt)
{
    Report rep;
    rep.check = "star_axioms";
    const UniverseP &U = S.universe();
    int N = S.order();
    int D = opt.degree >= 0 ? opt.degree : S.max_derivative_order() + 2;
    rep.detail["product"] = S.name;
    rep.detail["truncation"] = N;
    rep.detail["degree_bound"] = D;
    auto mono = [&](const Monomial &m) { return print_monomial(*U, m).empty() ? "1" : print_monomial(*U, m); };

    if (N < 0 || S.C[0] != BiDiffOp::product(U)) {
        rep.fail(0, "C0 is not the pointwise product");
        return rep;
    }
    for (int r = 1; r <= N; ++r)
        for (auto &[k, c] : S.C[r].terms())
            if (k.first.is_one() || k.second.is_one()) {
                rep.fail(r, "C" + std::to_string(r) + " does not annihilate constants: term D[" +
                                print_monomial(*U, k.first) + " | " + print_monomial(*U, k.second) + "]");
                return rep;
            }
    if (N >= 1) {
        BiDiffOp anti = S.C[1] - S.C[1].swapped();
        BiDiffOp twoP = S.chart.poisson_op() * Scalar(2);
        if (anti != twoP) {
            rep.fail(1, "C1 antisymmetric part differs from 2P: residual " + print_bidiffop(anti - twoP));
            return rep;
        }
    }

    auto mons = test_monomials(S.chart, S.chart.function_vars(), D);
    int nm = (int)mons.size();
    rep.detail["test_monomials"] = nm;
    unsigned T = opt.threads > 0 ? (unsigned)opt.threads : std::max(1u, std::thread::hardware_concurrency());
    T = std::min<unsigned>(T, (unsigned)nm);
    struct Failure {
        long idx = -1;
        int order = -1;
    };
    std::vector<Failure> fails(T);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < T; ++t)
        pool.emplace_back([&, t] {
            ProductCache cache(S);
            for (int i = (int)t; i < nm; i += (int)T) {
                for (int j = 0; j < nm; ++j) {
                    const FnSeries &fg = cache.get(mons[i], mons[j]);
                    for (int k = 0; k < nm; ++k) {
                        long idx = ((long)i * nm + j) * nm + k;
                        FnSeries lhs = cache.left(fg, mons[k]);
                        FnSeries rhs = cache.right(mons[i], cache.get(mons[j], mons[k]));
                        int r = first_diff(lhs, rhs);
                        // keep the lowest failing order, then the first triple at that order
                        if (r >= 0 && (fails[t].idx < 0 || r < fails[t].order)) {
                            fails[t] = {idx, r};
                            if (r <= 1)
                                return;
                        }
                    }
                }
            }
        });
    for (auto &th : pool)
        th.join();
    Failure best;
    for (auto &f : fails)
        if (f.idx >= 0 && (best.idx < 0 || f.order < best.order || (f.order == best.order && f.idx < best.idx)))
            best = f;
    if (best.idx >= 0) {
        long k = best.idx % nm, j = (best.idx / nm) % nm, i = best.idx / nm / nm;
        rep.fail(best.order, "associativity: f=" + mono(mons[i]) + ", g=" + mono(mons[j]) + ", h=" + mono(mons[k]));
        return rep;
    }
    rep.order = N;
    return rep;
}

// ---------------------------------------------------------------- Deligne order 0

DeligneResult deligne_order0(const StarProduct &S)
{
    DeligneResult res;
    auto vars = S.chart.symplectic_vars();
    int n = (int)vars.size();
    const UniverseP &U = S.universe();
    res.antisym_c2.assign(n, std::vector<Scalar>(n));
    res.form.assign(n, std::vector<Scalar>(n));
    if (S.order() < 2)
        return res;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            // first-order part read off directly, so angle coordinates work too
            auto coef = [&](int i, int j) {
                auto it = S.C[2].terms().find({Monomial::unit(vars[i]), Monomial::unit(vars[j])});
                return it == S.C[2].terms().end() ? CoeffFn(U) : it->second;
            };
            CoeffFn d = coef(a, b) - coef(b, a);
            if (!d.is_constant()) {
                res.constant = false;
                res.witness = "C2 antisymmetric part on (" + U->var(vars[a]).name + "," + U->var(vars[b]).name +
                              ") is not constant: " + print_terms(d);
                return res;
            }
            res.antisym_c2[a][b] = d.constant_term();
        }
    Matrix P(n, std::vector<Scalar>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            P[a][b] = S.chart.P[vars[a]][vars[b]];
    Matrix half = res.antisym_c2;
    for (auto &row : half)
        for (auto &x : row)
            x *= Scalar::frac(1, 2);
    Matrix Pi = inverse(P);
    Matrix zeta = matmul(matmul(transpose(Pi), half), Pi);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            res.form[a][b] = -zeta[a][b];
    return res;
}

// ---------------------------------------------------------------- morphisms

MorphismSeries MorphismSeries::pullback(UniverseP src, UniverseP dst, std::vector<CoeffFn> images, int N)
{
    MorphismSeries m;
    m.src = src;
    m.dst = dst;
    m.images = std::move(images);
    m.D.assign(N + 1, DiffOp(src));
    m.D[0] = DiffOp::identity(src);
    return m;
}

FnSeries MorphismSeries::apply(const FnSeries &f) const
{
    int N = (int)D.size() - 1;
    FnSeries out(N, CoeffFn(dst));
    for (int a = 0; a <= N; ++a)
        for (int b = 0; a + b <= N; ++b)
            if (!f[b].is_zero() && !D[a].is_zero())
                out[a + b] += D[a].apply(f[b]).substitute(images, dst);
    return out;
}

Report check_morphism(const MorphismSeries &phi, const StarProduct &src, const StarProduct &dst, int D)
{
    Report rep;
    rep.check = "morphism";
    rep.detail["degree_bound"] = D;
    int N = src.order();
    if (dst.order() != N || (int)phi.D.size() != N + 1)
        throw AlgebraError("morphism order mismatch");
    auto one = src.lift(CoeffFn(src.universe(), Scalar(1)));
    if (phi.apply(one) != dst.lift(CoeffFn(dst.universe(), Scalar(1)))) {
        rep.fail(0, "phi(1) != 1");
        return rep;
    }
    auto mons = test_monomials(src.chart, src.chart.function_vars(), D);
    for (auto &a : mons)
        for (auto &b : mons) {
            auto f = src.lift(CoeffFn::monomial(src.universe(), a));
            auto g = src.lift(CoeffFn::monomial(src.universe(), b));
            auto lhs = phi.apply(src.apply(f, g));
            auto rhs = dst.apply(phi.apply(f), phi.apply(g));
            int r = first_diff(lhs, rhs);
            if (r >= 0) {
                rep.fail(r, "f=" + print_terms(f[0]) + ", g=" + print_terms(g[0]));
                return rep;
            }
        }
    rep.order = N;
    return rep;
}

// ---------------------------------------------------------------- representations

FnSeries Representation::apply(const FnSeries &f, const FnSeries &phi) const
{
    int N = order();
    FnSeries out(N, CoeffFn(U));
    for (int b = 0; b <= N; ++b) {
        if (f[b].is_zero())
            continue;
        std::map<Monomial, CoeffFn> df;
        for (int c = 0; b + c <= N; ++c) {
            if (phi[c].is_zero())
                continue;
            std::map<Monomial, CoeffFn> dphi;
            for (int a = 0; a + b + c <= N; ++a)
                for (auto &[k, coef] : R[a].terms()) {
                    auto it = df.find(k.first);
                    if (it == df.end())
                        it = df.emplace(k.first, f[b].derive(k.first).restrict_zero(transverse)).first;
                    if (it->second.is_zero())
                        continue;
                    auto jt = dphi.find(k.second);
                    if (jt == dphi.end())
                        jt = dphi.emplace(k.second, phi[c].derive(k.second)).first;
                    if (jt->second.is_zero())
                        continue;
                    out[a + b + c] += coef * it->second * jt->second;
                }
        }
    }
    return out;
}

FnSeries Representation::apply(const CoeffFn &f, const FnSeries &phi) const
{
    return apply(constant_series(f, order()), phi);
}

FnSeries Representation::apply(const CoeffFn &f, const CoeffFn &phi) const
{
    return apply(constant_series(f, order()), constant_series(phi, order()));
}

FnSeries Representation::cyclic(const CoeffFn &f) const { return apply(f, CoeffFn(U, Scalar(1))); }

static std::vector<int> complement(const std::vector<int> &all, const std::vector<int> &drop)
{
    std::vector<int> out;
    for (int v : all)
        if (std::find(drop.begin(), drop.end(), v) == drop.end())
            out.push_back(v);
    return out;
}

Report check_representation(const Representation &rho, const StarProduct &S, int D)
{
    Report rep;
    rep.check = "representation";
    rep.detail["degree_bound"] = D;
    int N = S.order();
    if (rho.order() != N)
        throw AlgebraError("representation order mismatch");
    const UniverseP &U = S.universe();
    auto fvars = S.chart.function_vars();
    auto cvars = complement(fvars, rho.transverse);
    auto fm = test_monomials(S.chart, fvars, D);
    auto cm = test_monomials(S.chart, cvars, D);
    for (auto &p : cm) {
        auto phi = constant_series(CoeffFn::monomial(U, p), N);
        if (rho.apply(CoeffFn(U, Scalar(1)), phi) != phi) {
            rep.fail(0, "rho(1) != id on phi=" + print_terms(phi[0]));
            return rep;
        }
    }
    for (auto &a : fm)
        for (auto &b : fm) {
            auto f = CoeffFn::monomial(U, a), g = CoeffFn::monomial(U, b);
            auto fg = S.apply(f, g);
            for (auto &p : cm) {
                auto phi = constant_series(CoeffFn::monomial(U, p), N);
                auto lhs = rho.apply(fg, phi);
                auto rhs = rho.apply(f, rho.apply(g, phi));
                int r = first_diff(lhs, rhs);
                if (r >= 0) {
                    rep.fail(r, "f=" + print_terms(f) + ", g=" + print_terms(g) + ", phi=" + print_terms(phi[0]));
                    return rep;
                }
            }
        }
    rep.order = N;
    return rep;
}

Report check_bimodule(const Representation &rho, const Representation &rho_t, const std::vector<int> &basic, int D)
{
    Report rep;
    rep.check = "bimodule";
    rep.detail["degree_bound"] = D;
    const UniverseP &U = rho.U;
    int N = rho.order();
    std::vector<int> fvars;
    for (int i = 0; i < U->size(); ++i)
        if (U->var(i).kind != VarKind::Param)
            fvars.push_back(i);
    auto cvars = complement(fvars, rho.transverse);
    auto fm = weighted_monomials(*U, fvars, D);
    auto hm = weighted_monomials(*U, basic, D);
    auto cm = weighted_monomials(*U, cvars, D);
    for (auto &a : fm)
        for (auto &b : hm)
            for (auto &p : cm) {
                auto f = CoeffFn::monomial(U, a), h = CoeffFn::monomial(U, b);
                auto phi = constant_series(CoeffFn::monomial(U, p), N);
                auto lhs = rho.apply(f, rho_t.apply(h, phi));
                auto rhs = rho_t.apply(h, rho.apply(f, phi));
                int r = first_diff(lhs, rhs);
                if (r >= 0) {
                    rep.fail(r, "f=" + print_terms(f) + ", h=" + print_terms(h) + ", phi=" + print_terms(phi[0]));
                    return rep;
                }
            }
    rep.order = N;
    return rep;
}

} // namespace dq

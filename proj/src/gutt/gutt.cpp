#include "dq/gutt.hpp"
#include "dq/textio.hpp"

#include <functional>

namespace dq {

// ---------------------------------------------------------------- Lie data

LieAlgebraData LieAlgebraData::make(std::vector<std::string> names,
                                    const std::vector<std::tuple<int, int, int, Scalar>> &brackets)
{
    LieAlgebraData L;
    L.names = std::move(names);
    int n = L.dim();
    L.c.assign(n, std::vector<std::map<int, Scalar>>(n));
    for (auto &[i, j, k, v] : brackets) {
        if (i < 0 || j < 0 || k < 0 || i >= n || j >= n || k >= n)
            throw std::invalid_argument("structure constant index out of range");
        if (i == j) {
            if (!v.is_zero())
                throw std::invalid_argument("structure constants must be antisymmetric");
            continue;
        }
        if (L.c[i][j].count(k) && L.c[i][j][k] != v)
            throw std::invalid_argument("conflicting structure constants");
        L.c[i][j][k] = v;
        L.c[j][i][k] = -v;
    }
    for (auto &row : L.c)
        for (auto &m : row)
            for (auto it = m.begin(); it != m.end();)
                it = it->second.is_zero() ? m.erase(it) : std::next(it);
    // Jacobi on basis triples
    auto unit = [&](int i) {
        std::vector<Scalar> e(n);
        e[i] = Scalar(1);
        return e;
    };
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int d = 0; d < n; ++d) {
                auto x = unit(a), y = unit(b), z = unit(d);
                auto j1 = L.bracket(x, L.bracket(y, z)), j2 = L.bracket(y, L.bracket(z, x)),
                     j3 = L.bracket(z, L.bracket(x, y));
                for (int k = 0; k < n; ++k)
                    if (!(j1[k] + j2[k] + j3[k]).is_zero())
                        throw std::invalid_argument("Jacobi identity fails on (" + L.names[a] + ", " + L.names[b] +
                                                    ", " + L.names[d] + ")");
            }
    return L;
}

LieAlgebraData LieAlgebraData::heisenberg3() { return make({"X", "Y", "Z"}, {{0, 1, 2, Scalar(1)}}); }

LieAlgebraData LieAlgebraData::so3()
{
    return make({"e1", "e2", "e3"}, {{0, 1, 2, Scalar(1)}, {1, 2, 0, Scalar(1)}, {2, 0, 1, Scalar(1)}});
}

LieAlgebraData LieAlgebraData::abelian(const std::vector<std::string> &names) { return make(names, {}); }

std::vector<Scalar> LieAlgebraData::bracket(const std::vector<Scalar> &a, const std::vector<Scalar> &b) const
{
    int n = dim();
    std::vector<Scalar> r(n);
    for (int i = 0; i < n; ++i) {
        if (a[i].is_zero())
            continue;
        for (int j = 0; j < n; ++j) {
            if (b[j].is_zero())
                continue;
            for (auto &[k, v] : c[i][j])
                r[k] += a[i] * b[j] * v;
        }
    }
    return r;
}

// ---------------------------------------------------------------- nu-polynomials

void nupoly_add(NuPoly &a, const NuPoly &b, const Scalar &c) { nupoly_add_shifted(a, b, c, 0); }

void nupoly_add_shifted(NuPoly &a, const NuPoly &b, const Scalar &c, int nu_shift)
{
    if (c.is_zero())
        return;
    bool one = c.is_one();
    for (auto &[k, v] : b) {
        auto key = std::make_pair(k.first + nu_shift, k.second);
        auto it = a.lower_bound(key);
        if (it == a.end() || it->first != key) {
            a.emplace_hint(it, key, one ? v : v * c);
            continue;
        }
        if (one)
            it->second += v;
        else
            it->second += v * c;
        if (it->second.is_zero())
            a.erase(it);
    }
}

NuPoly nupoly_scale(const NuPoly &a, const Scalar &c, int nu_shift)
{
    NuPoly r;
    if (c.is_zero())
        return r;
    for (auto &[k, v] : a)
        r.emplace(std::make_pair(k.first + nu_shift, k.second), v * c);
    return r;
}

static NuPoly mono_poly(const Monomial &m, int nu = 0)
{
    NuPoly p;
    p.emplace(std::make_pair(nu, m), Scalar(1));
    return p;
}

// ---------------------------------------------------------------- engine

GuttEngine::GuttEngine(LieAlgebraData lie) : lie_(std::move(lie)), U_(poly_universe(lie_.names)) {}

NuPoly GuttEngine::from(const CoeffFn &f) const
{
    NuPoly p;
    for (auto &[m, c] : f.terms())
        p.emplace(std::make_pair(0, m), c);
    return p;
}

NuPoly GuttEngine::from(const FnSeries &f) const
{
    NuPoly p;
    for (int r = 0; r <= f.order(); ++r)
        for (auto &[m, c] : f[r].terms())
            p.emplace(std::make_pair(r, m), c);
    return p;
}

FnSeries GuttEngine::to_series(const NuPoly &p, int N) const
{
    FnSeries s(N, CoeffFn(U_));
    for (auto &[k, c] : p)
        if (k.first <= N)
            s[k.first].add_term(k.second, c);
    return s;
}

NuPoly GuttEngine::generator(int i) const { return mono_poly(Monomial::unit(i)); }

const NuPoly &GuttEngine::mul_gen(int l, const Monomial &m)
{
    auto key = std::make_pair(l, m);
    auto it = gen_memo_.find(key);
    if (it != gen_memo_.end())
        return it->second;
    int j = -1;
    for (int i = 0; i < lie_.dim(); ++i)
        if (m.e[i]) {
            j = i;
            break;
        }
    NuPoly out;
    if (j < 0 || l <= j) {
        Monomial r = m;
        r.set(l, m.e[l] + 1);
        out = mono_poly(r);
    } else {
        // x_l x_j w = x_j (x_l w) + 2nu [x_l, x_j] w
        Monomial w = m;
        w.set(j, m.e[j] - 1);
        NuPoly A = mul_gen(l, w);
        for (auto &[k, c] : A)
            nupoly_add_shifted(out, mul_gen(j, k.second), c, k.first);
        for (auto &[k, c] : lie_.c[l][j])
            nupoly_add_shifted(out, mul_gen(k, w), c * Scalar(2), 1);
    }
    return gen_memo_.emplace(key, std::move(out)).first->second;
}

NuPoly GuttEngine::pbw_mul(const NuPoly &a, const NuPoly &b)
{
    NuPoly out;
    for (auto &[ka, ca] : a) {
        // left multiply b by the generators of ka, rightmost first
        NuPoly X = b;
        for (int i = lie_.dim() - 1; i >= 0; --i)
            for (int t = 0; t < ka.second.e[i]; ++t) {
                NuPoly Y;
                for (auto &[k, c] : X)
                    nupoly_add_shifted(Y, mul_gen(i, k.second), c, k.first);
                X = std::move(Y);
            }
        nupoly_add_shifted(out, X, ca, ka.first);
    }
    return out;
}

const NuPoly &GuttEngine::sym_mono(const Monomial &m)
{
    auto it = sym_memo_.find(m);
    if (it != sym_memo_.end())
        return it->second;
    NuPoly out;
    if (m.deg == 0) {
        out = mono_poly(m);
    } else {
        // words grouped by their first letter
        for (int i = 0; i < lie_.dim(); ++i) {
            if (!m.e[i])
                continue;
            Monomial rest = m;
            rest.set(i, m.e[i] - 1);
            NuPoly tail = sym_mono(rest);
            nupoly_add(out, pbw_mul(generator(i), tail), Scalar(mpq_class(m.e[i], m.deg)));
        }
    }
    return sym_memo_.emplace(m, std::move(out)).first->second;
}

const NuPoly &GuttEngine::unsym_mono(const Monomial &m)
{
    auto it = unsym_memo_.find(m);
    if (it != unsym_memo_.end())
        return it->second;
    // sym(m) = m + lower-degree terms
    NuPoly lower = sym_mono(m);
    nupoly_add(lower, mono_poly(m), Scalar(-1));
    for (auto &[k, c] : lower)
        if (k.second.deg >= m.deg)
            throw AlgebraError("symmetrization is not unitriangular");
    NuPoly out = mono_poly(m);
    nupoly_add(out, unsymmetrize(lower), Scalar(-1));
    return unsym_memo_.emplace(m, std::move(out)).first->second;
}

NuPoly GuttEngine::symmetrize(const NuPoly &p)
{
    NuPoly out;
    for (auto &[k, c] : p)
        nupoly_add_shifted(out, sym_mono(k.second), c, k.first);
    return out;
}

NuPoly GuttEngine::unsymmetrize(const NuPoly &u)
{
    NuPoly out;
    for (auto &[k, c] : u)
        nupoly_add_shifted(out, unsym_mono(k.second), c, k.first);
    return out;
}

const NuPoly &GuttEngine::mul_mono(const Monomial &a, const Monomial &b)
{
    auto key = std::make_pair(a, b);
    auto it = mul_memo_.find(key);
    if (it != mul_memo_.end())
        return it->second;
    NuPoly A = sym_mono(a), B = sym_mono(b);
    NuPoly out = unsymmetrize(pbw_mul(A, B));
    return mul_memo_.emplace(key, std::move(out)).first->second;
}

NuPoly GuttEngine::mul(const NuPoly &a, const NuPoly &b)
{
    NuPoly out;
    for (auto &[ka, ca] : a)
        for (auto &[kb, cb] : b)
            nupoly_add_shifted(out, mul_mono(ka.second, kb.second), ca * cb, ka.first + kb.first);
    return out;
}

StarProduct GuttEngine::as_star_product(int N)
{
    int n = lie_.dim();
    StarProduct S;
    S.name = "gutt";
    S.chart.U = U_;
    S.chart.P.assign(n, std::vector<Scalar>(n));
    S.chart.Pfn.assign(n, std::vector<CoeffFn>(n, CoeffFn(U_)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (auto &[k, v] : lie_.c[i][j])
                S.chart.Pfn[i][j].add_term(Monomial::unit(k), v);
    std::vector<int> vars(n);
    for (int i = 0; i < n; ++i)
        vars[i] = i;
    for (int r = 0; r <= N; ++r) {
        // nu^r part is bidifferential of order <= r in each slot
        auto B = [&](const CoeffFn &f, const CoeffFn &g) {
            CoeffFn out(U_);
            for (auto &[k, c] : mul(from(f), from(g)))
                if (k.first == r)
                    out.add_term(k.second, c);
            return out;
        };
        S.C.push_back(extract_bidiffop(U_, vars, r, r, B));
    }
    return S;
}

// ---------------------------------------------------------------- BCH

BchSeries bch_truncated(const LieAlgebraData &lie, const std::vector<Scalar> &xi, const std::vector<Scalar> &eta,
                        int depth)
{
    if (depth < 1 || depth > kMaxBchDepth)
        throw std::invalid_argument("BCH depth must be in 1.." + std::to_string(kMaxBchDepth));
    int n = lie.dim();
    BchSeries H;
    H.depth = depth;
    // Dynkin: sum_k (-1)^{k-1}/k sum over blocks (r_i, s_i) != 0 of
    // [x^{r1} y^{s1} ... ] / (m * prod r_i! s_i!), nested brackets scaled by 2
    std::vector<std::pair<int, int>> blocks;
    std::function<void(int)> rec = [&](int used) {
        if (!blocks.empty()) {
            int k = (int)blocks.size(), a = 0, b = 0;
            Scalar denom(1);
            std::vector<int> word;
            for (auto [r, s] : blocks) {
                a += r;
                b += s;
                denom *= Scalar(factorial(r)) * Scalar(factorial(s));
                word.insert(word.end(), r, 0);
                word.insert(word.end(), s, 1);
            }
            int m = a + b;
            std::vector<Scalar> v = word.back() ? eta : xi;
            for (int i = m - 2; i >= 0; --i) {
                v = lie.bracket(word[i] ? eta : xi, v);
                for (auto &x : v)
                    x *= Scalar(2);
            }
            Scalar coef = Scalar(k % 2 ? 1 : -1) / (Scalar(k) * Scalar(m) * denom);
            auto &slot = H.terms[{a, b}];
            if (slot.empty())
                slot.assign(n, Scalar(0));
            for (int i = 0; i < n; ++i)
                slot[i] += coef * v[i];
        }
        for (int r = 0; used + r <= depth; ++r)
            for (int s = 0; used + r + s <= depth; ++s) {
                if (r + s == 0)
                    continue;
                blocks.emplace_back(r, s);
                rec(used + r + s);
                blocks.pop_back();
            }
    };
    rec(0);
    for (auto it = H.terms.begin(); it != H.terms.end();) {
        bool zero = true;
        for (auto &x : it->second)
            zero = zero && x.is_zero();
        it = zero ? H.terms.erase(it) : std::next(it);
    }
    return H;
}

Report check_bch_exponentials(GuttEngine &G, const std::vector<Scalar> &xi, const std::vector<Scalar> &eta,
                              int depth)
{
    Report rep;
    rep.check = "bch_exponentials";
    rep.detail["depth"] = depth;
    const LieAlgebraData &L = G.lie();
    int n = L.dim();
    BchSeries H = bch_truncated(L, xi, eta, depth);
    std::vector<std::string> names = L.names;
    for (auto extra : {"s", "t", "nu"}) {
        if (std::find(names.begin(), names.end(), extra) != names.end())
            throw std::invalid_argument(std::string("basis name clashes with ") + extra);
        names.push_back(extra);
    }
    UniverseP X = poly_universe(names);
    int s = n, t = n + 1, nu = n + 2;
    CoeffFn h(X);
    for (auto &[ab, v] : H.terms)
        for (int k = 0; k < n; ++k) {
            if (v[k].is_zero())
                continue;
            Monomial m = Monomial::unit(k);
            m.set(s, ab.first);
            m.set(t, ab.second);
            m.set(nu, ab.first + ab.second - 1);
            h.add_term(m, v[k]);
        }
    auto cut = [&](const CoeffFn &f) { return f.filter([&](const Monomial &m) { return m.e[s] + m.e[t] <= depth; }); };
    CoeffFn E(X, Scalar(1)), term(X, Scalar(1));
    for (int k = 1; k <= depth; ++k) {
        term = cut(term * h) * (Scalar(1) / Scalar(k));
        E += term;
    }
    auto lin = [&](const std::vector<Scalar> &v) {
        NuPoly p;
        for (int k = 0; k < n; ++k)
            if (!v[k].is_zero())
                p.emplace(std::make_pair(0, Monomial::unit(k)), v[k]);
        return p;
    };
    auto power = [&](const NuPoly &p, int a) {
        NuPoly r;
        r.emplace(std::make_pair(0, Monomial()), Scalar(1));
        for (int i = 0; i < a; ++i) {
            NuPoly q;
            for (auto &[k1, c1] : r)
                for (auto &[k2, c2] : p)
                    nupoly_add(q, {{std::make_pair(k1.first + k2.first, k1.second + k2.second), c1 * c2}});
            r = q;
        }
        return nupoly_scale(r, Scalar(1) / Scalar(factorial(a)));
    };
    int compared = 0;
    for (int a = 0; a <= depth; ++a)
        for (int b = 0; a + b <= depth; ++b) {
            NuPoly lhs = G.mul(power(lin(xi), a), power(lin(eta), b));
            CoeffFn L1(X);
            for (auto &[k, c] : lhs) {
                Monomial m = k.second;
                m.set(nu, k.first);
                L1.add_term(m, c);
            }
            CoeffFn R1 = E.filter([&](const Monomial &m) { return m.e[s] == a && m.e[t] == b; });
            CoeffFn R(X);
            for (auto &[m, c] : R1.terms()) {
                Monomial mm = m;
                mm.set(s, 0);
                mm.set(t, 0);
                R.add_term(mm, c);
            }
            ++compared;
            if (L1 != R) {
                rep.fail(a + b, "coefficient of s^" + std::to_string(a) + " t^" + std::to_string(b) +
                                    ": product " + print_terms(L1) + " vs exp(H) " + print_terms(R));
                return rep;
            }
        }
    rep.detail["coefficients_compared"] = compared;
    rep.order = depth;
    return rep;
}

// ---------------------------------------------------------------- identities

static std::string show_nupoly(const GuttEngine &G, const NuPoly &p)
{
    int N = 0;
    for (auto &[k, c] : p)
        N = std::max(N, k.first);
    return show(G.to_series(p, N));
}

Report check_gutt_identities(GuttEngine &G, int D, int assoc_degree)
{
    Report rep;
    rep.check = "gutt_identities";
    const LieAlgebraData &L = G.lie();
    int n = L.dim();
    rep.detail["algebra"] = L.names;
    rep.detail["power_bound"] = D;
    rep.detail["associativity_degree"] = assoc_degree;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            NuPoly c = G.mul(G.generator(i), G.generator(j));
            nupoly_add(c, G.mul(G.generator(j), G.generator(i)), Scalar(-1));
            NuPoly expect;
            for (auto &[k, v] : L.c[i][j])
                expect.emplace(std::make_pair(1, Monomial::unit(k)), v * Scalar(2));
            if (c != expect) {
                rep.fail(1, "commutator of " + L.names[i] + ", " + L.names[j] + " is " + show_nupoly(G, c));
                return rep;
            }
        }
    for (int i = 0; i < n; ++i) {
        NuPoly p = G.generator(i);
        for (int k = 2; k <= D; ++k) {
            p = G.mul(p, G.generator(i));
            if (p != mono_poly(Monomial::unit(i, k))) {
                rep.fail(k - 1, "power " + std::to_string(k) + " of " + L.names[i] + " is " + show_nupoly(G, p));
                return rep;
            }
        }
    }
    std::vector<int> vars(n);
    for (int i = 0; i < n; ++i)
        vars[i] = i;
    auto mons = monomials_up_to(vars, assoc_degree);
    std::map<std::pair<Monomial, Monomial>, NuPoly> ab;
    for (auto &a : mons)
        for (auto &b : mons)
            ab[{a, b}] = G.mul(mono_poly(a), mono_poly(b));
    long triples = 0;
    for (auto &a : mons)
        for (auto &b : mons)
            for (auto &c : mons) {
                NuPoly left = G.mul(ab[{a, b}], mono_poly(c));
                NuPoly right = G.mul(mono_poly(a), ab[{b, c}]);
                ++triples;
                if (left != right) {
                    rep.fail(0, "associativity on (" + print_monomial(*G.universe(), a) + ", " +
                                    print_monomial(*G.universe(), b) + ", " + print_monomial(*G.universe(), c) +
                                    ")");
                    return rep;
                }
            }
    rep.detail["associativity_triples"] = triples;
    bool abelian = true;
    for (auto &row : L.c)
        for (auto &m : row)
            abelian = abelian && m.empty();
    if (abelian)
        for (auto &[k, p] : ab)
            if (p != mono_poly(k.first + k.second)) {
                rep.fail(1, "abelian product differs from the pointwise product");
                return rep;
            }
    rep.order = 2 * assoc_degree;
    return rep;
}

Report quantum_moment_check(GuttEngine &G, const std::vector<CoeffFn> &J, const StarProduct &S, int D)
{
    Report rep;
    rep.check = "quantum_moment";
    const LieAlgebraData &L = G.lie();
    int n = L.dim(), N = S.order();
    if ((int)J.size() != n)
        throw std::invalid_argument("moment map needs one function per basis vector");
    const UniverseP &U = S.universe();
    rep.detail["product"] = S.name;
    rep.detail["degree_bound"] = D;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            FnSeries c = S.apply(J[i], J[j]) - S.apply(J[j], J[i]);
            FnSeries expect(N, CoeffFn(U));
            if (N >= 1)
                for (auto &[k, v] : L.c[i][j])
                    expect[1] += J[k] * (v * Scalar(2));
            if (c != expect) {
                rep.fail(1, "J(" + L.names[i] + ") * J(" + L.names[j] + ") - J(" + L.names[j] + ") * J(" +
                                L.names[i] + ") = " + show(c) + ", expected " + show(expect));
                return rep;
            }
        }
    // symmetrized images of symmetric monomials
    std::map<Monomial, FnSeries> phi;
    std::function<const FnSeries &(const Monomial &)> image = [&](const Monomial &m) -> const FnSeries & {
        auto it = phi.find(m);
        if (it != phi.end())
            return it->second;
        FnSeries out(N, CoeffFn(U));
        if (m.deg == 0) {
            out[0] = CoeffFn(U, Scalar(1));
        } else {
            for (int i = 0; i < n; ++i) {
                if (!m.e[i])
                    continue;
                Monomial rest = m;
                rest.set(i, m.e[i] - 1);
                FnSeries t = S.apply(S.lift(J[i]), image(rest));
                for (int r = 0; r <= N; ++r)
                    out[r] += t[r] * Scalar(mpq_class(m.e[i], m.deg));
            }
        }
        return phi.emplace(m, out).first->second;
    };
    auto image_of = [&](const NuPoly &p) {
        FnSeries out(N, CoeffFn(U));
        for (auto &[k, c] : p) {
            const FnSeries &im = image(k.second);
            for (int r = 0; r + k.first <= N; ++r)
                out[r + k.first] += im[r] * c;
        }
        return out;
    };
    std::vector<int> vars(n);
    for (int i = 0; i < n; ++i)
        vars[i] = i;
    auto mons = monomials_up_to(vars, D);
    int pairs = 0;
    for (auto &a : mons)
        for (auto &b : mons) {
            NuPoly pa, pb;
            pa.emplace(std::make_pair(0, a), Scalar(1));
            pb.emplace(std::make_pair(0, b), Scalar(1));
            FnSeries lhs = image_of(G.mul(pa, pb));
            FnSeries rhs = S.apply(image(a), image(b));
            ++pairs;
            if (lhs != rhs) {
                rep.fail(0, "morphism fails on (" + print_monomial(*G.universe(), a) + ", " +
                                print_monomial(*G.universe(), b) + ")");
                return rep;
            }
        }
    rep.detail["pairs"] = pairs;
    rep.order = N;
    return rep;
}

} // namespace dq

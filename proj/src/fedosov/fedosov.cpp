#include "dq/fedosov.hpp"
#include "dq/textio.hpp"

#include <climits>
#include <random>

namespace dq {

// ---------------------------------------------------------------- elements

void WeylElement::add(const WKey &k, const CoeffFn &c)
{
    if (c.is_zero())
        return;
    auto it = t.find(k);
    if (it == t.end()) {
        t.emplace(k, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero())
        t.erase(it);
}

WeylElement &WeylElement::operator+=(const WeylElement &o)
{
    if (!U)
        U = o.U;
    for (auto &[k, c] : o.t)
        add(k, c);
    return *this;
}

WeylElement &WeylElement::operator-=(const WeylElement &o)
{
    if (!U)
        U = o.U;
    for (auto &[k, c] : o.t)
        add(k, -c);
    return *this;
}

WeylElement &WeylElement::operator*=(const Scalar &c)
{
    if (c.is_zero()) {
        t.clear();
        return *this;
    }
    for (auto &[k, f] : t)
        f *= c;
    return *this;
}

int WeylElement::max_total_degree() const
{
    int d = -1;
    for (auto &[k, c] : t)
        d = std::max(d, k.total_degree());
    return d;
}

int WeylElement::min_total_degree() const
{
    int d = INT_MAX;
    for (auto &[k, c] : t)
        d = std::min(d, k.total_degree());
    return d;
}

WeylElement WeylElement::truncated(int maxDeg) const
{
    WeylElement r(U);
    for (auto &[k, c] : t)
        if (k.total_degree() <= maxDeg)
            r.t.emplace(k, c);
    return r;
}

WeylElement WeylElement::degree_part(int d) const
{
    WeylElement r(U);
    for (auto &[k, c] : t)
        if (k.total_degree() == d)
            r.t.emplace(k, c);
    return r;
}

std::string WeylElement::str() const
{
    if (t.empty())
        return "0";
    std::string s;
    for (auto &[k, c] : t) {
        if (!s.empty())
            s += " + ";
        s += "nu^" + std::to_string(k.nu) + " (" + print_terms(c) + ") y[";
        for (int i = 0; i < kMaxVars; ++i)
            if (k.y.e[i])
                s += " " + std::to_string(i) + "^" + std::to_string(k.y.e[i]);
        s += " ] dx[";
        for (int i = 0; i < 32; ++i)
            if (k.form >> i & 1)
                s += " " + std::to_string(i);
        s += " ]";
    }
    return s;
}

// ---------------------------------------------------------------- context

WeylContext WeylContext::make(const Chart &chart, int maxDeg)
{
    WeylContext ctx;
    ctx.chart = chart;
    ctx.base = chart.symplectic_vars();
    if (ctx.base != chart.function_vars())
        throw std::invalid_argument("Fedosov base must be symplectic in every function variable");
    for (int v : ctx.base)
        if (chart.U->var(v).kind != VarKind::Poly)
            throw std::invalid_argument("Fedosov base variables must be polynomial");
    ctx.dim = (int)ctx.base.size();
    ctx.maxDeg = maxDeg;
    ctx.P.assign(ctx.dim, std::vector<Scalar>(ctx.dim));
    for (int i = 0; i < ctx.dim; ++i)
        for (int j = 0; j < ctx.dim; ++j)
            ctx.P[i][j] = chart.P[ctx.base[i]][ctx.base[j]];
    // contraction table from the exponential product on a fiber copy
    std::vector<std::string> names;
    for (int i = 0; i < ctx.dim; ++i)
        names.push_back("y" + std::to_string(i));
    UniverseP Uy = poly_universe(names);
    Chart fc;
    fc.U = Uy;
    for (auto [q, p] : chart.pairs) {
        int a = (int)(std::find(ctx.base.begin(), ctx.base.end(), q) - ctx.base.begin());
        int b = (int)(std::find(ctx.base.begin(), ctx.base.end(), p) - ctx.base.begin());
        fc.pairs.emplace_back(a, b);
    }
    fc.P = ctx.P;
    int R = (maxDeg + 2) / 2 + 1;
    StarProduct W = build_exponential_star(fc, Ordering::WEYL, R);
    for (int r = 0; r <= R; ++r)
        for (auto &[k, c] : W.C[r].terms())
            ctx.contraction[{k.first, k.second}] = c.constant_term();
    return ctx;
}

WeylElement WeylContext::fiber(UniverseP U, int i) const
{
    WeylElement e(U);
    WKey k;
    k.y = Monomial::unit(i);
    e.add(k, CoeffFn(U, Scalar(1)));
    return e;
}

WeylElement WeylContext::form(UniverseP U, int i) const
{
    WeylElement e(U);
    WKey k;
    k.form = 1u << i;
    e.add(k, CoeffFn(U, Scalar(1)));
    return e;
}

WeylElement WeylContext::scalar(const CoeffFn &c) const
{
    WeylElement e(c.universe());
    e.add(WKey{}, c);
    return e;
}

// ---------------------------------------------------------------- products

namespace {

// sign of dx^A ^ dx^B reordered canonically; 0 when they overlap
int wedge_sign(uint32_t a, uint32_t b)
{
    if (a & b)
        return 0;
    int swaps = 0;
    for (int j = 0; j < 32; ++j)
        if (b >> j & 1)
            swaps += __builtin_popcount(a >> (j + 1));
    return swaps % 2 ? -1 : 1;
}

// sign of moving dx^i to its canonical slot in `form` from the front
int insert_sign(uint32_t form, int i) { return __builtin_popcount(form & ((1u << i) - 1)) % 2 ? -1 : 1; }

Scalar falling(const Monomial &m, const Monomial &I)
{
    mpz_class r = 1;
    for (int i = 0; i < kMaxVars; ++i)
        for (int k = 0; k < I.e[i]; ++k)
            r *= m.e[i] - k;
    return Scalar(mpq_class(r));
}

WeylElement parity_part(const WeylElement &a, int p)
{
    WeylElement r(a.U);
    for (auto &[k, c] : a.t)
        if (k.form_degree() % 2 == p)
            r.t.emplace(k, c);
    return r;
}

} // namespace

WeylElement weyl_mul(const WeylContext &ctx, const WeylElement &a, const WeylElement &b, int limit)
{
    if (limit < 0)
        limit = ctx.maxDeg;
    WeylElement out(a.U ? a.U : b.U);
    std::map<Monomial, std::vector<Monomial>> divs;
    auto divisors_of = [&](const Monomial &m) -> const std::vector<Monomial> & {
        auto it = divs.find(m);
        if (it == divs.end())
            it = divs.emplace(m, divisors(m)).first;
        return it->second;
    };
    std::map<WKey, Scalar> scratch;
    for (auto &[ka, ca] : a.t)
        for (auto &[kb, cb] : b.t) {
            if (ka.total_degree() + kb.total_degree() > limit)
                continue;
            int sg = wedge_sign(ka.form, kb.form);
            if (!sg)
                continue;
            scratch.clear();
            const auto &DA = divisors_of(ka.y);
            const auto &DB = divisors_of(kb.y);
            for (auto &I : DA)
                for (auto &J : DB) {
                    if (I.deg != J.deg)
                        continue;
                    auto it = ctx.contraction.find({I, J});
                    if (it == ctx.contraction.end())
                        continue;
                    WKey k;
                    k.nu = ka.nu + kb.nu + I.deg;
                    k.y = (ka.y - I) + (kb.y - J);
                    k.form = ka.form | kb.form;
                    scratch[k] += it->second * falling(ka.y, I) * falling(kb.y, J);
                }
            if (scratch.empty())
                continue;
            CoeffFn prod = ca * cb;
            if (sg < 0)
                prod = -prod;
            for (auto &[k, s] : scratch)
                if (!s.is_zero())
                    out.add(k, prod * s);
        }
    return out;
}

// sigma(a o b) without forming the full product
WeylElement weyl_mul_sigma(const WeylContext &ctx, const WeylElement &a, const WeylElement &b, int limit)
{
    if (limit < 0)
        limit = ctx.maxDeg;
    WeylElement out(a.U ? a.U : b.U);
    std::map<int, std::vector<std::pair<const WKey *, const CoeffFn *>>> by_deg;
    for (auto &[kb, cb] : b.t)
        if (!kb.form)
            by_deg[kb.y.deg].emplace_back(&kb, &cb);
    for (auto &[ka, ca] : a.t) {
        if (ka.form)
            continue;
        auto it = by_deg.find(ka.y.deg);
        if (it == by_deg.end())
            continue;
        for (auto [kb, cb] : it->second) {
            if (ka.total_degree() + kb->total_degree() > limit)
                continue;
            auto c = ctx.contraction.find({ka.y, kb->y});
            if (c == ctx.contraction.end())
                continue;
            WKey k;
            k.nu = ka.nu + kb->nu + ka.y.deg;
            out.add(k, (ca * *cb) * (c->second * falling(ka.y, ka.y) * falling(kb->y, kb->y)));
        }
    }
    return out;
}

WeylElement weyl_commutator(const WeylContext &ctx, const WeylElement &a, const WeylElement &b, int limit)
{
    WeylElement out(a.U ? a.U : b.U);
    for (int pa = 0; pa < 2; ++pa)
        for (int pb = 0; pb < 2; ++pb) {
            WeylElement A = parity_part(a, pa), B = parity_part(b, pb);
            if (A.is_zero() || B.is_zero())
                continue;
            out += weyl_mul(ctx, A, B, limit);
            WeylElement BA = weyl_mul(ctx, B, A, limit);
            if (pa && pb)
                out += BA;
            else
                out -= BA;
        }
    return out;
}

// ---------------------------------------------------------------- Koszul operators

WeylElement delta(const WeylElement &a)
{
    WeylElement out(a.U);
    for (auto &[k, c] : a.t)
        for (int i = 0; i < kMaxVars; ++i) {
            if (!k.y.e[i] || (k.form >> i & 1))
                continue;
            WKey n = k;
            n.y.set(i, k.y.e[i] - 1);
            n.form |= 1u << i;
            out.add(n, c * Scalar(insert_sign(k.form, i) * k.y.e[i]));
        }
    return out;
}

WeylElement delta_star(const WeylElement &a)
{
    WeylElement out(a.U);
    for (auto &[k, c] : a.t)
        for (int i = 0; i < 32; ++i) {
            if (!(k.form >> i & 1))
                continue;
            WKey n = k;
            n.y.set(i, k.y.e[i] + 1);
            n.form &= ~(1u << i);
            out.add(n, c * Scalar(insert_sign(n.form, i)));
        }
    return out;
}

WeylElement delta_inv(const WeylElement &a)
{
    WeylElement out(a.U);
    for (auto &[k, c] : a.t) {
        int w = k.y.deg + k.form_degree();
        if (!w)
            continue;
        WeylElement one(a.U);
        one.t.emplace(k, c);
        WeylElement d = delta_star(one);
        d *= Scalar(mpq_class(1, w));
        out += d;
    }
    return out;
}

WeylElement sigma(const WeylElement &a)
{
    WeylElement out(a.U);
    for (auto &[k, c] : a.t)
        if (k.y.deg == 0 && k.form == 0)
            out.t.emplace(k, c);
    return out;
}

WeylElement partial(const WeylElement &a, const BaseDerivative &d)
{
    WeylElement out(a.U);
    for (auto &[k, c] : a.t)
        for (int i = 0; i < kMaxVars; ++i) {
            if (k.form >> i & 1)
                continue;
            CoeffFn di = d(c, i);
            if (di.is_zero())
                continue;
            WKey n = k;
            n.form |= 1u << i;
            out.add(n, di * Scalar(insert_sign(k.form, i)));
        }
    return out;
}

WeylElement div_nu(const WeylElement &a, const char *where)
{
    WeylElement out(a.U);
    for (auto &[k, c] : a.t) {
        if (k.nu == 0)
            throw AlgebraError(std::string(where) + ": negative nu-power after division by nu");
        WKey n = k;
        n.nu -= 1;
        out.t.emplace(n, c);
    }
    return out;
}

BaseDerivative plain_derivative(const WeylContext &ctx)
{
    std::vector<int> base = ctx.base;
    return [base](const CoeffFn &c, int i) {
        if (i >= (int)base.size())
            return CoeffFn(c.universe());
        return c.derive(base[i]);
    };
}

// ---------------------------------------------------------------- recursion

WeylElement central_two_form(const WeylContext &ctx, UniverseP U, int k, const std::vector<std::vector<CoeffFn>> &B)
{
    WeylElement w(U);
    for (int i = 0; i < ctx.dim; ++i)
        for (int j = i + 1; j < ctx.dim; ++j) {
            WKey key;
            key.nu = k;
            key.form = (1u << i) | (1u << j);
            w.add(key, B[i][j].remap(U));
        }
    return w;
}

FedosovData fedosov_setup(const Chart &chart, int maxDeg, WeylElement Omega, WeylElement s)
{
    FedosovData d;
    d.ctx = WeylContext::make(chart, maxDeg);
    d.U = chart.U;
    d.Omega = Omega.U ? Omega : WeylElement(d.U);
    d.s = s.U ? s : WeylElement(d.U);
    d.Omega.U = d.s.U = d.U;
    for (auto &[k, c] : d.Omega.t)
        if (k.nu < 1 || k.y.deg != 0 || k.form_degree() != 2)
            throw std::invalid_argument("Omega must be a central 2-form series starting at nu^1");
    if (!partial(d.Omega, plain_derivative(d.ctx)).is_zero())
        throw std::invalid_argument("Omega is not closed");
    for (auto &[k, c] : d.s.t)
        if (k.form != 0 || k.y.deg == 0 || k.total_degree() < 3)
            throw std::invalid_argument("normalization s must be a 0-form with sigma(s) = 0 and Deg >= 3");
    return d;
}

void solve_r(FedosovData &data)
{
    const int M = data.ctx.maxDeg;
    BaseDerivative d = plain_derivative(data.ctx);
    WeylElement ds = delta(data.s);
    std::vector<WeylElement> part(M + 1, WeylElement(data.U));
    // degree by degree: r_d = (delta s)_d + delta^{-1}(d r_{d-1} - (1/2nu) sum r_i o r_j + Omega_{d-1})
    for (int deg = 1; deg <= M; ++deg) {
        WeylElement rhs = partial(part[deg - 1], d) + data.Omega.degree_part(deg - 1);
        WeylElement rr(data.U);
        for (int i = 0; i <= deg + 1; ++i) {
            int j = deg + 1 - i;
            if (i > M || j > M || part[i].is_zero() || part[j].is_zero())
                continue;
            rr += weyl_mul(data.ctx, part[i], part[j], deg + 1);
        }
        rr = div_nu(rr, "r o r");
        rr *= Scalar::frac(1, 2);
        part[deg] = (ds.degree_part(deg) + delta_inv(rhs - rr)).degree_part(deg);
    }
    if (!part[0].is_zero() || !part[1].is_zero())
        throw AlgebraError("r has components of total degree below 2");
    WeylElement r(data.U);
    for (auto &p : part)
        r += p;
    data.r = r;
    data.rparts = part;
    data.iterations = M;
    data.solved = true;
    WeylElement res = curvature_residual(data);
    if (!res.is_zero())
        throw AlgebraError("curvature residual is nonzero: " + res.str());
    if (delta_inv(r).truncated(M) != data.s.truncated(M))
        throw AlgebraError("normalization delta^{-1} r = s fails");
}

WeylElement curvature_residual(const FedosovData &data)
{
    const int M = data.ctx.maxDeg;
    WeylElement rr = div_nu(weyl_mul(data.ctx, data.r, data.r, M + 1), "r o r");
    rr *= Scalar::frac(1, 2);
    WeylElement res = partial(data.r, plain_derivative(data.ctx)) - delta(data.r) - rr + data.Omega;
    return res.truncated(M - 1);
}

WeylElement fedosov_D(const FedosovData &data, const WeylElement &a, const BaseDerivative &d)
{
    WeylElement ad = div_nu(weyl_commutator(data.ctx, data.r, a, data.ctx.maxDeg + 2), "ad r");
    ad *= Scalar::frac(1, 2);
    return partial(a, d) - delta(a) - ad;
}

WeylElement fedosov_taylor(const FedosovData &data, const CoeffFn &a)
{
    return fedosov_taylor(data, a, plain_derivative(data.ctx));
}

WeylElement fedosov_taylor(const FedosovData &data, const CoeffFn &a, const BaseDerivative &d)
{
    if (!data.solved)
        throw AlgebraError("fedosov_taylor: r is not solved");
    const int M = data.ctx.maxDeg;
    const auto &rp = data.rparts;
    std::vector<WeylElement> part(M + 1, WeylElement(a.universe()));
    part[0] = data.ctx.scalar(a);
    // tau_d = delta^{-1}(d tau_{d-1} - (1/2nu) sum [r_i, tau_j]), i + j = d + 1
    for (int deg = 1; deg <= M; ++deg) {
        WeylElement ad(a.universe());
        for (int i = 0; i <= deg + 1 && i <= M; ++i) {
            int j = deg + 1 - i;
            if (j >= deg || rp[i].is_zero() || part[j].is_zero())
                continue;
            ad += weyl_commutator(data.ctx, rp[i], part[j], deg + 1);
        }
        ad = div_nu(ad, "ad r");
        ad *= Scalar::frac(1, 2);
        part[deg] = delta_inv(partial(part[deg - 1], d) - ad).degree_part(deg);
    }
    WeylElement tau(a.universe());
    for (auto &p : part)
        tau += p;
    return tau;
}

FnSeries fedosov_star(const FedosovData &data, const CoeffFn &a, const CoeffFn &b)
{
    int N = data.product_order();
    WeylElement p = weyl_mul_sigma(data.ctx, fedosov_taylor(data, a), fedosov_taylor(data, b), data.ctx.maxDeg);
    FnSeries out(N, CoeffFn(data.U));
    for (auto &[k, c] : p.t)
        if (k.nu <= N)
            out[k.nu] += c;
    return out;
}

StarProduct fedosov_star_product(const FedosovData &data)
{
    if (!data.solved)
        throw AlgebraError("fedosov_star_product: r is not solved");
    for (auto &[k, c] : data.r.t)
        if (!c.is_constant())
            throw AlgebraError("symbolic extraction needs constant-coefficient Omega and s");
    const WeylContext &ctx = data.ctx;
    int n = ctx.dim;
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i)
        names.push_back("xi" + std::to_string(i));
    for (int i = 0; i < n; ++i)
        names.push_back("eta" + std::to_string(i));
    UniverseP Us = poly_universe(names);
    FedosovData sym = data;
    sym.U = Us;
    sym.r = WeylElement(Us);
    for (auto &[k, c] : data.r.t)
        sym.r.add(k, CoeffFn(Us, c.constant_term()));
    for (auto &p : sym.rparts) {
        WeylElement q(Us);
        for (auto &[k, c] : p.t)
            q.add(k, CoeffFn(Us, c.constant_term()));
        p = q;
    }
    // exponentials e^{xi.x} and e^{eta.x}: the base derivative multiplies by the frequency
    auto freq = [Us, n](int off) {
        return [Us, n, off](const CoeffFn &c, int i) {
            if (i >= n)
                return CoeffFn(Us);
            return c * CoeffFn::monomial(Us, Monomial::unit(off + i));
        };
    };
    WeylElement ta = fedosov_taylor(sym, CoeffFn(Us, Scalar(1)), freq(0));
    WeylElement tb = fedosov_taylor(sym, CoeffFn(Us, Scalar(1)), freq(n));
    WeylElement p = weyl_mul_sigma(ctx, ta, tb, ctx.maxDeg);
    int N = data.product_order();
    StarProduct S;
    S.chart = ctx.chart;
    S.name = "fedosov";
    S.C.assign(N + 1, BiDiffOp(ctx.chart.U));
    for (auto &[k, c] : p.t) {
        if (k.nu > N)
            continue;
        for (auto &[m, x] : c.terms()) {
            Monomial I, J;
            for (int i = 0; i < n; ++i) {
                if (m.e[i])
                    I.set(ctx.base[i], m.e[i]);
                if (m.e[n + i])
                    J.set(ctx.base[i], m.e[n + i]);
            }
            S.C[k.nu].add(I, J, CoeffFn(ctx.chart.U, x));
        }
    }
    return S;
}

// ---------------------------------------------------------------- checks

Report check_fedosov(const FedosovData &data, int panel, unsigned seed)
{
    Report rep;
    rep.check = "fedosov";
    rep.detail["max_deg"] = data.ctx.maxDeg;
    rep.detail["panel"] = panel;
    rep.detail["seed"] = seed;
    rep.detail["iterations"] = data.iterations;
    const WeylContext &ctx = data.ctx;
    const int M = ctx.maxDeg;
    const UniverseP &U = data.U;
    BaseDerivative d = plain_derivative(ctx);
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> val(-3, 3);
    auto base_mons = weighted_monomials(*U, ctx.base, 2);
    std::vector<std::string> names;
    for (int i = 0; i < ctx.dim; ++i)
        names.push_back("y" + std::to_string(i));
    auto fib_mons = weighted_monomials(*poly_universe(names), [&] {
        std::vector<int> v(ctx.dim);
        for (int i = 0; i < ctx.dim; ++i)
            v[i] = i;
        return v;
    }(), 3);
    auto rand_fn = [&] {
        CoeffFn f(U);
        for (int t = 0; t < 2; ++t)
            f.add_term(base_mons[rng() % base_mons.size()], Scalar(val(rng)));
        return f;
    };
    auto rand_elem = [&](int max_form) {
        WeylElement e(U);
        for (int t = 0; t < 4; ++t) {
            WKey k;
            k.nu = (int)(rng() % 2);
            k.y = fib_mons[rng() % fib_mons.size()];
            int fd = (int)(rng() % (max_form + 1));
            for (int j = 0; j < fd; ++j)
                k.form |= 1u << (rng() % ctx.dim);
            e.add(k, rand_fn());
        }
        return e;
    };
    auto fail = [&](const std::string &w) { rep.fail(0, w); };
    for (int n = 0; n < panel && rep.pass; ++n) {
        WeylElement a = rand_elem(2);
        std::string tag = "instance " + std::to_string(n) + ": ";
        if (!delta(delta(a)).is_zero())
            fail(tag + "delta^2 != 0");
        else if (!delta_inv(delta_inv(a)).is_zero())
            fail(tag + "(delta^-1)^2 != 0");
        else if (delta(delta_inv(a)) + delta_inv(delta(a)) != a - sigma(a))
            fail(tag + "homotopy identity fails");
        else if (!partial(partial(a, d), d).is_zero())
            fail(tag + "d^2 != 0");
        else if (!(delta(partial(a, d)) + partial(delta(a), d)).is_zero())
            fail(tag + "[delta, d] != 0");
        if (!rep.pass)
            break;
        WeylElement b = rand_elem(1).truncated(M);
        WeylElement DD = fedosov_D(data, fedosov_D(data, b, d), d).truncated(M - 2);
        if (!DD.is_zero()) {
            fail(tag + "D^2 != 0: " + DD.str());
            break;
        }
        CoeffFn f = rand_fn() * rand_fn();
        WeylElement tau = fedosov_taylor(data, f);
        if (sigma(tau) != ctx.scalar(f))
            fail(tag + "sigma(tau(f)) != f");
        else if (!fedosov_D(data, tau, d).truncated(M - 1).is_zero())
            fail(tag + "D tau(f) != 0");
    }
    if (rep.pass)
        rep.order = data.product_order();
    return rep;
}

} // namespace dq

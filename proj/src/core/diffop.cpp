#include "dq/diffop.hpp"

#include <unordered_map>

namespace dq {

namespace {

Scalar multi_binomial(const MultiIndex &K, const MultiIndex &M)
{
    Scalar b(1);
    for (int v = 0; v < kMaxVars; ++v)
        if (M.e[v])
            b *= binomial(K.e[v], M.e[v]);
    return b;
}

Scalar multi_factorial(const MultiIndex &I)
{
    Scalar f(1);
    for (int v = 0; v < kMaxVars; ++v)
        if (I.e[v] > 1)
            f *= factorial(I.e[v]);
    return f;
}

struct DerivCache {
    const CoeffFn &f;
    std::unordered_map<MultiIndex, CoeffFn, MonomialHash> memo;
    explicit DerivCache(const CoeffFn &f_) : f(f_) {}
    const CoeffFn &get(const MultiIndex &I)
    {
        auto it = memo.find(I);
        if (it != memo.end())
            return it->second;
        return memo.emplace(I, f.derive(I)).first->second;
    }
};

void check_universe(const UniverseP &a, const UniverseP &b)
{
    if (!compatible(a, b))
        throw AlgebraError("operator universe mismatch");
}

} // namespace

// ---------------------------------------------------------------- DiffOp

DiffOp DiffOp::identity(UniverseP U)
{
    DiffOp d(U);
    d.add(MultiIndex(), CoeffFn(U, Scalar(1)));
    return d;
}

DiffOp DiffOp::partial(UniverseP U, const MultiIndex &I, const CoeffFn &c)
{
    DiffOp d(std::move(U));
    d.add(I, c);
    return d;
}

int DiffOp::max_order() const
{
    int k = -1;
    for (auto &[I, c] : t_)
        k = std::max(k, I.deg);
    return k;
}

bool DiffOp::is_vector_field() const
{
    for (auto &[I, c] : t_)
        if (I.deg != 1)
            return false;
    return true;
}

void DiffOp::add(const MultiIndex &I, const CoeffFn &c)
{
    if (c.is_zero())
        return;
    if (!U_)
        U_ = c.universe();
    auto it = t_.find(I);
    if (it == t_.end()) {
        t_.emplace(I, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero())
        t_.erase(it);
}

DiffOp &DiffOp::operator+=(const DiffOp &o)
{
    if (!U_)
        U_ = o.U_;
    for (auto &[I, c] : o.t_)
        add(I, c);
    return *this;
}

DiffOp &DiffOp::operator-=(const DiffOp &o)
{
    if (!U_)
        U_ = o.U_;
    for (auto &[I, c] : o.t_)
        add(I, -c);
    return *this;
}

DiffOp &DiffOp::operator*=(const Scalar &s)
{
    if (s.is_zero()) {
        t_.clear();
        return *this;
    }
    for (auto &[I, c] : t_)
        c *= s;
    return *this;
}

CoeffFn DiffOp::apply(const CoeffFn &f) const
{
    CoeffFn r(f.universe());
    if (f.is_zero())
        return r;
    for (auto &[I, c] : t_)
        r += c * f.derive(I);
    return r;
}

DiffOp DiffOp::restrict_coeffs(const std::vector<int> &vars) const
{
    DiffOp d(U_);
    for (auto &[I, c] : t_)
        d.add(I, c.restrict_zero(vars));
    return d;
}

DiffOp compose(const DiffOp &a, const DiffOp &b)
{
    DiffOp r(a.universe() ? a.universe() : b.universe());
    if (a.is_zero() || b.is_zero())
        return r;
    check_universe(a.universe(), b.universe());
    for (auto &[L, bl] : b.terms()) {
        DerivCache db(bl);
        for (auto &[K, ak] : a.terms())
            for (const auto &M : divisors(K))
                r.add(K - M + L, ak * db.get(M) * multi_binomial(K, M));
    }
    return r;
}

// ---------------------------------------------------------------- BiDiffOp

BiDiffOp BiDiffOp::product(UniverseP U)
{
    BiDiffOp b(U);
    b.add(MultiIndex(), MultiIndex(), CoeffFn(U, Scalar(1)));
    return b;
}

BiDiffOp BiDiffOp::term(UniverseP U, const MultiIndex &I, const MultiIndex &J, const CoeffFn &c)
{
    BiDiffOp b(std::move(U));
    b.add(I, J, c);
    return b;
}

int BiDiffOp::max_order() const
{
    int k = -1;
    for (auto &[key, c] : t_)
        k = std::max({k, key.first.deg, key.second.deg});
    return k;
}

bool BiDiffOp::constant_coefficients() const
{
    for (auto &[key, c] : t_)
        if (!c.is_constant())
            return false;
    return true;
}

void BiDiffOp::add(const MultiIndex &I, const MultiIndex &J, const CoeffFn &c)
{
    if (c.is_zero())
        return;
    if (!U_)
        U_ = c.universe();
    Key k{I, J};
    auto it = t_.find(k);
    if (it == t_.end()) {
        t_.emplace(k, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero())
        t_.erase(it);
}

BiDiffOp &BiDiffOp::operator+=(const BiDiffOp &o)
{
    if (!U_)
        U_ = o.U_;
    for (auto &[k, c] : o.t_)
        add(k.first, k.second, c);
    return *this;
}

BiDiffOp &BiDiffOp::operator-=(const BiDiffOp &o)
{
    if (!U_)
        U_ = o.U_;
    for (auto &[k, c] : o.t_)
        add(k.first, k.second, -c);
    return *this;
}

BiDiffOp &BiDiffOp::operator*=(const Scalar &s)
{
    if (s.is_zero()) {
        t_.clear();
        return *this;
    }
    for (auto &[k, c] : t_)
        c *= s;
    return *this;
}

CoeffFn BiDiffOp::apply(const CoeffFn &f, const CoeffFn &g) const
{
    CoeffFn r(f.universe() ? f.universe() : g.universe());
    if (f.is_zero() || g.is_zero())
        return r;
    DerivCache df(f), dg(g);
    for (auto &[k, c] : t_) {
        const CoeffFn &a = df.get(k.first);
        if (a.is_zero())
            continue;
        const CoeffFn &b = dg.get(k.second);
        if (b.is_zero())
            continue;
        r += c * (a * b);
    }
    return r;
}

BiDiffOp BiDiffOp::swapped() const
{
    BiDiffOp b(U_);
    for (auto &[k, c] : t_)
        b.t_.emplace(Key{k.second, k.first}, c);
    return b;
}

BiDiffOp BiDiffOp::restrict_coeffs(const std::vector<int> &vars) const
{
    BiDiffOp b(U_);
    for (auto &[k, c] : t_)
        b.add(k.first, k.second, c.restrict_zero(vars));
    return b;
}

BiDiffOp BiDiffOp::remap(UniverseP target) const
{
    auto idx = [&](const MultiIndex &I) {
        MultiIndex n;
        for (int v = 0; v < U_->size(); ++v)
            if (I.e[v])
                n.set(target->at(U_->var(v).name), I.e[v]);
        return n;
    };
    BiDiffOp b(target);
    for (auto &[k, c] : t_)
        b.add(idx(k.first), idx(k.second), c.remap(target));
    return b;
}

BiDiffOp compose(const DiffOp &T, const BiDiffOp &C)
{
    BiDiffOp r(C.universe() ? C.universe() : T.universe());
    if (T.is_zero() || C.is_zero())
        return r;
    check_universe(T.universe(), C.universe());
    for (auto &[key, c] : C.terms()) {
        DerivCache dc(c);
        for (auto &[K, tk] : T.terms())
            for (const auto &K1 : divisors(K)) {
                const CoeffFn &d1 = dc.get(K1);
                if (d1.is_zero())
                    continue;
                CoeffFn base = tk * d1 * multi_binomial(K, K1);
                MultiIndex rest = K - K1;
                for (const auto &K2 : divisors(rest))
                    r.add(key.first + K2, key.second + (rest - K2), base * multi_binomial(rest, K2));
            }
    }
    return r;
}

BiDiffOp compose(const BiDiffOp &C, const DiffOp &A, const DiffOp &B)
{
    BiDiffOp r(C.universe());
    if (C.is_zero() || A.is_zero() || B.is_zero())
        return r;
    check_universe(C.universe(), A.universe());
    check_universe(C.universe(), B.universe());
    // expansions d^I o A = sum (binom) d^M a_K d^{I-M+K}
    auto expand = [](const MultiIndex &I, const DiffOp &A) {
        DiffOp out(A.universe());
        for (auto &[K, ak] : A.terms())
            for (const auto &M : divisors(I))
                out.add(I - M + K, ak.derive(M) * multi_binomial(I, M));
        return out;
    };
    std::map<MultiIndex, DiffOp> left, right;
    for (auto &[key, c] : C.terms()) {
        auto li = left.find(key.first);
        if (li == left.end())
            li = left.emplace(key.first, expand(key.first, A)).first;
        auto ri = right.find(key.second);
        if (ri == right.end())
            ri = right.emplace(key.second, expand(key.second, B)).first;
        for (auto &[P, ap] : li->second.terms()) {
            CoeffFn cp = c * ap;
            for (auto &[Q, bq] : ri->second.terms())
                r.add(P, Q, cp * bq);
        }
    }
    return r;
}

BiDiffOp symbol_product(const BiDiffOp &a, const BiDiffOp &b)
{
    BiDiffOp r(a.universe() ? a.universe() : b.universe());
    for (auto &[k1, c1] : a.terms())
        for (auto &[k2, c2] : b.terms())
            r.add(k1.first + k2.first, k1.second + k2.second, c1 * c2);
    return r;
}

BiDiffOp hochschild_coboundary(const DiffOp &U)
{
    BiDiffOp r(U.universe());
    for (auto &[K, u] : U.terms()) {
        r.add(MultiIndex(), K, u);
        r.add(K, MultiIndex(), u);
        for (const auto &M : divisors(K))
            r.add(M, K - M, -(u * multi_binomial(K, M)));
    }
    return r;
}

BiDiffOp extract_bidiffop(UniverseP U, const std::vector<int> &vars, int k1, int k2,
                          const std::function<CoeffFn(const CoeffFn &, const CoeffFn &)> &B)
{
    std::map<std::pair<MultiIndex, MultiIndex>, CoeffFn> memo;
    auto eval = [&](const MultiIndex &K, const MultiIndex &L) -> const CoeffFn & {
        auto key = std::make_pair(K, L);
        auto it = memo.find(key);
        if (it != memo.end())
            return it->second;
        return memo.emplace(key, B(CoeffFn::monomial(U, K), CoeffFn::monomial(U, L))).first->second;
    };
    auto negx = [&](const MultiIndex &D) {
        CoeffFn m = CoeffFn::monomial(U, D);
        return (D.deg % 2) ? -m : m;
    };
    BiDiffOp out(U);
    for (const auto &I : monomials_up_to(vars, k1))
        for (const auto &J : monomials_up_to(vars, k2)) {
            CoeffFn c(U);
            for (const auto &K : divisors(I))
                for (const auto &L : divisors(J)) {
                    const CoeffFn &b = eval(K, L);
                    if (b.is_zero())
                        continue;
                    c += negx(I - K + (J - L)) * b * (multi_binomial(I, K) * multi_binomial(J, L));
                }
            out.add(I, J, c * (Scalar(1) / (multi_factorial(I) * multi_factorial(J))));
        }
    return out;
}

} // namespace dq

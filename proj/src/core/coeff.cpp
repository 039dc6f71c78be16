#include "dq/coeff.hpp"
#include "dq/textio.hpp"

namespace dq {

namespace {

int param_degree(const Universe &U, const Monomial &m)
{
    int d = 0;
    for (int v = 0; v < U.size(); ++v)
        if (U.var(v).kind == VarKind::Param)
            d += m.e[v];
    return d;
}

void require_same(const UniverseP &a, const UniverseP &b)
{
    if (!compatible(a, b))
        throw AlgebraError("coefficient universe / flavor mismatch");
}

} // namespace

CoeffFn::CoeffFn(UniverseP U, const Scalar &c) : U_(std::move(U))
{
    if (!c.is_zero())
        t_.emplace(Monomial(), c);
}

CoeffFn CoeffFn::var(UniverseP U, const std::string &name, int k)
{
    int i = U->at(name);
    return monomial(U, Monomial::unit(i, k));
}

CoeffFn CoeffFn::monomial(UniverseP U, const Monomial &m, const Scalar &c)
{
    CoeffFn f(std::move(U));
    f.add_term(m, c);
    return f;
}

CoeffFn CoeffFn::exponential(UniverseP U, const Scalar &a)
{
    if (U->flavor() != Flavor::EXPPOLY)
        throw AlgebraError("exponential requires a radial universe");
    CoeffFn f(U, Scalar(1));
    f.a0_ = a;
    return f;
}

bool CoeffFn::is_constant() const
{
    if (flavor() == Flavor::EXPPOLY && !a0_.is_zero() && !t_.empty())
        return false;
    return t_.empty() || (t_.size() == 1 && t_.begin()->first.is_one());
}

Scalar CoeffFn::constant_term() const { return coeff(Monomial()); }

Scalar CoeffFn::coeff(const Monomial &m) const
{
    auto it = t_.find(m);
    return it == t_.end() ? Scalar(0) : it->second;
}

int CoeffFn::degree_in(int v) const
{
    int d = -1;
    for (auto &[m, c] : t_)
        d = std::max(d, (int)m.e[v]);
    return d;
}

bool CoeffFn::depends_on(int v) const
{
    for (auto &[m, c] : t_)
        if (m.e[v] != 0)
            return true;
    if (flavor() == Flavor::EXPPOLY && v == U_->radial() && !a0_.is_zero() && !t_.empty())
        return true;
    return false;
}

void CoeffFn::add_term(const Monomial &m, const Scalar &c)
{
    if (c.is_zero())
        return;
    if (U_) {
        for (int v = 0; v < kMaxVars; ++v)
            if (m.e[v] < 0 && (v >= U_->size() || !U_->periodic(v)))
                throw AlgebraError("negative exponent on a non-periodic variable");
        if (U_->param_trunc() >= 0 && param_degree(*U_, m) > U_->param_trunc())
            return;
    }
    auto [it, fresh] = t_.emplace(m, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero())
            t_.erase(it);
    }
}

void CoeffFn::cap()
{
    if (!U_ || U_->param_trunc() < 0)
        return;
    for (auto it = t_.begin(); it != t_.end();)
        if (param_degree(*U_, it->first) > U_->param_trunc())
            it = t_.erase(it);
        else
            ++it;
}

CoeffFn CoeffFn::operator-() const
{
    CoeffFn r = *this;
    for (auto &[m, c] : r.t_)
        c = -c;
    return r;
}

CoeffFn &CoeffFn::operator+=(const CoeffFn &o)
{
    if (o.t_.empty())
        return *this;
    if (!U_)
        U_ = o.U_;
    require_same(U_, o.U_);
    if (t_.empty())
        a0_ = o.a0_;
    else if (flavor() == Flavor::EXPPOLY && a0_ != o.a0_)
        throw AlgebraError("adding exponential-polynomials with distinct rates");
    for (auto &[m, c] : o.t_)
        add_term(m, c);
    return *this;
}

CoeffFn &CoeffFn::operator-=(const CoeffFn &o) { return *this += -o; }

CoeffFn &CoeffFn::operator*=(const Scalar &c)
{
    if (c.is_zero()) {
        t_.clear();
        return *this;
    }
    for (auto &[m, x] : t_)
        x *= c;
    return *this;
}

CoeffFn operator*(const CoeffFn &a, const CoeffFn &b)
{
    if (a.t_.empty() || b.t_.empty())
        return CoeffFn(a.U_ ? a.U_ : b.U_);
    require_same(a.U_, b.U_);
    CoeffFn r(a.U_);
    r.a0_ = a.a0_ + b.a0_;
    const int cap = a.U_->param_trunc();
    for (auto &[m1, c1] : a.t_)
        for (auto &[m2, c2] : b.t_) {
            Monomial m = m1 + m2;
            if (cap >= 0 && param_degree(*a.U_, m) > cap)
                continue;
            auto [it, fresh] = r.t_.emplace(m, c1 * c2);
            if (!fresh) {
                it->second += c1 * c2;
                if (it->second.is_zero())
                    r.t_.erase(it);
            }
        }
    return r;
}

bool CoeffFn::operator==(const CoeffFn &o) const
{
    if (t_.empty() || o.t_.empty())
        return t_.empty() && o.t_.empty();
    if (!compatible(U_, o.U_))
        return false;
    if (flavor() == Flavor::EXPPOLY && a0_ != o.a0_)
        return false;
    return t_ == o.t_;
}

Scalar derivative_factor(const Universe &U, const Monomial &m, const Monomial &I)
{
    Scalar f(1);
    for (int v = 0; v < U.size(); ++v) {
        int k = I.e[v];
        if (k == 0)
            continue;
        int e = m.e[v];
        if (U.periodic(v)) {
            if (e == 0)
                return Scalar(0);
            f *= Scalar(mpq_class(0), mpq_class(e)).pow(k);
        } else {
            if (k > e)
                return Scalar(0);
            for (int j = 0; j < k; ++j)
                f *= Scalar(e - j);
        }
    }
    return f;
}

CoeffFn CoeffFn::derive(int v) const
{
    if (!U_ || v < 0 || v >= U_->size())
        throw AlgebraError("derivative by unknown variable");
    CoeffFn r(U_);
    r.a0_ = a0_;
    Monomial I = Monomial::unit(v);
    for (auto &[m, c] : t_) {
        Scalar f = derivative_factor(*U_, m, I);
        if (f.is_zero())
            continue;
        Monomial n = m;
        if (!U_->periodic(v))
            n.set(v, m.e[v] - 1);
        r.add_term(n, c * f);
    }
    if (flavor() == Flavor::EXPPOLY && v == U_->radial() && !a0_.is_zero())
        for (auto &[m, c] : t_)
            r.add_term(m, c * a0_);
    return r;
}

CoeffFn CoeffFn::derive(const Monomial &I) const
{
    if (I.is_one() || t_.empty())
        return *this;
    if (flavor() == Flavor::EXPPOLY && I.e[U_->radial()] > 0 && !a0_.is_zero()) {
        CoeffFn r = *this;
        for (int v = 0; v < U_->size(); ++v)
            for (int k = 0; k < I.e[v]; ++k)
                r = r.derive(v);
        return r;
    }
    CoeffFn r(U_);
    r.a0_ = a0_;
    for (auto &[m, c] : t_) {
        Scalar f = derivative_factor(*U_, m, I);
        if (f.is_zero())
            continue;
        Monomial n = m;
        for (int v = 0; v < U_->size(); ++v)
            if (I.e[v] && !U_->periodic(v))
                n.set(v, m.e[v] - I.e[v]);
        r.t_.emplace(n, c * f);
    }
    return r;
}

CoeffFn CoeffFn::restrict_zero(const std::vector<int> &vars) const
{
    CoeffFn r(U_);
    r.a0_ = a0_;
    for (auto &[m, c] : t_) {
        bool keep = true;
        for (int v : vars)
            if (m.e[v] != 0) {
                keep = false;
                break;
            }
        if (keep)
            r.t_.emplace_hint(r.t_.end(), m, c);
    }
    return r;
}

CoeffFn CoeffFn::filter(const std::function<bool(const Monomial &)> &pred) const
{
    CoeffFn r(U_);
    r.a0_ = a0_;
    for (auto &[m, c] : t_)
        if (pred(m))
            r.t_.emplace_hint(r.t_.end(), m, c);
    return r;
}

CoeffFn pow(const CoeffFn &a, int k)
{
    if (k < 0) {
        if (a.size() != 1)
            throw AlgebraError("negative power of a non-monomial");
        auto [m, c] = *a.terms().begin();
        Monomial n;
        for (int v = 0; v < kMaxVars; ++v)
            n.set(v, m.e[v] * k);
        return CoeffFn::monomial(a.universe(), n, c.pow(k));
    }
    CoeffFn r(a.universe(), Scalar(1)), b = a;
    while (k) {
        if (k & 1)
            r = r * b;
        k >>= 1;
        if (k)
            b = b * b;
    }
    return r;
}

CoeffFn CoeffFn::substitute(const std::vector<CoeffFn> &images, UniverseP target) const
{
    CoeffFn r(target);
    for (auto &[m, c] : t_) {
        CoeffFn term(target, c);
        for (int v = 0; v < U_->size(); ++v)
            if (m.e[v] != 0)
                term = term * pow(images.at(v), m.e[v]);
        r += term;
    }
    return r;
}

CoeffFn CoeffFn::remap(UniverseP target) const
{
    CoeffFn r(target);
    r.a0_ = a0_;
    for (auto &[m, c] : t_) {
        Monomial n;
        for (int v = 0; v < U_->size(); ++v)
            if (m.e[v] != 0)
                n.set(target->at(U_->var(v).name), m.e[v]);
        r.add_term(n, c);
    }
    return r;
}

CoeffFn CoeffFn::truncated(int v, int maxdeg) const
{
    return filter([&](const Monomial &m) { return m.e[v] <= maxdeg; });
}

std::string CoeffFn::str() const { return print_coeff(*this); }

} // namespace dq

#include "dq/universe.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace dq {

Universe::Universe(std::vector<Var> vars, int param_trunc) : vars_(std::move(vars)), param_trunc_(param_trunc)
{
    if ((int)vars_.size() > kMaxVars)
        throw std::invalid_argument("too many variables");
    std::set<std::string> seen;
    for (int i = 0; i < (int)vars_.size(); ++i) {
        const auto &v = vars_[i];
        if (v.name.empty() || !seen.insert(v.name).second)
            throw std::invalid_argument("duplicate or empty variable name '" + v.name + "'");
        if (v.kind == VarKind::Periodic)
            flavor_ = Flavor::LAURENT;
        if (v.kind == VarKind::Radial) {
            if (radial_ >= 0)
                throw std::invalid_argument("at most one radial variable");
            radial_ = i;
        }
    }
    if (radial_ >= 0) {
        if (flavor_ == Flavor::LAURENT)
            throw std::invalid_argument("radial and periodic variables cannot be mixed");
        flavor_ = Flavor::EXPPOLY;
    }
}

int Universe::index(const std::string &name) const
{
    for (int i = 0; i < size(); ++i)
        if (vars_[i].name == name)
            return i;
    return -1;
}

int Universe::at(const std::string &name) const
{
    int i = index(name);
    if (i < 0)
        throw std::invalid_argument("unknown variable '" + name + "'");
    return i;
}

std::string Universe::describe() const
{
    std::string s;
    for (const auto &v : vars_) {
        if (!s.empty())
            s += " ";
        s += v.name + ":";
        switch (v.kind) {
        case VarKind::Poly: s += "poly"; break;
        case VarKind::Periodic: s += "periodic"; break;
        case VarKind::Radial: s += "radial"; break;
        case VarKind::Param: s += "param"; break;
        }
    }
    if (param_trunc_ >= 0)
        s += " | " + std::to_string(param_trunc_);
    return s;
}

bool Universe::same_as(const Universe &o) const
{
    if (size() != o.size() || param_trunc_ != o.param_trunc_)
        return false;
    for (int i = 0; i < size(); ++i)
        if (vars_[i].name != o.vars_[i].name || vars_[i].kind != o.vars_[i].kind)
            return false;
    return true;
}

UniverseP make_universe(std::vector<Var> vars, int param_trunc)
{
    return std::make_shared<const Universe>(std::move(vars), param_trunc);
}

UniverseP poly_universe(const std::vector<std::string> &names)
{
    std::vector<Var> v;
    for (auto &n : names)
        v.push_back({n, VarKind::Poly});
    return make_universe(v);
}

bool compatible(const UniverseP &a, const UniverseP &b)
{
    if (a == b)
        return true;
    if (!a || !b)
        return false;
    return a->same_as(*b);
}

static void rec_mons(const std::vector<int> &vars, size_t k, int left, Monomial &cur, std::vector<Monomial> &out)
{
    if (k == vars.size()) {
        out.push_back(cur);
        return;
    }
    for (int e = 0; e <= left; ++e) {
        cur.set(vars[k], e);
        rec_mons(vars, k + 1, left - e, cur, out);
    }
    cur.set(vars[k], 0);
}

std::vector<Monomial> monomials_up_to(const std::vector<int> &vars, int d)
{
    std::vector<Monomial> out;
    Monomial cur;
    rec_mons(vars, 0, d, cur, out);
    std::sort(out.begin(), out.end());
    return out;
}

static void rec_weighted(const Universe &U, const std::vector<int> &vars, size_t k, int left, Monomial &cur,
                         std::vector<Monomial> &out)
{
    if (k == vars.size()) {
        out.push_back(cur);
        return;
    }
    int lo = U.periodic(vars[k]) ? -left : 0;
    for (int e = lo; e <= left; ++e) {
        cur.set(vars[k], e);
        rec_weighted(U, vars, k + 1, left - (e < 0 ? -e : e), cur, out);
    }
    cur.set(vars[k], 0);
}

std::vector<Monomial> weighted_monomials(const Universe &U, const std::vector<int> &vars, int w)
{
    std::vector<Monomial> out;
    Monomial cur;
    rec_weighted(U, vars, 0, w, cur, out);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Monomial> divisors(const Monomial &I)
{
    std::vector<Monomial> out{Monomial()};
    for (int v = 0; v < kMaxVars; ++v) {
        if (I.e[v] <= 0)
            continue;
        std::vector<Monomial> next;
        for (const auto &m : out)
            for (int k = 0; k <= I.e[v]; ++k) {
                Monomial n = m;
                n.set(v, k);
                next.push_back(n);
            }
        out.swap(next);
    }
    return out;
}

} // namespace dq

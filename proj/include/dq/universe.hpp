#pragma once
// Variable universes and dense exponent vectors (monomials / multi-indices).

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace dq {

constexpr int kMaxVars = 16;

enum class VarKind { Poly, Periodic, Radial, Param };

// POLY: plain polynomials; LAURENT: negative exponents allowed on periodic units,
// whose derivative is the angle derivative; EXPPOLY: p(x, lambda) e^{a x}.
enum class Flavor { POLY, LAURENT, EXPPOLY };

struct Var {
    std::string name;
    VarKind kind = VarKind::Poly;
};

class Universe {
  public:
    explicit Universe(std::vector<Var> vars, int param_trunc = -1);
    int size() const { return (int)vars_.size(); }
    const Var &var(int i) const { return vars_[i]; }
    int index(const std::string &name) const; // -1 if absent
    int at(const std::string &name) const;    // throws if absent
    bool periodic(int i) const { return vars_[i].kind == VarKind::Periodic; }
    const std::vector<Var> &vars() const { return vars_; }
    std::string describe() const;
    bool same_as(const Universe &o) const;
    Flavor flavor() const { return flavor_; }
    int radial() const { return radial_; }
    // total degree cap on Param variables, -1 = none
    int param_trunc() const { return param_trunc_; }

  private:
    std::vector<Var> vars_;
    Flavor flavor_ = Flavor::POLY;
    int radial_ = -1;
    int param_trunc_ = -1;
};

using UniverseP = std::shared_ptr<const Universe>;

UniverseP make_universe(std::vector<Var> vars, int param_trunc = -1);
UniverseP poly_universe(const std::vector<std::string> &names);
bool compatible(const UniverseP &a, const UniverseP &b);

struct Monomial {
    std::array<int16_t, kMaxVars> e{};
    int deg = 0; // sum of exponents

    static Monomial unit(int i, int k = 1)
    {
        Monomial m;
        m.e[i] = (int16_t)k;
        m.deg = k;
        return m;
    }
    int operator[](int i) const { return e[i]; }
    void set(int i, int k)
    {
        deg += k - e[i];
        e[i] = (int16_t)k;
    }
    bool is_one() const
    {
        for (auto x : e)
            if (x)
                return false;
        return true;
    }
    int weight() const
    {
        int w = 0;
        for (auto x : e)
            w += x < 0 ? -x : x;
        return w;
    }
    Monomial operator+(const Monomial &o) const
    {
        Monomial r;
        for (int i = 0; i < kMaxVars; ++i)
            r.e[i] = (int16_t)(e[i] + o.e[i]);
        r.deg = deg + o.deg;
        return r;
    }
    Monomial operator-(const Monomial &o) const
    {
        Monomial r;
        for (int i = 0; i < kMaxVars; ++i)
            r.e[i] = (int16_t)(e[i] - o.e[i]);
        r.deg = deg - o.deg;
        return r;
    }
    bool divides(const Monomial &o) const
    {
        for (int i = 0; i < kMaxVars; ++i)
            if (e[i] > o.e[i])
                return false;
        return true;
    }
    bool operator==(const Monomial &o) const { return e == o.e; }
    bool operator!=(const Monomial &o) const { return e != o.e; }
    // graded lexicographic
    bool operator<(const Monomial &o) const
    {
        if (deg != o.deg)
            return deg < o.deg;
        return e < o.e;
    }
};

struct MonomialHash {
    size_t operator()(const Monomial &m) const
    {
        size_t h = 1469598103934665603ull;
        for (auto x : m.e)
            h = (h ^ (uint16_t)x) * 1099511628211ull;
        return h;
    }
};

// all non-negative exponent vectors over the listed variables with total degree <= d
std::vector<Monomial> monomials_up_to(const std::vector<int> &vars, int d);
// exponent vectors with sum |e_i| <= w; periodic variables may carry negative exponents
std::vector<Monomial> weighted_monomials(const Universe &U, const std::vector<int> &vars, int w);
// sub-multi-indices K <= I
std::vector<Monomial> divisors(const Monomial &I);

} // namespace dq

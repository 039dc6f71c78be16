#pragma once
// Exact coefficient functions: polynomials, Laurent polynomials in periodic
// units, and exponential-polynomials p(x, lambda) e^{a x}.

#include "dq/scalar.hpp"
#include "dq/universe.hpp"

#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

namespace dq {

struct AlgebraError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class CoeffFn {
  public:
    using Terms = std::map<Monomial, Scalar>;

    CoeffFn() = default;
    explicit CoeffFn(UniverseP U) : U_(std::move(U)) {}
    CoeffFn(UniverseP U, const Scalar &c);
    static CoeffFn var(UniverseP U, const std::string &name, int k = 1);
    static CoeffFn monomial(UniverseP U, const Monomial &m, const Scalar &c = Scalar(1));
    // e^{a x} times polynomial 1
    static CoeffFn exponential(UniverseP U, const Scalar &a);

    const UniverseP &universe() const { return U_; }
    Flavor flavor() const { return U_ ? U_->flavor() : Flavor::POLY; }
    const Terms &terms() const { return t_; }
    const Scalar &exp_rate() const { return a0_; }
    void set_exp_rate(const Scalar &a) { a0_ = a; }

    bool is_zero() const { return t_.empty(); }
    bool is_constant() const;
    Scalar constant_term() const;
    Scalar coeff(const Monomial &m) const;
    int degree_in(int v) const; // max exponent of v (-inf -> -1 when zero)
    bool depends_on(int v) const;
    size_t size() const { return t_.size(); }

    void add_term(const Monomial &m, const Scalar &c);

    CoeffFn operator-() const;
    CoeffFn &operator+=(const CoeffFn &o);
    CoeffFn &operator-=(const CoeffFn &o);
    CoeffFn &operator*=(const Scalar &c);
    friend CoeffFn operator+(CoeffFn a, const CoeffFn &b) { return a += b; }
    friend CoeffFn operator-(CoeffFn a, const CoeffFn &b) { return a -= b; }
    friend CoeffFn operator*(CoeffFn a, const Scalar &c) { return a *= c; }
    friend CoeffFn operator*(const Scalar &c, CoeffFn a) { return a *= c; }
    friend CoeffFn operator*(const CoeffFn &a, const CoeffFn &b);
    bool operator==(const CoeffFn &o) const;
    bool operator!=(const CoeffFn &o) const { return !(*this == o); }

    CoeffFn derive(int v) const;
    CoeffFn derive(const Monomial &I) const;
    // set the listed variables to zero
    CoeffFn restrict_zero(const std::vector<int> &vars) const;
    // keep only terms for which pred holds
    CoeffFn filter(const std::function<bool(const Monomial &)> &pred) const;
    // substitute each variable v of this universe by images[v] (in the target universe)
    CoeffFn substitute(const std::vector<CoeffFn> &images, UniverseP target) const;
    // rename into another universe by variable names (variables must exist there)
    CoeffFn remap(UniverseP target) const;
    CoeffFn truncated(int v, int maxdeg) const;

    std::string str() const;

  private:
    void cap();
    UniverseP U_;
    Terms t_;
    Scalar a0_;
};

CoeffFn pow(const CoeffFn &a, int k);
// coefficient of the multi-index monomial after applying d^I to x^m
Scalar derivative_factor(const Universe &U, const Monomial &m, const Monomial &I);

} // namespace dq

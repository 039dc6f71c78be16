#pragma once
// Differential and bidifferential operators with coefficient functions,
// plus the composition calculus (multinomial Leibniz expansion).

#include "dq/series.hpp"

#include <map>
#include <utility>

namespace dq {

using MultiIndex = Monomial;

class DiffOp {
  public:
    using Terms = std::map<MultiIndex, CoeffFn>;

    DiffOp() = default;
    explicit DiffOp(UniverseP U) : U_(std::move(U)) {}
    static DiffOp identity(UniverseP U);
    static DiffOp partial(UniverseP U, const MultiIndex &I, const CoeffFn &c);

    const UniverseP &universe() const { return U_; }
    const Terms &terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    bool kills_constants() const { return !t_.count(MultiIndex()); }
    int max_order() const;
    bool is_vector_field() const; // only first-order terms

    void add(const MultiIndex &I, const CoeffFn &c);
    DiffOp &operator+=(const DiffOp &o);
    DiffOp &operator-=(const DiffOp &o);
    DiffOp &operator*=(const Scalar &c);
    friend DiffOp operator+(DiffOp a, const DiffOp &b) { return a += b; }
    friend DiffOp operator-(DiffOp a, const DiffOp &b) { return a -= b; }
    friend DiffOp operator*(DiffOp a, const Scalar &c) { return a *= c; }
    DiffOp operator-() const { return *this * Scalar(-1); }
    bool operator==(const DiffOp &o) const { return t_ == o.t_; }
    bool operator!=(const DiffOp &o) const { return !(t_ == o.t_); }

    CoeffFn apply(const CoeffFn &f) const;
    // restrict all coefficients to the zero set of the listed variables
    DiffOp restrict_coeffs(const std::vector<int> &vars) const;

  private:
    UniverseP U_;
    Terms t_;
};

DiffOp compose(const DiffOp &a, const DiffOp &b); // a o b

class BiDiffOp {
  public:
    using Key = std::pair<MultiIndex, MultiIndex>;
    using Terms = std::map<Key, CoeffFn>;

    BiDiffOp() = default;
    explicit BiDiffOp(UniverseP U) : U_(std::move(U)) {}
    static BiDiffOp product(UniverseP U); // pointwise multiplication
    static BiDiffOp term(UniverseP U, const MultiIndex &I, const MultiIndex &J, const CoeffFn &c);

    const UniverseP &universe() const { return U_; }
    const Terms &terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    int max_order() const;
    bool constant_coefficients() const;

    void add(const MultiIndex &I, const MultiIndex &J, const CoeffFn &c);
    BiDiffOp &operator+=(const BiDiffOp &o);
    BiDiffOp &operator-=(const BiDiffOp &o);
    BiDiffOp &operator*=(const Scalar &c);
    friend BiDiffOp operator+(BiDiffOp a, const BiDiffOp &b) { return a += b; }
    friend BiDiffOp operator-(BiDiffOp a, const BiDiffOp &b) { return a -= b; }
    friend BiDiffOp operator*(BiDiffOp a, const Scalar &c) { return a *= c; }
    bool operator==(const BiDiffOp &o) const { return t_ == o.t_; }
    bool operator!=(const BiDiffOp &o) const { return !(t_ == o.t_); }

    CoeffFn apply(const CoeffFn &f, const CoeffFn &g) const;
    BiDiffOp swapped() const;
    BiDiffOp restrict_coeffs(const std::vector<int> &vars) const;
    BiDiffOp remap(UniverseP target) const;

  private:
    UniverseP U_;
    Terms t_;
};

// T o C : f,g -> T(C(f,g))
BiDiffOp compose(const DiffOp &T, const BiDiffOp &C);
// C o (A x B) : f,g -> C(A f, B g)
BiDiffOp compose(const BiDiffOp &C, const DiffOp &A, const DiffOp &B);
// product of constant-coefficient operators as symbols (multi-indices add)
BiDiffOp symbol_product(const BiDiffOp &a, const BiDiffOp &b);
// Hochschild coboundary (bU)(f,g) = f U(g) - U(fg) + U(f) g
BiDiffOp hochschild_coboundary(const DiffOp &U);
// exact extraction of a bidifferential operator of slot orders <= (k1,k2) from its action on
// monomials: c_IJ(x) = B((y-x)^I/I!, (y-x)^J/J!)(x); requires polynomial coefficients
BiDiffOp extract_bidiffop(UniverseP U, const std::vector<int> &vars, int k1, int k2,
                          const std::function<CoeffFn(const CoeffFn &, const CoeffFn &)> &B);

using DiffOpSeries = NuSeries<DiffOp>;
using BiDiffSeries = NuSeries<BiDiffOp>;

} // namespace dq

#pragma once
// Fedosov construction over a flat symplectic base: formal Weyl algebra
// bundle with forms, Koszul operators, the curvature recursion for r,
// Fedosov-Taylor series and the induced star product.

#include "dq/starprod.hpp"

#include <cstdint>

namespace dq {

// term key: nu^nu * y^y * dx^{form}, form is a bitmask over fiber indices
struct WKey {
    int nu = 0;
    Monomial y;
    uint32_t form = 0;
    bool operator<(const WKey &o) const
    {
        if (nu != o.nu)
            return nu < o.nu;
        if (form != o.form)
            return form < o.form;
        return y < o.y;
    }
    bool operator==(const WKey &o) const { return nu == o.nu && form == o.form && y == o.y; }
    int total_degree() const { return 2 * nu + y.deg; }
    int form_degree() const { return __builtin_popcount(form); }
};

struct WeylElement {
    UniverseP U; // universe of the base coefficients
    std::map<WKey, CoeffFn> t;

    WeylElement() = default;
    explicit WeylElement(UniverseP u) : U(std::move(u)) {}
    bool is_zero() const { return t.empty(); }
    void add(const WKey &k, const CoeffFn &c);
    WeylElement &operator+=(const WeylElement &o);
    WeylElement &operator-=(const WeylElement &o);
    WeylElement &operator*=(const Scalar &c);
    friend WeylElement operator+(WeylElement a, const WeylElement &b) { return a += b; }
    friend WeylElement operator-(WeylElement a, const WeylElement &b) { return a -= b; }
    friend WeylElement operator*(const Scalar &c, WeylElement a) { return a *= c; }
    bool operator==(const WeylElement &o) const { return t == o.t; }
    bool operator!=(const WeylElement &o) const { return !(*this == o); }
    int max_total_degree() const;
    int min_total_degree() const; // INT_MAX when zero
    WeylElement truncated(int maxDeg) const;
    WeylElement degree_part(int d) const;
    std::string str() const;
};

// fiber dimension, Poisson tensor on the fiber and the contraction table
struct WeylContext {
    Chart chart;
    int dim = 0;
    std::vector<int> base; // fiber index -> base variable
    Matrix P;              // P[i][j] on fiber indices
    int maxDeg = 0;
    // coefficient of d^I (x) d^J in the fiberwise exponential contraction
    std::map<std::pair<Monomial, Monomial>, Scalar> contraction;

    static WeylContext make(const Chart &chart, int maxDeg);
    WeylElement fiber(UniverseP U, int i) const; // y^i
    WeylElement form(UniverseP U, int i) const;  // dx^i
    WeylElement scalar(const CoeffFn &c) const;
};

using BaseDerivative = std::function<CoeffFn(const CoeffFn &, int)>;

// fiberwise deformed product with wedge of forms, truncated at Deg <= limit (default maxDeg)
WeylElement weyl_mul(const WeylContext &ctx, const WeylElement &a, const WeylElement &b, int limit = -1);
WeylElement weyl_mul_sigma(const WeylContext &ctx, const WeylElement &a, const WeylElement &b, int limit = -1);
// graded commutator a o b - (-1)^{|a||b|} b o a
WeylElement weyl_commutator(const WeylContext &ctx, const WeylElement &a, const WeylElement &b, int limit = -1);
WeylElement delta(const WeylElement &a);
WeylElement delta_star(const WeylElement &a);
WeylElement delta_inv(const WeylElement &a);
WeylElement sigma(const WeylElement &a);
WeylElement partial(const WeylElement &a, const BaseDerivative &d);
// divide by nu; a surviving nu^0 term is a convention violation
WeylElement div_nu(const WeylElement &a, const char *where);
BaseDerivative plain_derivative(const WeylContext &ctx);

struct FedosovData {
    WeylContext ctx;
    UniverseP U;
    WeylElement Omega; // central 2-form series, nu-orders >= 1
    WeylElement s;     // normalization, sigma(s) = 0, Deg >= 3
    WeylElement r;
    std::vector<WeylElement> rparts; // r split by total degree
    bool solved = false;
    int iterations = 0;
    int product_order() const { return (ctx.maxDeg - 2) / 2; }
};

// nu^k * sum_{i<j} B_ij dx^i dx^j with B indexed by fiber indices
WeylElement central_two_form(const WeylContext &ctx, UniverseP U, int k, const std::vector<std::vector<CoeffFn>> &B);
FedosovData fedosov_setup(const Chart &chart, int maxDeg, WeylElement Omega = {}, WeylElement s = {});
void solve_r(FedosovData &data);
// -delta r + d r - (1/2nu) r o r + Omega, through Deg maxDeg
WeylElement curvature_residual(const FedosovData &data);
WeylElement fedosov_D(const FedosovData &data, const WeylElement &a, const BaseDerivative &d);
WeylElement fedosov_taylor(const FedosovData &data, const CoeffFn &a);
WeylElement fedosov_taylor(const FedosovData &data, const CoeffFn &a, const BaseDerivative &d);
FnSeries fedosov_star(const FedosovData &data, const CoeffFn &a, const CoeffFn &b);
// bidifferential operators of the induced product (constant Omega and s only)
StarProduct fedosov_star_product(const FedosovData &data);

// homotopy identity, nilpotency, D^2 = 0 and tau checks on a seeded panel
Report check_fedosov(const FedosovData &data, int panel, unsigned seed);

} // namespace dq

#pragma once
// Worked examples: the cotangent bundle of the 2-torus with its three
// products, and the radial calculus on complex projective space.
#include "dq/coiso.hpp"

namespace dq {

// u = e^{i phi}, v = e^{i psi} (angle units), momenta p, J; C = {J = 0}
struct TorusProducts {
    CoisotropicChart cc;
    StarProduct star;       // mu o exp(-2 nu (dp x dphi + dJ x dpsi))
    StarProduct prime;      // S(star), S = exp(2 i nu p dJ)
    StarProduct prime_displayed; // second slot dpsi - 2 i nu dphi, written out
    StarProduct second;     // second slot dpsi - 2 i nu dp
    EquivalenceTransform S;
    const UniverseP &U() const { return cc.U(); }
};

TorusProducts torus_products(int N = 4);

struct TorusOptions {
    int order = 4;        // nu truncation
    int fourier = 4;      // weight bound for idealizer bases
    int axiom_degree = 2; // weight bound for the axiom triples
};

// every sub-check carries its expected outcome; pass iff all outcomes match
Report torus_report(const TorusOptions &opt = {});

// sums of exponential-polynomials p(x, lambda) e^{a x} with distinct rates
class RadialFn {
  public:
    RadialFn() = default;
    explicit RadialFn(UniverseP U) : U_(std::move(U)) {}
    static RadialFn exp(UniverseP U, const Scalar &rate);
    static RadialFn from(const CoeffFn &f);
    const UniverseP &universe() const { return U_; }
    const std::vector<CoeffFn> &parts() const { return parts_; }
    void add(const CoeffFn &f);
    RadialFn &operator+=(const RadialFn &o);
    RadialFn &operator-=(const RadialFn &o);
    friend RadialFn operator-(RadialFn a, const RadialFn &b) { return a -= b; }
    friend RadialFn operator*(const RadialFn &a, const RadialFn &b);
    bool is_zero() const { return parts_.empty(); }
    bool operator==(const RadialFn &o) const;
    bool operator!=(const RadialFn &o) const { return !(*this == o); }
    std::string str() const;

  private:
    UniverseP U_;
    std::vector<CoeffFn> parts_; // sorted by rate
};

// x radial, lambda the parameter, truncated at lambda^N
UniverseP cpn_universe(int N);
RadialFn cpn_radial_star(const RadialFn &a, const RadialFn &b);
// D is a lambda-series with nonzero constant term
RadialFn cpn_SD(const RadialFn &f, const ScalarSeries &D);
RadialFn cpn_SD_inverse(const RadialFn &f, const ScalarSeries &D);
// e^{c(lambda) x} for a lambda-series rate
RadialFn cpn_exp_series(UniverseP U, const ScalarSeries &rate);

Report cpn_check_homomorphism(const ScalarSeries &D, const Scalar &alpha, const Scalar &beta, int N);
Report cpn_check_inverse(const ScalarSeries &D, const Scalar &alpha, int N);
// S_{D'} S_D^{-1} e_alpha = e_{(D'/D) alpha}
Report cpn_check_change(const ScalarSeries &D, const ScalarSeries &Dp, const Scalar &alpha, int N);
// the whole panel: D in {1, 1 + lambda}, alpha, beta in {1, 2}
Report cpn_report(int N = 6);

ScalarSeries series_inverse(const ScalarSeries &a);

} // namespace dq

#pragma once
// Star products as nu-series of bidifferential operators, equivalences,
// and exact checkers for the algebraic axioms.

#include "dq/diffop.hpp"
#include "dq/linalg.hpp"
#include "dq/report.hpp"

#include <optional>

namespace dq {

// Flat chart with a constant Poisson tensor; pairs (q,p) satisfy {q,p} = 1.
struct Chart {
    UniverseP U;
    std::vector<std::pair<int, int>> pairs;
    Matrix P; // P[i][j] = {x^i, x^j}
    // non-constant Poisson tensor; overrides P when non-empty
    std::vector<std::vector<CoeffFn>> Pfn;

    static Chart darboux(UniverseP U, const std::vector<std::pair<std::string, std::string>> &pairs);
    static Chart darboux(UniverseP U, const std::vector<std::pair<int, int>> &pairs);
    // variables that carry functions (everything but parameters)
    std::vector<int> function_vars() const;
    std::vector<int> symplectic_vars() const;
    BiDiffOp poisson_op() const; // sum P^{ij} d_i (x) d_j
    CoeffFn bracket(const CoeffFn &f, const CoeffFn &g) const;
    Chart negated() const;
};

struct StarProduct {
    Chart chart;
    std::vector<BiDiffOp> C; // C[0..N]
    std::string name;

    int order() const { return (int)C.size() - 1; }
    const UniverseP &universe() const { return chart.U; }
    FnSeries apply(const FnSeries &f, const FnSeries &g) const;
    FnSeries apply(const CoeffFn &f, const CoeffFn &g) const;
    FnSeries lift(const CoeffFn &f) const { return constant_series(f, order()); }
    int max_derivative_order() const;
};

enum class Ordering { STANDARD, WEYL };

StarProduct pointwise_product(const Chart &chart, int N);
StarProduct build_exponential_star(const Chart &chart, Ordering ordering, int N);
// mu o exp(sum_k nu^k G_k) for constant-coefficient generators (G[0] ignored)
StarProduct exponential_of_generator(const Chart &chart, const std::vector<BiDiffOp> &G, int N,
                                     std::string name);
StarProduct opposite_star(const StarProduct &S);
StarProduct tensor_star(const StarProduct &S1, const StarProduct &S2);
StarProduct truncate_star(const StarProduct &S, int N);

struct EquivalenceTransform {
    std::vector<DiffOp> S; // S[0] = id

    static EquivalenceTransform identity(UniverseP U, int N);
    int order() const { return (int)S.size() - 1; }
    EquivalenceTransform inverse() const;
    EquivalenceTransform then(const EquivalenceTransform &next) const; // next o this
    FnSeries apply(const FnSeries &f) const;
    bool valid() const; // S0 = id, Sr kill constants
};

// f *' g = T(T^{-1} f * T^{-1} g)
StarProduct apply_equivalence(const EquivalenceTransform &T, const StarProduct &S);

struct AxiomOptions {
    int degree = -1;  // monomial weight bound D; -1 = default (max order + 2)
    int threads = 0;  // 0 = hardware
};
Report check_star_axioms(const StarProduct &S, AxiomOptions opt = {});
std::vector<Monomial> test_monomials(const Chart &chart, const std::vector<int> &vars, int D);

// Deligne order-zero representative: returns the constant matrix on the symplectic variables
struct DeligneResult {
    bool constant = true;
    Matrix form;                 // indexed like chart.symplectic_vars()
    Matrix antisym_c2;           // C2(x^a,x^b) - C2(x^b,x^a)
    std::string witness;
};
DeligneResult deligne_order0(const StarProduct &S);

// Morphism f -> sum nu^r (D_r f) o subst
struct MorphismSeries {
    UniverseP src, dst;
    std::vector<CoeffFn> images; // per source variable, in dst
    std::vector<DiffOp> D;       // on src

    FnSeries apply(const FnSeries &f) const;
    static MorphismSeries pullback(UniverseP src, UniverseP dst, std::vector<CoeffFn> images, int N);
};
Report check_morphism(const MorphismSeries &phi, const StarProduct &src, const StarProduct &dst, int D);

// rho(f) phi = sum nu^r sum_IJ c_IJ i*(d^I f) d^J phi, coefficients on the zero set of `transverse`
struct Representation {
    UniverseP U;
    std::vector<int> transverse;
    std::vector<BiDiffOp> R;

    int order() const { return (int)R.size() - 1; }
    FnSeries apply(const FnSeries &f, const FnSeries &phi) const;
    FnSeries apply(const CoeffFn &f, const FnSeries &phi) const;
    FnSeries apply(const CoeffFn &f, const CoeffFn &phi) const;
    FnSeries cyclic(const CoeffFn &f) const; // rho(f) 1
};
Report check_representation(const Representation &rho, const StarProduct &S, int D);
// rho represents S, rho_t represents the opposite of the reduced product on functions of `basic`
Report check_bimodule(const Representation &rho, const Representation &rho_t, const std::vector<int> &basic,
                      int D);

std::string show(const FnSeries &s);

} // namespace dq

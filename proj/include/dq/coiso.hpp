#pragma once
// Coisotropic charts {y = 0}: ideal membership, adaptedness, projectability,
// obstruction cocycles, order-by-order adaptation, reduction and idealizers.

#include "dq/starprod.hpp"

namespace dq {

struct CoisotropicChart {
    Chart chart;
    std::vector<std::pair<int, int>> basic; // (q, p)
    std::vector<int> leaf;                  // x^j
    std::vector<int> transverse;            // y_j, conjugate to x^j

    static CoisotropicChart make(UniverseP U, const std::vector<std::pair<std::string, std::string>> &basic,
                                 const std::vector<std::pair<std::string, std::string>> &leaf_transverse);
    const UniverseP &U() const { return chart.U; }
    bool is_transverse(int v) const;
    bool has_transverse(const MultiIndex &I) const;
    std::vector<int> basic_vars() const;
    std::vector<int> c_vars() const; // coordinates on C
    int codim() const { return (int)transverse.size(); }
};

bool ideal_member(const CoeffFn &f, const CoisotropicChart &cc);
bool series_in_ideal(const FnSeries &f, const CoisotropicChart &cc);
CoeffFn restrict_to_c(const CoeffFn &f, const CoisotropicChart &cc);
std::vector<CoeffFn> koszul_split(const CoeffFn &g, const CoisotropicChart &cc);

// highest r such that C_0..C_r send (M, I) into I; N when fully adapted
int adapted_through(const StarProduct &S, const CoisotropicChart &cc, std::string *witness = nullptr);
Report check_adapted(const StarProduct &S, const CoisotropicChart &cc);

enum class Sidedness { LEFT, RIGHT, TWO_SIDED, NEITHER, NOT_SUBALGEBRA };
const char *to_string(Sidedness s);
Sidedness check_ideal_sidedness(const StarProduct &S, const CoisotropicChart &cc);

Report check_projectable(const StarProduct &S, const CoisotropicChart &cc, int D = -1);
// does the pair (g in I, h basic) violate g*h in I?
bool violates_right_ideal(const StarProduct &S, const CoisotropicChart &cc, const CoeffFn &g, const CoeffFn &h,
                          FnSeries *product = nullptr);

Representation canonical_representation(const StarProduct &S, const CoisotropicChart &cc);

struct NormalizedRep {
    EquivalenceTransform T;
    StarProduct S;
    Representation rho;
};
NormalizedRep normalize_representation(const Representation &rho, const StarProduct &S, const CoisotropicChart &cc);

using FnMatrix = std::vector<std::vector<CoeffFn>>;

struct ObstructionCocycle {
    int order = 0;     // r + 1
    FnMatrix beta;     // beta_ij on C
    bool is_zero() const;
};
ObstructionCocycle obstruction_cocycle(const StarProduct &S, const CoisotropicChart &cc, int r);
// the four cocycle identities on a seeded random panel; S adapted through r
Report check_cocycle_identities(const StarProduct &S, const CoisotropicChart &cc, int r, int panel,
                                unsigned seed);

struct VerticalForm {
    int degree = 1;
    std::vector<CoeffFn> one; // degree 1: components along dx^j
    FnMatrix two;             // degree 2: skew components
};
VerticalForm vertical_d(const VerticalForm &w, const CoisotropicChart &cc);
VerticalForm vertical_primitive(const VerticalForm &beta, const CoisotropicChart &cc);
bool vertical_equal(const VerticalForm &a, const VerticalForm &b);

struct AdaptResult {
    bool success = true;
    EquivalenceTransform T;
    StarProduct S;
    std::vector<int> adapted_after_step; // adapted_through after each order
    Json log = Json::array();
    FnMatrix certificate; // failing obstruction when not exact
};
AdaptResult adapt(const StarProduct &S, const CoisotropicChart &cc);

// reduced product on the basic variables (throws AlgebraError with a witness when not basic)
StarProduct reduced_product(const StarProduct &S, const CoisotropicChart &cc);

struct IdealizerResult {
    int truncation = 0;   // equations through nu^N, unknowns h_0..h_{N-1}
    int degree_bound = 0;
    int unknowns = 0;
    int solution_dim = 0;
    // span of the admissible h_k for the orders fixed by the equations (k <= N-2)
    std::vector<std::vector<CoeffFn>> certified;
    std::vector<std::vector<Monomial>> support;
    Json to_json(const Universe &U) const;
};
IdealizerResult idealizer_commutant(const StarProduct &S, const CoisotropicChart &cc, int D);
// commutant action phi -> i*(phi * h)
FnSeries commutant_apply(const StarProduct &S, const CoisotropicChart &cc, const FnSeries &h, const CoeffFn &phi);

} // namespace dq

#pragma once
// Gutt star product on the dual of a Lie algebra: PBW normal ordering in the
// enveloping algebra of the 2nu-scaled bracket, symmetrization, BCH, and the
// quantum moment map check.

#include "dq/starprod.hpp"

namespace dq {

struct LieAlgebraData {
    std::vector<std::string> names;
    // c[i][j] = { k -> c^k_ij }
    std::vector<std::vector<std::map<int, Scalar>>> c;

    int dim() const { return (int)names.size(); }
    // entries (i, j, k, value) for i < j; antisymmetry is implied; Jacobi is checked
    static LieAlgebraData make(std::vector<std::string> names,
                               const std::vector<std::tuple<int, int, int, Scalar>> &brackets);
    static LieAlgebraData heisenberg3(); // [X,Y] = Z
    static LieAlgebraData so3();         // [e1,e2] = e3 and cyclic
    static LieAlgebraData abelian(const std::vector<std::string> &names);
    std::vector<Scalar> bracket(const std::vector<Scalar> &a, const std::vector<Scalar> &b) const;
};

// polynomial with nu-coefficients: (nu power, monomial) -> scalar.  Used both for
// symmetric polynomials on the dual and PBW-ordered enveloping algebra elements.
using NuPoly = std::map<std::pair<int, Monomial>, Scalar>;

void nupoly_add(NuPoly &a, const NuPoly &b, const Scalar &c = Scalar(1));
void nupoly_add_shifted(NuPoly &a, const NuPoly &b, const Scalar &c, int nu_shift);
NuPoly nupoly_scale(const NuPoly &a, const Scalar &c, int nu_shift = 0);

class GuttEngine {
  public:
    explicit GuttEngine(LieAlgebraData lie);
    const LieAlgebraData &lie() const { return lie_; }
    const UniverseP &universe() const { return U_; }

    NuPoly from(const CoeffFn &f) const;
    NuPoly from(const FnSeries &f) const;
    FnSeries to_series(const NuPoly &p, int N) const;
    NuPoly generator(int i) const;

    NuPoly pbw_mul(const NuPoly &a, const NuPoly &b);
    NuPoly symmetrize(const NuPoly &p);
    NuPoly unsymmetrize(const NuPoly &u);
    NuPoly mul(const NuPoly &a, const NuPoly &b);

    // the product as bidifferential operators through order N
    StarProduct as_star_product(int N);

  private:
    const NuPoly &mul_gen(int l, const Monomial &m);
    const NuPoly &sym_mono(const Monomial &m);
    const NuPoly &unsym_mono(const Monomial &m);
    const NuPoly &mul_mono(const Monomial &a, const Monomial &b);

    LieAlgebraData lie_;
    UniverseP U_;
    std::map<std::pair<int, Monomial>, NuPoly> gen_memo_;
    std::map<Monomial, NuPoly> sym_memo_, unsym_memo_;
    std::map<std::pair<Monomial, Monomial>, NuPoly> mul_memo_;
};

// BCH series of the 2nu-scaled bracket in Dynkin form: H = sum s^a t^b nu^{a+b-1} h_ab
struct BchSeries {
    int depth = 0;
    std::map<std::pair<int, int>, std::vector<Scalar>> terms;
};
constexpr int kMaxBchDepth = 6;
BchSeries bch_truncated(const LieAlgebraData &lie, const std::vector<Scalar> &xi, const std::vector<Scalar> &eta,
                        int depth);
// compares the s^a t^b coefficients (a + b <= depth) of e^{s xi} * e^{t eta} and e^{H}
Report check_bch_exponentials(GuttEngine &G, const std::vector<Scalar> &xi, const std::vector<Scalar> &eta,
                              int depth);

// commutator, power and associativity identities up to degree D
Report check_gutt_identities(GuttEngine &G, int D, int assoc_degree);

// J[i] = <J, e_i> as functions of S's universe
Report quantum_moment_check(GuttEngine &G, const std::vector<CoeffFn> &J, const StarProduct &S, int D);

} // namespace dq

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include "dq/casebook.hpp"
#include "dq/cli.hpp"
#include "dq/fedosov.hpp"
#include "dq/gutt.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

using namespace dq;
using Pairs = std::vector<std::pair<std::string, std::string>>;

namespace {

// collects failure notes for one criterion
struct Verdict {
    std::vector<std::string> notes;
    void require(bool ok, const std::string &what)
    {
        if (!ok)
            notes.push_back(what);
    }
    bool pass() const { return notes.empty(); }
};

struct Flat4 {
    UniverseP U = poly_universe({"q1", "p1", "q2", "p2"});
    Chart ch = Chart::darboux(U, Pairs{{"q1", "p1"}, {"q2", "p2"}});
};

void axiom_suite(Verdict &v)
{
    Flat4 f;
    for (auto ord : {Ordering::STANDARD, Ordering::WEYL}) {
        StarProduct S = build_exponential_star(f.ch, ord, 5);
        Report r = check_star_axioms(S, {3, 0});
        v.require(r.pass, S.name + ": " + r.witness);
        v.require(r.order == 5, S.name + ": verified order " + std::to_string(r.order));
    }
}

void fedosov_is_moyal(Verdict &v)
{
    Flat4 f;
    FedosovData flat = fedosov_setup(f.ch, 10);
    solve_r(flat);
    v.require(curvature_residual(flat).is_zero(), "flat curvature residual");
    v.require(check_fedosov(flat, 4, 1).pass, "flat Fedosov identities");
    StarProduct S = fedosov_star_product(flat);
    StarProduct W = build_exponential_star(f.ch, Ordering::WEYL, 4);
    v.require(S.order() == 4, "flat product order " + std::to_string(S.order()));
    for (int k = 0; k <= 4 && k <= S.order(); ++k)
        v.require(S.C[k] == W.C[k], "flat product differs from the symmetric one at order " + std::to_string(k));

    // hand expansion of the recursion through Deg 4 for Omega = nu B:
    // r_3 = (nu/2) sum_{i<j} B_ij (y^i dx^j - y^j dx^i), C2(x^a, x^b) = (P B P)_ab,
    // so the antisymmetrized C2 is 2 P B P and the Deligne form is 1 * B
    std::vector<std::vector<int>> B{{0, 2, -1, 0}, {-2, 0, 0, 3}, {1, 0, 0, 1}, {0, -3, -1, 0}};
    std::vector<std::vector<CoeffFn>> Bc(4, std::vector<CoeffFn>(4, CoeffFn(f.U)));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            Bc[i][j] = CoeffFn(f.U, Scalar(B[i][j]));
    FedosovData d = fedosov_setup(f.ch, 10, central_two_form(flat.ctx, f.U, 1, Bc));
    solve_r(d);
    v.require(curvature_residual(d).is_zero(), "curvature residual with Omega");
    WeylElement r3(f.U);
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            Scalar h = Scalar(B[i][j]) / Scalar(2);
            r3.add(WKey{1, Monomial::unit(i), 1u << j}, CoeffFn(f.U, h));
            r3.add(WKey{1, Monomial::unit(j), 1u << i}, CoeffFn(f.U, -h));
        }
    v.require(d.r.degree_part(3) == r3, "r_3 differs from the hand expansion");
    StarProduct SB = fedosov_star_product(d);
    DeligneResult dl = deligne_order0(SB);
    v.require(dl.constant, "Deligne form not constant");
    const Matrix &P = d.ctx.P;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            Scalar pbp(0);
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j)
                    pbp += P[a][i] * Scalar(B[i][j]) * P[j][b];
            v.require(dl.antisym_c2[a][b] == Scalar(2) * pbp, "antisymmetrized C2 differs from 2PBP");
            v.require(dl.form[a][b] == Scalar(B[a][b]), "Deligne form differs from B");
        }
}

void gutt_identities(Verdict &v)
{
    for (auto lie : {LieAlgebraData::heisenberg3(), LieAlgebraData::so3()}) {
        GuttEngine G(lie);
        Report r = check_gutt_identities(G, 5, 4);
        v.require(r.pass, lie.names[0] + ": " + r.witness);
    }
}

void torus_case(Verdict &v)
{
    Report r = torus_report();
    v.require(r.pass, r.witness);
}

void cpn_case(Verdict &v)
{
    Report r = cpn_report(6);
    v.require(r.pass, r.witness);
}

void obstruction_machinery(Verdict &v)
{
    const int N = 4;
    // adapted products have vanishing cocycles
    for (auto [dim, codim] : std::vector<std::pair<int, int>>{{4, 1}, {4, 2}, {6, 2}}) {
        ChartConfig c = builtin_chart(dim, codim);
        StarProduct S = build_exponential_star(c.cc.chart, Ordering::STANDARD, N);
        for (int r = 0; r < N; ++r)
            v.require(obstruction_cocycle(S, c.cc, r).is_zero(), "nonzero cocycle of an adapted product");
    }
    TorusProducts T = torus_products(N);
    for (auto *S : {&T.star, &T.prime, &T.second})
        for (int r = 0; r < N; ++r)
            v.require(obstruction_cocycle(*S, T.cc, r).is_zero(), S->name + ": nonzero cocycle");

    // random conjugations of the standard product on a Lagrangian chart
    ChartConfig lag = builtin_chart(4, 2);
    StarProduct S0 = build_exponential_star(lag.cc.chart, Ordering::STANDARD, N);
    int panels = 0;
    for (unsigned seed = 1; seed <= 6; ++seed) {
        std::mt19937 rng(seed);
        StarProduct S = apply_equivalence(random_equivalence(lag.cc.chart, N, 2, rng), S0);
        int a = adapted_through(S, lag.cc);
        if (a < N) {
            Report id = check_cocycle_identities(S, lag.cc, a, 50, seed);
            v.require(id.pass, "cocycle identities, seed " + std::to_string(seed) + ": " + id.witness);
            ++panels;
        }
        AdaptResult A = adapt(S, lag.cc);
        v.require(A.success, "adapt failed, seed " + std::to_string(seed));
        if (!A.success)
            continue;
        for (int k = 0; k <= N; ++k)
            v.require(check_adapted(truncate_star(A.S, k), lag.cc).pass,
                      "adapted output not adapted at order " + std::to_string(k));
        StarProduct again = apply_equivalence(A.T, S);
        for (int k = 0; k <= N; ++k)
            v.require(again.C[k] == A.S.C[k], "transform does not reproduce the adapted product");
    }
    v.require(panels > 0, "no conjugation produced an obstruction to test");

    // codimension one: every cocycle on the way is zero
    ChartConfig one = builtin_chart(4, 1);
    StarProduct S1 = build_exponential_star(one.cc.chart, Ordering::STANDARD, N);
    for (unsigned seed = 11; seed <= 14; ++seed) {
        std::mt19937 rng(seed);
        StarProduct S = apply_equivalence(random_equivalence(one.cc.chart, N, 2, rng), S1);
        int a = adapted_through(S, one.cc);
        if (a < N)
            v.require(obstruction_cocycle(S, one.cc, a).is_zero(), "codimension-one obstruction");
        AdaptResult A = adapt(S, one.cc);
        v.require(A.success && adapted_through(A.S, one.cc) == N, "codimension-one adapt failed");
    }
}

void sidedness(Verdict &v)
{
    for (auto [dim, codim] : std::vector<std::pair<int, int>>{{2, 1}, {4, 1}, {4, 2}, {6, 1}, {6, 3}}) {
        ChartConfig c = builtin_chart(dim, codim);
        StarProduct S = build_exponential_star(c.cc.chart, Ordering::STANDARD, 3);
        std::string tag = "dim " + std::to_string(dim) + " codim " + std::to_string(codim);
        v.require(check_ideal_sidedness(S, c.cc) == Sidedness::LEFT, tag + ": product not LEFT");
        v.require(check_ideal_sidedness(opposite_star(S), c.cc) == Sidedness::RIGHT, tag + ": opposite not RIGHT");
    }
    TorusProducts T = torus_products(3);
    v.require(check_ideal_sidedness(T.star, T.cc) == Sidedness::LEFT, "torus product not LEFT");
    v.require(check_ideal_sidedness(opposite_star(T.star), T.cc) == Sidedness::RIGHT, "torus opposite not RIGHT");
}

void roundtrip_and_determinism(Verdict &v)
{
    auto docs = random_documents(100, 1);
    v.require(docs.size() == 100, "generator returned " + std::to_string(docs.size()) + " objects");
    for (size_t i = 0; i < docs.size(); ++i) {
        std::string why = roundtrip_document(docs[i]);
        v.require(why.empty(), "object " + std::to_string(i) + ": " + why);
    }
    std::vector<std::vector<std::string>> commands{
        {"verify-axioms", "--product", "weyl", "--order", "3", "--degree", "2"},
        {"adapt", "--product", "star0", "--conjugate", "5", "--order", "3"},
        {"reduce", "--product", "torus-prime", "--order", "3"},
        {"casebook", "cpn"},
        {"gutt-check", "--algebra", "so3", "--degree", "3"},
        {"roundtrip", "--count", "100", "--seed", "2"}};
    for (auto &c : commands) {
        std::ostringstream a, b, ea, eb;
        int ca = run_cli(c, a, ea), cb = run_cli(c, b, eb);
        v.require(ca == cb && a.str() == b.str(), c[0] + ": reports differ between runs");
        v.require(!a.str().empty() && ca != 2, c[0] + ": no report");
        v.require(report_from_json(Json::parse(a.str())["report"]).to_json() == Json::parse(a.str())["report"],
                  c[0] + ": report does not round-trip");
    }
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<void(Verdict &)>>> criteria{
        {"axiom suite: standard and symmetric products on R^4, N=5, degree 3", axiom_suite},
        {"flat Fedosov equals the symmetric product through nu^4; Omega = nu B gives Deligne form B",
         fedosov_is_moyal},
        {"Gutt identities for heis(3) and so(3), powers <= 5, associativity on degree <= 4", gutt_identities},
        {"cotangent bundle of the torus: witness, adaptedness, projectability, reduction, idealizers",
         torus_case},
        {"radial calculus on CP(n): S_D homomorphism and inverse through lambda^6", cpn_case},
        {"obstruction machinery: zero cocycles, identity panel, adaptation, codimension one",
         obstruction_machinery},
        {"sidedness: LEFT for adapted products, RIGHT for their opposites", sidedness},
        {"round trip of 100 random objects and byte-identical reports", roundtrip_and_determinism},
    };
    int failed = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        auto t0 = std::chrono::steady_clock::now();
        try {
            criteria[i].second(v);
        } catch (const std::exception &e) {
            v.require(false, std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::ostringstream line;
        line << (v.pass() ? "PASS" : "FAIL") << "  criterion " << i + 1 << ": " << criteria[i].first;
        line.precision(1);
        line << std::fixed << " (" << secs << " s)";
        std::cout << line.str() << std::endl;
        for (size_t k = 0; k < v.notes.size() && k < 5; ++k)
            std::cout << "      " << v.notes[k] << std::endl;
        if (!v.pass())
            ++failed;
    }
    std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria pass"))
              << std::endl;
    return failed ? 1 : 0;
}

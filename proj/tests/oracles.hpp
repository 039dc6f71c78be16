#pragma once
// Test-side reference computations, written directly from the defining
// formulas and independent of the engine's operator calculus.
#include "dq/starprod.hpp"

#include <random>
#include <tuple>

namespace oracle {

using namespace dq;

// one constant generator entry c * d_i (x) d_j
using Entry = std::tuple<int, int, Scalar>;

// nu^k coefficient of mu o exp(nu sum c d_i (x) d_j), by brute force over k-tuples of entries
inline CoeffFn exp_product(const std::vector<Entry> &G, const CoeffFn &f, const CoeffFn &g, int k)
{
    const UniverseP &U = f.universe();
    CoeffFn out(U);
    std::vector<int> idx(k, 0);
    int m = (int)G.size();
    if (k == 0)
        return f * g;
    while (true) {
        CoeffFn a = f, b = g;
        Scalar c(1);
        for (int t = 0; t < k; ++t) {
            auto &[i, j, v] = G[idx[t]];
            a = a.derive(i);
            b = b.derive(j);
            c *= v;
        }
        out += (a * b) * c;
        int pos = 0;
        while (pos < k && ++idx[pos] == m)
            idx[pos++] = 0;
        if (pos == k)
            break;
    }
    return out * (Scalar(1) / factorial(k));
}

inline FnSeries exp_product_series(const std::vector<Entry> &G, const CoeffFn &f, const CoeffFn &g, int N)
{
    FnSeries s(N, CoeffFn(f.universe()));
    for (int k = 0; k <= N; ++k)
        s[k] = exp_product(G, f, g, k);
    return s;
}

// -2 dp (x) dq per pair
inline std::vector<Entry> standard_generator(const std::vector<std::pair<int, int>> &pairs)
{
    std::vector<Entry> G;
    for (auto [q, p] : pairs)
        G.emplace_back(p, q, Scalar(-2));
    return G;
}

// dq (x) dp - dp (x) dq per pair
inline std::vector<Entry> weyl_generator(const std::vector<std::pair<int, int>> &pairs)
{
    std::vector<Entry> G;
    for (auto [q, p] : pairs) {
        G.emplace_back(q, p, Scalar(1));
        G.emplace_back(p, q, Scalar(-1));
    }
    return G;
}

inline CoeffFn random_poly(const UniverseP &U, std::mt19937 &rng, int terms, int maxdeg,
                           const std::vector<int> &vars = {})
{
    std::vector<int> vs = vars;
    if (vs.empty())
        for (int v = 0; v < U->size(); ++v)
            if (U->var(v).kind != VarKind::Param)
                vs.push_back(v);
    std::uniform_int_distribution<int> d(0, maxdeg), pick(0, (int)vs.size() - 1), c(-4, 4);
    CoeffFn f(U);
    for (int t = 0; t < terms; ++t) {
        Monomial m;
        int deg = d(rng);
        for (int e = 0; e < deg; ++e) {
            int v = vs[pick(rng)];
            m.set(v, m[v] + 1);
        }
        f.add_term(m, Scalar(c(rng)));
    }
    return f;
}

} // namespace oracle

#include "dq/cli.hpp"
#include "dq/casebook.hpp"
#include "dq/fedosov.hpp"
#include "dq/gutt.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace dq {

// ---------------------------------------------------------------- star product text

std::string print_star(const StarProduct &S, bool pretty)
{
    const UniverseP &U = S.universe();
    const Universe &u = *U;
    std::string nl = pretty ? "\n" : " ";
    std::string s = "star \"" + S.name + "\" order " + std::to_string(S.order()) + nl;
    s += "pairs {";
    for (size_t i = 0; i < S.chart.pairs.size(); ++i)
        s += std::string(i ? " ;" : "") + " " + u.var(S.chart.pairs[i].first).name + " " +
             u.var(S.chart.pairs[i].second).name;
    s += " }" + nl;
    s += "poisson const {";
    bool first = true;
    for (int i = 0; i < (int)S.chart.P.size(); ++i)
        for (int j = i + 1; j < (int)S.chart.P.size(); ++j)
            if (!S.chart.P[i][j].is_zero()) {
                s += std::string(first ? "" : " ;") + " " + u.var(i).name + " " + u.var(j).name + " (" +
                     S.chart.P[i][j].str() + ")";
                first = false;
            }
    s += " }" + nl;
    if (!S.chart.Pfn.empty()) {
        s += "poisson fn {";
        first = true;
        for (int i = 0; i < (int)S.chart.Pfn.size(); ++i)
            for (int j = i + 1; j < (int)S.chart.Pfn.size(); ++j)
                if (!S.chart.Pfn[i][j].is_zero()) {
                    s += std::string(first ? "" : " ;") + " " + u.var(i).name + " " + u.var(j).name + " " +
                         print_coeff(S.chart.Pfn[i][j]);
                    first = false;
                }
        s += " }" + nl;
    }
    for (int r = 0; r <= S.order(); ++r)
        s += "C " + std::to_string(r) + " " + print_bidiffop(S.C[r], pretty) + (r < S.order() ? nl : "");
    return document(u, s);
}

namespace {

int var_of(Lexer &lx, const UniverseP &U)
{
    auto t = lx.peek();
    std::string n = lx.ident();
    int v = U->index(n);
    if (v < 0)
        lx.fail("unknown variable '" + n + "'", t.pos);
    return v;
}

StarProduct parse_star(TextParser &tp, const UniverseP &U)
{
    Lexer &lx = tp.lexer();
    StarProduct S;
    lx.expect("star");
    lx.expect("\"");
    S.name = lx.raw_until('"');
    lx.expect("\"");
    lx.expect("order");
    auto opos = lx.peek().pos;
    long N = lx.integer();
    if (N < 0)
        lx.fail("negative order", opos);
    lx.expect("pairs");
    lx.expect("{");
    std::vector<std::pair<int, int>> pairs;
    if (!lx.accept("}")) {
        do {
            int q = var_of(lx, U);
            int p = var_of(lx, U);
            pairs.emplace_back(q, p);
        } while (lx.accept(";"));
        lx.expect("}");
    }
    try {
        S.chart = Chart::darboux(U, pairs);
    } catch (const std::exception &e) {
        lx.fail(e.what());
    }
    int n = U->size();
    S.chart.P.assign(n, std::vector<Scalar>(n));
    lx.expect("poisson");
    lx.expect("const");
    lx.expect("{");
    if (!lx.accept("}")) {
        do {
            auto pos = lx.peek().pos;
            int i = var_of(lx, U), j = var_of(lx, U);
            if (i >= j)
                lx.fail("poisson entries must be listed with the first variable earlier", pos);
            Scalar c = tp.scalar_in_parens();
            S.chart.P[i][j] = c;
            S.chart.P[j][i] = -c;
        } while (lx.accept(";"));
        lx.expect("}");
    }
    if (lx.peek().text == "poisson") {
        lx.expect("poisson");
        lx.expect("fn");
        lx.expect("{");
        S.chart.Pfn.assign(n, std::vector<CoeffFn>(n, CoeffFn(U)));
        if (!lx.accept("}")) {
            do {
                auto pos = lx.peek().pos;
                int i = var_of(lx, U), j = var_of(lx, U);
                if (i >= j)
                    lx.fail("poisson entries must be listed with the first variable earlier", pos);
                CoeffFn c = tp.coeff(U);
                S.chart.Pfn[i][j] = c;
                S.chart.Pfn[j][i] = -c;
            } while (lx.accept(";"));
            lx.expect("}");
        }
    }
    for (long r = 0; r <= N; ++r) {
        lx.expect("C");
        auto pos = lx.peek().pos;
        if (lx.integer() != r)
            lx.fail("operators must be listed in order", pos);
        S.C.push_back(tp.bidiffop(U));
    }
    return S;
}

} // namespace

StarProduct parse_star_document(const std::string &text)
{
    TextParser tp(text);
    tp.header();
    auto U = tp.universe();
    StarProduct S = parse_star(tp, U);
    tp.finish();
    return S;
}

bool star_equal(const StarProduct &a, const StarProduct &b)
{
    return a.name == b.name && a.universe()->same_as(*b.universe()) && a.chart.pairs == b.chart.pairs &&
           a.chart.P == b.chart.P && a.chart.Pfn == b.chart.Pfn && a.C == b.C;
}

Report report_from_json(const Json &j)
{
    Report r;
    try {
        r.check = j.at("check").get<std::string>();
        r.order = j.at("order").get<int>();
        r.witness = j.at("witness").is_null() ? "" : j.at("witness").get<std::string>();
        std::string st = j.at("status").get<std::string>();
        if (st != "pass" && st != "fail")
            throw InputError("report status must be pass or fail");
        r.pass = st == "pass";
        if (j.contains("detail"))
            r.detail = j.at("detail");
    } catch (const Json::exception &e) {
        throw InputError(std::string("malformed report: ") + e.what());
    }
    return r;
}

// ---------------------------------------------------------------- charts

namespace {

using NamePairs = std::vector<std::pair<std::string, std::string>>;

NamePairs name_pairs(const Json &j, const char *field)
{
    NamePairs out;
    if (!j.contains(field))
        return out;
    if (!j[field].is_array())
        throw InputError(std::string("chart field '") + field + "' must be an array of pairs");
    for (auto &e : j[field]) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
            throw InputError(std::string("chart field '") + field + "' entries must be [\"q\", \"p\"]");
        out.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
    }
    return out;
}

} // namespace

ChartConfig parse_chart_config(const Json &j)
{
    ChartConfig cfg;
    if (!j.is_object() || !j.contains("variables") || !j["variables"].is_array())
        throw InputError("chart: field 'variables' (array) is required");
    std::vector<Var> vars;
    for (auto &e : j["variables"]) {
        Var v;
        if (e.is_string()) {
            v.name = e.get<std::string>();
        } else if (e.is_object() && e.contains("name") && e["name"].is_string()) {
            v.name = e["name"].get<std::string>();
            std::string k = e.value("kind", "poly");
            if (k == "poly")
                v.kind = VarKind::Poly;
            else if (k == "periodic")
                v.kind = VarKind::Periodic;
            else
                throw InputError("chart: variable '" + v.name + "' has unsupported kind '" + k + "'");
        } else {
            throw InputError("chart: each variable is a name or {\"name\", \"kind\"}");
        }
        if (v.name.empty() || !(std::isalpha((unsigned char)v.name[0]) || v.name[0] == '_'))
            throw InputError("chart: invalid variable name '" + v.name + "'");
        for (auto &w : vars)
            if (w.name == v.name)
                throw InputError("chart: duplicate variable '" + v.name + "'");
        vars.push_back(v);
    }
    if (vars.empty() || (int)vars.size() > kMaxVars)
        throw InputError("chart: between 1 and " + std::to_string(kMaxVars) + " variables required");
    cfg.U = make_universe(vars);
    NamePairs pairs = name_pairs(j, "pairs"), basic = name_pairs(j, "basic"),
              transverse = name_pairs(j, "transverse");
    if (basic.empty() && transverse.empty())
        transverse = pairs;
    else if (!pairs.empty()) {
        NamePairs all = basic;
        all.insert(all.end(), transverse.begin(), transverse.end());
        std::sort(all.begin(), all.end());
        NamePairs ps = pairs;
        std::sort(ps.begin(), ps.end());
        if (all != ps)
            throw InputError("chart: 'pairs' must be the union of 'basic' and 'transverse'");
    }
    std::set<std::string> used;
    for (auto *list : {&basic, &transverse})
        for (auto &[q, p] : *list)
            for (auto &n : {q, p}) {
                if (cfg.U->index(n) < 0)
                    throw InputError("chart: pair uses unknown variable '" + n + "'");
                if (!used.insert(n).second)
                    throw InputError("chart: variable '" + n + "' appears in more than one pair");
            }
    for (auto &[x, y] : transverse)
        if (cfg.U->periodic(cfg.U->at(y)))
            throw InputError("chart: transverse variable '" + y + "' must be polynomial");
    try {
        cfg.cc = CoisotropicChart::make(cfg.U, basic, transverse);
    } catch (const std::exception &e) {
        throw InputError(std::string("chart: ") + e.what());
    }
    if (j.contains("omega")) {
        auto sv = cfg.cc.chart.symplectic_vars();
        int n = (int)sv.size();
        const Json &o = j["omega"];
        if (!o.is_array() || (int)o.size() != n)
            throw InputError("chart: 'omega' must be a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
        cfg.omega.assign(n, std::vector<Scalar>(n));
        for (int a = 0; a < n; ++a) {
            if (!o[a].is_array() || (int)o[a].size() != n)
                throw InputError("chart: 'omega' row " + std::to_string(a) + " has the wrong length");
            for (int b = 0; b < n; ++b) {
                const Json &x = o[a][b];
                try {
                    cfg.omega[a][b] = x.is_number_integer() ? Scalar(x.get<long>()) : Scalar::parse(x.get<std::string>());
                } catch (const std::exception &) {
                    throw InputError("chart: 'omega' entry [" + std::to_string(a) + "][" + std::to_string(b) +
                                     "] is not an exact scalar");
                }
            }
        }
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (cfg.omega[a][b] != -cfg.omega[b][a])
                    throw InputError("chart: 'omega' must be antisymmetric");
        cfg.omega_order = j.value("omega_order", 1);
        if (cfg.omega_order < 1)
            throw InputError("chart: 'omega_order' must be at least 1");
    }
    return cfg;
}

ChartConfig parse_chart_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open chart file '" + path + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error &e) {
        throw InputError("chart file '" + path + "': " + e.what());
    }
    return parse_chart_config(j);
}

ChartConfig builtin_chart(int dim, int codim)
{
    if (dim < 2 || dim % 2 || dim > kMaxVars)
        throw InputError("--dim must be even, between 2 and " + std::to_string(kMaxVars));
    int k = dim / 2;
    if (codim < 0)
        codim = k;
    if (codim > k)
        throw InputError("--codim exceeds the number of conjugate pairs");
    Json j;
    j["variables"] = Json::array();
    for (int i = 1; i <= k; ++i) {
        j["variables"].push_back("x" + std::to_string(i));
        j["variables"].push_back("y" + std::to_string(i));
    }
    j["basic"] = Json::array();
    j["transverse"] = Json::array();
    for (int i = 1; i <= k; ++i)
        j[i > k - codim ? "transverse" : "basic"].push_back({"x" + std::to_string(i), "y" + std::to_string(i)});
    return parse_chart_config(j);
}

// ---------------------------------------------------------------- random objects

namespace {

Scalar random_scalar(std::mt19937 &rng, bool complex)
{
    std::uniform_int_distribution<int> num(-9, 9), den(1, 5), coin(0, 3);
    Scalar s(mpq_class(num(rng), den(rng)));
    if (complex && coin(rng) == 0)
        s += Scalar(mpq_class(0), mpq_class(num(rng), den(rng)));
    return s;
}

Monomial random_monomial(const Universe &U, std::mt19937 &rng, int maxexp)
{
    std::uniform_int_distribution<int> e(0, maxexp), pe(-maxexp, maxexp);
    Monomial m;
    for (int v = 0; v < U.size(); ++v) {
        int k = U.periodic(v) ? pe(rng) : e(rng);
        if (U.var(v).kind == VarKind::Param && U.param_trunc() >= 0)
            k = std::min(k, U.param_trunc());
        m.set(v, k);
    }
    return m;
}

CoeffFn random_coeff(const UniverseP &U, std::mt19937 &rng, int nterms)
{
    CoeffFn f(U);
    std::uniform_int_distribution<int> nt(0, nterms);
    int t = nt(rng);
    for (int i = 0; i < t; ++i) {
        Scalar c = random_scalar(rng, true);
        if (!c.is_zero())
            f.add_term(random_monomial(*U, rng, 3), c);
    }
    if (U->flavor() == Flavor::EXPPOLY && !f.is_zero())
        f.set_exp_rate(random_scalar(rng, true));
    return f;
}

Monomial random_multiindex(const Universe &U, std::mt19937 &rng, int maxorder)
{
    std::uniform_int_distribution<int> e(0, maxorder);
    Monomial m;
    for (int v = 0; v < U.size(); ++v)
        if (U.var(v).kind != VarKind::Param)
            m.set(v, e(rng));
    return m;
}

BiDiffOp random_bidiffop(const UniverseP &U, std::mt19937 &rng)
{
    BiDiffOp b(U);
    std::uniform_int_distribution<int> nt(0, 4);
    int t = nt(rng);
    for (int i = 0; i < t; ++i) {
        CoeffFn c = random_coeff(U, rng, 3);
        if (!c.is_zero())
            b.add(random_multiindex(*U, rng, 2), random_multiindex(*U, rng, 2), c);
    }
    return b;
}

UniverseP random_universe(std::mt19937 &rng, int flavor)
{
    std::uniform_int_distribution<int> nv(1, 4);
    std::vector<Var> vars;
    if (flavor == 2) {
        std::uniform_int_distribution<int> tr(0, 6);
        return make_universe({{"x", VarKind::Radial}, {"lambda", VarKind::Param}}, tr(rng));
    }
    int n = nv(rng);
    for (int i = 0; i < n; ++i)
        vars.push_back({"z" + std::to_string(i), VarKind::Poly});
    if (flavor == 1)
        vars.push_back({"w", VarKind::Periodic});
    return make_universe(vars);
}

} // namespace

EquivalenceTransform random_equivalence(const Chart &chart, int N, int maxdeg, std::mt19937 &rng)
{
    const UniverseP &U = chart.U;
    auto fv = chart.function_vars();
    EquivalenceTransform T = EquivalenceTransform::identity(U, N);
    std::uniform_int_distribution<int> nt(1, 3), ord(1, 2), pick(0, (int)fv.size() - 1), val(-3, 3),
        deg(0, maxdeg);
    for (int r = 1; r <= N; ++r) {
        int t = nt(rng);
        for (int i = 0; i < t; ++i) {
            Monomial I;
            int o = ord(rng);
            for (int k = 0; k < o; ++k) {
                int v = fv[pick(rng)];
                I.set(v, I[v] + 1);
            }
            CoeffFn c(U);
            int terms = nt(rng);
            for (int k = 0; k < terms; ++k) {
                Monomial m;
                int d = deg(rng);
                for (int e = 0; e < d; ++e) {
                    int v = fv[pick(rng)];
                    m.set(v, m[v] + 1);
                }
                int x = val(rng);
                if (x)
                    c.add_term(m, Scalar(x));
            }
            if (!c.is_zero())
                T.S[r].add(I, c);
        }
    }
    return T;
}

std::vector<std::string> random_documents(int count, unsigned seed)
{
    std::mt19937 rng(seed);
    std::vector<std::string> out;
    for (int i = 0; i < count; ++i) {
        int kind = i % 7;
        switch (kind) {
        case 0:
        case 1:
        case 2: {
            UniverseP U = random_universe(rng, kind);
            out.push_back(document(*U, print_coeff(random_coeff(U, rng, 5))));
            break;
        }
        case 3: {
            UniverseP U = random_universe(rng, (int)(rng() % 3));
            std::uniform_int_distribution<int> no(0, 4);
            int N = no(rng);
            FnSeries s(N, CoeffFn(U));
            Scalar rate = random_scalar(rng, false);
            for (int r = 0; r <= N; ++r) {
                s[r] = random_coeff(U, rng, 3);
                if (U->flavor() == Flavor::EXPPOLY && !s[r].is_zero())
                    s[r].set_exp_rate(rate);
            }
            out.push_back(document(*U, print_series(s)));
            break;
        }
        case 4: {
            UniverseP U = random_universe(rng, (int)(rng() % 2));
            DiffOp d(U);
            std::uniform_int_distribution<int> nt(0, 4);
            int t = nt(rng);
            for (int k = 0; k < t; ++k) {
                CoeffFn c = random_coeff(U, rng, 3);
                if (!c.is_zero())
                    d.add(random_multiindex(*U, rng, 3), c);
            }
            out.push_back(document(*U, print_diffop(d, rng() % 2)));
            break;
        }
        case 5: {
            UniverseP U = random_universe(rng, (int)(rng() % 2));
            out.push_back(document(*U, print_bidiffop(random_bidiffop(U, rng), rng() % 2)));
            break;
        }
        default: {
            UniverseP U = poly_universe({"q1", "p1", "q2", "p2"});
            StarProduct S;
            if (rng() % 3 == 0) {
                S.chart.U = U;
                S.chart.P.assign(4, std::vector<Scalar>(4));
                S.chart.Pfn.assign(4, std::vector<CoeffFn>(4, CoeffFn(U)));
                for (int a = 0; a < 4; ++a)
                    for (int b = a + 1; b < 4; ++b) {
                        CoeffFn c(U);
                        c.add_term(Monomial::unit((a + b + 1) % 4), random_scalar(rng, false));
                        S.chart.Pfn[a][b] = c;
                        S.chart.Pfn[b][a] = -c;
                    }
            } else {
                S.chart = Chart::darboux(U, std::vector<std::pair<int, int>>{{0, 1}, {2, 3}});
            }
            S.name = "random-" + std::to_string(i);
            std::uniform_int_distribution<int> no(0, 3);
            int N = no(rng);
            S.C.push_back(BiDiffOp::product(U));
            for (int r = 1; r <= N; ++r)
                S.C.push_back(random_bidiffop(U, rng));
            out.push_back(print_star(S, rng() % 2));
            break;
        }
        }
    }
    return out;
}

std::string roundtrip_document(const std::string &text)
{
    std::string kind;
    {
        TextParser tp(text);
        tp.header();
        tp.universe();
        kind = tp.lexer().peek().text;
    }
    auto check = [&](auto parse, auto print, auto eq) -> std::string {
        auto a = parse(text);
        std::string t1 = print(a, false);
        auto b = parse(t1);
        if (!eq(a, b))
            return "reparse of the compact form differs";
        if (print(b, false) != t1)
            return "printing is not stable";
        if (!eq(parse(print(a, true)), a))
            return "pretty form parses to a different value";
        return "";
    };
    if (kind == "star")
        return check(parse_star_document, [](const StarProduct &s, bool p) { return print_star(s, p); }, star_equal);
    if (kind == "series")
        return check(
            parse_series_document,
            [](const FnSeries &s, bool) { return document(*s[0].universe(), print_series(s)); },
            [](const FnSeries &a, const FnSeries &b) { return a == b; });
    if (kind == "diffop")
        return check(
            parse_diffop_document,
            [](const DiffOp &d, bool p) { return document(*d.universe(), print_diffop(d, p)); },
            [](const DiffOp &a, const DiffOp &b) { return a == b; });
    if (kind == "bidiffop")
        return check(
            parse_bidiffop_document,
            [](const BiDiffOp &d, bool p) { return document(*d.universe(), print_bidiffop(d, p)); },
            [](const BiDiffOp &a, const BiDiffOp &b) { return a == b; });
    return check(
        parse_coeff_document, [](const CoeffFn &f, bool) { return document(*f.universe(), print_coeff(f)); },
        [](const CoeffFn &a, const CoeffFn &b) { return a == b && a.exp_rate() == b.exp_rate(); });
}

// ---------------------------------------------------------------- running

namespace {

std::string read_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Loaded {
    StarProduct S;
    CoisotropicChart cc;
    ChartConfig chart;
};

CoisotropicChart coiso_on(const UniverseP &U, const ChartConfig &cfg)
{
    const UniverseP &V = cfg.U;
    NamePairs basic, transverse;
    for (auto [q, p] : cfg.cc.basic)
        basic.emplace_back(V->var(q).name, V->var(p).name);
    for (size_t i = 0; i < cfg.cc.leaf.size(); ++i)
        transverse.emplace_back(V->var(cfg.cc.leaf[i]).name, V->var(cfg.cc.transverse[i]).name);
    try {
        return CoisotropicChart::make(U, basic, transverse);
    } catch (const std::exception &e) {
        throw InputError(std::string("chart does not fit the product: ") + e.what());
    }
}

// without a chart file, a product file brings its own pairs; pairs ending in a
// periodic variable cannot generate the ideal and stay basic
ChartConfig chart_of_product(const StarProduct &S)
{
    ChartConfig c;
    c.U = S.universe();
    NamePairs basic, transverse;
    for (auto [q, p] : S.chart.pairs)
        (c.U->periodic(p) ? basic : transverse).emplace_back(c.U->var(q).name, c.U->var(p).name);
    c.cc = CoisotropicChart::make(c.U, basic, transverse);
    return c;
}

Loaded load_product(const RunConfig &cfg, int N)
{
    Loaded L;
    const std::string &p = cfg.product;
    if (p.rfind("torus-", 0) == 0) {
        TorusProducts T = torus_products(N);
        if (p == "torus-star")
            L.S = T.star;
        else if (p == "torus-prime")
            L.S = T.prime;
        else if (p == "torus-second")
            L.S = T.second;
        else
            throw InputError("unknown builtin product '" + p + "'");
        L.cc = T.cc;
        L.chart.U = T.U();
        L.chart.cc = T.cc;
    } else {
        bool file = p.find('/') != std::string::npos || p.find('.') != std::string::npos;
        if (!cfg.chart_file.empty())
            L.chart = parse_chart_file(cfg.chart_file);
        else if (!file)
            L.chart = builtin_chart(cfg.dim, cfg.codim);
        const Chart &ch = L.chart.cc.chart;
        if (p == "star0")
            L.S = build_exponential_star(ch, Ordering::STANDARD, N);
        else if (p == "star0-opp")
            L.S = opposite_star(build_exponential_star(ch, Ordering::STANDARD, N));
        else if (p == "weyl")
            L.S = build_exponential_star(ch, Ordering::WEYL, N);
        else if (p == "pointwise")
            L.S = pointwise_product(ch, N);
        else if (file) {
            try {
                L.S = parse_star_document(read_file(p));
            } catch (const ParseError &e) {
                throw InputError("product file '" + p + "': " + e.what());
            }
            if (cfg.order >= 0)
                L.S = truncate_star(L.S, std::min(cfg.order, L.S.order()));
            if (cfg.chart_file.empty())
                L.chart = chart_of_product(L.S);
        } else
            throw InputError("unknown builtin product '" + p + "'");
        L.cc = coiso_on(L.S.universe(), L.chart);
    }
    if (cfg.conjugate >= 0) {
        std::mt19937 rng((unsigned)cfg.conjugate);
        L.S = apply_equivalence(random_equivalence(L.S.chart, L.S.order(), 2, rng), L.S);
        L.S.name += "-conjugated";
    }
    return L;
}

Report run_verify_axioms(const RunConfig &cfg)
{
    Loaded L = load_product(cfg, cfg.order >= 0 ? cfg.order : 5);
    AxiomOptions ao;
    ao.degree = cfg.degree >= 0 ? cfg.degree : 3;
    Report r = check_star_axioms(L.S, ao);
    r.detail["product"] = L.S.name;
    return r;
}

Report run_adapt(const RunConfig &cfg)
{
    Loaded L = load_product(cfg, cfg.order >= 0 ? cfg.order : 4);
    Report r;
    r.check = "adapt";
    r.order = L.S.order();
    std::string w;
    r.detail["product"] = L.S.name;
    r.detail["adapted_before"] = adapted_through(L.S, L.cc, &w);
    AdaptResult A = adapt(L.S, L.cc);
    r.detail["log"] = A.log;
    r.detail["adapted_after_step"] = A.adapted_after_step;
    if (!A.success) {
        Json cert = Json::array();
        for (auto &row : A.certificate) {
            Json jr = Json::array();
            for (auto &c : row)
                jr.push_back(print_terms(c));
            cert.push_back(jr);
        }
        r.detail["certificate"] = cert;
        r.fail(A.adapted_after_step.empty() ? 0 : A.adapted_after_step.back() + 1,
               "non-exact obstruction cocycle, see certificate");
        return r;
    }
    Report fin = check_adapted(A.S, L.cc);
    r.detail["final_adapted"] = fin.to_json();
    if (!fin.pass)
        r.fail(fin.order, fin.witness);
    AxiomOptions ao;
    ao.degree = cfg.degree >= 0 ? cfg.degree : 2;
    Report ax = check_star_axioms(A.S, ao);
    r.detail["final_axioms"] = ax.to_json();
    if (!ax.pass)
        r.fail(ax.order, ax.witness);
    r.detail["result"] = print_star(A.S);
    return r;
}

Report run_reduce(const RunConfig &cfg)
{
    Loaded L = load_product(cfg, cfg.order >= 0 ? cfg.order : 4);
    Report r;
    r.check = "reduce";
    r.order = L.S.order();
    r.detail["product"] = L.S.name;
    Report pr = check_projectable(L.S, L.cc, cfg.degree);
    r.detail["projectable"] = pr.to_json();
    try {
        StarProduct R = reduced_product(L.S, L.cc);
        r.detail["result"] = print_star(R);
    } catch (const AlgebraError &e) {
        r.fail(-1, e.what());
    }
    if (!pr.pass)
        r.fail(pr.order, pr.witness);
    return r;
}

Report run_commutant(const RunConfig &cfg)
{
    Loaded L = load_product(cfg, cfg.order >= 0 ? cfg.order : 4);
    Report r;
    r.check = "commutant";
    r.order = L.S.order();
    r.detail["product"] = L.S.name;
    try {
        IdealizerResult I = idealizer_commutant(L.S, L.cc, cfg.degree >= 0 ? cfg.degree : 3);
        r.detail["idealizer"] = I.to_json(*L.S.universe());
    } catch (const AlgebraError &e) {
        r.fail(-1, e.what());
    }
    return r;
}

Report run_fedosov(const RunConfig &cfg)
{
    ChartConfig C = cfg.chart_file.empty() ? builtin_chart(cfg.dim, cfg.codim) : parse_chart_file(cfg.chart_file);
    int N = cfg.order >= 0 ? cfg.order : 3;
    const Chart &ch = C.cc.chart;
    for (int v = 0; v < C.U->size(); ++v)
        if (C.U->periodic(v))
            throw InputError("fedosov-build needs polynomial variables");
    Report r;
    r.check = "fedosov-build";
    r.order = N;
    int maxDeg = 2 * N + 2;
    r.detail["max_degree"] = maxDeg;
    WeylContext ctx = WeylContext::make(ch, maxDeg);
    WeylElement Omega;
    if (!C.omega.empty()) {
        int n = (int)C.omega.size();
        std::vector<std::vector<CoeffFn>> B(n, std::vector<CoeffFn>(n, CoeffFn(C.U)));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                B[a][b] = CoeffFn(C.U, C.omega[a][b]);
        Omega = central_two_form(ctx, C.U, C.omega_order, B);
    }
    FedosovData d = fedosov_setup(ch, maxDeg, Omega);
    solve_r(d);
    StarProduct S = fedosov_star_product(d);
    S.name = "fedosov";
    Report fc = check_fedosov(d, 4, cfg.seed);
    r.detail["fedosov_checks"] = fc.to_json();
    if (!fc.pass)
        r.fail(fc.order, fc.witness);
    AxiomOptions ao;
    ao.degree = cfg.degree >= 0 ? cfg.degree : 2;
    Report ax = check_star_axioms(S, ao);
    r.detail["axioms"] = ax.to_json();
    if (!ax.pass)
        r.fail(ax.order, ax.witness);
    if (C.omega.empty()) {
        StarProduct W = build_exponential_star(ch, Ordering::WEYL, S.order());
        bool same = true;
        for (int k = 0; k <= S.order(); ++k)
            same = same && S.C[k] == W.C[k];
        r.detail["equals_weyl"] = same;
        if (!same)
            r.fail(-1, "flat product differs from the Weyl exponential");
    }
    DeligneResult dl = deligne_order0(S);
    Json form = Json::array();
    for (auto &row : dl.form) {
        Json jr = Json::array();
        for (auto &x : row)
            jr.push_back(x.str());
        form.push_back(jr);
    }
    r.detail["deligne_order0"] = form;
    r.detail["result"] = print_star(S);
    return r;
}

Report run_gutt(const RunConfig &cfg)
{
    LieAlgebraData lie;
    if (cfg.algebra == "heis3")
        lie = LieAlgebraData::heisenberg3();
    else if (cfg.algebra == "so3")
        lie = LieAlgebraData::so3();
    else if (cfg.algebra == "abelian2")
        lie = LieAlgebraData::abelian({"a", "b"});
    else
        throw InputError("unknown Lie algebra '" + cfg.algebra + "' (heis3, so3, abelian2)");
    GuttEngine G(lie);
    int D = cfg.degree >= 0 ? cfg.degree : 5;
    int depth = cfg.order >= 0 ? cfg.order : 4;
    if (depth > kMaxBchDepth)
        throw InputError("--order exceeds the BCH depth bound " + std::to_string(kMaxBchDepth));
    Report r;
    r.check = "gutt-check";
    r.order = depth;
    r.detail["algebra"] = cfg.algebra;
    Report id = check_gutt_identities(G, D, std::min(D, 3));
    r.detail["identities"] = id.to_json();
    if (!id.pass)
        r.fail(id.order, id.witness);
    if (lie.dim() >= 2) {
        std::vector<Scalar> xi(lie.dim()), eta(lie.dim());
        xi[0] = Scalar(1);
        eta[1] = Scalar(1);
        Report b = check_bch_exponentials(G, xi, eta, depth);
        r.detail["bch"] = b.to_json();
        if (!b.pass)
            r.fail(b.order, b.witness);
    }
    return r;
}

Report run_roundtrip(const RunConfig &cfg)
{
    Report r;
    r.check = "roundtrip";
    if (!cfg.input.empty()) {
        std::string text = read_file(cfg.input);
        std::string why;
        try {
            why = roundtrip_document(text);
        } catch (const ParseError &e) {
            throw InputError("'" + cfg.input + "': " + e.what());
        }
        r.detail["input"] = cfg.input;
        if (!why.empty())
            r.fail(-1, why);
        return r;
    }
    auto docs = random_documents(cfg.count, cfg.seed);
    r.detail["objects"] = docs.size();
    r.detail["seed"] = cfg.seed;
    for (size_t i = 0; i < docs.size(); ++i) {
        std::string why;
        try {
            why = roundtrip_document(docs[i]);
        } catch (const std::exception &e) {
            why = e.what();
        }
        if (!why.empty()) {
            r.fail(-1, "object " + std::to_string(i) + ": " + why);
            break;
        }
    }
    // reports round trip through their JSON form
    Report probe = cpn_check_inverse(ScalarSeries(std::vector<Scalar>{Scalar(1)}), Scalar(1), 2);
    if (report_from_json(Json::parse(probe.to_json().dump())).to_json() != probe.to_json())
        r.fail(-1, "report JSON round trip differs");
    if (random_documents(cfg.count, cfg.seed) != docs)
        r.fail(-1, "random generation is not deterministic");
    return r;
}

} // namespace

int run(const RunConfig &cfg, std::ostream &out, std::ostream &err)
{
    Report rep;
    try {
        if (cfg.order < -1 || (cfg.degree != -1 && cfg.degree < 1))
            throw InputError("--order must be >= 0 and --degree >= 1");
        if (cfg.command == "verify-axioms")
            rep = run_verify_axioms(cfg);
        else if (cfg.command == "adapt")
            rep = run_adapt(cfg);
        else if (cfg.command == "reduce")
            rep = run_reduce(cfg);
        else if (cfg.command == "commutant")
            rep = run_commutant(cfg);
        else if (cfg.command == "fedosov-build")
            rep = run_fedosov(cfg);
        else if (cfg.command == "gutt-check")
            rep = run_gutt(cfg);
        else if (cfg.command == "casebook") {
            if (cfg.target == "torus") {
                TorusOptions o;
                if (cfg.order >= 0)
                    o.order = cfg.order;
                if (cfg.degree >= 0)
                    o.fourier = cfg.degree;
                rep = torus_report(o);
            } else if (cfg.target == "cpn") {
                rep = cpn_report(cfg.order >= 0 ? cfg.order : 6);
            } else
                throw InputError("casebook case must be 'torus' or 'cpn'");
        } else if (cfg.command == "roundtrip")
            rep = run_roundtrip(cfg);
        else
            throw InputError("unknown command '" + cfg.command + "'");
    } catch (const InputError &e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError &e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    Json doc;
    doc["tool"] = "dqtool";
    doc["command"] = cfg.command + (cfg.target.empty() ? "" : " " + cfg.target);
    doc["report"] = rep.to_json();
    std::string text = doc.dump(cfg.pretty ? 2 : -1) + "\n";
    if (cfg.out.empty()) {
        out << text;
    } else {
        std::ofstream f(cfg.out);
        if (!f) {
            err << "error: cannot write '" << cfg.out << "'\n";
            return 2;
        }
        f << text;
    }
    if (!rep.pass)
        err << rep.check << ": fail at order " << rep.order << ": " << rep.witness << "\n";
    return rep.pass ? 0 : 1;
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"exact deformation quantization checks"};
    app.require_subcommand(1, 1);
    RunConfig cfg;
    auto common = [&](CLI::App *s, bool product) {
        s->add_option("--order", cfg.order, "truncation order N");
        s->add_option("--degree", cfg.degree, "monomial degree bound D");
        s->add_option("--out", cfg.out, "write the report here instead of stdout");
        s->add_flag("--pretty", cfg.pretty, "indent the JSON report");
        if (product) {
            s->add_option("--chart", cfg.chart_file, "chart file (JSON)");
            s->add_option("--dim", cfg.dim, "dimension of the builtin chart");
            s->add_option("--codim", cfg.codim, "number of transverse pairs in the builtin chart");
            s->add_option("--product,--builtin", cfg.product, "builtin name or product file");
            s->add_option("--conjugate", cfg.conjugate, "conjugate by a random equivalence with this seed");
        }
    };
    for (auto [name, what] : std::vector<std::pair<const char *, const char *>>{
             {"verify-axioms", "check unit, associativity and bracket of a product"},
             {"adapt", "adapt a product to the coisotropic chart order by order"},
             {"reduce", "check projectability and print the reduced product"},
             {"commutant", "compute the idealizer commutant to a degree bound"}})
        common(app.add_subcommand(name, what), true);
    auto *fed = app.add_subcommand("fedosov-build", "run the Fedosov construction on a flat chart");
    common(fed, false);
    fed->add_option("--chart", cfg.chart_file, "chart file (JSON), may carry 'omega'");
    fed->add_option("--dim", cfg.dim, "dimension of the builtin chart");
    fed->add_option("--seed", cfg.seed, "panel seed");
    auto *gut = app.add_subcommand("gutt-check", "check the Gutt product on a Lie algebra dual");
    common(gut, false);
    gut->add_option("--algebra", cfg.algebra, "heis3, so3 or abelian2");
    auto *cb = app.add_subcommand("casebook", "run a worked example (torus or cpn)");
    common(cb, false);
    cb->add_option("case", cfg.target, "torus or cpn")->required();
    auto *rt = app.add_subcommand("roundtrip", "serialize, parse and compare documents");
    common(rt, false);
    rt->add_option("--in", cfg.input, "document to round-trip");
    rt->add_option("--count", cfg.count, "number of random objects");
    rt->add_option("--seed", cfg.seed, "generator seed");
    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    cfg.command = app.get_subcommands().front()->get_name();
    return run(cfg, out, err);
}

} // namespace dq

#include "dq/textio.hpp"
#include "dq/diffop.hpp"

#include <cctype>
#include <set>

namespace dq {

// ---------------------------------------------------------------- printing

std::string print_monomial(const Universe &U, const Monomial &m)
{
    std::string s;
    for (int v = 0; v < U.size(); ++v) {
        if (!m.e[v])
            continue;
        if (!s.empty())
            s += " ";
        s += U.var(v).name;
        if (m.e[v] != 1)
            s += "^" + std::to_string(m.e[v]);
    }
    return s;
}

static std::string print_term(const Universe &U, const Monomial &m, const Scalar &c)
{
    std::string s = "(" + c.str() + ")";
    if (!m.is_one())
        s += " * " + print_monomial(U, m);
    return s;
}

std::string print_terms(const CoeffFn &f)
{
    if (f.is_zero())
        return "0";
    std::string s;
    for (auto &[m, c] : f.terms()) {
        if (!s.empty())
            s += " + ";
        s += print_term(*f.universe(), m, c);
    }
    return s;
}

static std::string flavor_prefix(Flavor fl, const Scalar &rate)
{
    switch (fl) {
    case Flavor::POLY: return "poly";
    case Flavor::LAURENT: return "laurent";
    case Flavor::EXPPOLY: return "exppoly(" + rate.str() + ")";
    }
    return "poly";
}

std::string print_coeff(const CoeffFn &f)
{
    return flavor_prefix(f.flavor(), f.exp_rate()) + " { " + print_terms(f) + " }";
}

std::string print_series(const NuSeries<CoeffFn> &s)
{
    std::string body;
    Scalar rate;
    Flavor fl = Flavor::POLY;
    for (int r = 0; r <= s.order(); ++r) {
        const CoeffFn &f = s[r];
        if (f.universe())
            fl = f.flavor();
        if (f.is_zero())
            continue;
        rate = f.exp_rate();
        for (auto &[m, c] : f.terms()) {
            if (!body.empty())
                body += " + ";
            if (r)
                body += "nu^" + std::to_string(r) + " * ";
            body += print_term(*f.universe(), m, c);
        }
    }
    if (body.empty())
        body = "0";
    return "series(" + std::to_string(s.order()) + ") " + flavor_prefix(fl, rate) + " { " + body + " }";
}

std::string print_diffop(const DiffOp &d, bool pretty)
{
    std::string s = "diffop {";
    bool first = true;
    for (auto &[I, c] : d.terms()) {
        s += first ? "" : " ;";
        s += pretty ? "\n  " : " ";
        s += "{ " + print_terms(c) + " } D[" + print_monomial(*d.universe(), I) + "]";
        first = false;
    }
    return s + (pretty ? "\n}" : " }");
}

std::string print_bidiffop(const BiDiffOp &b, bool pretty)
{
    std::string s = "bidiffop {";
    bool first = true;
    for (auto &[k, c] : b.terms()) {
        s += first ? "" : " ;";
        s += pretty ? "\n  " : " ";
        s += "{ " + print_terms(c) + " } D[" + print_monomial(*b.universe(), k.first) + " | " +
             print_monomial(*b.universe(), k.second) + "]";
        first = false;
    }
    return s + (pretty ? "\n}" : " }");
}

std::string print_universe(const Universe &U)
{
    std::string s = "universe";
    for (auto &v : U.vars()) {
        s += " " + v.name + ":";
        switch (v.kind) {
        case VarKind::Poly: s += "poly"; break;
        case VarKind::Periodic: s += "periodic"; break;
        case VarKind::Radial: s += "radial"; break;
        case VarKind::Param: s += "param"; break;
        }
    }
    if (U.param_trunc() >= 0)
        s += " | " + std::to_string(U.param_trunc());
    return s;
}

std::string document(const Universe &U, const std::string &body)
{
    return "dq-text " + std::to_string(kTextVersion) + "\n" + print_universe(U) + "\n" + body + "\n";
}

// ---------------------------------------------------------------- lexing

Lexer::Tok Lexer::lex(size_t &p) const
{
    while (p < s_.size() && std::isspace((unsigned char)s_[p]))
        ++p;
    Tok t;
    t.pos = p;
    if (p >= s_.size())
        return t;
    char c = s_[p];
    if (std::isalpha((unsigned char)c) || c == '_') {
        size_t q = p;
        while (q < s_.size() && (std::isalnum((unsigned char)s_[q]) || s_[q] == '_'))
            ++q;
        t.kind = Ident;
        t.text = s_.substr(p, q - p);
        p = q;
        return t;
    }
    if (std::isdigit((unsigned char)c)) {
        size_t q = p;
        while (q < s_.size() && std::isdigit((unsigned char)s_[q]))
            ++q;
        t.kind = Int;
        t.text = s_.substr(p, q - p);
        p = q;
        return t;
    }
    t.kind = Punct;
    t.text = std::string(1, c);
    ++p;
    return t;
}

Lexer::Tok Lexer::peek(int ahead)
{
    size_t p = p_;
    Tok t;
    for (int i = 0; i <= ahead; ++i)
        t = lex(p);
    return t;
}

Lexer::Tok Lexer::next() { return lex(p_); }

bool Lexer::at_end() { return peek().kind == End; }

void Lexer::fail(const std::string &msg, size_t pos) const
{
    size_t line = 1, col = 1;
    for (size_t i = 0; i < pos && i < s_.size(); ++i) {
        if (s_[i] == '\n') {
            ++line;
            col = 1;
        } else
            ++col;
    }
    throw ParseError("line " + std::to_string(line) + " col " + std::to_string(col) + ": " + msg);
}

void Lexer::fail(const std::string &msg) { fail(msg, peek().pos); }

void Lexer::expect(const std::string &w)
{
    Tok t = next();
    if (t.text != w || t.kind == End)
        fail("expected '" + w + "', found '" + (t.kind == End ? std::string("end of input") : t.text) + "'", t.pos);
}

bool Lexer::accept(const std::string &w)
{
    Tok t = peek();
    if (t.kind != End && t.text == w) {
        next();
        return true;
    }
    return false;
}

std::string Lexer::raw_until(char stop)
{
    size_t q = s_.find(stop, p_);
    if (q == std::string::npos)
        fail(std::string("missing '") + stop + "'", p_);
    std::string out;
    for (size_t i = p_; i < q; ++i)
        if (!std::isspace((unsigned char)s_[i]))
            out += s_[i];
    p_ = q;
    return out;
}

std::string Lexer::ident()
{
    Tok t = next();
    if (t.kind != Ident)
        fail("expected identifier", t.pos);
    return t.text;
}

long Lexer::integer()
{
    bool neg = accept("-");
    Tok t = next();
    if (t.kind != Int)
        fail("expected integer", t.pos);
    long v = std::stol(t.text);
    return neg ? -v : v;
}

// ---------------------------------------------------------------- parsing

void TextParser::header()
{
    lx_.expect("dq");
    lx_.expect("-");
    lx_.expect("text");
    auto t = lx_.peek();
    long v = lx_.integer();
    if (v != kTextVersion)
        lx_.fail("unsupported text version " + std::to_string(v), t.pos);
}

UniverseP TextParser::universe()
{
    lx_.expect("universe");
    std::vector<Var> vars;
    while (lx_.peek().kind == Lexer::Ident && lx_.peek(1).text == ":") {
        auto pos = lx_.peek().pos;
        Var v;
        v.name = lx_.ident();
        lx_.expect(":");
        std::string k = lx_.ident();
        if (k == "poly")
            v.kind = VarKind::Poly;
        else if (k == "periodic")
            v.kind = VarKind::Periodic;
        else if (k == "radial")
            v.kind = VarKind::Radial;
        else if (k == "param")
            v.kind = VarKind::Param;
        else
            lx_.fail("unknown variable kind '" + k + "'", pos);
        for (auto &w : vars)
            if (w.name == v.name)
                lx_.fail("duplicate variable '" + v.name + "'", pos);
        vars.push_back(v);
    }
    int trunc = -1;
    if (lx_.accept("|"))
        trunc = (int)lx_.integer();
    try {
        return make_universe(vars, trunc);
    } catch (const std::exception &e) {
        lx_.fail(e.what());
    }
}

Scalar TextParser::scalar_in_parens()
{
    lx_.expect("(");
    auto pos = lx_.peek().pos;
    std::string raw = lx_.raw_until(')');
    lx_.expect(")");
    try {
        return Scalar::parse(raw);
    } catch (const std::exception &e) {
        lx_.fail(e.what(), pos);
    }
}

Monomial TextParser::monomial(const UniverseP &U, bool allow_empty)
{
    Monomial m;
    bool any = false;
    while (lx_.peek().kind == Lexer::Ident) {
        auto t = lx_.next();
        int v = U->index(t.text);
        if (v < 0)
            lx_.fail("unknown variable '" + t.text + "'", t.pos);
        if (m.e[v] != 0)
            lx_.fail("repeated variable '" + t.text + "' in monomial", t.pos);
        long k = 1;
        if (lx_.accept("^")) {
            auto kp = lx_.peek().pos;
            k = lx_.integer();
            if (k == 0 || (k < 0 && !U->periodic(v)))
                lx_.fail("invalid exponent", kp);
        }
        m.set(v, (int)k);
        any = true;
    }
    if (!any && !allow_empty)
        lx_.fail("expected monomial");
    return m;
}

void TextParser::terms_into(const UniverseP &U, CoeffFn &f, std::vector<CoeffFn> *by_order, int N)
{
    if (lx_.peek().kind == Lexer::Int && lx_.peek().text == "0") {
        lx_.next();
        return;
    }
    std::set<std::pair<int, Monomial>> seen;
    do {
        int r = 0;
        if (lx_.peek().kind == Lexer::Ident) {
            auto t = lx_.peek();
            if (!by_order || t.text != "nu")
                lx_.fail("expected '('", t.pos);
            lx_.next();
            lx_.expect("^");
            auto rp = lx_.peek().pos;
            r = (int)lx_.integer();
            if (r < 1 || r > N)
                lx_.fail("nu power out of range", rp);
            lx_.expect("*");
        }
        auto pos = lx_.peek().pos;
        Scalar c = scalar_in_parens();
        if (c.is_zero())
            lx_.fail("zero coefficient stored", pos);
        Monomial m;
        if (lx_.accept("*"))
            m = monomial(U, false);
        if (!seen.insert({r, m}).second)
            lx_.fail("duplicate term", pos);
        try {
            if (by_order)
                (*by_order)[r].add_term(m, c);
            else
                f.add_term(m, c);
        } catch (const std::exception &e) {
            lx_.fail(e.what(), pos);
        }
    } while (lx_.accept("+"));
}

static Scalar parse_prefix(Lexer &lx, TextParser &tp, const UniverseP &U)
{
    auto pos = lx.peek().pos;
    std::string w = lx.ident();
    Flavor want = w == "poly" ? Flavor::POLY : w == "laurent" ? Flavor::LAURENT : w == "exppoly" ? Flavor::EXPPOLY
                                                                                                 : Flavor(-1);
    if ((int)want < 0)
        lx.fail("unknown coefficient flavor '" + w + "'", pos);
    if (want != U->flavor())
        lx.fail("flavor '" + w + "' does not match the universe", pos);
    Scalar rate;
    if (want == Flavor::EXPPOLY)
        rate = tp.scalar_in_parens();
    return rate;
}

CoeffFn TextParser::coeff(const UniverseP &U)
{
    Scalar rate = parse_prefix(lx_, *this, U);
    CoeffFn f(U);
    lx_.expect("{");
    terms_into(U, f, nullptr, 0);
    lx_.expect("}");
    f.set_exp_rate(rate);
    return f;
}

NuSeries<CoeffFn> TextParser::series(const UniverseP &U)
{
    lx_.expect("series");
    lx_.expect("(");
    auto pos = lx_.peek().pos;
    long N = lx_.integer();
    if (N < 0)
        lx_.fail("negative order", pos);
    lx_.expect(")");
    Scalar rate = parse_prefix(lx_, *this, U);
    std::vector<CoeffFn> c(N + 1, CoeffFn(U));
    CoeffFn dummy(U);
    lx_.expect("{");
    terms_into(U, dummy, &c, (int)N);
    lx_.expect("}");
    for (auto &f : c)
        f.set_exp_rate(rate);
    return NuSeries<CoeffFn>(c);
}

DiffOp TextParser::diffop(const UniverseP &U)
{
    lx_.expect("diffop");
    lx_.expect("{");
    DiffOp d(U);
    std::set<Monomial> seen;
    if (!lx_.accept("}")) {
        do {
            CoeffFn c(U);
            lx_.expect("{");
            terms_into(U, c, nullptr, 0);
            lx_.expect("}");
            lx_.expect("D");
            lx_.expect("[");
            auto pos = lx_.peek().pos;
            Monomial I = monomial(U, true);
            for (int v = 0; v < kMaxVars; ++v)
                if (I.e[v] < 0)
                    lx_.fail("negative derivative order", pos);
            lx_.expect("]");
            if (c.is_zero() || !seen.insert(I).second)
                lx_.fail("zero or duplicate operator term", pos);
            d.add(I, c);
        } while (lx_.accept(";"));
        lx_.expect("}");
    }
    return d;
}

BiDiffOp TextParser::bidiffop(const UniverseP &U)
{
    lx_.expect("bidiffop");
    lx_.expect("{");
    BiDiffOp b(U);
    std::set<std::pair<Monomial, Monomial>> seen;
    if (!lx_.accept("}")) {
        do {
            CoeffFn c(U);
            lx_.expect("{");
            terms_into(U, c, nullptr, 0);
            lx_.expect("}");
            lx_.expect("D");
            lx_.expect("[");
            auto pos = lx_.peek().pos;
            Monomial I = monomial(U, true);
            lx_.expect("|");
            Monomial J = monomial(U, true);
            for (int v = 0; v < kMaxVars; ++v)
                if (I.e[v] < 0 || J.e[v] < 0)
                    lx_.fail("negative derivative order", pos);
            lx_.expect("]");
            if (c.is_zero() || !seen.insert({I, J}).second)
                lx_.fail("zero or duplicate operator term", pos);
            b.add(I, J, c);
        } while (lx_.accept(";"));
        lx_.expect("}");
    }
    return b;
}

void TextParser::finish()
{
    if (!lx_.at_end())
        lx_.fail("trailing input");
}

CoeffFn parse_coeff_document(const std::string &text)
{
    TextParser p(text);
    p.header();
    auto U = p.universe();
    auto f = p.coeff(U);
    p.finish();
    return f;
}

NuSeries<CoeffFn> parse_series_document(const std::string &text)
{
    TextParser p(text);
    p.header();
    auto U = p.universe();
    auto s = p.series(U);
    p.finish();
    return s;
}

DiffOp parse_diffop_document(const std::string &text)
{
    TextParser p(text);
    p.header();
    auto U = p.universe();
    auto d = p.diffop(U);
    p.finish();
    return d;
}

BiDiffOp parse_bidiffop_document(const std::string &text)
{
    TextParser p(text);
    p.header();
    auto U = p.universe();
    auto b = p.bidiffop(U);
    p.finish();
    return b;
}

} // namespace dq

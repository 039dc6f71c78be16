#pragma once
// Text form of coefficient functions, series and operators.  Grammar in docs/formats.md.

#include "dq/coeff.hpp"

#include <string>

namespace dq {

class DiffOp;
class BiDiffOp;
template <class T> class NuSeries;

constexpr int kTextVersion = 1;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string print_monomial(const Universe &U, const Monomial &m);
std::string print_terms(const CoeffFn &f);
std::string print_coeff(const CoeffFn &f); // with flavor prefix
std::string print_series(const NuSeries<CoeffFn> &s);
std::string print_diffop(const DiffOp &d, bool pretty = false);
std::string print_bidiffop(const BiDiffOp &b, bool pretty = false);
std::string print_universe(const Universe &U);
std::string document(const Universe &U, const std::string &body);

class Lexer {
  public:
    explicit Lexer(std::string text) : s_(std::move(text)) {}
    enum Kind { End, Ident, Int, Punct };
    struct Tok {
        Kind kind = End;
        std::string text;
        size_t pos = 0;
    };
    Tok peek(int ahead = 0);
    Tok next();
    void expect(const std::string &punct_or_word);
    bool accept(const std::string &punct_or_word);
    std::string raw_until(char stop); // raw characters up to (not incl.) stop
    std::string ident();
    long integer();
    [[noreturn]] void fail(const std::string &msg, size_t pos) const;
    [[noreturn]] void fail(const std::string &msg);
    bool at_end();

  private:
    Tok lex(size_t &p) const;
    std::string s_;
    size_t p_ = 0;
};

class TextParser {
  public:
    explicit TextParser(std::string text) : lx_(std::move(text)) {}
    Lexer &lexer() { return lx_; }
    void header(); // "dq-text" version
    UniverseP universe();
    CoeffFn coeff(const UniverseP &U);
    NuSeries<CoeffFn> series(const UniverseP &U);
    DiffOp diffop(const UniverseP &U);
    BiDiffOp bidiffop(const UniverseP &U);
    Monomial monomial(const UniverseP &U, bool allow_empty);
    Scalar scalar_in_parens();
    void finish();

  private:
    void terms_into(const UniverseP &U, CoeffFn &f, std::vector<CoeffFn> *by_order, int N);
    Lexer lx_;
};

CoeffFn parse_coeff_document(const std::string &text);
NuSeries<CoeffFn> parse_series_document(const std::string &text);
DiffOp parse_diffop_document(const std::string &text);
BiDiffOp parse_bidiffop_document(const std::string &text);

} // namespace dq

#pragma once
// Command-line driver: run configuration, chart config files, star product
// text form, report parsing and the serialize/parse round trip.
#include "dq/coiso.hpp"
#include "dq/textio.hpp"

#include <iosfwd>
#include <random>

namespace dq {

// malformed configuration or arguments (exit code 2)
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string print_star(const StarProduct &S, bool pretty = false); // complete document
StarProduct parse_star_document(const std::string &text);
bool star_equal(const StarProduct &a, const StarProduct &b);

Report report_from_json(const Json &j);

// chart file: variables, Darboux pairs, optional coisotropic split and central form
struct ChartConfig {
    UniverseP U;
    CoisotropicChart cc;
    Matrix omega; // constant 2-form on the symplectic variables, empty if absent
    int omega_order = 1;
};
ChartConfig parse_chart_config(const Json &j);
ChartConfig parse_chart_file(const std::string &path);
// x1 y1 ... xk yk, pairs (xi, yi); the last `codim` pairs are leaf/transverse
ChartConfig builtin_chart(int dim, int codim);

// random equivalence S_0 = id, S_r with terms of order 1..2 and polynomial coefficients of degree <= maxdeg
EquivalenceTransform random_equivalence(const Chart &chart, int N, int maxdeg, std::mt19937 &rng);

// random objects of every serializable kind; each entry is one complete document
std::vector<std::string> random_documents(int count, unsigned seed);
// parse, print and reparse one document; empty string on success, else the reason
std::string roundtrip_document(const std::string &text);

struct RunConfig {
    std::string command;
    std::string target;      // casebook case
    int order = -1;          // N
    int degree = -1;         // D
    int dim = 4;
    int codim = -1;
    std::string chart_file;
    std::string product = "star0";
    std::string out;
    std::string input;       // roundtrip file
    std::string algebra = "heis3";
    int count = 100;
    unsigned seed = 1;
    int conjugate = -1;      // seed for a random conjugation, -1 = none
    bool pretty = false;
};

// parses argv-style arguments (without the program name) and runs; returns the exit code
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);
int run(const RunConfig &cfg, std::ostream &out, std::ostream &err);

} // namespace dq

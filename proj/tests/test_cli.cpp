#include "dq/cli.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace dq;
using Pairs = std::vector<std::pair<std::string, std::string>>;

namespace {

struct ToolRun {
    int code = -1;
    std::string out;
};

ToolRun tool(const std::string &args)
{
    ToolRun r;
    std::string cmd = std::string(DQ_TOOL) + " " + args + " 2>/dev/null";
    FILE *p = popen(cmd.c_str(), "r");
    if (!p)
        return r;
    std::array<char, 4096> buf;
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0)
        r.out.append(buf.data(), n);
    int st = pclose(p);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string temp_file(const std::string &name, const std::string &content)
{
    std::string path = testing::TempDir() + name;
    std::ofstream(path) << content;
    return path;
}

std::string slurp(const std::string &path)
{
    std::ifstream f(path);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

} // namespace

TEST(Tool, PassingCheckExitsZeroWithReport)
{
    ToolRun r = tool("verify-axioms --product star0 --order 3 --degree 2");
    ASSERT_EQ(r.code, 0);
    Json j = Json::parse(r.out);
    EXPECT_EQ(j["command"], "verify-axioms");
    EXPECT_EQ(j["report"]["status"], "pass");
}

TEST(Tool, FailingCheckExitsOneWithWitness)
{
    ToolRun r = tool("reduce --product torus-prime --order 3");
    ASSERT_EQ(r.code, 1);
    Json j = Json::parse(r.out);
    EXPECT_EQ(j["report"]["status"], "fail");
    EXPECT_FALSE(j["report"]["witness"].is_null());
}

TEST(Tool, MalformedInputExitsTwo)
{
    std::string dup = temp_file("dup.json", R"({"variables": ["x", "x"], "pairs": [["x", "x"]]})");
    EXPECT_EQ(tool("verify-axioms --chart " + dup).code, 2);
    std::string broken = temp_file("broken.json", "{ not json");
    EXPECT_EQ(tool("verify-axioms --chart " + broken).code, 2);
    EXPECT_EQ(tool("no-such-command").code, 2);
    EXPECT_EQ(tool("verify-axioms --product no-such-product").code, 2);
    EXPECT_EQ(tool("casebook klein-bottle").code, 2);
    std::string v2 = temp_file("v2.txt", "dq-text 2\nuniverse x:poly\npoly { (1) * x }\n");
    EXPECT_EQ(tool("roundtrip --in " + v2).code, 2);
}

TEST(Tool, ReportsAreByteIdenticalAcrossRuns)
{
    ToolRun a = tool("casebook cpn"), b = tool("casebook cpn");
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    ToolRun c = tool("adapt --product star0 --conjugate 3 --order 3"), d = tool("adapt --product star0 --conjugate 3 --order 3");
    EXPECT_EQ(c.code, 0);
    EXPECT_EQ(c.out, d.out);
}

TEST(Tool, TorusReportMatchesGolden)
{
    ToolRun r = tool("casebook torus");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, slurp(std::string(DQ_GOLDEN_DIR) + "/torus.json"));
}

TEST(Tool, ProductFileRoundTripsThroughTheTool)
{
    auto U = poly_universe({"q", "p"});
    StarProduct S = build_exponential_star(Chart::darboux(U, Pairs{{"q", "p"}}), Ordering::WEYL, 3);
    std::string path = temp_file("weyl.dq", print_star(S));
    ToolRun r = tool("verify-axioms --product " + path + " --degree 2");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(tool("roundtrip --in " + path).code, 0);
}

TEST(TextForm, StarProductRoundTrip)
{
    auto U = poly_universe({"q1", "p1", "q2", "p2"});
    Chart ch = Chart::darboux(U, Pairs{{"q1", "p1"}, {"q2", "p2"}});
    for (auto ord : {Ordering::STANDARD, Ordering::WEYL}) {
        StarProduct S = build_exponential_star(ch, ord, 3);
        for (bool pretty : {false, true}) {
            std::string text = print_star(S, pretty);
            StarProduct back = parse_star_document(text);
            EXPECT_TRUE(star_equal(S, back));
            EXPECT_EQ(print_star(back, pretty), text);
        }
    }
    std::string text = print_star(build_exponential_star(ch, Ordering::WEYL, 2));
    EXPECT_THROW(parse_star_document("dq-text 9" + text.substr(text.find('\n'))), ParseError);
}

TEST(TextForm, RandomDocumentsRoundTrip)
{
    auto docs = random_documents(40, 5);
    ASSERT_EQ(docs.size(), 40u);
    for (auto &d : docs)
        EXPECT_EQ(roundtrip_document(d), "") << d;
    EXPECT_EQ(random_documents(40, 5), docs);
}

TEST(Reports, JsonRoundTrip)
{
    Report r;
    r.check = "x";
    r.fail(2, "witness text");
    r.detail["k"] = 3;
    Report back = report_from_json(r.to_json());
    EXPECT_EQ(back.to_json().dump(), r.to_json().dump());
    EXPECT_FALSE(back.pass);
    EXPECT_EQ(back.order, 2);
}

TEST(ChartConfig, ValidationErrors)
{
    auto bad = [](const char *s) { return parse_chart_config(Json::parse(s)); };
    EXPECT_THROW(bad(R"({"variables": ["x", "x"], "pairs": [["x", "x"]]})"), InputError);
    EXPECT_THROW(bad(R"({"variables": ["x", "y"], "pairs": [["x", "z"]]})"), InputError);
    EXPECT_THROW(bad(R"({"variables": [{"name": "u", "kind": "periodic"}, "p"], "pairs": [["p", "u"]],
                        "transverse": [["p", "u"]]})"),
                 InputError);
    EXPECT_THROW(bad(R"({"variables": ["x", "y"], "pairs": [["x", "y"]], "omega": [[0, 1], [2, 0]]})"), InputError);
    ChartConfig ok = parse_chart_config(Json::parse(R"({"variables": ["a", "b", "c", "d"],
        "pairs": [["a", "b"], ["c", "d"]], "basic": [["a", "b"]], "transverse": [["c", "d"]]})"));
    EXPECT_EQ(ok.U->size(), 4);
    EXPECT_EQ(ok.cc.codim(), 1);
    ChartConfig b = builtin_chart(6, 2);
    EXPECT_EQ(b.U->size(), 6);
    EXPECT_EQ(b.cc.codim(), 2);
}

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "dp4/cli.hpp"

using namespace dp4;
using cli::Json;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args, const std::string& env = "")
{
    std::string cmd = env + " " + DP4_CLI_PATH + " " + args + " 2>/dev/null";
    Run r;
    FILE* f = popen(cmd.c_str(), "r");
    if (!f) return r;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, f)) > 0) r.out.append(buf, n);
    int st = pclose(f);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string sample(const std::string& name) { return std::string(DP4_SAMPLES_DIR) + "/" + name; }

std::string write_temp(const std::string& name, const std::string& text)
{
    std::string path = ::testing::TempDir() + name;
    std::ofstream(path) << text;
    return path;
}

}  // namespace

TEST(Cli, ParsesBothFormLayouts)
{
    auto a = cli::parse_pencil_json(R"({"Q0": ["1","2","0","0","0","3","0","0","0","0","0","0","0","0","-1/2"],
                                        "Q1": [["1","1","0","0","0"],["1","3","0","0","0"],["0","0","0","0","0"],
                                               ["0","0","0","0","0"],["0","0","0","0","-1/2"]]})");
    EXPECT_EQ(a.Q0, a.Q1);
    EXPECT_EQ(a.Q0.coeff(0, 1), 2);
    EXPECT_EQ(a.Q0.coeff(4, 4), Rat(-1, 2));
    EXPECT_EQ(a.label, "pencil");
}

TEST(Cli, RejectsMalformedInput)
{
    EXPECT_THROW(cli::parse_pencil_json("{\"Q0\": [1, 2"), ParseError);
    EXPECT_THROW(cli::parse_pencil_json("{\"Q0\": []}"), ParseError);
    EXPECT_THROW(cli::parse_pencil_json("[1]"), ParseError);
    std::string bad_gram = R"({"Q0": [["1","2","0","0","0"],["1","3","0","0","0"],["0","0","0","0","0"],
                                      ["0","0","0","0","0"],["0","0","0","0","1"]],
                               "Q1": ["1","0","0","0","0","1","0","0","0","1","0","0","1","0","1"]})";
    EXPECT_THROW(cli::parse_pencil_json(bad_gram), ParseError);
    EXPECT_THROW(cli::parse_pencil_json(R"({"Q0": ["x","0","0","0","0","1","0","0","0","1","0","0","1","0","1"],
                                            "Q1": ["1","0","0","0","0","1","0","0","0","1","0","0","1","0","1"]})"),
                 ParseError);
    try {
        cli::parse_pencil_json("{\n\"Q0\": [1,\n");
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("line"), std::string::npos);
    }
}

TEST(Cli, RoundTripThroughPencilFile)
{
    for (auto& ex : cli::examples()) {
        auto back = cli::parse_pencil_json(cli::pencil_file_json(ex.input).dump());
        EXPECT_EQ(back.Q0, ex.input.Q0);
        EXPECT_EQ(back.Q1, ex.input.Q1);
    }
}

TEST(Cli, RtOnWeakApproximationSample)
{
    auto r = run("rt " + sample("weak_approx_3_7_2.json"));
    ASSERT_EQ(r.code, 0);
    auto j = Json::parse(r.out);
    EXPECT_EQ(j["schema"], cli::schema_version);
    ASSERT_EQ(j["rt"].size(), 1u);
    EXPECT_EQ(j["rt"][0]["T"], "{0, 1}");
    EXPECT_EQ(j["rt"][0]["R_T"], Json::array({"7"}));
    EXPECT_EQ(j["rt"][0]["parity"], "odd");
}

TEST(Cli, ExitCodes)
{
    EXPECT_EQ(run("check " + write_temp("bad.json", "{\"Q0\": [1,")).code, 2);
    EXPECT_EQ(run("check /nonexistent/file.json").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
    EXPECT_EQ(run("evaluate " + sample("bsd_gram.json") + " --place 4 --t 1").code, 2);
    // repeated ratio 1 in the diagonal pencil: not smooth
    std::string sing = R"({"Q0": ["1","0","0","0","0","2","0","0","0","3","0","0","5","0","7"],
                           "Q1": ["1","0","0","0","0","2","0","0","0","1","0","0","2","0","3"]})";
    auto r = run("singular " + write_temp("sing.json", sing));
    EXPECT_EQ(r.code, 3);
    EXPECT_FALSE(Json::parse(r.out)["smoothness"]["smooth"].get<bool>());
    EXPECT_EQ(run("check " + sample("nonconstant.json")).code, 0);
}

TEST(Cli, ReportsAreByteStableAcrossThreadCounts)
{
    auto a = run("obstruction " + sample("nonconstant.json") + " --depth 4 --threads 1");
    auto b = run("obstruction " + sample("nonconstant.json") + " --depth 4 --threads 3");
    auto c = run("obstruction " + sample("nonconstant.json") + " --depth 4", "DP4_THREADS=2");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out, c.out);
}

TEST(Cli, OutFileMatchesStdout)
{
    std::string path = ::testing::TempDir() + "report.json";
    auto a = run("brauer " + sample("bsd_gram.json") + " --out " + path);
    ASSERT_EQ(a.code, 0);
    EXPECT_TRUE(a.out.empty());
    std::ifstream f(path);
    std::string text((std::istreambuf_iterator<char>(f)), {});
    EXPECT_EQ(text, run("brauer " + sample("bsd_gram.json")).out);
}

TEST(Cli, BsdExampleReport)
{
    auto r = run("examples run bsd");
    ASSERT_EQ(r.code, 0);
    auto j = Json::parse(r.out);
    EXPECT_EQ(j["brauer"]["n"], 1);
    EXPECT_TRUE(j["brauer"]["generators"][0]["reducible"].get<bool>());
    ASSERT_EQ(j["points"].size(), 7u);
    for (auto& p : j["points"]) EXPECT_TRUE(p["verified"].get<bool>());
    EXPECT_TRUE(j["obstruction"]["zero_reachable"].get<bool>());
    std::set<std::string> roots;
    for (auto& p : j["singular_locus"]["points"])
        if (p.contains("root")) roots.insert(p["root"].get<std::string>());
    EXPECT_EQ(roots, (std::set<std::string>{"-1", "0", "1"}));
}

TEST(Cli, ExamplesListAndUnknownName)
{
    auto r = run("examples list");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(Json::parse(r.out).size(), 3u);
    EXPECT_EQ(run("examples run nosuch").code, 2);
    EXPECT_EQ(run("examples run").code, 2);
}

TEST(Cli, PointsAndVerifyPoint)
{
    auto r = run("points " + sample("bsd_gram.json") + " --d -1 --bound 1");
    ASSERT_EQ(r.code, 0);
    auto j = Json::parse(r.out);
    EXPECT_FALSE(j["points"]["found"].empty());
    for (auto& p : j["points"]["found"]) EXPECT_TRUE(p["verified"].get<bool>());
    auto v = run("verify-point " + sample("bsd_gram.json") + " --d 2 --coords 1,-2,2r,r,1");
    ASSERT_EQ(v.code, 0);
    EXPECT_EQ(Json::parse(v.out)["point"]["t"], "2/3");
    EXPECT_EQ(run("verify-point " + sample("bsd_gram.json") + " --d 2 --coords 1,0,0,0,0").code, 1);
}

TEST(Cli, EvaluateAndReduce)
{
    auto e = run("evaluate " + sample("weak_approx_3_7_2.json") + " --place 2 --t -1/20");
    ASSERT_EQ(e.code, 0);
    auto j = Json::parse(e.out)["evaluation"];
    EXPECT_TRUE(j["fiber_solvable"].get<bool>());
    EXPECT_EQ(j["values"][0]["value"], "1/2");
    auto r = run("reduce " + sample("bsd_gram.json") + " --p 11 --weights 1,0,0,0,0");
    ASSERT_EQ(r.code, 0);
    auto red = Json::parse(r.out)["reduction"];
    EXPECT_EQ(red["certificate"]["verdict"], "split-certified");
    EXPECT_TRUE(red["local_point"]["verified"].get<bool>());
    EXPECT_EQ(run("reduce " + sample("bsd_gram.json") + " --p 12").code, 2);
}

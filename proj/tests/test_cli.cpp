#include "cli.hpp"
#include "hlusin/io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using hlusin::io::json;

namespace {

struct Result
{
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    args.insert(args.begin(), "hlusin");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = hlusin::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class TempDir
{
public:
    TempDir()
    {
        path_ = fs::temp_directory_path() /
                ("hlusin_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
                 ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    fs::path path_;
};

void write(const std::string& path, const std::string& text)
{
    std::ofstream f(path);
    f << text;
}

std::string read(const std::string& path)
{
    std::ifstream f(path);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

} // namespace

TEST(Cli, HelpAndUsageErrors)
{
    auto help = run({"--help"});
    EXPECT_EQ(help.code, 0);
    EXPECT_NE(help.out.find("counterexample"), std::string::npos);
    auto none = run({});
    EXPECT_EQ(none.code, 2);
    auto bogus = run({"counterexample", "build", "--depth", "99"});
    EXPECT_EQ(bogus.code, 2);
    EXPECT_NE(bogus.err.find("error"), std::string::npos);
    EXPECT_EQ(run({"counterexample", "straddle", "--n", "10", "--depth", "10"}).code, 2);
    EXPECT_EQ(run({"sieve", "--eps", "0"}).code, 2);
    EXPECT_EQ(run({"diff", "lp", "--p", "0"}).code, 2);
    EXPECT_EQ(run({"jets", "check", "--input", "/nonexistent/jets.json"}).code, 2);
}

TEST(Cli, StraddleReportsExactRatio)
{
    auto r = run({"counterexample", "straddle", "--n", "7", "--depth", "10"});
    ASSERT_EQ(r.code, 0) << r.err;
    json j = json::parse(r.out);
    EXPECT_EQ(j.at("ratio"), "1073741824/43046721");
    EXPECT_EQ(j.at("scaled_height"), "16384/6561");
    EXPECT_EQ(j.at("exceeds_two"), true);
    auto dec = run({"--decimal", "6", "counterexample", "straddle", "--n", "6", "--depth", "10"});
    ASSERT_EQ(dec.code, 0);
    EXPECT_EQ(json::parse(dec.out).at("exceeds_two"), false);
}

TEST(Cli, VerifyPasses)
{
    auto r = run({"counterexample", "verify", "--depth", "8"});
    ASSERT_EQ(r.code, 0) << r.out << r.err;
    EXPECT_EQ(json::parse(r.out).at("pass"), true);
}

TEST(Cli, BuildIsDeterministicAndWritesLfCsv)
{
    TempDir tmp;
    auto a = run({"counterexample", "build", "--depth", "4", "--samples", "16", "--breakpoints", "--out-dir",
                  tmp.file("a")});
    auto b = run({"counterexample", "build", "--depth", "4", "--samples", "16", "--breakpoints", "--out-dir",
                  tmp.file("b")});
    ASSERT_EQ(a.code, 0) << a.err;
    ASSERT_EQ(b.code, 0);
    for (const char* name : {"curve.csv", "levels.json", "exclusion.json"})
        EXPECT_EQ(read(tmp.file(std::string("a/") + name)), read(tmp.file(std::string("b/") + name)));
    std::string csv = read(tmp.file("a/curve.csv"));
    EXPECT_EQ(csv.rfind("t,f,g,h\n0/1,0/1,0/1,0/1\n", 0), 0u);
    EXPECT_EQ(csv.find('\r'), std::string::npos);
    EXPECT_EQ(csv.back(), '\n');
    EXPECT_NE(csv.find("\n1/1,0/1,0/1,"), std::string::npos);
    json levels = json::parse(read(tmp.file("a/levels.json")));
    EXPECT_EQ(levels.size(), 4u);
}

TEST(Cli, JetsCheckExitStatus)
{
    TempDir tmp;
    write(tmp.file("zero.json"), R"({"m": 1, "sites": [
        {"x": "1/2", "F": [0, 0], "G": [0, 0], "H": [0, 0]},
        {"x": 0, "F": [0, 0], "G": [0, 0], "H": [0, 0]},
        {"x": 1, "F": [0, 0], "G": [0, 0], "H": [0, 0]}]})");
    auto ok = run({"jets", "check", "--input", tmp.file("zero.json"), "--m", "1"});
    EXPECT_EQ(ok.code, 0) << ok.out << ok.err;
    EXPECT_EQ(run({"jets", "check", "--input", tmp.file("zero.json"), "--m", "2"}).code, 2);

    write(tmp.file("bad.json"), R"({"m": 1, "sites": [
        {"x": 0, "F": [0, 0], "G": [0, 0], "H": [0, 0]},
        {"x": "1/64", "F": [0, 0], "G": [0, 0], "H": ["1/16", 0]}]})");
    EXPECT_EQ(run({"jets", "check", "--input", tmp.file("bad.json")}).code, 1);

    write(tmp.file("broken.json"), R"({"m": 1, "sites": [{"x": 0, "F": [0], "G": [0, 0], "H": [0, 0]}]})");
    EXPECT_EQ(run({"jets", "check", "--input", tmp.file("broken.json")}).code, 2);
}

TEST(Cli, CurveLiftMatchesClosedForm)
{
    TempDir tmp;
    write(tmp.file("in.csv"), "t,f,g\n0,0,0\n1/2,1/2,0\n1,1/2,1/2\n");
    auto r = run({"curve", "lift", "--input", tmp.file("in.csv"), "--h0", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    // Second segment: f = 1/2, g from 0 to 1/2 gives h' = -2 g' f = -1 per unit t, over 1/2.
    EXPECT_EQ(r.out, "t,f,g,h\n0/1,0/1,0/1,1/1\n1/2,1/2,0/1,1/1\n1/1,1/2,1/2,1/2\n");
}

TEST(Cli, DiffCommands)
{
    auto lp = run({"diff", "lp", "--source", "poly", "--poly", "0,0,0,1", "--x", "1/2", "--m", "2", "--p", "1",
                   "--rho", "1/4,1/8"});
    ASSERT_EQ(lp.code, 0) << lp.err;
    EXPECT_EQ(lp.out.rfind("rho,value\n", 0), 0u);
    auto dens = run({"diff", "density", "--source", "poly", "--poly", "0,1", "--x", "0", "--m", "2", "--eps", "4",
                     "--radius", "1"});
    ASSERT_EQ(dens.code, 0) << dens.err;
    EXPECT_EQ(json::parse(dens.out).at("density").at("value"), "3/4");
    auto sv = run({"sieve", "--source", "poly", "--poly", "1,2,3", "--m", "2", "--eps", "1/20", "--grid-exp", "6"});
    ASSERT_EQ(sv.code, 0) << sv.err;
    EXPECT_EQ(sv.out, run({"sieve", "--source", "poly", "--poly", "1,2,3", "--m", "2", "--eps", "1/20",
                           "--grid-exp", "6"}).out);
}

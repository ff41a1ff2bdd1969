#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lds4/cli.hpp"

using namespace lds4;
using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run(std::vector<std::string> args, const cli::RunOptions& hooks = {})
{
    std::ostringstream out, err;
    const int code = cli::run(args, out, err, hooks);
    return {code, out.str(), err.str()};
}

Json run_json(std::vector<std::string> args)
{
    args.insert(args.begin(), {"--format", "json"});
    const CliRun r = run(args);
    return Json::parse(r.out);
}

std::vector<std::string> strings(const Json& a)
{
    std::vector<std::string> out;
    for (const auto& v : a) out.push_back(v.get<std::string>());
    return out;
}

}  // namespace

TEST(Cli, Lucas)
{
    EXPECT_EQ(run({"lucas", "--h", "1", "--k", "-1", "--count", "10"}).out, "0,1,1,2,3,5,8,13,21,34\n");
    EXPECT_EQ(run({"lucas", "--h", "2", "--k", "1", "--count", "5"}).out, "0,1,2,3,4\n");
    const CliRun bad = run({"--format", "json", "lucas", "--h", "1", "--k", "0", "--count", "3"});
    EXPECT_EQ(bad.code, 2);
    const Json e = Json::parse(bad.out);
    EXPECT_EQ(e["error"]["kind"], "precondition");
    EXPECT_NE(e["error"]["message"].get<std::string>().find("nonzero"), std::string::npos);
}

TEST(Cli, Compose)
{
    const Json j = run_json({"compose", "--h1", "1", "--k1", "-1", "--h2", "1", "--k2", "-1", "--count", "6"});
    EXPECT_EQ(j["result"]["p"], "1");
    EXPECT_EQ(j["result"]["q"], "-6");
    EXPECT_EQ(j["result"]["r"], "1");
    EXPECT_EQ(strings(j["result"]["terms"]), (std::vector<std::string>{"0", "1", "1", "4", "9", "25"}));
    EXPECT_EQ(j["result"]["kron_consistent"], true);
    const Json n2 = run_json({"compose", "--h1", "2", "--k1", "1", "--h2", "2", "--k2", "1", "--count", "5"});
    EXPECT_EQ(strings(n2["result"]["terms"]), (std::vector<std::string>{"0", "1", "4", "9", "16"}));
    EXPECT_EQ(run({"compose", "--h1", "1", "--k1", "0", "--h2", "1", "--k2", "1"}).code, 2);
}

TEST(Cli, Factor)
{
    const Json j = run_json({"factor", "--p", "1", "--q", "-6", "--r", "1"});
    ASSERT_EQ(j["result"]["pairs"].size(), 2U);
    for (const auto& pair : j["result"]["pairs"]) {
        EXPECT_EQ(pair["ring"], "gaussian_integers");
        EXPECT_EQ(pair["verified"], true);
    }
    EXPECT_EQ(j["certification"], "certified");
    EXPECT_EQ(j["precision"], 256);

    const Json p0 = run_json({"factor", "--p", "0", "--q", "1", "--r", "1"});
    ASSERT_EQ(p0["result"]["pairs"].size(), 2U);
    EXPECT_EQ(p0["result"]["pairs"][0]["family"], "p0_first");
    EXPECT_EQ(p0["result"]["pairs"][1]["family"], "p0_second");
    EXPECT_NE(std::find(p0["errata"].begin(), p0["errata"].end(), "factorization_p0_second_family_sequence"), p0["errata"].end());

    const CliRun degenerate = run({"factor", "--p", "4", "--q", "4", "--r", "1"});
    EXPECT_EQ(degenerate.code, 2);
    EXPECT_NE(degenerate.err.find("coincide"), std::string::npos);
}

TEST(Cli, Salem)
{
    EXPECT_EQ(run({"salem", "generate", "--t", "6", "--count", "7"}).out, "1,6,29,144,725,3654,18409\n");
    EXPECT_EQ(run({"salem", "generate", "--p", "7", "--q", "5", "--count", "7"}).out, "1,7,41,245,1476,8897,53621\n");
    EXPECT_EQ(run({"salem", "region", "--p", "2"}).out, "(-8, -40/9)\n");
    EXPECT_EQ(run({"salem", "check", "--p", "1", "--q", "0"}).out, "false\n");
    EXPECT_EQ(run({"salem", "check", "--t", "6"}).out, "true\n");
    EXPECT_EQ(run({"salem", "generate", "--t", "5"}).code, 2);
    EXPECT_EQ(run({"salem", "generate", "--p", "6"}).code, 2);

    const Json binet = run_json({"salem", "binet", "--t", "8"});
    EXPECT_EQ(binet["result"]["closed_form_agrees"], true);
    const Json roots = run_json({"salem", "roots", "--t", "9"});
    EXPECT_EQ(roots["result"]["closed_form_agrees"], true);
    const Json small = run_json({"salem", "smallness", "--p", "5", "--q", "3"});
    EXPECT_EQ(small["result"]["holds_for_all_n_ge_1"], "no");
}

TEST(Cli, SalemScanCsv)
{
    const CliRun r = run({"--format", "csv", "salem", "scan", "--p-min", "2", "--p-max", "4", "--strip"});
    ASSERT_EQ(r.code, 0);
    std::istringstream in(r.out);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "p,q,in_region,verdict,margin,holds_eventually,agreement,empirical_identity\r");
    int rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    EXPECT_GT(rows, 5);
    const Json j = run_json({"salem", "scan", "--p-max", "12", "--strip", "--empirical", "0"});
    EXPECT_GE(j["result"]["summary"]["agreement_rate"].get<double>(), 0.95);
}

TEST(Cli, Divcheck)
{
    EXPECT_EQ(run({"divcheck", "--lucas", "1,-1", "--n", "30"}).out, "no violations in 31 terms\n");
    const Json bad = run_json({"divcheck", "--terms", "0,1,2,3,5"});
    EXPECT_EQ(bad["result"]["divisibility_sequence"], false);
    EXPECT_EQ(bad["result"]["violations"], Json::parse("[[2,4]]"));
    const Json salem = run_json({"divcheck", "--salem", "6", "--n", "40"});
    EXPECT_EQ(salem["result"]["divisibility_sequence"], true);
    EXPECT_EQ(salem["result"]["count"], 41);
    EXPECT_EQ(run({"divcheck", "--lucas", "1,-1", "--terms", "0,1"}).code, 2);
}

TEST(Cli, OtherCommands)
{
    EXPECT_EQ(run({"recognize", "--coeffs", "1,-6,6,-6,1"}).out, "p=6 q=4 r=1\n");
    EXPECT_EQ(run({"recognize", "--coeffs", "1,1,0,0,1"}).out, "not standard\n");
    EXPECT_EQ(run({"kron", "--f", "-1,-1,1", "--g", "-1,-1,1"}).out, "x^4 - x^3 - 4x^2 - x + 1\n");
    EXPECT_EQ(run({"terms", "--p", "6", "--q", "4", "--r", "1", "--count", "5"}).out, "0,1,6,29,144\n");
    const Json b = run_json({"bound", "--p", "6", "--q", "4", "--r", "1", "--n", "6"});
    EXPECT_EQ(b["result"]["divides"], true);
    EXPECT_TRUE(b["result"]["b_n"].is_string());
}

TEST(Cli, Oeis)
{
    const fs::path empty = fs::temp_directory_path() / "lds4-cli-empty-cache";
    fs::create_directories(empty);
    const CliRun fixture = run({"--format", "json", "oeis", "--terms", "0,1,1,2,3,5,8,13", "--source", "fixture",
                             "--fixture-dir", std::string(LDS4_FIXTURE_DIR) + "/oeis"});
    EXPECT_EQ(fixture.code, 0);
    const Json j = Json::parse(fixture.out);
    EXPECT_EQ(j["result"]["source"], "fixture");
    EXPECT_EQ(j["result"]["matches"][0]["sequence_id"], "A000045");

    const CliRun miss = run({"oeis", "--terms", "1,6,29,144,725", "--source", "cache-only", "--cache-dir", empty.string()});
    EXPECT_EQ(miss.code, 4);

    cli::RunOptions hooks;
    hooks.oeis_transport = [](const std::string&) { return oeis::HttpResponse{false, 0, {}, "offline"}; };
    const CliRun down = run({"oeis", "--terms", "1,6,29,144,725", "--source", "live"}, hooks);
    EXPECT_EQ(down.code, 4);
    EXPECT_EQ(run({"oeis", "--terms", "1,2,3"}).code, 2);
}

TEST(Cli, Errata)
{
    const Json j = run_json({"errata"});
    std::vector<std::string> ids;
    for (const auto& e : j["result"]["entries"]) ids.push_back(e["id"]);
    for (const char* id : {"product_quartic_coefficients", "factorization_p0_systems", "region_alpha_reciprocal",
                           "binet_inequality_direction", "t7_missing_term", "binet_closed_forms"})
        EXPECT_NE(std::find(ids.begin(), ids.end(), id), ids.end()) << id;
    const Json t7 = run_json({"salem", "generate", "--t", "7", "--count", "7"});
    EXPECT_NE(std::find(t7["errata"].begin(), t7["errata"].end(), "t7_missing_term"), t7["errata"].end());
}

TEST(Cli, CsvQuoting)
{
    EXPECT_EQ(cli::csv_field("plain"), "plain");
    EXPECT_EQ(cli::csv_field("a,b"), "\"a,b\"");
    EXPECT_EQ(cli::csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    const CliRun r = run({"--format", "csv", "lucas", "--h", "1", "--k", "-1", "--count", "3"});
    EXPECT_EQ(r.out, "n,term\r\n0,0\r\n1,1\r\n2,1\r\n");
}

TEST(Cli, BigIntegersAreStrings)
{
    const Json j = run_json({"lucas", "--h", "1", "--k", "-1", "--count", "120"});
    EXPECT_EQ(j["result"]["terms"][119], "3311648143516982017180081");
}

TEST(Cli, Precision)
{
    const Json j = run_json({"--precision", "512", "salem", "roots", "--t", "6"});
    EXPECT_EQ(j["precision"], 512);
    const Json k = run_json({"salem", "roots", "--t", "6", "--precision", "1024"});
    EXPECT_EQ(k["precision"], 1024);
    setenv("LDS4_PRECISION", "384", 1);
    const Json e = run_json({"salem", "binet", "--t", "6"});
    unsetenv("LDS4_PRECISION");
    EXPECT_EQ(e["precision"], 384);
    EXPECT_EQ(run({"--precision", "3", "salem", "roots", "--t", "6"}).code, 2);
}

TEST(Cli, UsageErrors)
{
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"nosuch"}).code, 2);
    EXPECT_EQ(run({"--format", "xml", "errata"}).code, 2);
    EXPECT_EQ(run({"lucas", "--h", "one", "--k", "1"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}

// JSON output is schema-stable: compare against checked-in golden files.
// Set LDS4_UPDATE_GOLDEN=1 to rewrite them.
class Golden : public ::testing::TestWithParam<std::pair<std::string, std::vector<std::string>>> {};

TEST_P(Golden, MatchesFile)
{
    const auto& [name, args] = GetParam();
    std::vector<std::string> full{"--format", "json"};
    full.insert(full.end(), args.begin(), args.end());
    const CliRun r = run(full);
    const Json actual = Json::parse(r.out);
    const fs::path file = fs::path(LDS4_GOLDEN_DIR) / (name + ".json");
    if (std::getenv("LDS4_UPDATE_GOLDEN")) {
        std::ofstream(file) << actual.dump(2) << '\n';
        GTEST_SKIP() << "rewrote " << file;
    }
    std::ifstream in(file);
    ASSERT_TRUE(in) << "missing golden file " << file;
    const Json expected = Json::parse(in);
    EXPECT_EQ(actual, expected) << actual.dump(2);
}

INSTANTIATE_TEST_SUITE_P(
    Cli, Golden,
    ::testing::Values(
        std::pair<std::string, std::vector<std::string>>{"lucas", {"lucas", "--h", "1", "--k", "-1", "--count", "10"}},
        std::pair<std::string, std::vector<std::string>>{
            "compose", {"compose", "--h1", "3", "--k1", "1", "--h2", "1", "--k2", "-1", "--count", "8"}},
        std::pair<std::string, std::vector<std::string>>{"factor", {"factor", "--p", "1", "--q", "-6", "--r", "1"}},
        std::pair<std::string, std::vector<std::string>>{"salem_generate", {"salem", "generate", "--t", "7", "--count", "7"}},
        std::pair<std::string, std::vector<std::string>>{"salem_region", {"salem", "region", "--p", "6"}},
        std::pair<std::string, std::vector<std::string>>{"salem_binet", {"salem", "binet", "--t", "6"}},
        std::pair<std::string, std::vector<std::string>>{"divcheck", {"divcheck", "--terms", "0,1,2,3,5"}},
        std::pair<std::string, std::vector<std::string>>{"bound", {"bound", "--p", "1", "--q", "-6", "--r", "1", "--n", "2"}},
        std::pair<std::string, std::vector<std::string>>{"error", {"factor", "--p", "4", "--q", "4", "--r", "1"}}),
    [](const auto& info) { return info.param.first; });

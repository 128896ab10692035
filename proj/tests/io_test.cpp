#include "support.hpp"

#include "okutsu/io/commands.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace okutsu;
using namespace okutsu::io;
using namespace okutsu::testing;

namespace {

const std::string kFixture = std::string(OKUTSU_FIXTURES) + "/three-primes.json";

std::string write_temp(const std::string& name, const std::string& text)
{
    const auto path = std::filesystem::temp_directory_path() / ("okutsu-io-" + name);
    std::ofstream(path) << text;
    return path.string();
}

json fixture_json()
{
    std::ifstream in(kFixture);
    return json::parse(in);
}

bool has_issue_at(const DocumentError& e, const std::string& path)
{
    for (const auto& i : e.issues())
        if (i.path == path) return true;
    return false;
}

}  // namespace

TEST(TreeJson, RoundTripOfFixture)
{
    const OMTree t = three_primes();
    const OMTree again = parse_tree(serialize_tree(t));
    EXPECT_EQ(serialize_tree(again), serialize_tree(t));
    EXPECT_EQ(order_primes(again), (std::vector<PrimeId>{"p", "q", "l"}));
}

TEST(TreeJson, RoundTripOfGeneratedTrees)
{
    for (const auto& t : generated(0, 100)) {
        const std::string text = serialize_tree(t);
        const OMTree again = parse_tree(text);
        ASSERT_EQ(serialize_tree(again), text);
        ASSERT_TRUE(validate(again).empty());
        ASSERT_EQ(maxmin(again, order_primes(again)).values, maxmin(t, order_primes(t)).values);
    }
}

TEST(TreeJson, RejectsZeroDenominator)
{
    json doc = fixture_json();
    doc["pairs"][0]["lambda_pq"] = "4/0";
    try {
        (void)parse_tree(doc.dump());
        FAIL() << "accepted 4/0";
    } catch (const DocumentError& e) {
        EXPECT_TRUE(has_issue_at(e, "/pairs/0/lambda_pq")) << e.what();
    }
}

TEST(TreeJson, RejectsEmptyPrimeList)
{
    json doc = fixture_json();
    doc["primes"] = json::array();
    doc["pairs"] = json::array();
    doc.erase("ordering");
    EXPECT_THROW((void)load_validated(write_temp("empty.json", doc.dump())), DocumentError);
}

TEST(TreeJson, RejectsUnknownField)
{
    json doc = fixture_json();
    doc["primes"][1]["colour"] = "blue";
    EXPECT_THROW((void)parse_tree(doc.dump()), DocumentError);
}

TEST(TreeJson, RejectsMalformedJson)
{
    EXPECT_THROW((void)parse_tree("{\"version\": 1,"), DocumentError);
    EXPECT_THROW((void)load_tree("/nonexistent/okutsu.json"), DocumentError);
}

TEST(TreeJson, ValidationIssuesNameTheInvariant)
{
    json doc = fixture_json();
    doc["primes"][0]["levels"][1]["e"] = 2;
    try {
        (void)load_validated(write_temp("final.json", doc.dump()));
        FAIL() << "accepted a final level with e=2";
    } catch (const DocumentError& e) {
        ASSERT_FALSE(e.issues().empty());
        EXPECT_EQ(e.issues().front().path.rfind("final-level", 0), 0u) << e.issues().front().path;
    }
}

TEST(Render, Numerators)
{
    const OMTree t = three_primes();
    EXPECT_EQ(render_numerator(t, FactorProduct{}), "1");
    EXPECT_EQ(render_numerator(t, phi("p", 1) * phi("q", 2)), "phi[1,p] * phi[2,q]");
    EXPECT_EQ(render_numerator(t, phi("q", 1, 2) * phi("q", 3)), "phi[1,q]^2 * PHI[q]");
    EXPECT_EQ(render_numerator(t, phi("p", 0, 2) * phi("l", 0)), "x^3");
    EXPECT_EQ(render_numerator(t, phi("p", 1) * phi("q", 2), {"q", "p"}), "phi[2,q] * phi[1,p]");
}

TEST(Render, TraceRowsOfWorkedExample)
{
    const OMTree t = three_primes();
    const MaxMinOutput run = maxmin(t, {"p", "q", "l"});
    const auto rows = trace_rows(t, run);
    ASSERT_EQ(rows.size(), 14u);
    EXPECT_EQ(rows[4].numerator, "phi[1,p] * phi[2,q]");
    EXPECT_EQ(render_vector(rows[4].vector, rows[4].argmin), "([18], 22, 21)");
    EXPECT_FALSE(rows.back().argmin);
    EXPECT_EQ(rows.back().numerator, "PHI[p] * PHI[q] * PHI[l]");
    const std::string table = render_trace_table(t, run);
    EXPECT_EQ(table.substr(0, table.find('\n')).find("vector (p, q, l)") != std::string::npos, true);
    const json j = trace_json(t, run);
    EXPECT_EQ(j["steps"].size(), 14u);
    EXPECT_EQ(j["steps"][13]["value"], "inf");
    EXPECT_TRUE(j["steps"][13]["argmin"].is_null());
}

TEST(Render, BasisJson)
{
    const OMTree t = three_primes();
    const MaxMinOutput run = maxmin(t, {"p", "q", "l"});
    const json j = basis_json(t, run, {});
    ASSERT_EQ(j["basis"].size(), 13u);
    EXPECT_EQ(j["basis"][4]["floor"], "18");
    EXPECT_EQ(j["thresholds"]["l"]["tau"], "18/1");
    EXPECT_EQ(j["thresholds"]["q"]["tau"], "37/1");
}

TEST(Ideal, Parsing)
{
    const OMTree t = three_primes();
    const FractionalIdeal I = parse_ideal(t, " p:2, q:-1 ");
    EXPECT_EQ(I.exponent("p"), 2);
    EXPECT_EQ(I.exponent("q"), -1);
    EXPECT_EQ(I.exponent("l"), 0);
    EXPECT_TRUE(parse_ideal(t, "").exponents.empty());
    EXPECT_THROW(parse_ideal(t, "z:1"), UsageError);
    EXPECT_THROW(parse_ideal(t, "p:1,p:2"), UsageError);
    EXPECT_THROW(parse_ideal(t, "p=1"), UsageError);
    EXPECT_THROW(parse_ideal(t, "p:1.5"), UsageError);
}

TEST(Config, FromJson)
{
    const auto cfg = config_from_json(json::parse(R"({"num_primes": [3, 3], "max_depth": [1, 2], "max_ef": 3})"));
    EXPECT_EQ(cfg.num_primes.lo, 3);
    EXPECT_EQ(cfg.max_depth.hi, 2);
    EXPECT_EQ(cfg.max_ef, 3);
    EXPECT_THROW(config_from_json(json::parse(R"({"num_primes": [3, 2]})")), DocumentError);
    EXPECT_THROW(config_from_json(json::parse(R"({"speed": 1})")), DocumentError);
    EXPECT_THROW(config_from_json(json::parse(R"({"max_ef": "big"})")), DocumentError);
}

TEST(Commands, TraceAndBasis)
{
    std::ostringstream out, err;
    EXPECT_EQ(cmd_trace({kFixture, "", "", "table"}, out, err), kOk);
    EXPECT_NE(out.str().find("([18], 22, 21)"), std::string::npos);
    out.str("");
    EXPECT_EQ(cmd_basis({kFixture, "", "", "json"}, out, err), kOk);
    EXPECT_EQ(json::parse(out.str())["basis"].size(), 13u);
    EXPECT_EQ(cmd_trace({kFixture, "z:1", "", "table"}, out, err), kInputError);
    EXPECT_EQ(cmd_trace({kFixture, "", "q,p,l", "table"}, out, err), kInputError);
    EXPECT_EQ(cmd_trace({kFixture, "", "", "yaml"}, out, err), kInputError);
    EXPECT_EQ(cmd_basis({"/nonexistent/tree.json", "", "", "table"}, out, err), kInputError);
}

TEST(Commands, VerifyExitCodes)
{
    std::ostringstream out, err;
    VerifyOptions opt;
    opt.tree_file = kFixture;
    EXPECT_EQ(cmd_verify(opt, out, err), kOk) << out.str() << err.str();
    opt.corrupt_table = true;
    opt.checks = "maximality";
    out.str("");
    EXPECT_EQ(cmd_verify(opt, out, err), kCheckFailed);
    EXPECT_NE(out.str().find("fails at degree"), std::string::npos);
    opt.corrupt_table = false;
    opt.checks = "sorting";
    EXPECT_EQ(cmd_verify(opt, out, err), kInputError);
    opt.checks = "maximality";
    opt.random = "1/2";
    EXPECT_EQ(cmd_verify(opt, out, err), kInputError);
}

TEST(Commands, VerifyRandomJson)
{
    std::ostringstream out, err;
    VerifyOptions opt;
    opt.random = "5/4";
    opt.format = "json";
    EXPECT_EQ(cmd_verify(opt, out, err), kOk) << err.str();
    const json rep = json::parse(out.str());
    EXPECT_EQ(rep["instances"].size(), 4u);
    EXPECT_TRUE(rep["passed"].get<bool>());
    EXPECT_EQ(rep["instances"][0]["seed"], 5);
}

TEST(Commands, VerifyBudgetExceeded)
{
    ::setenv("OKUTSU_ORACLE_BUDGET", "10", 1);
    std::ostringstream out, err;
    VerifyOptions opt;
    opt.tree_file = kFixture;
    opt.checks = "maximality,blocks";
    const int code = cmd_verify(opt, out, err);
    ::unsetenv("OKUTSU_ORACLE_BUDGET");
    EXPECT_EQ(code, kBudgetExceeded);
    EXPECT_NE(out.str().find("maximality=budget-exceeded"), std::string::npos);
}

TEST(Commands, RandomSpecParsing)
{
    const RandomSpec s = parse_random_spec("7/30");
    EXPECT_EQ(s.seed, 7u);
    EXPECT_EQ(s.count, 30u);
    EXPECT_THROW(parse_random_spec("7"), UsageError);
    EXPECT_THROW(parse_random_spec("x/3"), UsageError);
    EXPECT_THROW(parse_random_spec("1/2x"), UsageError);
    const std::string cfg = write_temp("cfg.json", R"({"num_primes": [2, 2]})");
    EXPECT_EQ(parse_random_spec("1/1/" + cfg).config.num_primes.hi, 2);
}

TEST(Commands, GenIsDeterministic)
{
    std::ostringstream a, b, err;
    EXPECT_EQ(cmd_gen(42, "", a, err), kOk);
    EXPECT_EQ(cmd_gen(42, "", b, err), kOk);
    EXPECT_EQ(a.str(), b.str());
    EXPECT_TRUE(validate(parse_tree(a.str())).empty());
    EXPECT_EQ(cmd_gen(1, "/nonexistent/cfg.json", a, err), kInputError);
}

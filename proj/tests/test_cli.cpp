#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

using Json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code;
    std::string out;
};

CliRun run(const std::string& args) {
    const std::string cmd = std::string(PROJDIM_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return {-1, ""};
    std::string out;
    char buf[4096];
    for (std::size_t n; (n = fread(buf, 1, sizeof buf, p)) > 0;) out.append(buf, n);
    const int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string config(const std::string& name) { return std::string(PROJDIM_SOURCE_DIR) + "/configs/" + name + ".json"; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    fs::path d = fs::temp_directory_path() / ("projdim_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d / name;
}

fs::path write_config(const std::string& name, const std::string& text) {
    fs::path p = scratch(name);
    std::ofstream(p) << text;
    return p;
}

// Small validator for the subset of JSON Schema used in schema/.
bool type_ok(const Json& v, const std::string& t) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "number") return v.is_number();
    if (t == "integer") return v.is_number_integer();
    if (t == "boolean") return v.is_boolean();
    if (t == "null") return v.is_null();
    return false;
}

void validate(const Json& v, const Json& s, const std::string& path, std::vector<std::string>& errs) {
    if (s.contains("type")) {
        bool ok = false;
        if (s["type"].is_array()) {
            for (const auto& t : s["type"]) ok = ok || type_ok(v, t.get<std::string>());
        } else {
            ok = type_ok(v, s["type"].get<std::string>());
        }
        if (!ok) {
            errs.push_back(path + ": wrong type");
            return;
        }
    }
    if (s.contains("enum") && std::find(s["enum"].begin(), s["enum"].end(), v) == s["enum"].end()) errs.push_back(path + ": not in enum");
    if (v.is_number()) {
        const double x = v.get<double>();
        if (s.contains("minimum") && x < s["minimum"].get<double>()) errs.push_back(path + ": below minimum");
        if (s.contains("maximum") && x > s["maximum"].get<double>()) errs.push_back(path + ": above maximum");
        if (s.contains("exclusiveMinimum") && x <= s["exclusiveMinimum"].get<double>()) errs.push_back(path + ": not above exclusive minimum");
    }
    if (v.is_object()) {
        if (s.contains("required"))
            for (const auto& k : s["required"])
                if (!v.contains(k.get<std::string>())) errs.push_back(path + ": missing " + k.get<std::string>());
        if (s.contains("properties"))
            for (const auto& [k, sub] : s["properties"].items())
                if (v.contains(k)) validate(v[k], sub, path + "." + k, errs);
    }
    if (v.is_array()) {
        if (s.contains("minItems") && v.size() < s["minItems"].get<std::size_t>()) errs.push_back(path + ": too few items");
        if (s.contains("maxItems") && v.size() > s["maxItems"].get<std::size_t>()) errs.push_back(path + ": too many items");
        if (s.contains("items"))
            for (std::size_t i = 0; i < v.size(); ++i) validate(v[i], s["items"], path + "[" + std::to_string(i) + "]", errs);
    }
}

const Json& report_schema() {
    static const Json s = Json::parse(slurp(std::string(PROJDIM_SOURCE_DIR) + "/schema/report.schema.json"));
    return s;
}

}  // namespace

TEST(Validator, RejectsBrokenReports) {
    std::vector<std::string> errs;
    validate(Json{{"mode", "exact"}}, report_schema(), "$", errs);
    EXPECT_FALSE(errs.empty());
    errs.clear();
    validate(Json{{"dimension", {{"lower_method", "Guess"}}}}, report_schema()["properties"]["dimension"], "$", errs);
    EXPECT_FALSE(errs.empty());
}

TEST(Analyze, EveryShippedConfigMatchesTheSchema) {
    for (const auto& e : fs::directory_iterator(std::string(PROJDIM_SOURCE_DIR) + "/configs")) {
        if (e.path().extension() != ".json") continue;
        CliRun r = run("analyze " + e.path().string());
        ASSERT_EQ(r.code, 0) << e.path();
        Json j = Json::parse(r.out);
        std::vector<std::string> errs;
        validate(j, report_schema(), "$", errs);
        EXPECT_TRUE(errs.empty()) << e.path() << ": " << (errs.empty() ? "" : errs.front());
        const auto& d = j["dimension"];
        EXPECT_LE(d["lower"].get<double>(), d["upper"].get<double>() + 1e-12) << e.path();
    }
}

TEST(Analyze, OutputIsByteDeterministic) {
    CliRun a = run("analyze " + config("example8_special"));
    CliRun b = run("analyze " + config("example8_special"));
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
}

TEST(Analyze, OutFileAndCsv) {
    const fs::path out = scratch("cantor.json"), csv = scratch("cantor.csv");
    CliRun r = run("analyze " + config("cantor_pair") + " --out " + out.string() + " --csv " + csv.string());
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    Json j = Json::parse(slurp(out));
    EXPECT_EQ(j["classification"], "SelfSimilar");
    EXPECT_NEAR(j["dimension"]["lower"].get<double>(), 1.0, 1e-9);
    const std::string text = slurp(csv);
    EXPECT_EQ(text.rfind("scale,count\n", 0), 0u);
    EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')), j["oracle"]["scales"].size() + 1);
}

TEST(Analyze, VerticalProjectionIsTheSecondFactor) {
    CliRun r = run("analyze " + config("vertical"));
    ASSERT_EQ(r.code, 0);
    Json j = Json::parse(r.out);
    EXPECT_EQ(j["factor_only"], "K2");
    EXPECT_TRUE(j["matchings"].is_null());
    EXPECT_EQ(j["dimension"]["lower_method"], "FiniteType");
    // Digits {0, 1/3, 1} at ratio 1/3: distinct digit sums grow like the golden ratio squared.
    const double want = std::log((3 + std::sqrt(5.0)) / 2) / std::log(3.0);
    EXPECT_NEAR(j["dimension"]["lower"].get<double>(), want, 1e-8);
    EXPECT_NEAR(j["dimension"]["upper"].get<double>(), want, 1e-8);
}

TEST(Dims, MidpointCollapses) {
    CliRun r = run("dims " + config("example8_midpoint"));
    ASSERT_EQ(r.code, 0);
    Json j = Json::parse(r.out);
    EXPECT_TRUE(j["collapsed"].get<bool>());
    EXPECT_NEAR(j["lower"].get<double>(), 0.5934071951404909, 1e-9);
    EXPECT_EQ(j["classification"], "InfiniteIFS");
}

TEST(Sweep, RowsFollowInputOrderForAnyWorkerCount) {
    const fs::path csv1 = scratch("sweep1.csv"), csv4 = scratch("sweep4.csv");
    CliRun one = run("sweep " + config("example8_sweep") + " --thetas 0.9:0.7:5 --workers 1 --csv " + csv1.string());
    CliRun four = run("sweep " + config("example8_sweep") + " --thetas 0.9:0.7:5 --workers 4 --csv " + csv4.string());
    ASSERT_EQ(one.code, 0);
    ASSERT_EQ(four.code, 0);
    EXPECT_EQ(one.out, four.out);
    EXPECT_EQ(slurp(csv1), slurp(csv4));
    Json rows = Json::parse(one.out)["rows"];
    ASSERT_EQ(rows.size(), 5u);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_NEAR(rows[i]["theta"].get<double>(), 0.9 - 0.05 * static_cast<double>(i), 1e-12);
        EXPECT_NEAR(rows[i]["slope"].get<double>(), std::tan(rows[i]["theta"].get<double>()), 1e-12);
        EXPECT_EQ(rows[i]["error"], "");
    }
    const std::string text = slurp(csv1);
    EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')), 6u);
}

TEST(Sweep, AngleFile) {
    const fs::path angles = write_config("angles.txt", "0.8\n0.85\n");
    CliRun r = run("sweep " + config("example8_sweep") + " --thetas " + angles.string());
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(Json::parse(r.out)["rows"].size(), 2u);
}

TEST(Matchings, TwoMapFixtureBlocksAndCounts) {
    const fs::path csv = scratch("counts.csv");
    CliRun r = run("matchings " + config("example8_special") + " --lmax 12 --csv " + csv.string());
    ASSERT_EQ(r.code, 0);
    Json j = Json::parse(r.out);
    EXPECT_EQ(j["distinct"], 6);
    EXPECT_EQ(j["finiteness"], "ProvedInfinite");
    std::vector<long> lengths;
    for (const auto& m : j["matchings"]) lengths.push_back(m["length"].get<long>());
    EXPECT_EQ(lengths, (std::vector<long>{4, 8, 8, 8, 12, 12}));
    EXPECT_EQ(slurp(csv), "length,count\n1,0\n2,0\n3,0\n4,1\n5,0\n6,0\n7,0\n8,3\n9,0\n10,0\n11,0\n12,2\n");
}

TEST(Vitali, CantorPairAndCsv) {
    const fs::path csv = scratch("vitali.csv");
    CliRun r = run("vitali " + config("cantor_pair") + " --floor 0.01 --csv " + csv.string());
    ASSERT_EQ(r.code, 0);
    Json j = Json::parse(r.out);
    EXPECT_EQ(j["selected"], 3);
    EXPECT_NEAR(j["lower_bound"].get<double>(), 1.0, 1e-8);
    EXPECT_EQ(slurp(csv), "length,translation,word\n1,0,0\n1,2/3,1\n1,4/3,2\n");
}

TEST(VerifyTwoMapFixture, ChainAndRegimes) {
    const fs::path csv = scratch("thresholds.csv");
    CliRun r = run("verify-example8 --csv " + csv.string());
    ASSERT_EQ(r.code, 0);
    Json j = Json::parse(r.out);
    EXPECT_FALSE(j["threshold_chain"]["holds"].get<bool>());
    EXPECT_FALSE(j["threshold_chain"]["links"][1]["holds"].get<bool>());
    EXPECT_TRUE(j["midpoint"]["certificate_passed"].get<bool>());
    EXPECT_TRUE(j["midpoint"]["first_40_overlaps"].empty());
    EXPECT_EQ(j["special"]["first_40_overlaps"], Json::parse("[[2,4]]"));
    EXPECT_EQ(j["special"]["gf_poly_y"], "y^3 - 2*y^2 - 2*y + 1");
    EXPECT_NEAR(j["closed_form_osc_dimension"].get<double>(), 0.5934071951404909, 1e-12);
    const std::string text = slurp(csv);
    EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')), j["thresholds"].size() + 1);

    CliRun other = run("verify-example8 --beta 2 --floor-exponent 20");
    ASSERT_EQ(other.code, 0);
    EXPECT_EQ(Json::parse(other.out)["beta"], "2");
}

TEST(ExitCodes, ConfigErrorsReturnTwo) {
    EXPECT_EQ(run("analyze /nonexistent/config.json").code, 2);
    EXPECT_EQ(run("analyze " + write_config("broken.json", "{\"beta\": ").string()).code, 2);
    EXPECT_EQ(run("analyze " + write_config("missing.json", R"({"beta": "3/2", "ifs1": []})").string()).code, 2);
    EXPECT_EQ(run("analyze " + write_config("small_beta.json", R"({"beta": "1/2", "ifs1": [{"n": 1, "a": "0"}], "ifs2": [{"n": 1, "a": "0"}], "angle": {"slope": "1"}})").string()).code, 2);
    EXPECT_EQ(run("analyze " + write_config("angle.json", R"({"beta": "3", "ifs1": [{"n": 1, "a": "0"}], "ifs2": [{"n": 1, "a": "0"}], "angle": {"slope": "1", "theta_radians": 1.0}})").string()).code, 2);
    EXPECT_EQ(run("bogus").code, 2);
    EXPECT_EQ(run("matchings " + config("vertical") + " --lmax 10").code, 2);
    EXPECT_EQ(run("verify-example8 --beta 1/2").code, 2);
    EXPECT_EQ(run("--help").code, 0);
}

TEST(ExitCodes, ComputeErrorsReturnThree) {
    const fs::path p = write_config("starved.json", R"({"beta": "3/2", "ifs1": [{"n": 1, "a": "0"}, {"n": 1, "a": "1/2"}],
        "ifs2": [{"n": 1, "a": "0"}, {"n": 1, "a": "1/3"}], "angle": {"slope": "1"}, "options": {"max_nodes": 1}})");
    EXPECT_EQ(run("vitali " + p.string() + " --floor 0.01").code, 3);
}

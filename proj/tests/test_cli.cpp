#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <string>

#include "support/run_cli.hpp"
#include "support/schema_check.hpp"

using nlohmann::json;
using testutil::run_cli;

namespace {

std::string data_path(const std::string& name) {
    return std::string(ARCHSHEAF_DATA_DIR) + "/" + name;
}

json load_schema() {
    std::ifstream in(std::string(ARCHSHEAF_SCHEMA_DIR) + "/report.schema.json");
    REQUIRE(in.good());
    return json::parse(in);
}

json parse_report(const std::string& args) {
    testutil::CliResult r = run_cli(args, /*merge_stderr=*/false);
    CAPTURE(r.output);
    json report = json::parse(r.output);
    json schema = load_schema();
    auto errors = testutil::schema_errors(report, schema);
    for (const std::string& e : errors) FAIL_CHECK("schema violation: ", e);
    return report;
}

// Writes a temp file and removes it on scope exit.
struct TempFile {
    std::string path;
    explicit TempFile(const std::string& contents) {
        path = std::string("/tmp/archsheaf_cli_test_") + std::to_string(rand()) + ".json";
        std::ofstream out(path);
        out << contents;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("check: compatible file exits 0 and prints the check summary") {
    auto r = run_cli("check " + data_path("three_view.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.contains("3 pairwise checks, 0 conflicts"));
    CHECK(r.contains("outcome: consistent"));
    CHECK(r.contains("sha256: "));
}

TEST_CASE("check: perturbed file exits 1 with one conflict naming ET") {
    auto r = run_cli("check " + data_path("three_view_conflict.json"));
    CHECK(r.exit_code == 1);
    CHECK(r.contains("3 pairwise checks, 1 conflict"));
    CHECK(r.contains("conflict at ET: elec=\"1\" vs therm=\"0\""));
    CHECK(r.contains("outcome: conflicts"));
}

TEST_CASE("check: missing file exits 2") {
    auto r = run_cli("check /nonexistent/file.json");
    CHECK(r.exit_code == 2);
    CHECK(r.contains("outcome: error"));
}

TEST_CASE("check: malformed file exits 2 with diagnostics") {
    auto r = run_cli("check " + std::string(ARCHSHEAF_CORPUS_DIR) + "/e_syntax.json");
    CHECK(r.exit_code == 2);
    CHECK(r.contains("E-SYNTAX"));
    CHECK(r.contains("outcome: error"));
}

TEST_CASE("check --json validates against the published schema and agrees with text") {
    json report = parse_report("check --json " + data_path("three_view.json"));
    CHECK(report["outcome"] == "consistent");
    CHECK(report["command"] == "check");
    CHECK(report["stats"]["pair_checks"] == 3);
    CHECK(report["stats"]["conflicts"] == 0);

    auto text = run_cli("check " + data_path("three_view.json"));
    CHECK(text.contains("outcome: " + report["outcome"].get<std::string>()));
    CHECK(text.contains(std::to_string(report["stats"]["pair_checks"].get<int>()) +
                        " pairwise checks"));
}

TEST_CASE("check --json on the conflict file carries the conflict list") {
    json report = parse_report("check --json " + data_path("three_view_conflict.json"));
    CHECK(report["outcome"] == "conflicts");
    REQUIRE(report["conflicts"].size() == 1);
    CHECK(report["conflicts"][0]["point"] == "ET");
    CHECK(report["conflicts"][0]["member_a"] == "elec");
    CHECK(report["conflicts"][0]["value_a"] == "1");
    CHECK(report["conflicts"][0]["value_b"] == "0");
}

TEST_CASE("check --json on error inputs still emits a schema-valid report") {
    json report = parse_report("check --json " + std::string(ARCHSHEAF_CORPUS_DIR) + "/e_syntax.json");
    CHECK(report["outcome"] == "error");
    CHECK(report["diagnostics"].size() >= 1);
}

TEST_CASE("glue: compatible file prints the unique glued design") {
    auto r = run_cli("glue " + data_path("three_view.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.contains("glued design over {EM, ET, TM}:"));
    CHECK(r.contains("EM = \"2\"  (from elec)"));
    CHECK(r.contains("ET = \"1\"  (from elec)"));
    CHECK(r.contains("TM = \"4\"  (from therm)"));
    CHECK(r.contains("covers site: true"));
    CHECK(r.contains("outcome: consistent"));
}

TEST_CASE("glue: incompatible file exits 1 without a glued design") {
    auto r = run_cli("glue " + data_path("three_view_conflict.json"));
    CHECK(r.exit_code == 1);
    CHECK_FALSE(r.contains("glued design"));
    CHECK(r.contains("outcome: conflicts"));
}

TEST_CASE("glue --verify-unique reports the exhaustive candidate count") {
    auto r = run_cli("glue --verify-unique " + data_path("three_view.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.contains("uniqueness: exhaustive, 60 candidates, unique"));

    json report = parse_report("glue --json --verify-unique " + data_path("three_view.json"));
    CHECK(report["glued"]["uniqueness"]["unique"] == true);
    CHECK(report["glued"]["uniqueness"]["exhaustive"] == true);
    CHECK(report["glued"]["uniqueness"]["candidates_checked"] == 60);
}

TEST_CASE("ARCHSHEAF_ENUM_CAP downgrades exhaustive uniqueness to the forcing argument") {
    auto r = testutil::run_command("ARCHSHEAF_ENUM_CAP=10 " + std::string(ARCHSHEAF_CLI_PATH) +
                                   " glue --verify-unique " + data_path("three_view.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.contains("uniqueness: forced by coverage"));
}

TEST_CASE("glue of a two-design subfamily still covers the three-point site") {
    TempFile file(R"({
      "version": "archsheaf/1",
      "views": ["electrical", "thermal", "mechanical"],
      "interfaces": [
        {"name": "EM", "endpoints": ["electrical", "mechanical"]},
        {"name": "ET", "endpoints": ["electrical", "thermal"]},
        {"name": "TM", "endpoints": ["thermal", "mechanical"]}
      ],
      "domains": {"EM": 4, "ET": 3, "TM": 5},
      "designs": {
        "elec": {"view": "electrical", "assign": {"EM": "2", "ET": "1"}},
        "therm": {"view": "thermal", "assign": {"ET": "1", "TM": "4"}}
      }
    })");
    auto r = run_cli("glue " + file.path);
    CHECK(r.exit_code == 0);
    CHECK(r.contains("glued design over {EM, ET, TM}:"));
    CHECK(r.contains("covers site: true"));
}

TEST_CASE("check and glue agree on both bundled files") {
    for (const char* name : {"three_view.json", "three_view_conflict.json"}) {
        auto check = run_cli("check " + data_path(name));
        auto glue = run_cli("glue " + data_path(name));
        CHECK(check.exit_code == glue.exit_code);
        CHECK((check.exit_code == 0) == glue.contains("glued design"));
    }
}

TEST_CASE("derive: identity property reproduces the base gluing") {
    auto r = run_cli("derive --property identity " + data_path("three_view.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.contains("derived glued design over {EM, ET, TM} = {EM=\"2\", ET=\"1\", TM=\"4\"}"));
    CHECK(r.contains("commutation: true"));
}

TEST_CASE("derive: the collapsing property commutes") {
    auto r = run_cli("derive --property power-class " + data_path("three_view.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.contains("derived design elec = {EM=\"high\", ET=\"low\"}"));
    CHECK(r.contains("derived glued design over {EM, ET, TM} = {EM=\"high\", ET=\"low\", TM=\"high\"}"));
    CHECK(r.contains("commutation: true"));

    json report = parse_report("derive --json --property power-class " +
                               data_path("three_view.json"));
    CHECK(report["derived"]["commutes"] == true);
    CHECK(report["derived"]["glued"]["ET"] == "low");
}

TEST_CASE("derive: unknown property exits 2; incompatible designs exit 1") {
    auto unknown = run_cli("derive --property mass " + data_path("three_view.json"));
    CHECK(unknown.exit_code == 2);
    CHECK(unknown.contains("unknown property 'mass'"));

    auto conflicted =
        run_cli("derive --property power-class " + data_path("three_view_conflict.json"));
    CHECK(conflicted.exit_code == 1);
}

TEST_CASE("info: three-view file") {
    auto r = run_cli("info " + data_path("three_view.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.contains("views: 3"));
    CHECK(r.contains("pairwise checks: 3"));
    CHECK(r.contains("view electrical = {EM, ET}; |F| = 12"));
    CHECK(r.contains("view thermal = {ET, TM}; |F| = 15"));
    CHECK(r.contains("view mechanical = {EM, TM}; |F| = 20"));
    CHECK(r.contains("overlap electrical, thermal = {ET}"));
    CHECK(r.contains("|F(site)| = 60"));
}

TEST_CASE("info: ten-view synthetic file reports 45 pairwise checks") {
    auto r = run_cli("info " + data_path("ten_view.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.contains("views: 10"));
    CHECK(r.contains("pairwise checks: 45"));

    json report = parse_report("info --json " + data_path("ten_view.json"));
    CHECK(report["info"]["pair_checks"] == 45);
    CHECK(report["info"]["global_sections"] == 35184372088832ULL);  // 2^45
}

TEST_CASE("info: a one-view file reports zero pairwise checks") {
    TempFile file(R"({
      "version": "archsheaf/1",
      "views": ["solo"],
      "interfaces": [],
      "domains": {}
    })");
    auto r = run_cli("info " + file.path);
    CHECK(r.exit_code == 0);
    CHECK(r.contains("pairwise checks: 0"));
    CHECK(r.contains("|F(site)| = 1"));
}

TEST_CASE("usage errors exit 2; --help exits 0") {
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("frobnicate x.json").exit_code == 2);
    CHECK(run_cli("check").exit_code == 2);  // missing file argument
    CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("selftest runs the certification oracle") {
    auto r = run_cli("selftest --seeds 3");
    CHECK(r.exit_code == 0);
    CHECK(r.contains("selftest: 3 seeds, 0 failures"));

    json report = parse_report("selftest --json --seeds 2");
    CHECK(report["outcome"] == "consistent");
    CHECK(report["selftest"]["failures"] == 0);
    CHECK(report["selftest"]["seeds"] == 2);
}

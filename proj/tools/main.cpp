// archsheaf — multi-view design consistency checker.
//
// Subcommands: check, glue, derive, info (and the hidden selftest).
// Exit codes: 0 consistent, 1 inconsistent, 2 usage or input error.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "archsheaf/consistency.hpp"
#include "archsheaf/digest.hpp"
#include "archsheaf/ingest.hpp"
#include "archsheaf/oracle.hpp"
#include "archsheaf/properties.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace archsheaf;

constexpr int kExitConsistent = 0;
constexpr int kExitConflicts = 1;
constexpr int kExitError = 2;

std::uint64_t enum_cap() {
    if (const char* env = std::getenv("ARCHSHEAF_ENUM_CAP")) {
        char* end = nullptr;
        std::uint64_t cap = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && cap > 0) return cap;
        std::cerr << "warning: ignoring unparsable ARCHSHEAF_ENUM_CAP='" << env << "'\n";
    }
    return kDefaultEnumCap;
}

std::string plural(std::uint64_t n, const char* noun) {
    return std::to_string(n) + " " + noun + (n == 1 ? "" : "s");
}

json make_report(const std::string& command) {
    json report = json::object();
    report["format"] = "archsheaf-report/1";
    report["command"] = command;
    report["outcome"] = "error";
    return report;
}

void put_diagnostics(json& report, const std::vector<Diagnostic>& diagnostics) {
    if (diagnostics.empty()) return;
    json list = json::array();
    for (const Diagnostic& d : diagnostics) {
        json entry = json::object();
        entry["severity"] = d.severity == Diagnostic::Severity::error ? "error" : "warning";
        entry["code"] = d.code;
        entry["message"] = d.message;
        entry["location"] = d.location;
        list.push_back(std::move(entry));
    }
    report["diagnostics"] = std::move(list);
}

json conflicts_json(const ConflictReport& report) {
    json list = json::array();
    for (const Conflict& c : report.conflicts) {
        json entry = json::object();
        entry["member_a"] = c.member_a;
        entry["member_b"] = c.member_b;
        entry["point"] = c.point;
        entry["value_a"] = c.value_a;
        entry["value_b"] = c.value_b;
        list.push_back(std::move(entry));
    }
    return list;
}

json assignment_json(const Section& s) {
    json obj = json::object();
    for (const auto& [point, value] : s.assignment()) obj[point] = value;
    return obj;
}

void emit(const json& report, bool json_out, const std::vector<std::string>& text) {
    if (json_out) {
        std::cout << report.dump(2) << "\n";
    } else {
        for (const std::string& line : text) std::cout << line << "\n";
    }
}

// Reads and loads the input file; on failure emits an error report and
// returns the exit code.  On success fills `model` and the report/input text.
struct Loaded {
    Model model;
    std::string sha256;
};

std::optional<Loaded> load_input(const std::string& path, bool json_out, json& report,
                                 std::vector<std::string>& text, int& exit_code) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::vector<Diagnostic> diags{
            {Diagnostic::Severity::error, errc::io, "cannot read file '" + path + "'", ""}};
        put_diagnostics(report, diags);
        text.push_back("error E-IO: cannot read file '" + path + "'");
        text.push_back("outcome: error");
        emit(report, json_out, text);
        exit_code = kExitError;
        return std::nullopt;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    std::string bytes = buffer.str();

    std::string digest = sha256_hex(bytes);
    report["input"] = json::object();
    report["input"]["path"] = path;
    report["input"]["sha256"] = digest;
    text.push_back("input: " + path);
    text.push_back("sha256: " + digest);

    LoadResult result = load_text(bytes);
    put_diagnostics(report, result.diagnostics);
    for (const Diagnostic& d : result.diagnostics) text.push_back(to_string(d));
    if (!result.ok()) {
        text.push_back("outcome: error");
        emit(report, json_out, text);
        exit_code = kExitError;
        return std::nullopt;
    }
    return Loaded{std::move(*result.model), std::move(digest)};
}

void put_stats(json& report, std::vector<std::string>& text, const Model& model,
               std::uint64_t pair_checks, std::uint64_t conflicts) {
    json stats = json::object();
    stats["views"] = model.site->view_count();
    stats["points"] = model.site->point_count();
    stats["designs"] = model.designs.size();
    stats["pair_checks"] = pair_checks;
    stats["conflicts"] = conflicts;
    report["stats"] = std::move(stats);
    std::ostringstream line;
    line << "views: " << model.site->view_count() << "; points: " << model.site->point_count()
         << "; designs: " << model.designs.size();
    text.push_back(line.str());
}

void put_conflicts(json& report, std::vector<std::string>& text, const ConflictReport& result) {
    report["conflicts"] = conflicts_json(result);
    for (const Conflict& c : result.conflicts) {
        text.push_back("conflict at " + c.point + ": " + c.member_a + "=\"" + c.value_a +
                       "\" vs " + c.member_b + "=\"" + c.value_b + "\"");
    }
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int cmd_check(const std::string& path, bool json_out) {
    json report = make_report("check");
    std::vector<std::string> text;
    int exit_code = kExitError;
    auto loaded = load_input(path, json_out, report, text, exit_code);
    if (!loaded) return exit_code;
    const Model& model = loaded->model;

    ConflictReport result = check_pairwise(model.designs);
    put_stats(report, text, model, result.pairs_compared, result.conflicts.size());
    text.push_back(plural(result.pairs_compared, "pairwise check") + ", " +
                   plural(result.conflicts.size(), "conflict"));
    put_conflicts(report, text, result);

    report["outcome"] = result.empty() ? "consistent" : "conflicts";
    text.push_back(std::string("outcome: ") + (result.empty() ? "consistent" : "conflicts"));
    emit(report, json_out, text);
    return result.empty() ? kExitConsistent : kExitConflicts;
}

int cmd_glue(const std::string& path, bool json_out, bool verify_uniqueness) {
    json report = make_report("glue");
    std::vector<std::string> text;
    int exit_code = kExitError;
    auto loaded = load_input(path, json_out, report, text, exit_code);
    if (!loaded) return exit_code;
    const Model& model = loaded->model;

    ConflictReport result = check_pairwise(model.designs);
    put_stats(report, text, model, result.pairs_compared, result.conflicts.size());
    if (!result.empty()) {
        put_conflicts(report, text, result);
        report["outcome"] = "conflicts";
        text.push_back("no gluing: the designs are incompatible");
        text.push_back("outcome: conflicts");
        emit(report, json_out, text);
        return kExitConflicts;
    }

    GluingResult g = glue(model.designs);
    bool covers = is_cover(model.designs.opens(), model.site->whole_open());

    json glued = json::object();
    glued["domain"] = g.glued.domain().point_names();
    glued["assignment"] = assignment_json(g.glued);
    json witness = json::object();
    for (const auto& [point, label] : g.witness_map()) witness[point] = label;
    glued["witness"] = std::move(witness);
    glued["covers_site"] = covers;

    text.push_back("glued design over " + g.glued.domain().to_string() + ":");
    auto witness_map = g.witness_map();
    auto assignment = g.glued.assignment();
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        text.push_back("  " + assignment[i].first + " = \"" + assignment[i].second +
                       "\"  (from " + witness_map[i].second + ")");
    }
    text.push_back(std::string("covers site: ") + (covers ? "true" : "false"));

    if (verify_uniqueness) {
        UniquenessResult u = verify_unique(model.designs, g, enum_cap());
        json uniq = json::object();
        uniq["unique"] = u.unique;
        uniq["exhaustive"] = u.exhaustive;
        uniq["candidates_checked"] = u.candidates_checked;
        glued["uniqueness"] = std::move(uniq);
        if (u.exhaustive) {
            text.push_back("uniqueness: exhaustive, " +
                           plural(u.candidates_checked, "candidate") + ", " +
                           (u.unique ? "unique" : "NOT unique"));
        } else {
            text.push_back("uniqueness: forced by coverage (enumeration capped)");
        }
    }
    report["glued"] = std::move(glued);

    report["outcome"] = "consistent";
    text.push_back("outcome: consistent");
    emit(report, json_out, text);
    return kExitConsistent;
}

int cmd_derive(const std::string& path, const std::string& property, bool json_out) {
    json report = make_report("derive");
    std::vector<std::string> text;
    int exit_code = kExitError;
    auto loaded = load_input(path, json_out, report, text, exit_code);
    if (!loaded) return exit_code;
    const Model& model = loaded->model;

    const PropertyMap* map = model.find_property(property);
    if (!map) {
        report["error"] = "unknown property '" + property + "'";
        text.push_back("error: unknown property '" + property + "'");
        text.push_back("outcome: error");
        emit(report, json_out, text);
        return kExitError;
    }

    ConflictReport result = check_pairwise(model.designs);
    put_stats(report, text, model, result.pairs_compared, result.conflicts.size());
    if (!result.empty()) {
        put_conflicts(report, text, result);
        report["outcome"] = "conflicts";
        text.push_back("outcome: conflicts");
        emit(report, json_out, text);
        return kExitConflicts;
    }

    text.push_back("property: " + property);
    LocalFamily mapped = apply_property(*map, model.designs);
    json locals = json::object();
    for (const FamilyMember& m : mapped.members()) {
        locals[m.label] = assignment_json(m.section);
        text.push_back("derived design " + m.label + " = " + m.section.to_string());
    }

    bool commutes = derived_glue_commutes(*map, model.designs);
    Section derived_glued = glue(mapped).glued;
    text.push_back("derived glued design over " + derived_glued.domain().to_string() + " = " +
                   derived_glued.to_string());
    text.push_back(std::string("commutation: ") + (commutes ? "true" : "false"));

    json derived = json::object();
    derived["property"] = property;
    derived["locals"] = std::move(locals);
    derived["glued"] = assignment_json(derived_glued);
    derived["commutes"] = commutes;
    report["derived"] = std::move(derived);

    report["outcome"] = "consistent";
    text.push_back("outcome: consistent");
    emit(report, json_out, text);
    return kExitConsistent;
}

int cmd_info(const std::string& path, bool json_out) {
    json report = make_report("info");
    std::vector<std::string> text;
    int exit_code = kExitError;
    auto loaded = load_input(path, json_out, report, text, exit_code);
    if (!loaded) return exit_code;
    const Model& model = loaded->model;
    const Site& site = *model.site;

    std::uint64_t checks = pairwise_check_count(site.view_count());
    put_stats(report, text, model, checks, 0);
    text.push_back("pairwise checks: " + std::to_string(checks));

    json info = json::object();
    json views = json::array();
    for (const ViewDecl& v : site.views()) {
        OpenSet open = site.view_open(v.name);
        std::uint64_t sections = model.presheaf->section_count(open);
        json entry = json::object();
        entry["name"] = v.name;
        entry["open"] = open.point_names();
        entry["sections"] = sections;
        views.push_back(std::move(entry));
        text.push_back("view " + v.name + " = " + open.to_string() +
                       "; |F| = " + std::to_string(sections));
    }
    info["views"] = std::move(views);

    json overlaps = json::array();
    for (std::size_t i = 0; i < site.view_count(); ++i) {
        for (std::size_t j = i + 1; j < site.view_count(); ++j) {
            const std::string& a = site.views()[i].name;
            const std::string& b = site.views()[j].name;
            OpenSet overlap = intersect(site.view_open(a), site.view_open(b));
            json entry = json::object();
            entry["views"] = json::array({a, b});
            entry["points"] = overlap.point_names();
            overlaps.push_back(std::move(entry));
            text.push_back("overlap " + a + ", " + b + " = " + overlap.to_string());
        }
    }
    info["overlaps"] = std::move(overlaps);

    std::uint64_t global = model.presheaf->section_count(site.whole_open());
    info["pair_checks"] = checks;
    info["global_sections"] = global;
    report["info"] = std::move(info);
    text.push_back("|F(site)| = " + std::to_string(global));

    report["outcome"] = "consistent";
    text.push_back("outcome: consistent");
    emit(report, json_out, text);
    return kExitConsistent;
}

int cmd_selftest(std::uint64_t seeds, bool json_out) {
    json report = make_report("selftest");
    std::vector<std::string> text;
    std::uint64_t failures = 0;
    json results = json::array();
    for (std::uint64_t seed = 0; seed < seeds; ++seed) {
        oracle::CertReport cert = oracle::certify(oracle::gen_instance(seed));
        if (!cert.all_held()) ++failures;
        std::string line = cert.summary();
        results.push_back(line);
        text.push_back(line);
        if (!cert.all_held()) {
            for (const oracle::CertCheck& c : cert.checks) {
                for (const std::string& f : c.failures) text.push_back("  " + f);
            }
        }
    }
    json selftest = json::object();
    selftest["seeds"] = seeds;
    selftest["failures"] = failures;
    selftest["results"] = std::move(results);
    report["selftest"] = std::move(selftest);
    report["outcome"] = failures == 0 ? "consistent" : "error";

    text.push_back("selftest: " + plural(seeds, "seed") + ", " + plural(failures, "failure"));
    text.push_back(std::string("outcome: ") + (failures == 0 ? "consistent" : "error"));
    emit(report, json_out, text);
    return failures == 0 ? kExitConsistent : kExitConflicts;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"archsheaf — multi-view design consistency checker"};
    app.require_subcommand(1);

    std::string path;
    std::string property;
    bool json_out = false;
    bool verify_uniqueness = false;
    std::uint64_t seeds = 25;

    CLI::App* check = app.add_subcommand("check", "Check pairwise compatibility of the designs");
    check->add_option("file", path, "architecture file")->required();
    check->add_flag("--json", json_out, "machine-readable report");

    CLI::App* glue_cmd = app.add_subcommand("glue", "Glue compatible designs to the unique joint design");
    glue_cmd->add_option("file", path, "architecture file")->required();
    glue_cmd->add_flag("--json", json_out, "machine-readable report");
    glue_cmd->add_flag("--verify-unique", verify_uniqueness,
                       "confirm uniqueness by exhaustive search (capped)");

    CLI::App* derive = app.add_subcommand("derive", "Apply a declared property map and glue the result");
    derive->add_option("file", path, "architecture file")->required();
    derive->add_option("--property", property, "property name")->required();
    derive->add_flag("--json", json_out, "machine-readable report");

    CLI::App* info = app.add_subcommand("info", "Summarize the site, views, overlaps and design-space sizes");
    info->add_option("file", path, "architecture file")->required();
    info->add_flag("--json", json_out, "machine-readable report");

    CLI::App* selftest = app.add_subcommand("selftest", "Run the brute-force certification oracles");
    selftest->add_option("--seeds", seeds, "number of seeded instances");
    selftest->add_flag("--json", json_out, "machine-readable report");
    selftest->group("");  // hidden

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitError;
    }

    try {
        if (check->parsed()) return cmd_check(path, json_out);
        if (glue_cmd->parsed()) return cmd_glue(path, json_out, verify_uniqueness);
        if (derive->parsed()) return cmd_derive(path, property, json_out);
        if (info->parsed()) return cmd_info(path, json_out);
        if (selftest->parsed()) return cmd_selftest(seeds, json_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}

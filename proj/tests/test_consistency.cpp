#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>
#include <string>
#include <vector>

#include "archsheaf/consistency.hpp"
#include "archsheaf/oracle.hpp"
#include "support/fixtures.hpp"

using namespace archsheaf;

namespace {

// Independent agreement check working on label maps only.
std::vector<std::string> disagreements(const FamilyMember& a, const FamilyMember& b) {
    std::map<std::string, std::string> ma, mb;
    for (const auto& [p, v] : a.section.assignment()) ma[p] = v;
    for (const auto& [p, v] : b.section.assignment()) mb[p] = v;
    std::vector<std::string> out;
    for (const auto& [p, v] : ma) {
        auto it = mb.find(p);
        if (it != mb.end() && it->second != v) out.push_back(p);
    }
    return out;
}

}  // namespace

TEST_CASE("the worked-example family is compatible") {
    auto p = testutil::three_view_presheaf();
    LocalFamily family = testutil::three_view_family(p);
    ConflictReport report = check_pairwise(family);
    CHECK(report.empty());
    CHECK(report.pairs_compared == 3);
    // Cross-check with the label-map oracle.
    for (std::size_t i = 0; i < family.size(); ++i) {
        for (std::size_t j = i + 1; j < family.size(); ++j) {
            CHECK(disagreements(family.members()[i], family.members()[j]).empty());
        }
    }
}

TEST_CASE("perturbing the ET value yields exactly one conflict") {
    auto p = testutil::three_view_presheaf();
    testutil::ThreeViewValues values;
    values.therm_et = "0";
    ConflictReport report = check_pairwise(testutil::three_view_family(p, values));
    REQUIRE(report.conflicts.size() == 1);
    const Conflict& c = report.conflicts[0];
    CHECK(c.member_a == "elec");
    CHECK(c.member_b == "therm");
    CHECK(c.point == "ET");
    CHECK(c.value_a == "1");
    CHECK(c.value_b == "0");
}

TEST_CASE("single-member and empty families are trivially compatible") {
    auto p = testutil::three_view_presheaf();
    std::vector<std::pair<std::string, std::string>> assign{{"EM", "0"}, {"ET", "0"}};
    Section s = p->section(p->site()->view_open("electrical"), assign);
    LocalFamily single = LocalFamily::create(p, {{"only", s}});
    ConflictReport report = check_pairwise(single);
    CHECK(report.empty());
    CHECK(report.pairs_compared == 0);

    LocalFamily none = LocalFamily::create(p, {});
    CHECK(check_pairwise(none).empty());
}

TEST_CASE("pairwise_check_count") {
    CHECK(pairwise_check_count(10) == 45);
    CHECK(pairwise_check_count(3) == 3);
    CHECK(pairwise_check_count(1) == 0);
    CHECK(pairwise_check_count(0) == 0);
    CHECK(pairwise_check_count(2) == 1);
    CHECK(pairwise_check_count(100) == 4950);
}

TEST_CASE("family validation") {
    auto p = testutil::three_view_presheaf();
    auto other = testutil::three_view_presheaf();
    std::vector<std::pair<std::string, std::string>> assign{{"EM", "0"}, {"ET", "0"}};
    Section s = p->section(p->site()->view_open("electrical"), assign);
    Section foreign = other->section(other->site()->view_open("electrical"), assign);

    CHECK_THROWS_AS(LocalFamily::create(p, {{"a", s}, {"a", s}}), Error);
    CHECK_THROWS_AS(LocalFamily::create(p, {{"a", s}, {"b", foreign}}), Error);
}

TEST_CASE("glue reproduces the unique global design of the worked example") {
    auto p = testutil::three_view_presheaf();
    LocalFamily family = testutil::three_view_family(p);
    GluingResult g = glue(family);

    CHECK(g.glued.domain() == p->site()->whole_open());
    CHECK(g.glued.to_string() == "{EM=\"2\", ET=\"1\", TM=\"4\"}");
    std::vector<std::pair<std::string, std::string>> witness{
        {"EM", "elec"}, {"ET", "elec"}, {"TM", "therm"}};
    CHECK(g.witness_map() == witness);

    // Brute force: exactly one of the 60 global sections restricts to all
    // three members, and it is the glued one.
    std::size_t matches = 0;
    for (const Section& candidate : p->enumerate_sections(p->site()->whole_open())) {
        bool all = true;
        for (const FamilyMember& m : family.members()) {
            if (restrict(candidate, m.open()) != m.section) all = false;
        }
        if (all) {
            ++matches;
            CHECK(candidate == g.glued);
        }
    }
    CHECK(matches == 1);
}

TEST_CASE("witness choice is observationally irrelevant") {
    // ET is covered by both elec and therm; compatibility forces the same
    // value either way, so only the witness label depends on the tie-break.
    auto p = testutil::three_view_presheaf();
    GluingResult g = glue(testutil::three_view_family(p));
    CHECK(g.glued.value_label("ET") ==
          testutil::three_view_family(p).members()[1].section.value_label("ET"));
}

TEST_CASE("gluing a single member returns that member's section") {
    auto p = testutil::three_view_presheaf();
    std::vector<std::pair<std::string, std::string>> assign{{"EM", "3"}, {"ET", "2"}};
    Section s = p->section(p->site()->view_open("electrical"), assign);
    GluingResult g = glue(LocalFamily::create(p, {{"only", s}}));
    CHECK(g.glued == s);
    CHECK(g.witness == std::vector<std::string>{"only", "only"});
}

TEST_CASE("gluing the empty family yields the empty section") {
    auto p = testutil::three_view_presheaf();
    GluingResult g = glue(LocalFamily::create(p, {}));
    CHECK(g.glued.domain() == p->site()->empty_open());
    CHECK(g.witness.empty());
}

TEST_CASE("gluing an incompatible family fails with the embedded report") {
    auto p = testutil::three_view_presheaf();
    testutil::ThreeViewValues values;
    values.mech_tm = "0";
    LocalFamily family = testutil::three_view_family(p, values);
    try {
        glue(family);
        FAIL("expected IncompatibleFamilyError");
    } catch (const IncompatibleFamilyError& e) {
        REQUIRE(e.report().conflicts.size() == 1);
        CHECK(e.report().conflicts[0].point == "TM");
        CHECK(e.code() == std::string(errc::incompatible));
    }
}

TEST_CASE("glue succeeds exactly when check_pairwise is clean (random families)") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        auto instance = oracle::gen_instance(seed);
        const auto& p = instance.presheaf;
        // The instance's random per-view designs, loaded as a family.
        std::vector<FamilyMember> members;
        for (const DesignDecl& d : instance.doc.designs) {
            members.push_back({d.label, p->section(p->site()->view_open(d.view), d.assign)});
        }
        LocalFamily family = LocalFamily::create(p, std::move(members));
        bool clean = check_pairwise(family).empty();
        bool glued = true;
        try {
            GluingResult g = glue(family);
            for (const FamilyMember& m : family.members()) {
                CHECK(restrict(g.glued, m.open()) == m.section);
            }
        } catch (const IncompatibleFamilyError&) {
            glued = false;
        }
        CHECK(clean == glued);
    }
}

TEST_CASE("verify_unique confirms uniqueness exhaustively on the worked example") {
    auto p = testutil::three_view_presheaf();
    LocalFamily family = testutil::three_view_family(p);
    GluingResult g = glue(family);
    UniquenessResult u = verify_unique(family, g);
    CHECK(u.unique);
    CHECK(u.exhaustive);
    CHECK(u.candidates_checked == 60);
}

TEST_CASE("verify_unique on a two-member family over a two-point site") {
    SiteSpec spec;
    spec.views = {{"a"}, {"b"}, {"c"}};
    spec.points = {{"p", "a", "b"}, {"q", "b", "c"}};
    auto site = Site::create(spec);
    auto p = Presheaf::create(site, {ParameterDomain::fin("p", 4), ParameterDomain::fin("q", 4)});
    std::vector<std::pair<std::string, std::string>> pa{{"p", "1"}};
    std::vector<std::pair<std::string, std::string>> qa{{"q", "3"}};
    std::vector<std::string> pn{"p"}, qn{"q"};
    LocalFamily family = LocalFamily::create(
        p, {{"left", p->section(site->open_of(pn), pa)},
            {"right", p->section(site->open_of(qn), qa)}});
    GluingResult g = glue(family);
    UniquenessResult u = verify_unique(family, g);
    CHECK(u.unique);
    CHECK(u.exhaustive);
    CHECK(u.candidates_checked == 16);
}

TEST_CASE("verify_unique downgrades to the forcing argument beyond the cap") {
    auto p = testutil::three_view_presheaf();
    LocalFamily family = testutil::three_view_family(p);
    GluingResult g = glue(family);
    UniquenessResult u = verify_unique(family, g, 10);
    CHECK(u.unique);
    CHECK_FALSE(u.exhaustive);
    CHECK(u.candidates_checked == 0);
}

TEST_CASE("verify_unique rejects a result produced for a different family") {
    auto p = testutil::three_view_presheaf();
    LocalFamily family = testutil::three_view_family(p);
    testutil::ThreeViewValues other;
    other.elec_em = "0";
    other.mech_em = "0";
    GluingResult g = glue(testutil::three_view_family(p, other));
    CHECK_THROWS_AS(verify_unique(family, g), Error);
}

TEST_CASE("oracle_equivalence on the worked example: 3600 families, 60 compatible") {
    auto p = testutil::three_view_presheaf();
    std::vector<OpenSet> opens{p->site()->view_open("electrical"),
                               p->site()->view_open("thermal"),
                               p->site()->view_open("mechanical")};
    EquivalenceReport report = oracle_equivalence(p, opens);
    CHECK(report.holds);
    CHECK(report.families == 3600);
    CHECK(report.compatible == 60);
    CHECK(report.glueable == 60);
    CHECK(report.uniquely_glueable == 60);
    CHECK_FALSE(report.counterexample.has_value());
}

TEST_CASE("oracle_equivalence holds trivially for a single self-covering open") {
    auto p = testutil::three_view_presheaf();
    std::vector<OpenSet> opens{p->site()->view_open("electrical")};
    EquivalenceReport report = oracle_equivalence(p, opens);
    CHECK(report.holds);
    CHECK(report.families == 12);
    CHECK(report.compatible == 12);
}

TEST_CASE("oracle_equivalence holds on a random four-point three-view site") {
    oracle::Bounds bounds;
    bounds.min_views = bounds.max_views = 3;
    bounds.min_points = bounds.max_points = 4;
    bounds.max_domain = 3;
    auto instance = oracle::gen_instance(7, bounds);
    std::vector<OpenSet> opens;
    for (const std::string& v : instance.cover_views) {
        opens.push_back(instance.site->view_open(v));
    }
    EquivalenceReport report = oracle_equivalence(instance.presheaf, opens);
    CHECK(report.holds);
    CHECK(report.compatible == instance.presheaf->section_count(
                                   union_all(instance.site, opens)));
}

TEST_CASE("oracle_equivalence beyond the cap reports the family-count estimate") {
    auto p = testutil::three_view_presheaf();
    std::vector<OpenSet> opens{p->site()->view_open("electrical"),
                               p->site()->view_open("thermal"),
                               p->site()->view_open("mechanical")};
    try {
        oracle_equivalence(p, opens, 100);
        FAIL("expected CapExceededError");
    } catch (const CapExceededError& e) {
        CHECK(e.estimate() == 3600);
    }
}

TEST_CASE("flipping one shared value produces exactly the conflicts at that point") {
    auto p = testutil::three_view_presheaf();
    struct Case {
        const char* point;
        testutil::ThreeViewValues values;
    };
    std::vector<Case> cases(3);
    cases[0].point = "EM";
    cases[0].values.mech_em = "3";
    cases[1].point = "ET";
    cases[1].values.therm_et = "2";
    cases[2].point = "TM";
    cases[2].values.mech_tm = "1";
    for (const Case& c : cases) {
        ConflictReport report = check_pairwise(testutil::three_view_family(p, c.values));
        REQUIRE(report.conflicts.size() == 1);
        CHECK(report.conflicts[0].point == c.point);
    }
}

TEST_CASE("restriction families of global sections glue back (random instances)") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto instance = oracle::gen_instance(seed);
        const auto& p = instance.presheaf;
        std::vector<OpenSet> opens;
        for (const std::string& v : instance.cover_views) {
            opens.push_back(p->site()->view_open(v));
        }
        OpenSet target = union_all(p->site(), opens);
        for (const Section& s : p->enumerate_sections(target, 4096)) {
            std::vector<FamilyMember> members;
            for (std::size_t k = 0; k < opens.size(); ++k) {
                members.push_back({instance.cover_views[k], restrict(s, opens[k])});
            }
            LocalFamily family = LocalFamily::create(p, std::move(members));
            ConflictReport report = check_pairwise(family);
            CHECK(report.empty());
            CHECK(report.pairs_compared <= pairwise_check_count(family.size()));
            CHECK(glue(family).glued == s);
        }
    }
}

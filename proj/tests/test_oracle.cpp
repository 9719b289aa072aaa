#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "archsheaf/ingest.hpp"
#include "archsheaf/oracle.hpp"
#include "support/fixtures.hpp"

using namespace archsheaf;

namespace {

// The worked example packaged as a certifiable instance.
oracle::SmallInstance three_view_instance() {
    oracle::SmallInstance instance;
    instance.site = testutil::three_view_site();
    instance.presheaf = testutil::three_view_presheaf(instance.site);
    instance.cover_views = {"electrical", "thermal", "mechanical"};
    instance.property_maps.push_back(identity_property(instance.presheaf));
    return instance;
}

}  // namespace

TEST_CASE("gen_instance yields a validator-clean instance") {
    oracle::SmallInstance instance = oracle::gen_instance(0);
    LoadResult loaded = load_text(canonical_json(instance.doc));
    REQUIRE(loaded.ok());
    CHECK(loaded.model->site->point_count() == instance.site->point_count());
    CHECK(loaded.model->site->view_count() == instance.site->view_count());
}

TEST_CASE("gen_instance is deterministic per seed") {
    for (std::uint64_t seed : {0ULL, 1ULL, 17ULL}) {
        oracle::SmallInstance a = oracle::gen_instance(seed);
        oracle::SmallInstance b = oracle::gen_instance(seed);
        CHECK(canonical_json(a.doc) == canonical_json(b.doc));
        CHECK(a.cover_views == b.cover_views);
        REQUIRE(a.property_maps.size() == b.property_maps.size());
        for (std::size_t i = 0; i < a.property_maps.size(); ++i) {
            CHECK(a.property_maps[i].name() == b.property_maps[i].name());
        }
    }
    CHECK(canonical_json(oracle::gen_instance(3).doc) !=
          canonical_json(oracle::gen_instance(4).doc));
}

TEST_CASE("1000 seeds generate validator-clean instances") {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        oracle::SmallInstance instance = oracle::gen_instance(seed);
        LoadResult loaded = load_text(canonical_json(instance.doc));
        INFO("seed ", seed);
        REQUIRE(loaded.ok());
    }
}

TEST_CASE("generated instances respect the bounds") {
    oracle::Bounds bounds;
    bounds.min_views = 2;
    bounds.max_views = 4;
    bounds.min_points = 1;
    bounds.max_points = 5;
    bounds.max_domain = 4;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        oracle::SmallInstance instance = oracle::gen_instance(seed, bounds);
        CHECK(instance.site->view_count() >= 2);
        CHECK(instance.site->view_count() <= 4);
        CHECK(instance.site->point_count() >= 1);
        CHECK(instance.site->point_count() <= 5);
        for (std::size_t pt = 0; pt < instance.site->point_count(); ++pt) {
            CHECK(instance.presheaf->domain_size(pt) >= 1);
            CHECK(instance.presheaf->domain_size(pt) <= 4);
        }
        CHECK(instance.cover_views.size() == instance.site->view_count());
    }
}

TEST_CASE("certify on the worked example: 3600 families, 60 compatible, all held") {
    oracle::CertReport report = oracle::certify(three_view_instance());
    CHECK(report.all_held());
    CHECK_FALSE(report.sampled);
    CHECK(report.families_examined == 3600);
    CHECK(report.compatible_families == 60);
    for (const oracle::CertCheck& check : report.checks) {
        INFO(check.name);
        CHECK(check.held);
        CHECK(check.failures.empty());
    }
    CHECK(report.checks.size() == 5);
}

TEST_CASE("certify holds trivially on a site with a single view and no interfaces") {
    oracle::SmallInstance instance;
    SiteSpec spec;
    spec.views = {{"solo"}};
    instance.site = Site::create(spec);
    instance.presheaf = Presheaf::create(instance.site, {});
    instance.cover_views = {"solo"};
    instance.property_maps.push_back(identity_property(instance.presheaf));
    oracle::CertReport report = oracle::certify(instance);
    CHECK(report.all_held());
    CHECK(report.families_examined == 1);
    CHECK(report.compatible_families == 1);
}

TEST_CASE("certify holds across seeded instances") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        oracle::CertReport report = oracle::certify(oracle::gen_instance(seed));
        INFO(report.summary());
        CHECK(report.all_held());
    }
}

TEST_CASE("certify summaries name every check") {
    oracle::CertReport report = oracle::certify(oracle::gen_instance(2));
    std::string summary = report.summary();
    for (const char* name : {"pairwise-equivalence", "engine-agreement", "functor-laws",
                             "gluing-round-trip", "derived-commutation"}) {
        CHECK(summary.find(name) != std::string::npos);
    }
}

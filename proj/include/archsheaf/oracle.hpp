#ifndef ARCHSHEAF_ORACLE_HPP
#define ARCHSHEAF_ORACLE_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "archsheaf/ingest.hpp"
#include "archsheaf/presheaf.hpp"
#include "archsheaf/properties.hpp"
#include "archsheaf/topology.hpp"

// Test-support oracles: seeded random small instances and exhaustive
// certification of the engine's guarantees against an independent brute-force
// reimplementation working on raw value tuples.  Surfaced through the test
// suite and the hidden `selftest` CLI subcommand.
namespace archsheaf::oracle {

struct Bounds {
    std::size_t min_views = 2;
    std::size_t max_views = 4;
    std::size_t min_points = 1;
    std::size_t max_points = 5;
    std::size_t min_domain = 1;
    std::size_t max_domain = 4;
    std::size_t property_maps = 2;  // identity plus random pointwise maps
};

struct SmallInstance {
    std::uint64_t seed = 0;
    std::shared_ptr<const Site> site;
    std::shared_ptr<const Presheaf> presheaf;
    std::vector<std::string> cover_views;  // family of named view-opens (all views)
    std::vector<PropertyMap> property_maps;
    ArchitectureDoc doc;  // serializable form, includes one random design per view
};

// Deterministic per seed: the same seed yields an identical instance.
SmallInstance gen_instance(std::uint64_t seed, const Bounds& bounds = {});

struct CertCheck {
    std::string name;
    bool held = true;
    std::uint64_t cases = 0;
    std::string note;
    std::vector<std::string> failures;
};

struct CertReport {
    std::uint64_t seed = 0;
    bool sampled = false;  // any check ran in capped-sampled mode
    std::uint64_t families_examined = 0;
    std::uint64_t compatible_families = 0;
    std::vector<CertCheck> checks;

    bool all_held() const;
    std::string summary() const;
};

struct CertifyOptions {
    std::uint64_t family_cap = 2'000'000;    // exhaustive family scans up to this
    std::uint64_t sample_families = 50'000;  // draws when beyond the cap
    std::uint64_t engine_sample = 512;       // families cross-checked through the engine
    std::uint64_t candidate_cap = 8'192;     // global sections examined per instance
    std::uint64_t law_budget = 60'000;
};

// Certifies, on one instance: pairwise compatibility <=> unique gluing (raw
// brute force), engine agreement with the raw verdicts, the functor laws,
// gluing round-trips, and derived-gluing commutation for every generated
// property map.
CertReport certify(const SmallInstance& instance, const CertifyOptions& options = {});

}  // namespace archsheaf::oracle

#endif

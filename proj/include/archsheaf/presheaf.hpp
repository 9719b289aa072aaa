#ifndef ARCHSHEAF_PRESHEAF_HPP
#define ARCHSHEAF_PRESHEAF_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "archsheaf/topology.hpp"

namespace archsheaf {

// Default cap on exhaustive section enumeration; the CLI lets
// ARCHSHEAF_ENUM_CAP override it.
inline constexpr std::uint64_t kDefaultEnumCap = 1'000'000;

// The finite set of admissible values at one interface point.
struct ParameterDomain {
    std::string point;
    std::vector<std::string> values;

    // Domain with auto-generated labels "0".."n-1".
    static ParameterDomain fin(std::string point, std::size_t cardinality);
};

class Presheaf;

// An assignment of one domain value to every point of an open set; an
// element of F(U).  Values are stored as indices into each point's domain,
// parallel to domain().indices().
class Section {
public:
    Section() = default;

    const std::shared_ptr<const Presheaf>& presheaf() const { return presheaf_; }
    const OpenSet& domain() const { return domain_; }
    const std::vector<std::uint32_t>& values() const { return values_; }

    // Label assigned at a point of the domain; throws E-UNKNOWN-POINT when the
    // point is not in the domain.
    const std::string& value_label(std::string_view point_name) const;

    // (point name, value label) pairs in canonical point order.
    std::vector<std::pair<std::string, std::string>> assignment() const;

    std::string to_string() const;  // e.g. {EM="2", ET="1"}

    friend bool operator==(const Section& a, const Section& b) {
        return a.presheaf_.get() == b.presheaf_.get() && a.domain_ == b.domain_ &&
               a.values_ == b.values_;
    }
    friend bool operator!=(const Section& a, const Section& b) { return !(a == b); }

private:
    friend class Presheaf;
    Section(std::shared_ptr<const Presheaf> presheaf, OpenSet domain,
            std::vector<std::uint32_t> values)
        : presheaf_(std::move(presheaf)), domain_(std::move(domain)), values_(std::move(values)) {}

    std::shared_ptr<const Presheaf> presheaf_;
    OpenSet domain_;
    std::vector<std::uint32_t> values_;
};

// The product presheaf F(U) = prod_{x in U} P(x) over a site, with projection
// restriction maps.
class Presheaf : public std::enable_shared_from_this<Presheaf> {
public:
    // Requires exactly one domain per declared point, each with at least one
    // value and unique labels.
    static std::shared_ptr<const Presheaf> create(std::shared_ptr<const Site> site,
                                                  std::vector<ParameterDomain> domains);

    const std::shared_ptr<const Site>& site() const { return site_; }
    const std::vector<std::string>& domain_values(std::size_t point_index) const {
        return values_.at(point_index);
    }
    std::size_t domain_size(std::size_t point_index) const {
        return values_.at(point_index).size();
    }
    std::optional<std::uint32_t> value_index(std::size_t point_index,
                                             std::string_view label) const;

    // Builds a section from a total labelled assignment over `open`.
    Section section(const OpenSet& open,
                    std::span<const std::pair<std::string, std::string>> assignment) const;
    Section section_from_indices(const OpenSet& open, std::vector<std::uint32_t> values) const;

    // |F(open)|: product of domain cardinalities, saturating at uint64 max;
    // the empty open yields 1.
    std::uint64_t section_count(const OpenSet& open) const;

    // All sections over `open` in lexicographic order of the canonical point
    // order.  Throws CapExceededError when section_count exceeds `cap`.
    std::vector<Section> enumerate_sections(const OpenSet& open,
                                            std::uint64_t cap = kDefaultEnumCap) const;

private:
    Presheaf() = default;

    std::shared_ptr<const Site> site_;
    std::vector<std::vector<std::string>> values_;  // by point index
    std::vector<std::unordered_map<std::string, std::uint32_t>> value_lookup_;
};

// Iterates value-index tuples over an open's slots in lexicographic order
// without materializing Section objects.
class SectionOdometer {
public:
    SectionOdometer(const Presheaf& presheaf, const OpenSet& open);

    // Fills `values` with the next tuple; returns false once exhausted.
    bool next(std::vector<std::uint32_t>& values);

private:
    std::vector<std::uint32_t> radixes_;
    std::vector<std::uint32_t> current_;
    bool started_ = false;
    bool done_ = false;
};

// Projection F(V) -> F(U) for U <= V.  Throws E-NOT-A-SUBSET listing the
// offending points when `sub` is not contained in the section's domain.
Section restrict(const Section& s, const OpenSet& sub);

struct LawCounterexample {
    std::string law;  // "identity" or "composition"
    std::string u, v, w;
    std::string section;
};

struct LawReport {
    bool holds = true;
    bool exhaustive = true;
    std::uint64_t triples = 0;  // chain evaluations: one per (U <= V <= W, section)
    std::uint64_t checks = 0;   // individual law evaluations (chains + identity checks)
    std::vector<LawCounterexample> counterexamples;
};

// Checks the functor laws restrict(restrict(s,V),U) = restrict(s,U) and
// restrict(s,W) = s over chains U <= V <= W of opens.  Exhaustive whenever the
// total work fits the budget, otherwise a seeded sample (flagged in the
// report).  Throws CapExceededError when the site has more than `point_cap`
// points (the discrete topology has 2^n opens).
LawReport check_functor_laws(const std::shared_ptr<const Presheaf>& presheaf,
                             std::size_t point_cap = 12,
                             std::uint64_t work_budget = 250'000,
                             std::uint64_t seed = 0);

}  // namespace archsheaf

#endif

#ifndef ARCHSHEAF_CONSISTENCY_HPP
#define ARCHSHEAF_CONSISTENCY_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "archsheaf/presheaf.hpp"

namespace archsheaf {

// One local design in a family: a labelled section over its open.
struct FamilyMember {
    std::string label;
    Section section;

    const OpenSet& open() const { return section.domain(); }
};

// A collection (s_i in F(U_i)) of local designs over one presheaf.
class LocalFamily {
public:
    static LocalFamily create(std::shared_ptr<const Presheaf> presheaf,
                              std::vector<FamilyMember> members);

    const std::shared_ptr<const Presheaf>& presheaf() const { return presheaf_; }
    const std::vector<FamilyMember>& members() const { return members_; }
    std::size_t size() const { return members_.size(); }
    std::vector<OpenSet> opens() const;

private:
    LocalFamily(std::shared_ptr<const Presheaf> presheaf, std::vector<FamilyMember> members)
        : presheaf_(std::move(presheaf)), members_(std::move(members)) {}

    std::shared_ptr<const Presheaf> presheaf_;
    std::vector<FamilyMember> members_;
};

// A disagreement of two members at a shared interface point.
struct Conflict {
    std::string member_a;
    std::string member_b;
    std::string point;
    std::string value_a;
    std::string value_b;
};

struct ConflictReport {
    std::vector<Conflict> conflicts;
    // Instrumentation: unordered member pairs compared (at most n(n-1)/2).
    std::uint64_t pairs_compared = 0;

    bool empty() const { return conflicts.empty(); }
};

// Compares every unordered member pair on its overlap; conflicts are listed
// once per (pair, point), pairs in declaration order, points in canonical
// order.
ConflictReport check_pairwise(const LocalFamily& family);

// n(n-1)/2: the number of unordered pairs among n members.
std::uint64_t pairwise_check_count(std::uint64_t n);

// The unique section over the union of the family's opens restricting to
// every member, plus, per point, the label of the member the value was read
// from (first covering member in declaration order).
struct GluingResult {
    Section glued;
    std::vector<std::string> witness;  // parallel to glued.domain().indices()

    std::vector<std::pair<std::string, std::string>> witness_map() const;
};

class IncompatibleFamilyError : public Error {
public:
    IncompatibleFamilyError(const std::string& message, ConflictReport report)
        : Error(errc::incompatible, message), report_(std::move(report)) {}

    const ConflictReport& report() const noexcept { return report_; }

private:
    ConflictReport report_;
};

// Glues a compatible family; throws IncompatibleFamilyError carrying the full
// ConflictReport otherwise.  The empty family glues to the empty section.
GluingResult glue(const LocalFamily& family);

struct UniquenessResult {
    bool unique = false;
    // True when uniqueness was confirmed by exhaustive search over the
    // candidate sections; false when only the direct forcing argument ran
    // (enumeration cap exceeded).
    bool exhaustive = false;
    std::uint64_t candidates_checked = 0;
};

// Confirms that no other section over the same union restricts to every
// member.  `g` must have been produced for `family`.
UniquenessResult verify_unique(const LocalFamily& family, const GluingResult& g,
                               std::uint64_t cap = kDefaultEnumCap);

struct EquivalenceReport {
    bool holds = true;
    bool exhaustive = true;
    std::uint64_t families = 0;
    std::uint64_t compatible = 0;
    std::uint64_t glueable = 0;        // families with at least one gluing
    std::uint64_t uniquely_glueable = 0;  // families with exactly one
    std::optional<std::string> counterexample;
};

// Enumerates every family (s_i) over the given opens; for each one computes
// (a) pairwise compatibility and (b) the number of sections over the union
// restricting to all members, by brute force over F(union).  Reports whether
// compatibility and unique gluing coincided on every family.  Throws
// CapExceededError (with the family-count estimate) when the family space
// exceeds `cap`.
EquivalenceReport oracle_equivalence(const std::shared_ptr<const Presheaf>& presheaf,
                                     std::span<const OpenSet> opens,
                                     std::uint64_t cap = kDefaultEnumCap);

}  // namespace archsheaf

#endif

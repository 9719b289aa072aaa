#include "archsheaf/consistency.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace archsheaf {

LocalFamily LocalFamily::create(std::shared_ptr<const Presheaf> presheaf,
                                std::vector<FamilyMember> members) {
    std::unordered_set<std::string> labels;
    for (const FamilyMember& m : members) {
        if (m.label.empty()) {
            throw Error(errc::bad_name, "family member label must be non-empty");
        }
        if (!labels.insert(m.label).second) {
            throw Error(errc::duplicate_name, "duplicate family member label '" + m.label + "'");
        }
        if (m.section.presheaf().get() != presheaf.get()) {
            throw Error(errc::mixed_presheaf,
                        "member '" + m.label + "' belongs to a different presheaf");
        }
    }
    return LocalFamily(std::move(presheaf), std::move(members));
}

std::vector<OpenSet> LocalFamily::opens() const {
    std::vector<OpenSet> out;
    out.reserve(members_.size());
    for (const FamilyMember& m : members_) out.push_back(m.open());
    return out;
}

ConflictReport check_pairwise(const LocalFamily& family) {
    ConflictReport report;
    const auto& members = family.members();
    for (std::size_t i = 0; i < members.size(); ++i) {
        for (std::size_t j = i + 1; j < members.size(); ++j) {
            ++report.pairs_compared;
            OpenSet overlap = intersect(members[i].open(), members[j].open());
            for (std::uint32_t pt : overlap.indices()) {
                const std::string& name = family.presheaf()->site()->point(pt).name;
                const std::string& va = members[i].section.value_label(name);
                const std::string& vb = members[j].section.value_label(name);
                if (va != vb) {
                    report.conflicts.push_back(
                        {members[i].label, members[j].label, name, va, vb});
                }
            }
        }
    }
    return report;
}

std::uint64_t pairwise_check_count(std::uint64_t n) {
    if (n < 2) return 0;
    return (n % 2 == 0) ? (n / 2) * (n - 1) : n * ((n - 1) / 2);
}

std::vector<std::pair<std::string, std::string>> GluingResult::witness_map() const {
    std::vector<std::pair<std::string, std::string>> out;
    out.reserve(witness.size());
    const OpenSet& domain = glued.domain();
    for (std::size_t slot = 0; slot < witness.size(); ++slot) {
        out.emplace_back(domain.site()->point(domain.indices()[slot]).name, witness[slot]);
    }
    return out;
}

GluingResult glue(const LocalFamily& family) {
    ConflictReport report = check_pairwise(family);
    if (!report.empty()) {
        std::ostringstream msg;
        msg << "family is incompatible: " << report.conflicts.size() << " conflict"
            << (report.conflicts.size() == 1 ? "" : "s") << " on pairwise overlaps";
        throw IncompatibleFamilyError(msg.str(), std::move(report));
    }

    const auto& presheaf = family.presheaf();
    std::vector<OpenSet> opens = family.opens();
    OpenSet target = union_all(presheaf->site(), opens);

    std::vector<std::uint32_t> values;
    std::vector<std::string> witness;
    values.reserve(target.size());
    witness.reserve(target.size());
    for (std::uint32_t pt : target.indices()) {
        for (const FamilyMember& m : family.members()) {
            if (!m.open().contains(pt)) continue;
            const auto& slots = m.open().indices();
            std::size_t slot = static_cast<std::size_t>(
                std::lower_bound(slots.begin(), slots.end(), pt) - slots.begin());
            values.push_back(m.section.values()[slot]);
            witness.push_back(m.label);
            break;
        }
    }

    GluingResult result{presheaf->section_from_indices(target, std::move(values)),
                        std::move(witness)};

    // Postcondition: the glued section restricts to every member.
    for (const FamilyMember& m : family.members()) {
        if (restrict(result.glued, m.open()) != m.section) {
            throw std::logic_error("glued section does not restrict to member '" + m.label + "'");
        }
    }
    return result;
}

namespace {

// Slot positions of `sub`'s points within `super`'s slot list (sub <= super).
std::vector<std::size_t> slot_map(const OpenSet& sub, const OpenSet& super) {
    std::vector<std::size_t> map;
    map.reserve(sub.size());
    std::size_t cursor = 0;
    for (std::uint32_t pt : sub.indices()) {
        while (super.indices()[cursor] != pt) ++cursor;
        map.push_back(cursor);
    }
    return map;
}

}  // namespace

UniquenessResult verify_unique(const LocalFamily& family, const GluingResult& g,
                               std::uint64_t cap) {
    const auto& presheaf = family.presheaf();
    if (g.glued.presheaf().get() != presheaf.get()) {
        throw Error(errc::bad_argument, "gluing result belongs to a different presheaf");
    }
    OpenSet target = union_all(presheaf->site(), family.opens());
    if (g.glued.domain() != target) {
        throw Error(errc::bad_argument,
                    "gluing result was not produced for this family (domain mismatch)");
    }
    for (const FamilyMember& m : family.members()) {
        if (restrict(g.glued, m.open()) != m.section) {
            throw Error(errc::bad_argument,
                        "gluing result does not restrict to member '" + m.label + "'");
        }
    }

    UniquenessResult result;
    if (presheaf->section_count(target) > cap) {
        // Direct argument: every point of the union lies in some member's
        // open, so its value is forced by that member.
        result.unique = true;
        result.exhaustive = false;
        return result;
    }

    std::vector<std::vector<std::size_t>> member_slots;
    member_slots.reserve(family.size());
    for (const FamilyMember& m : family.members()) {
        member_slots.push_back(slot_map(m.open(), target));
    }

    std::uint64_t matches = 0;
    SectionOdometer odometer(*presheaf, target);
    std::vector<std::uint32_t> candidate;
    while (odometer.next(candidate)) {
        ++result.candidates_checked;
        bool restricts_to_all = true;
        for (std::size_t k = 0; k < family.size() && restricts_to_all; ++k) {
            const auto& expected = family.members()[k].section.values();
            for (std::size_t slot = 0; slot < expected.size(); ++slot) {
                if (candidate[member_slots[k][slot]] != expected[slot]) {
                    restricts_to_all = false;
                    break;
                }
            }
        }
        if (restricts_to_all) ++matches;
    }
    result.unique = (matches == 1);
    result.exhaustive = true;
    return result;
}

EquivalenceReport oracle_equivalence(const std::shared_ptr<const Presheaf>& presheaf,
                                     std::span<const OpenSet> opens, std::uint64_t cap) {
    std::uint64_t family_count = 1;
    for (const OpenSet& u : opens) {
        std::uint64_t factor = presheaf->section_count(u);
        family_count = (factor != 0 && family_count > UINT64_MAX / factor)
                           ? UINT64_MAX
                           : family_count * factor;
    }
    if (family_count > cap) {
        throw CapExceededError("family space has " + std::to_string(family_count) +
                                   " members, exceeding cap " + std::to_string(cap),
                               family_count);
    }

    OpenSet target = union_all(presheaf->site(), opens);

    // Brute-force side: every candidate section over the union, keyed by the
    // tuple of its restrictions to the given opens.
    auto key_of = [](std::span<const Section> sections) {
        std::string key;
        for (const Section& s : sections) {
            for (std::uint32_t v : s.values()) {
                key.append(reinterpret_cast<const char*>(&v), sizeof(v));
            }
            key.push_back('|');
        }
        return key;
    };

    std::unordered_map<std::string, std::uint64_t> gluings;
    {
        std::vector<Section> candidates = presheaf->enumerate_sections(target, cap);
        std::vector<Section> restrictions(opens.size());
        for (const Section& candidate : candidates) {
            for (std::size_t k = 0; k < opens.size(); ++k) {
                restrictions[k] = restrict(candidate, opens[k]);
            }
            ++gluings[key_of(restrictions)];
        }
    }

    // Pairwise side: run the engine's check on every family.
    std::vector<std::vector<Section>> sections_per_open;
    sections_per_open.reserve(opens.size());
    for (const OpenSet& u : opens) {
        sections_per_open.push_back(presheaf->enumerate_sections(u, cap));
    }

    EquivalenceReport report;
    std::vector<std::size_t> pick(opens.size(), 0);
    std::vector<Section> current(opens.size());
    bool more = true;
    if (family_count == 0) more = false;
    while (more) {
        ++report.families;
        std::vector<FamilyMember> members;
        members.reserve(opens.size());
        for (std::size_t k = 0; k < opens.size(); ++k) {
            current[k] = sections_per_open[k][pick[k]];
            members.push_back({"U" + std::to_string(k), current[k]});
        }
        LocalFamily family = LocalFamily::create(presheaf, std::move(members));
        bool compatible = check_pairwise(family).empty();

        auto it = gluings.find(key_of(current));
        std::uint64_t gluing_count = (it == gluings.end()) ? 0 : it->second;

        if (compatible) ++report.compatible;
        if (gluing_count >= 1) ++report.glueable;
        if (gluing_count == 1) ++report.uniquely_glueable;
        if (compatible != (gluing_count == 1)) {
            report.holds = false;
            if (!report.counterexample) {
                std::ostringstream msg;
                msg << "family";
                for (std::size_t k = 0; k < opens.size(); ++k) {
                    msg << " U" << k << "=" << current[k].to_string();
                }
                msg << (compatible ? " is pairwise compatible" : " is pairwise incompatible")
                    << " but has " << gluing_count << " gluing(s)";
                report.counterexample = msg.str();
            }
        }

        // Advance the family odometer (last open varies fastest).
        more = false;
        std::size_t k = pick.size();
        while (k > 0) {
            --k;
            if (++pick[k] < sections_per_open[k].size()) {
                more = true;
                break;
            }
            pick[k] = 0;
        }
    }
    return report;
}

}  // namespace archsheaf

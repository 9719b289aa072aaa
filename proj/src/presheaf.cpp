#include "archsheaf/presheaf.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace archsheaf {

namespace {

std::uint64_t mul_sat(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return 0;
    if (a > UINT64_MAX / b) return UINT64_MAX;
    return a * b;
}

}  // namespace

ParameterDomain ParameterDomain::fin(std::string point, std::size_t cardinality) {
    ParameterDomain d{std::move(point), {}};
    d.values.reserve(cardinality);
    for (std::size_t i = 0; i < cardinality; ++i) d.values.push_back(std::to_string(i));
    return d;
}

const std::string& Section::value_label(std::string_view point_name) const {
    auto idx = domain_.site()->point_index(point_name);
    if (idx) {
        const auto& slots = domain_.indices();
        auto it = std::lower_bound(slots.begin(), slots.end(), static_cast<std::uint32_t>(*idx));
        if (it != slots.end() && *it == *idx) {
            std::size_t slot = static_cast<std::size_t>(it - slots.begin());
            return presheaf_->domain_values(*idx)[values_[slot]];
        }
    }
    throw Error(errc::unknown_point,
                "section assigns no value at point '" + std::string(point_name) + "'");
}

std::vector<std::pair<std::string, std::string>> Section::assignment() const {
    std::vector<std::pair<std::string, std::string>> out;
    out.reserve(values_.size());
    for (std::size_t slot = 0; slot < values_.size(); ++slot) {
        std::uint32_t pt = domain_.indices()[slot];
        out.emplace_back(domain_.site()->point(pt).name,
                         presheaf_->domain_values(pt)[values_[slot]]);
    }
    return out;
}

std::string Section::to_string() const {
    std::ostringstream out;
    out << '{';
    bool first = true;
    for (const auto& [point, value] : assignment()) {
        if (!first) out << ", ";
        first = false;
        out << point << "=\"" << value << '"';
    }
    out << '}';
    return out.str();
}

std::shared_ptr<const Presheaf> Presheaf::create(std::shared_ptr<const Site> site,
                                                 std::vector<ParameterDomain> domains) {
    auto presheaf = std::shared_ptr<Presheaf>(new Presheaf());
    presheaf->site_ = std::move(site);
    const Site& s = *presheaf->site_;

    presheaf->values_.resize(s.point_count());
    presheaf->value_lookup_.resize(s.point_count());
    std::vector<bool> seen(s.point_count(), false);

    for (ParameterDomain& d : domains) {
        auto idx = s.point_index(d.point);
        if (!idx) {
            throw Error(errc::unknown_point,
                        "parameter domain declared for unknown point '" + d.point + "'");
        }
        if (seen[*idx]) {
            throw Error(errc::duplicate_name,
                        "parameter domain declared twice for point '" + d.point + "'");
        }
        seen[*idx] = true;
        if (d.values.empty()) {
            throw Error(errc::bad_value, "parameter domain for '" + d.point + "' has no values");
        }
        auto& lookup = presheaf->value_lookup_[*idx];
        for (std::size_t k = 0; k < d.values.size(); ++k) {
            if (!lookup.emplace(d.values[k], static_cast<std::uint32_t>(k)).second) {
                throw Error(errc::bad_value, "duplicate value label '" + d.values[k] +
                                                 "' in domain of '" + d.point + "'");
            }
        }
        presheaf->values_[*idx] = std::move(d.values);
    }
    for (std::size_t i = 0; i < s.point_count(); ++i) {
        if (!seen[i]) {
            throw Error(errc::no_domain,
                        "no parameter domain declared for point '" + s.point(i).name + "'");
        }
    }
    return presheaf;
}

std::optional<std::uint32_t> Presheaf::value_index(std::size_t point_index,
                                                   std::string_view label) const {
    const auto& lookup = value_lookup_.at(point_index);
    auto it = lookup.find(std::string(label));
    if (it == lookup.end()) return std::nullopt;
    return it->second;
}

Section Presheaf::section(
    const OpenSet& open,
    std::span<const std::pair<std::string, std::string>> assignment) const {
    if (open.site().get() != site_.get()) {
        throw Error(errc::mixed_site, "open set belongs to a different site");
    }
    std::vector<std::uint32_t> values(open.size(), UINT32_MAX);
    for (const auto& [point, label] : assignment) {
        auto idx = site_->point_index(point);
        if (!idx) {
            throw Error(errc::unknown_point, "assignment names unknown point '" + point + "'");
        }
        const auto& slots = open.indices();
        auto it = std::lower_bound(slots.begin(), slots.end(), static_cast<std::uint32_t>(*idx));
        if (it == slots.end() || *it != *idx) {
            throw Error(errc::extra_point,
                        "assignment names point '" + point + "' outside the open " +
                            open.to_string());
        }
        auto value = value_index(*idx, label);
        if (!value) {
            throw Error(errc::bad_value, "value '" + label + "' is not in the domain of point '" +
                                             point + "'");
        }
        values[static_cast<std::size_t>(it - slots.begin())] = *value;
    }
    for (std::size_t slot = 0; slot < values.size(); ++slot) {
        if (values[slot] == UINT32_MAX) {
            throw Error(errc::missing_point,
                        "assignment omits point '" + site_->point(open.indices()[slot]).name +
                            "' of the open " + open.to_string());
        }
    }
    return Section(shared_from_this(), open, std::move(values));
}

Section Presheaf::section_from_indices(const OpenSet& open,
                                       std::vector<std::uint32_t> values) const {
    if (open.site().get() != site_.get()) {
        throw Error(errc::mixed_site, "open set belongs to a different site");
    }
    if (values.size() != open.size()) {
        throw Error(errc::bad_argument, "value tuple arity does not match the open");
    }
    for (std::size_t slot = 0; slot < values.size(); ++slot) {
        if (values[slot] >= values_[open.indices()[slot]].size()) {
            throw Error(errc::bad_value, "value index out of range at point '" +
                                             site_->point(open.indices()[slot]).name + "'");
        }
    }
    return Section(shared_from_this(), open, std::move(values));
}

std::uint64_t Presheaf::section_count(const OpenSet& open) const {
    if (open.site().get() != site_.get()) {
        throw Error(errc::mixed_site, "open set belongs to a different site");
    }
    std::uint64_t count = 1;
    for (std::uint32_t pt : open.indices()) count = mul_sat(count, values_[pt].size());
    return count;
}

std::vector<Section> Presheaf::enumerate_sections(const OpenSet& open, std::uint64_t cap) const {
    std::uint64_t count = section_count(open);
    if (count > cap) {
        throw CapExceededError("enumeration of " + std::to_string(count) +
                                   " sections exceeds cap " + std::to_string(cap),
                               count);
    }
    std::vector<Section> out;
    out.reserve(static_cast<std::size_t>(count));
    SectionOdometer odometer(*this, open);
    std::vector<std::uint32_t> values;
    while (odometer.next(values)) {
        out.push_back(Section(shared_from_this(), open, values));
    }
    return out;
}

SectionOdometer::SectionOdometer(const Presheaf& presheaf, const OpenSet& open) {
    radixes_.reserve(open.size());
    for (std::uint32_t pt : open.indices()) {
        radixes_.push_back(static_cast<std::uint32_t>(presheaf.domain_size(pt)));
    }
    current_.assign(radixes_.size(), 0);
}

bool SectionOdometer::next(std::vector<std::uint32_t>& values) {
    if (done_) return false;
    if (!started_) {
        started_ = true;
        values = current_;
        return true;
    }
    // Mixed-radix increment from the rightmost (fastest) slot.
    std::size_t slot = current_.size();
    while (slot > 0) {
        --slot;
        if (++current_[slot] < radixes_[slot]) {
            values = current_;
            return true;
        }
        current_[slot] = 0;
    }
    done_ = true;
    return false;
}

Section restrict(const Section& s, const OpenSet& sub) {
    if (sub.site().get() != s.domain().site().get()) {
        throw Error(errc::mixed_site, "open set belongs to a different site");
    }
    if (!is_subset(sub, s.domain())) {
        std::ostringstream msg;
        msg << "restriction target is not a subset of the section domain; offending points:";
        for (std::uint32_t pt : sub.indices()) {
            if (!s.domain().contains(pt)) msg << " '" << sub.site()->point(pt).name << "'";
        }
        throw Error(errc::not_a_subset, msg.str());
    }
    const auto& from = s.domain().indices();
    std::vector<std::uint32_t> values;
    values.reserve(sub.size());
    std::size_t cursor = 0;
    for (std::uint32_t pt : sub.indices()) {
        while (from[cursor] != pt) ++cursor;
        values.push_back(s.values()[cursor]);
    }
    return s.presheaf()->section_from_indices(sub, std::move(values));
}

namespace {

OpenSet open_from_mask(const Site& site, std::uint64_t mask) {
    std::vector<std::uint32_t> indices;
    for (std::uint32_t i = 0; i < site.point_count(); ++i) {
        if (mask & (1ULL << i)) indices.push_back(i);
    }
    return site.open_of_indices(std::move(indices));
}

// One composition-law evaluation plus bookkeeping.
void check_chain(const Section& s, const Section& restricted_v, const OpenSet& u,
                 const OpenSet& v, LawReport& report) {
    ++report.checks;
    Section via = restrict(restricted_v, u);
    Section direct = restrict(s, u);
    if (via != direct) {
        report.holds = false;
        if (report.counterexamples.size() < 8) {
            report.counterexamples.push_back({"composition", u.to_string(), v.to_string(),
                                              s.domain().to_string(), s.to_string()});
        }
    }
}

}  // namespace

LawReport check_functor_laws(const std::shared_ptr<const Presheaf>& presheaf,
                             std::size_t point_cap, std::uint64_t work_budget,
                             std::uint64_t seed) {
    const Site& site = *presheaf->site();
    std::size_t n = site.point_count();
    if (n > point_cap) {
        throw CapExceededError("site has " + std::to_string(n) +
                                   " points; the discrete topology would have 2^" +
                                   std::to_string(n) + " opens (cap " +
                                   std::to_string(point_cap) + ")",
                               n);
    }

    LawReport report;

    // Work estimate for the exhaustive sweep: for every open W, every section
    // over W and every chain U <= V <= W one law evaluation; 3^|W| chains per
    // section plus one identity check.
    std::uint64_t estimate = 0;
    std::uint64_t full = 1ULL << n;
    std::vector<OpenSet> opens;
    opens.reserve(static_cast<std::size_t>(full));
    for (std::uint64_t mask = 0; mask < full; ++mask) {
        opens.push_back(open_from_mask(site, mask));
        std::uint64_t chains = 1;
        for (std::size_t k = 0; k < opens.back().size(); ++k) chains = mul_sat(chains, 3);
        std::uint64_t cost = mul_sat(presheaf->section_count(opens.back()), chains + 1);
        estimate = estimate > UINT64_MAX - cost ? UINT64_MAX : estimate + cost;
    }

    if (estimate <= work_budget) {
        for (std::uint64_t w_mask = 0; w_mask < full; ++w_mask) {
            const OpenSet& w = opens[static_cast<std::size_t>(w_mask)];
            SectionOdometer odometer(*presheaf, w);
            std::vector<std::uint32_t> values;
            while (odometer.next(values)) {
                Section s = presheaf->section_from_indices(w, values);
                ++report.checks;
                if (restrict(s, w) != s) {
                    report.holds = false;
                    if (report.counterexamples.size() < 8) {
                        report.counterexamples.push_back(
                            {"identity", w.to_string(), w.to_string(), w.to_string(),
                             s.to_string()});
                    }
                }
                for (std::uint64_t v_mask = w_mask;; v_mask = (v_mask - 1) & w_mask) {
                    const OpenSet& v = opens[static_cast<std::size_t>(v_mask)];
                    Section rv = restrict(s, v);
                    for (std::uint64_t u_mask = v_mask;; u_mask = (u_mask - 1) & v_mask) {
                        ++report.triples;
                        check_chain(s, rv, opens[static_cast<std::size_t>(u_mask)], v, report);
                        if (u_mask == 0) break;
                    }
                    if (v_mask == 0) break;
                }
            }
        }
        report.exhaustive = true;
    } else {
        report.exhaustive = false;
        std::mt19937_64 rng(seed ^ 0x5eaf5eaf5eaf5eafULL);
        auto pick_submask = [&](std::uint64_t of) {
            return rng() & of;  // uniform over submask bits
        };
        while (report.checks < work_budget) {
            std::uint64_t w_mask = rng() & (full - 1);
            const OpenSet& w = opens[static_cast<std::size_t>(w_mask)];
            std::vector<std::uint32_t> values;
            values.reserve(w.size());
            for (std::uint32_t pt : w.indices()) {
                values.push_back(static_cast<std::uint32_t>(
                    rng() % presheaf->domain_size(pt)));
            }
            Section s = presheaf->section_from_indices(w, values);
            ++report.checks;
            if (restrict(s, w) != s) {
                report.holds = false;
                report.counterexamples.push_back(
                    {"identity", w.to_string(), w.to_string(), w.to_string(), s.to_string()});
            }
            std::uint64_t v_mask = pick_submask(w_mask);
            std::uint64_t u_mask = pick_submask(v_mask);
            const OpenSet& v = opens[static_cast<std::size_t>(v_mask)];
            Section rv = restrict(s, v);
            ++report.triples;
            check_chain(s, rv, opens[static_cast<std::size_t>(u_mask)], v, report);
        }
    }
    return report;
}

}  // namespace archsheaf

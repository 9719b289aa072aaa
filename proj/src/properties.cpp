#include "archsheaf/properties.hpp"

#include <algorithm>

namespace archsheaf {

PropertyMap PropertyMap::create(std::shared_ptr<const Presheaf> base, std::string name,
                                const std::map<std::string, LabelMap>& per_point,
                                std::vector<ParameterDomain> derived_domains) {
    PropertyMap map;
    map.name_ = std::move(name);
    map.base_ = std::move(base);
    const Site& site = *map.base_->site();

    for (const auto& [point, _] : per_point) {
        if (!site.point_index(point)) {
            throw Error(errc::unknown_point,
                        "property '" + map.name_ + "' maps unknown point '" + point + "'");
        }
    }
    for (const ParameterDomain& d : derived_domains) {
        if (!site.point_index(d.point)) {
            throw Error(errc::unknown_point, "property '" + map.name_ +
                                                 "' declares a derived domain for unknown point '" +
                                                 d.point + "'");
        }
    }

    map.derived_ = Presheaf::create(map.base_->site(), std::move(derived_domains));

    map.tables_.resize(site.point_count());
    for (std::size_t pt = 0; pt < site.point_count(); ++pt) {
        const std::string& point_name = site.point(pt).name;
        auto entry = per_point.find(point_name);
        if (entry == per_point.end()) {
            throw Error(errc::missing_point_map,
                        "property '" + map.name_ + "' has no map for point '" + point_name + "'");
        }
        const LabelMap& labels = entry->second;
        const auto& source_values = map.base_->domain_values(pt);
        auto& table = map.tables_[pt];
        table.resize(source_values.size());
        for (std::size_t v = 0; v < source_values.size(); ++v) {
            auto hit = labels.find(source_values[v]);
            if (hit == labels.end()) {
                throw Error(errc::missing_point_map,
                            "property '" + map.name_ + "' at point '" + point_name +
                                "' has no image for source value '" + source_values[v] + "'");
            }
            auto image = map.derived_->value_index(pt, hit->second);
            if (!image) {
                throw Error(errc::bad_image, "property '" + map.name_ + "' at point '" +
                                                 point_name + "' maps '" + source_values[v] +
                                                 "' to '" + hit->second +
                                                 "', which is not in the derived domain");
            }
            table[v] = *image;
        }
        for (const auto& [source, _] : labels) {
            if (!map.base_->value_index(pt, source)) {
                throw Error(errc::bad_value, "property '" + map.name_ + "' at point '" +
                                                 point_name + "' maps unknown source value '" +
                                                 source + "'");
            }
        }
        map.per_point_.emplace_back(point_name, labels);
    }
    return map;
}

PropertyMap identity_property(const std::shared_ptr<const Presheaf>& base, std::string name) {
    std::map<std::string, PropertyMap::LabelMap> per_point;
    std::vector<ParameterDomain> domains;
    const Site& site = *base->site();
    for (std::size_t pt = 0; pt < site.point_count(); ++pt) {
        const std::string& point_name = site.point(pt).name;
        PropertyMap::LabelMap labels;
        for (const std::string& v : base->domain_values(pt)) labels[v] = v;
        per_point[point_name] = std::move(labels);
        domains.push_back({point_name, base->domain_values(pt)});
    }
    return PropertyMap::create(base, std::move(name), per_point, std::move(domains));
}

Section apply_property(const PropertyMap& map, const Section& s) {
    if (s.presheaf().get() != map.base().get()) {
        throw Error(errc::mixed_presheaf, "section does not belong to the property's base presheaf");
    }
    const auto& slots = s.domain().indices();
    std::vector<std::uint32_t> values;
    values.reserve(slots.size());
    for (std::size_t slot = 0; slot < slots.size(); ++slot) {
        values.push_back(map.map_value(slots[slot], s.values()[slot]));
    }
    return map.derived()->section_from_indices(s.domain(), std::move(values));
}

LocalFamily apply_property(const PropertyMap& map, const LocalFamily& family) {
    std::vector<FamilyMember> members;
    members.reserve(family.size());
    for (const FamilyMember& m : family.members()) {
        members.push_back({m.label, apply_property(map, m.section)});
    }
    return LocalFamily::create(map.derived(), std::move(members));
}

bool derived_glue_commutes(const PropertyMap& map, const LocalFamily& family) {
    GluingResult base_gluing = glue(family);  // throws if incompatible

    LocalFamily mapped = apply_property(map, family);
    ConflictReport mapped_report = check_pairwise(mapped);
    if (!mapped_report.empty()) {
        // Naturality: a pointwise image of a compatible family is compatible.
        throw std::logic_error("pointwise image of a compatible family is incompatible");
    }

    Section mapped_then_glued = glue(mapped).glued;
    Section glued_then_mapped = apply_property(map, base_gluing.glued);
    return mapped_then_glued == glued_then_mapped;
}

}  // namespace archsheaf

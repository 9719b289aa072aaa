#ifndef ARCHSHEAF_PROPERTIES_HPP
#define ARCHSHEAF_PROPERTIES_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "archsheaf/consistency.hpp"
#include "archsheaf/presheaf.hpp"

namespace archsheaf {

// A pointwise (fiberwise) value map: for every interface point, a total map
// from the base parameter domain into a declared derived domain.  Pointwise
// maps act componentwise on sections, so gluing commutes with them.
class PropertyMap {
public:
    using LabelMap = std::map<std::string, std::string>;

    // Validates totality (E-MISSING-POINT-MAP), source membership
    // (E-BAD-VALUE) and image membership (E-BAD-IMAGE), then materializes the
    // derived presheaf over the same site.
    static PropertyMap create(std::shared_ptr<const Presheaf> base, std::string name,
                              const std::map<std::string, LabelMap>& per_point,
                              std::vector<ParameterDomain> derived_domains);

    const std::string& name() const { return name_; }
    const std::shared_ptr<const Presheaf>& base() const { return base_; }
    const std::shared_ptr<const Presheaf>& derived() const { return derived_; }

    std::uint32_t map_value(std::size_t point_index, std::uint32_t source_value) const {
        return tables_.at(point_index).at(source_value);
    }

    // Original label-level tables, in canonical point order (for serialization).
    const std::vector<std::pair<std::string, LabelMap>>& per_point() const { return per_point_; }

private:
    PropertyMap() = default;

    std::string name_;
    std::shared_ptr<const Presheaf> base_;
    std::shared_ptr<const Presheaf> derived_;
    std::vector<std::vector<std::uint32_t>> tables_;  // [point][source value] -> derived value
    std::vector<std::pair<std::string, LabelMap>> per_point_;
};

// Identity map on every point; derived domains equal the base domains.
PropertyMap identity_property(const std::shared_ptr<const Presheaf>& base,
                              std::string name = "identity");

// Componentwise image of a section: a section of the derived presheaf over
// the same open.
Section apply_property(const PropertyMap& map, const Section& s);

// Image of a whole family (labels preserved), as a family over the derived
// presheaf.
LocalFamily apply_property(const PropertyMap& map, const LocalFamily& family);

// True iff mapping the gluing equals gluing the mapped family.  The family
// must be compatible; the mapped family is asserted compatible (naturality).
bool derived_glue_commutes(const PropertyMap& map, const LocalFamily& family);

}  // namespace archsheaf

#endif

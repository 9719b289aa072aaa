#include "archsheaf/topology.hpp"

#include <algorithm>
#include <sstream>

namespace archsheaf {

namespace {

void require_same_site(const OpenSet& a, const OpenSet& b) {
    if (a.site().get() != b.site().get()) {
        throw Error(errc::mixed_site, "open sets belong to different sites");
    }
}

}  // namespace

std::shared_ptr<const Site> Site::create(SiteSpec spec) {
    auto site = std::shared_ptr<Site>(new Site());
    site->spec_ = std::move(spec);

    for (std::size_t i = 0; i < site->spec_.views.size(); ++i) {
        const std::string& name = site->spec_.views[i].name;
        if (name.empty()) {
            throw Error(errc::bad_name, "view name must be non-empty");
        }
        if (!site->view_lookup_.emplace(name, i).second) {
            throw Error(errc::duplicate_name, "duplicate view name '" + name + "'");
        }
    }
    for (std::size_t i = 0; i < site->spec_.points.size(); ++i) {
        const InterfacePoint& p = site->spec_.points[i];
        if (p.name.empty()) {
            throw Error(errc::bad_name, "interface point name must be non-empty");
        }
        if (!site->point_lookup_.emplace(p.name, i).second) {
            throw Error(errc::duplicate_name, "duplicate interface point name '" + p.name + "'");
        }
        if (p.end_a == p.end_b) {
            throw Error(errc::self_interface,
                        "interface '" + p.name + "' couples view '" + p.end_a + "' with itself");
        }
        for (const std::string& end : {p.end_a, p.end_b}) {
            if (!site->view_lookup_.count(end)) {
                throw Error(errc::unknown_view,
                            "interface '" + p.name + "' references undeclared view '" + end + "'");
            }
        }
    }

    // Every point must lie in exactly two named view-opens; with distinct,
    // declared endpoints this is automatic, but the invariant is asserted
    // against the view_open definition rather than trusted.
    for (const InterfacePoint& p : site->spec_.points) {
        std::size_t covering = 0;
        for (const ViewDecl& v : site->spec_.views) {
            if (p.touches(v.name)) ++covering;
        }
        if (covering != 2) {
            throw std::logic_error("point '" + p.name + "' is covered by " +
                                   std::to_string(covering) + " view-opens, expected 2");
        }
    }
    return site;
}

std::optional<std::size_t> Site::view_index(std::string_view name) const {
    auto it = view_lookup_.find(std::string(name));
    if (it == view_lookup_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> Site::point_index(std::string_view name) const {
    auto it = point_lookup_.find(std::string(name));
    if (it == point_lookup_.end()) return std::nullopt;
    return it->second;
}

OpenSet Site::view_open(std::string_view view) const {
    if (!view_index(view)) {
        throw Error(errc::unknown_view, "unknown view '" + std::string(view) + "'");
    }
    std::vector<std::uint32_t> indices;
    for (std::size_t i = 0; i < spec_.points.size(); ++i) {
        if (spec_.points[i].touches(view)) {
            indices.push_back(static_cast<std::uint32_t>(i));
        }
    }
    return OpenSet(shared_from_this(), std::move(indices));
}

OpenSet Site::empty_open() const { return OpenSet(shared_from_this(), {}); }

OpenSet Site::whole_open() const {
    std::vector<std::uint32_t> indices(point_count());
    for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = static_cast<std::uint32_t>(i);
    return OpenSet(shared_from_this(), std::move(indices));
}

OpenSet Site::open_of(std::span<const std::string> point_names) const {
    std::vector<std::uint32_t> indices;
    indices.reserve(point_names.size());
    for (const std::string& name : point_names) {
        auto idx = point_index(name);
        if (!idx) {
            throw Error(errc::unknown_point, "unknown interface point '" + name + "'");
        }
        indices.push_back(static_cast<std::uint32_t>(*idx));
    }
    return open_of_indices(std::move(indices));
}

OpenSet Site::open_of_indices(std::vector<std::uint32_t> indices) const {
    for (std::uint32_t i : indices) {
        if (i >= point_count()) {
            throw Error(errc::unknown_point, "point index " + std::to_string(i) + " out of range");
        }
    }
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    return OpenSet(shared_from_this(), std::move(indices));
}

bool OpenSet::contains(std::uint32_t point_index) const {
    return std::binary_search(indices_.begin(), indices_.end(), point_index);
}

bool OpenSet::contains_name(std::string_view point_name) const {
    if (!site_) return false;
    auto idx = site_->point_index(point_name);
    return idx && contains(static_cast<std::uint32_t>(*idx));
}

std::vector<std::string> OpenSet::point_names() const {
    std::vector<std::string> names;
    names.reserve(indices_.size());
    for (std::uint32_t i : indices_) names.push_back(site_->point(i).name);
    return names;
}

std::string OpenSet::to_string() const {
    std::ostringstream out;
    out << '{';
    for (std::size_t k = 0; k < indices_.size(); ++k) {
        if (k) out << ", ";
        out << site_->point(indices_[k]).name;
    }
    out << '}';
    return out.str();
}

OpenSet intersect(const OpenSet& a, const OpenSet& b) {
    require_same_site(a, b);
    std::vector<std::uint32_t> indices;
    std::set_intersection(a.indices().begin(), a.indices().end(),
                          b.indices().begin(), b.indices().end(),
                          std::back_inserter(indices));
    return a.site()->open_of_indices(std::move(indices));
}

OpenSet union_all(const std::shared_ptr<const Site>& site, std::span<const OpenSet> family) {
    std::vector<std::uint32_t> indices;
    for (const OpenSet& u : family) {
        if (u.site().get() != site.get()) {
            throw Error(errc::mixed_site, "open set belongs to a different site");
        }
        indices.insert(indices.end(), u.indices().begin(), u.indices().end());
    }
    return site->open_of_indices(std::move(indices));
}

bool is_subset(const OpenSet& a, const OpenSet& b) {
    require_same_site(a, b);
    return std::includes(b.indices().begin(), b.indices().end(),
                         a.indices().begin(), a.indices().end());
}

bool is_cover(std::span<const OpenSet> family, const OpenSet& target) {
    for (const OpenSet& u : family) {
        if (!is_subset(u, target)) return false;
    }
    return union_all(target.site(), family) == target;
}

}  // namespace archsheaf

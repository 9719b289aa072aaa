#ifndef ARCHSHEAF_TOPOLOGY_HPP
#define ARCHSHEAF_TOPOLOGY_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "archsheaf/error.hpp"

namespace archsheaf {

// A named binary coupling between two views; a point of the site.
struct InterfacePoint {
    std::string name;
    std::string end_a;
    std::string end_b;

    bool touches(std::string_view view) const { return end_a == view || end_b == view; }
};

struct ViewDecl {
    std::string name;
};

// Unvalidated site description, as read from a file or assembled by hand.
struct SiteSpec {
    std::vector<ViewDecl> views;
    std::vector<InterfacePoint> points;
};

class OpenSet;

// A validated finite site carrying the discrete topology: every subset of
// points is open.  Declaration order of points and views is the canonical
// order used for all deterministic output.
class Site : public std::enable_shared_from_this<Site> {
public:
    // Validates the site description; throws Error (E-BAD-NAME, E-DUP-NAME,
    // E-SELF-INTERFACE, E-UNKNOWN-VIEW) on the first violation.
    static std::shared_ptr<const Site> create(SiteSpec spec);

    std::size_t view_count() const { return spec_.views.size(); }
    std::size_t point_count() const { return spec_.points.size(); }
    const std::vector<ViewDecl>& views() const { return spec_.views; }
    const std::vector<InterfacePoint>& points() const { return spec_.points; }
    const InterfacePoint& point(std::size_t index) const { return spec_.points.at(index); }

    std::optional<std::size_t> view_index(std::string_view name) const;
    std::optional<std::size_t> point_index(std::string_view name) const;

    // U_k: the points whose endpoints include the view.  Throws E-UNKNOWN-VIEW.
    OpenSet view_open(std::string_view view) const;

    OpenSet empty_open() const;
    OpenSet whole_open() const;
    OpenSet open_of(std::span<const std::string> point_names) const;
    OpenSet open_of_indices(std::vector<std::uint32_t> indices) const;

private:
    Site() = default;

    SiteSpec spec_;
    std::unordered_map<std::string, std::size_t> view_lookup_;
    std::unordered_map<std::string, std::size_t> point_lookup_;
};

// A subset of a site's points.  Member indices are sorted ascending, i.e. in
// canonical declaration order.
class OpenSet {
public:
    OpenSet() = default;

    const std::shared_ptr<const Site>& site() const { return site_; }
    const std::vector<std::uint32_t>& indices() const { return indices_; }
    std::size_t size() const { return indices_.size(); }
    bool empty() const { return indices_.empty(); }

    bool contains(std::uint32_t point_index) const;
    bool contains_name(std::string_view point_name) const;

    std::vector<std::string> point_names() const;
    std::string to_string() const;  // e.g. "{EM, ET}"

    friend bool operator==(const OpenSet& a, const OpenSet& b) {
        return a.site_.get() == b.site_.get() && a.indices_ == b.indices_;
    }
    friend bool operator!=(const OpenSet& a, const OpenSet& b) { return !(a == b); }

private:
    friend class Site;
    OpenSet(std::shared_ptr<const Site> site, std::vector<std::uint32_t> indices)
        : site_(std::move(site)), indices_(std::move(indices)) {}

    std::shared_ptr<const Site> site_;
    std::vector<std::uint32_t> indices_;
};

// A family of opens together with the open it covers: every member is
// contained in the target and the union of the members equals it.
class Cover {
public:
    // Throws E-BAD-ARGUMENT when the family does not cover the target.
    static Cover create(std::vector<OpenSet> family, OpenSet target);

    const OpenSet& target() const { return target_; }
    const std::vector<OpenSet>& family() const { return family_; }
    std::size_t size() const { return family_.size(); }

private:
    Cover(std::vector<OpenSet> family, OpenSet target)
        : family_(std::move(family)), target_(std::move(target)) {}

    std::vector<OpenSet> family_;
    OpenSet target_;
};

// Set intersection of members.  Both opens must come from the same site.
OpenSet intersect(const OpenSet& a, const OpenSet& b);

// Set union of all members; the empty family yields the empty open of `site`.
OpenSet union_all(const std::shared_ptr<const Site>& site, std::span<const OpenSet> family);

bool is_subset(const OpenSet& a, const OpenSet& b);

// True iff the family's union equals `target` and no member escapes it.
bool is_cover(std::span<const OpenSet> family, const OpenSet& target);

}  // namespace archsheaf

#endif

#include "archsheaf/ingest.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace archsheaf {

namespace {

using json = nlohmann::ordered_json;

void add(std::vector<Diagnostic>& diags, Diagnostic::Severity severity, std::string code,
         std::string message, std::string location) {
    diags.push_back({severity, std::move(code), std::move(message), std::move(location)});
}

void error(std::vector<Diagnostic>& diags, std::string code, std::string message,
           std::string location) {
    add(diags, Diagnostic::Severity::error, std::move(code), std::move(message),
        std::move(location));
}

void warning(std::vector<Diagnostic>& diags, std::string code, std::string message,
             std::string location) {
    add(diags, Diagnostic::Severity::warning, std::move(code), std::move(message),
        std::move(location));
}

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t offset) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

// Value labels may be written as strings or as bare integers (the Fin-style
// shorthand); integers are read as their decimal spelling.
bool read_label(const json& j, std::string& out) {
    if (j.is_string()) {
        out = j.get<std::string>();
        return true;
    }
    if (j.is_number_integer()) {
        out = std::to_string(j.get<long long>());
        return true;
    }
    return false;
}

const json* field(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

void warn_unknown_fields(const json& obj, std::initializer_list<const char*> known,
                         const std::string& location, std::vector<Diagnostic>& diags) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : known) {
            if (it.key() == k) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            warning(diags, errc::unknown_field, "unknown field '" + it.key() + "'",
                    location + "/" + it.key());
        }
    }
}

bool parse_domain_value(const json& j, const std::string& location, DomainDecl& decl,
                        std::vector<Diagnostic>& diags) {
    if (j.is_number_integer()) {
        long long n = j.get<long long>();
        if (n < 0) {
            error(diags, errc::bad_value, "domain cardinality must be non-negative", location);
            return false;
        }
        decl.values = ParameterDomain::fin("", static_cast<std::size_t>(n)).values;
        decl.fin_form = true;
        return true;
    }
    if (j.is_array()) {
        for (std::size_t k = 0; k < j.size(); ++k) {
            std::string label;
            if (!read_label(j[k], label)) {
                error(diags, errc::bad_type, "domain value must be a string or integer",
                      location + "/" + std::to_string(k));
                return false;
            }
            decl.values.push_back(std::move(label));
        }
        decl.fin_form = false;
        return true;
    }
    error(diags, errc::bad_type, "domain must be a cardinality or a list of value labels",
          location);
    return false;
}

bool parse_assign_object(const json& j, const std::string& location,
                         std::vector<std::pair<std::string, std::string>>& out,
                         std::vector<Diagnostic>& diags) {
    if (!j.is_object()) {
        error(diags, errc::bad_type, "expected an object of point -> value entries", location);
        return false;
    }
    bool ok = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
        std::string label;
        if (!read_label(it.value(), label)) {
            error(diags, errc::bad_type, "value must be a string or integer",
                  location + "/" + it.key());
            ok = false;
            continue;
        }
        out.emplace_back(it.key(), std::move(label));
    }
    return ok;
}

}  // namespace

std::string to_string(const Diagnostic& d) {
    std::ostringstream out;
    out << (d.severity == Diagnostic::Severity::error ? "error" : "warning") << " " << d.code;
    if (!d.location.empty()) out << " at " << d.location;
    out << ": " << d.message;
    return out.str();
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
    return std::any_of(diagnostics.begin(), diagnostics.end(), [](const Diagnostic& d) {
        return d.severity == Diagnostic::Severity::error;
    });
}

ParseResult parse_text(std::string_view text) {
    ParseResult result;
    auto& diags = result.diagnostics;

    if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
        error(diags, errc::empty_document, "empty document", "");
        return result;
    }

    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
        error(diags, errc::syntax, e.what(),
              "line " + std::to_string(line) + ", column " + std::to_string(col));
        return result;
    }

    if (!root.is_object()) {
        error(diags, errc::bad_type, "top-level value must be an object", "");
        return result;
    }

    ArchitectureDoc doc;
    warn_unknown_fields(root, {"version", "views", "interfaces", "domains", "designs",
                               "properties"},
                        "", diags);

    if (const json* v = field(root, "version"); !v) {
        error(diags, errc::version_mismatch,
              std::string("missing format version; expected \"") + kFormatVersion + "\"",
              "/version");
    } else if (!v->is_string()) {
        error(diags, errc::version_mismatch, "format version must be a string", "/version");
    } else if (v->get<std::string>() != kFormatVersion) {
        error(diags, errc::version_mismatch,
              "unsupported format version '" + v->get<std::string>() + "'; expected \"" +
                  kFormatVersion + "\"",
              "/version");
    } else {
        doc.version = v->get<std::string>();
    }

    if (const json* views = field(root, "views"); !views) {
        error(diags, errc::missing_field, "missing required field 'views'", "/views");
    } else if (!views->is_array()) {
        error(diags, errc::bad_type, "'views' must be an array of view names", "/views");
    } else {
        for (std::size_t i = 0; i < views->size(); ++i) {
            if (!(*views)[i].is_string()) {
                error(diags, errc::bad_type, "view name must be a string",
                      "/views/" + std::to_string(i));
                continue;
            }
            doc.views.push_back((*views)[i].get<std::string>());
        }
    }

    if (const json* ifaces = field(root, "interfaces"); !ifaces) {
        error(diags, errc::missing_field, "missing required field 'interfaces'", "/interfaces");
    } else if (!ifaces->is_array()) {
        error(diags, errc::bad_type, "'interfaces' must be an array", "/interfaces");
    } else {
        for (std::size_t i = 0; i < ifaces->size(); ++i) {
            const json& entry = (*ifaces)[i];
            std::string loc = "/interfaces/" + std::to_string(i);
            if (!entry.is_object()) {
                error(diags, errc::bad_type, "interface entry must be an object", loc);
                continue;
            }
            warn_unknown_fields(entry, {"name", "endpoints"}, loc, diags);
            InterfaceDecl decl;
            if (const json* name = field(entry, "name"); name && name->is_string()) {
                decl.name = name->get<std::string>();
            } else {
                error(diags, errc::missing_field, "interface entry needs a string 'name'",
                      loc + "/name");
                continue;
            }
            const json* ends = field(entry, "endpoints");
            if (!ends || !ends->is_array() || ends->size() != 2 || !(*ends)[0].is_string() ||
                !(*ends)[1].is_string()) {
                error(diags, errc::bad_type,
                      "'endpoints' must be an array of exactly two view names",
                      loc + "/endpoints");
                continue;
            }
            decl.end_a = (*ends)[0].get<std::string>();
            decl.end_b = (*ends)[1].get<std::string>();
            doc.interfaces.push_back(std::move(decl));
        }
    }

    if (const json* domains = field(root, "domains"); !domains) {
        error(diags, errc::missing_field, "missing required field 'domains'", "/domains");
    } else if (!domains->is_object()) {
        error(diags, errc::bad_type, "'domains' must be an object of point -> domain entries",
              "/domains");
    } else {
        for (auto it = domains->begin(); it != domains->end(); ++it) {
            DomainDecl decl;
            decl.point = it.key();
            if (parse_domain_value(it.value(), "/domains/" + it.key(), decl, diags)) {
                doc.domains.push_back(std::move(decl));
            }
        }
    }

    if (const json* designs = field(root, "designs")) {
        if (!designs->is_object()) {
            error(diags, errc::bad_type, "'designs' must be an object of label -> design entries",
                  "/designs");
        } else {
            for (auto it = designs->begin(); it != designs->end(); ++it) {
                std::string loc = "/designs/" + it.key();
                const json& entry = it.value();
                if (!entry.is_object()) {
                    error(diags, errc::bad_type, "design entry must be an object", loc);
                    continue;
                }
                warn_unknown_fields(entry, {"view", "assign"}, loc, diags);
                DesignDecl decl;
                decl.label = it.key();
                if (const json* view = field(entry, "view"); view && view->is_string()) {
                    decl.view = view->get<std::string>();
                } else {
                    error(diags, errc::missing_field, "design entry needs a string 'view'",
                          loc + "/view");
                    continue;
                }
                const json* assign = field(entry, "assign");
                if (!assign) {
                    error(diags, errc::missing_field, "design entry needs an 'assign' object",
                          loc + "/assign");
                    continue;
                }
                if (!parse_assign_object(*assign, loc + "/assign", decl.assign, diags)) continue;
                doc.designs.push_back(std::move(decl));
            }
        }
    }

    if (const json* props = field(root, "properties")) {
        if (!props->is_object()) {
            error(diags, errc::bad_type,
                  "'properties' must be an object of name -> property entries", "/properties");
        } else {
            for (auto it = props->begin(); it != props->end(); ++it) {
                std::string loc = "/properties/" + it.key();
                const json& entry = it.value();
                if (!entry.is_object()) {
                    error(diags, errc::bad_type, "property entry must be an object", loc);
                    continue;
                }
                warn_unknown_fields(entry, {"per_point", "derived_domains"}, loc, diags);
                PropertyDecl decl;
                decl.name = it.key();
                const json* per_point = field(entry, "per_point");
                if (!per_point || !per_point->is_object()) {
                    error(diags, errc::missing_field,
                          "property entry needs a 'per_point' object", loc + "/per_point");
                    continue;
                }
                bool entry_ok = true;
                for (auto pt = per_point->begin(); pt != per_point->end(); ++pt) {
                    std::vector<std::pair<std::string, std::string>> table;
                    if (!parse_assign_object(pt.value(), loc + "/per_point/" + pt.key(), table,
                                             diags)) {
                        entry_ok = false;
                        continue;
                    }
                    decl.per_point.emplace_back(pt.key(), std::move(table));
                }
                const json* derived = field(entry, "derived_domains");
                if (!derived || !derived->is_object()) {
                    error(diags, errc::missing_field,
                          "property entry needs a 'derived_domains' object",
                          loc + "/derived_domains");
                    continue;
                }
                for (auto dd = derived->begin(); dd != derived->end(); ++dd) {
                    DomainDecl domain;
                    domain.point = dd.key();
                    if (!parse_domain_value(dd.value(), loc + "/derived_domains/" + dd.key(),
                                            domain, diags)) {
                        entry_ok = false;
                        continue;
                    }
                    decl.derived_domains.push_back(std::move(domain));
                }
                if (entry_ok) doc.properties.push_back(std::move(decl));
            }
        }
    }

    if (!has_errors(diags)) result.doc = std::move(doc);
    return result;
}

namespace {

// Reorders a design assignment (or per-point table) into canonical point order.
template <typename T>
std::vector<std::pair<std::string, T>> in_point_order(
    const Site& site, const std::vector<std::pair<std::string, T>>& entries) {
    std::vector<std::pair<std::string, T>> out = entries;
    std::stable_sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
        return site.point_index(a.first).value_or(SIZE_MAX) <
               site.point_index(b.first).value_or(SIZE_MAX);
    });
    return out;
}

}  // namespace

const PropertyMap* Model::find_property(std::string_view name) const {
    for (const PropertyMap& p : properties) {
        if (p.name() == name) return &p;
    }
    return nullptr;
}

ValidateResult validate_doc(const ArchitectureDoc& doc) {
    ValidateResult result;
    auto& diags = result.diagnostics;

    // Views: non-empty, unique.
    std::set<std::string> view_names;
    for (std::size_t i = 0; i < doc.views.size(); ++i) {
        if (doc.views[i].empty()) {
            error(diags, errc::bad_name, "view name must be non-empty",
                  "/views/" + std::to_string(i));
        } else if (!view_names.insert(doc.views[i]).second) {
            error(diags, errc::duplicate_name, "duplicate view name '" + doc.views[i] + "'",
                  "/views/" + std::to_string(i));
        }
    }

    // Interfaces: non-empty unique names, distinct declared endpoints.
    std::set<std::string> point_names;
    for (std::size_t i = 0; i < doc.interfaces.size(); ++i) {
        const InterfaceDecl& decl = doc.interfaces[i];
        std::string loc = "/interfaces/" + std::to_string(i);
        if (decl.name.empty()) {
            error(diags, errc::bad_name, "interface name must be non-empty", loc + "/name");
        } else if (!point_names.insert(decl.name).second) {
            error(diags, errc::duplicate_name, "duplicate interface name '" + decl.name + "'",
                  loc + "/name");
        }
        if (decl.end_a == decl.end_b) {
            error(diags, errc::self_interface,
                  "interface '" + decl.name + "' couples view '" + decl.end_a + "' with itself",
                  loc + "/endpoints");
        }
        for (const std::string& end : {decl.end_a, decl.end_b}) {
            if (!view_names.count(end)) {
                error(diags, errc::unknown_view,
                      "interface '" + decl.name + "' references undeclared view '" + end + "'",
                      loc + "/endpoints");
            }
        }
    }

    // Domains: exactly one per declared interface.
    std::map<std::string, const DomainDecl*> domain_by_point;
    for (const DomainDecl& d : doc.domains) {
        if (!point_names.count(d.point)) {
            error(diags, errc::unknown_point,
                  "domain declared for undeclared interface '" + d.point + "'",
                  "/domains/" + d.point);
            continue;
        }
        if (!domain_by_point.emplace(d.point, &d).second) {
            error(diags, errc::duplicate_name,
                  "domain declared twice for interface '" + d.point + "'", "/domains/" + d.point);
            continue;
        }
        if (d.values.empty()) {
            error(diags, errc::bad_value, "domain of '" + d.point + "' must have at least 1 value",
                  "/domains/" + d.point);
        }
        std::set<std::string> labels;
        for (const std::string& v : d.values) {
            if (!labels.insert(v).second) {
                error(diags, errc::bad_value,
                      "duplicate value '" + v + "' in domain of '" + d.point + "'",
                      "/domains/" + d.point);
            }
        }
    }
    for (const InterfaceDecl& decl : doc.interfaces) {
        if (!decl.name.empty() && !domain_by_point.count(decl.name)) {
            error(diags, errc::no_domain, "no domain declared for interface '" + decl.name + "'",
                  "/domains");
        }
    }

    // Designs: declared view, assignment exactly over the view's open, values
    // in the point domains.
    for (const DesignDecl& design : doc.designs) {
        std::string loc = "/designs/" + design.label;
        if (design.label.empty()) {
            error(diags, errc::bad_name, "design label must be non-empty", loc);
        }
        if (!view_names.count(design.view)) {
            error(diags, errc::unknown_view,
                  "design '" + design.label + "' references undeclared view '" + design.view + "'",
                  loc + "/view");
            continue;
        }
        std::set<std::string> expected;
        for (const InterfaceDecl& decl : doc.interfaces) {
            if (decl.end_a == design.view || decl.end_b == design.view) expected.insert(decl.name);
        }
        std::set<std::string> assigned;
        for (const auto& [point, value] : design.assign) {
            if (!point_names.count(point)) {
                error(diags, errc::unknown_point,
                      "design '" + design.label + "' assigns undeclared interface '" + point + "'",
                      loc + "/assign/" + point);
                continue;
            }
            if (!expected.count(point)) {
                error(diags, errc::extra_point,
                      "design '" + design.label + "' assigns interface '" + point +
                          "' outside view '" + design.view + "'",
                      loc + "/assign/" + point);
                continue;
            }
            assigned.insert(point);
            auto domain = domain_by_point.find(point);
            if (domain != domain_by_point.end()) {
                const auto& values = domain->second->values;
                if (std::find(values.begin(), values.end(), value) == values.end()) {
                    error(diags, errc::bad_value,
                          "design '" + design.label + "' assigns value '" + value +
                              "' not in the domain of '" + point + "'",
                          loc + "/assign/" + point);
                }
            }
        }
        for (const std::string& point : expected) {
            if (!assigned.count(point)) {
                error(diags, errc::missing_point,
                      "design '" + design.label + "' omits interface '" + point + "' of view '" +
                          design.view + "'",
                      loc + "/assign");
            }
        }
    }

    // Properties: per-point tables total on every interface and its domain,
    // images inside the declared derived domains.
    for (const PropertyDecl& prop : doc.properties) {
        std::string loc = "/properties/" + prop.name;
        std::map<std::string, const DomainDecl*> derived_by_point;
        for (const DomainDecl& d : prop.derived_domains) {
            if (!point_names.count(d.point)) {
                error(diags, errc::unknown_point,
                      "property '" + prop.name + "' declares a derived domain for undeclared interface '" +
                          d.point + "'",
                      loc + "/derived_domains/" + d.point);
                continue;
            }
            derived_by_point.emplace(d.point, &d);
            if (d.values.empty()) {
                error(diags, errc::bad_value,
                      "derived domain of '" + d.point + "' must have at least 1 value",
                      loc + "/derived_domains/" + d.point);
            }
        }
        std::map<std::string, const std::vector<std::pair<std::string, std::string>>*> tables;
        for (const auto& [point, table] : prop.per_point) {
            if (!point_names.count(point)) {
                error(diags, errc::unknown_point,
                      "property '" + prop.name + "' maps undeclared interface '" + point + "'",
                      loc + "/per_point/" + point);
                continue;
            }
            tables.emplace(point, &table);
        }
        for (const InterfaceDecl& decl : doc.interfaces) {
            if (decl.name.empty()) continue;
            if (!derived_by_point.count(decl.name)) {
                error(diags, errc::no_domain,
                      "property '" + prop.name + "' declares no derived domain for interface '" +
                          decl.name + "'",
                      loc + "/derived_domains");
            }
            auto table = tables.find(decl.name);
            if (table == tables.end()) {
                error(diags, errc::missing_point,
                      "property '" + prop.name + "' has no per-point map for interface '" +
                          decl.name + "'",
                      loc + "/per_point");
                continue;
            }
            auto domain = domain_by_point.find(decl.name);
            if (domain == domain_by_point.end()) continue;
            std::map<std::string, std::string> mapped;
            for (const auto& [source, image] : *table->second) {
                const auto& values = domain->second->values;
                if (std::find(values.begin(), values.end(), source) == values.end()) {
                    error(diags, errc::bad_value,
                          "property '" + prop.name + "' maps unknown source value '" + source +
                              "' at interface '" + decl.name + "'",
                          loc + "/per_point/" + decl.name + "/" + source);
                    continue;
                }
                mapped.emplace(source, image);
                auto derived = derived_by_point.find(decl.name);
                if (derived != derived_by_point.end()) {
                    const auto& images = derived->second->values;
                    if (std::find(images.begin(), images.end(), image) == images.end()) {
                        error(diags, errc::bad_value,
                              "property '" + prop.name + "' maps '" + source + "' to '" + image +
                                  "', which is not in the derived domain of '" + decl.name + "'",
                              loc + "/per_point/" + decl.name + "/" + source);
                    }
                }
            }
            for (const std::string& source : domain->second->values) {
                if (!mapped.count(source)) {
                    error(diags, errc::bad_value,
                          "property '" + prop.name + "' has no image for source value '" + source +
                              "' at interface '" + decl.name + "'",
                          loc + "/per_point/" + decl.name);
                }
            }
        }
    }

    if (has_errors(diags)) return result;

    // Build the semantic model; the checks above established every invariant,
    // so construction failures indicate an engine defect.
    SiteSpec spec;
    for (const std::string& v : doc.views) spec.views.push_back({v});
    for (const InterfaceDecl& decl : doc.interfaces) {
        spec.points.push_back({decl.name, decl.end_a, decl.end_b});
    }
    std::shared_ptr<const Site> site = Site::create(std::move(spec));

    std::vector<ParameterDomain> domains;
    for (std::size_t pt = 0; pt < site->point_count(); ++pt) {
        const DomainDecl& decl = *domain_by_point.at(site->point(pt).name);
        domains.push_back({decl.point, decl.values});
    }
    std::shared_ptr<const Presheaf> presheaf = Presheaf::create(site, std::move(domains));

    std::vector<FamilyMember> members;
    for (const DesignDecl& design : doc.designs) {
        OpenSet open = site->view_open(design.view);
        members.push_back({design.label, presheaf->section(open, design.assign)});
    }
    LocalFamily designs = LocalFamily::create(presheaf, std::move(members));

    std::vector<PropertyMap> properties;
    for (const PropertyDecl& prop : doc.properties) {
        std::map<std::string, PropertyMap::LabelMap> per_point;
        for (const auto& [point, table] : prop.per_point) {
            PropertyMap::LabelMap labels;
            for (const auto& [source, image] : table) labels[source] = image;
            per_point[point] = std::move(labels);
        }
        std::vector<ParameterDomain> derived;
        for (std::size_t pt = 0; pt < site->point_count(); ++pt) {
            for (const DomainDecl& d : prop.derived_domains) {
                if (d.point == site->point(pt).name) {
                    derived.push_back({d.point, d.values});
                    break;
                }
            }
        }
        properties.push_back(PropertyMap::create(presheaf, prop.name, per_point, std::move(derived)));
    }

    // Normalized document: domains and assignments in canonical point order.
    ArchitectureDoc normalized;
    normalized.version = doc.version;
    normalized.views = doc.views;
    normalized.interfaces = doc.interfaces;
    for (std::size_t pt = 0; pt < site->point_count(); ++pt) {
        normalized.domains.push_back(*domain_by_point.at(site->point(pt).name));
    }
    for (const DesignDecl& design : doc.designs) {
        DesignDecl norm = design;
        norm.assign = in_point_order(*site, design.assign);
        normalized.designs.push_back(std::move(norm));
    }
    for (const PropertyDecl& prop : doc.properties) {
        PropertyDecl norm;
        norm.name = prop.name;
        norm.per_point = in_point_order(*site, prop.per_point);
        for (auto& [point, table] : norm.per_point) {
            // Source entries in source-domain order.
            const auto& source_order = domain_by_point.at(point)->values;
            std::stable_sort(table.begin(), table.end(), [&](const auto& a, const auto& b) {
                auto pos = [&](const std::string& v) {
                    return std::find(source_order.begin(), source_order.end(), v) -
                           source_order.begin();
                };
                return pos(a.first) < pos(b.first);
            });
        }
        std::vector<std::pair<std::string, DomainDecl>> derived;
        for (const DomainDecl& d : prop.derived_domains) derived.emplace_back(d.point, d);
        for (auto& [point, decl] : in_point_order(*site, derived)) {
            norm.derived_domains.push_back(decl);
        }
        normalized.properties.push_back(std::move(norm));
    }

    result.model.emplace(Model{std::move(site), presheaf, std::move(designs),
                               std::move(properties), std::move(normalized)});
    return result;
}

LoadResult load_text(std::string_view text) {
    LoadResult result;
    ParseResult parsed = parse_text(text);
    result.diagnostics = std::move(parsed.diagnostics);
    if (!parsed.ok()) return result;

    ValidateResult validated = validate_doc(*parsed.doc);
    result.diagnostics.insert(result.diagnostics.end(), validated.diagnostics.begin(),
                              validated.diagnostics.end());
    if (validated.ok()) result.model = std::move(validated.model);
    return result;
}

LoadResult load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        LoadResult result;
        error(result.diagnostics, errc::io, "cannot read file '" + path + "'", "");
        return result;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_text(buffer.str());
}

namespace {

bool is_fin_labels(const std::vector<std::string>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] != std::to_string(i)) return false;
    }
    return true;
}

json domain_to_json(const DomainDecl& d) {
    if (d.fin_form && is_fin_labels(d.values)) return json(d.values.size());
    return json(d.values);
}

}  // namespace

std::string canonical_json(const ArchitectureDoc& doc) {
    json root = json::object();
    root["version"] = doc.version;
    root["views"] = doc.views;

    json interfaces = json::array();
    for (const InterfaceDecl& decl : doc.interfaces) {
        json entry = json::object();
        entry["name"] = decl.name;
        entry["endpoints"] = json::array({decl.end_a, decl.end_b});
        interfaces.push_back(std::move(entry));
    }
    root["interfaces"] = std::move(interfaces);

    json domains = json::object();
    for (const DomainDecl& d : doc.domains) domains[d.point] = domain_to_json(d);
    root["domains"] = std::move(domains);

    json designs = json::object();
    for (const DesignDecl& design : doc.designs) {
        json entry = json::object();
        entry["view"] = design.view;
        json assign = json::object();
        for (const auto& [point, value] : design.assign) assign[point] = value;
        entry["assign"] = std::move(assign);
        designs[design.label] = std::move(entry);
    }
    root["designs"] = std::move(designs);

    json properties = json::object();
    for (const PropertyDecl& prop : doc.properties) {
        json entry = json::object();
        json per_point = json::object();
        for (const auto& [point, table] : prop.per_point) {
            json map = json::object();
            for (const auto& [source, image] : table) map[source] = image;
            per_point[point] = std::move(map);
        }
        entry["per_point"] = std::move(per_point);
        json derived = json::object();
        for (const DomainDecl& d : prop.derived_domains) derived[d.point] = domain_to_json(d);
        entry["derived_domains"] = std::move(derived);
        properties[prop.name] = std::move(entry);
    }
    root["properties"] = std::move(properties);

    return root.dump(2) + "\n";
}

}  // namespace archsheaf

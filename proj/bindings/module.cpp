#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "archsheaf/consistency.hpp"
#include "archsheaf/digest.hpp"
#include "archsheaf/ingest.hpp"
#include "archsheaf/oracle.hpp"
#include "archsheaf/presheaf.hpp"
#include "archsheaf/properties.hpp"
#include "archsheaf/topology.hpp"

namespace py = pybind11;
using namespace archsheaf;

namespace {

std::map<std::string, std::string> as_dict(const Section& s) {
    std::map<std::string, std::string> out;
    for (const auto& [point, value] : s.assignment()) out[point] = value;
    return out;
}

Section section_from_dict(const std::shared_ptr<const Presheaf>& p, const OpenSet& open,
                          const std::map<std::string, std::string>& assignment) {
    std::vector<std::pair<std::string, std::string>> pairs(assignment.begin(), assignment.end());
    return p->section(open, pairs);
}

}  // namespace

PYBIND11_MODULE(_archsheaf, m) {
    m.doc() = "Sheaf-style multi-view consistency engine for system architectures";

    py::register_exception<Error>(m, "ArchsheafError");

    // --- topology -----------------------------------------------------------
    py::class_<InterfacePoint>(m, "InterfacePoint")
        .def(py::init<std::string, std::string, std::string>(), py::arg("name"),
             py::arg("end_a"), py::arg("end_b"))
        .def_readonly("name", &InterfacePoint::name)
        .def_readonly("end_a", &InterfacePoint::end_a)
        .def_readonly("end_b", &InterfacePoint::end_b)
        .def("__repr__", [](const InterfacePoint& p) {
            return "InterfacePoint(" + p.name + ": " + p.end_a + "|" + p.end_b + ")";
        });

    py::class_<OpenSet>(m, "OpenSet")
        .def_property_readonly("points", &OpenSet::point_names)
        .def("__len__", &OpenSet::size)
        .def("__contains__",
             [](const OpenSet& u, const std::string& name) { return u.contains_name(name); })
        .def("__eq__", [](const OpenSet& a, const OpenSet& b) { return a == b; })
        .def("__and__", [](const OpenSet& a, const OpenSet& b) { return intersect(a, b); })
        .def("__repr__", &OpenSet::to_string);

    py::class_<Site, std::shared_ptr<Site>>(m, "Site")
        .def_static(
            "create",
            [](const std::vector<std::string>& views,
               const std::vector<std::tuple<std::string, std::string, std::string>>& points) {
                SiteSpec spec;
                for (const std::string& v : views) spec.views.push_back({v});
                for (const auto& [name, a, b] : points) spec.points.push_back({name, a, b});
                return Site::create(std::move(spec));
            },
            py::arg("views"), py::arg("interfaces"))
        .def_property_readonly("views",
                               [](const Site& s) {
                                   std::vector<std::string> out;
                                   for (const ViewDecl& v : s.views()) out.push_back(v.name);
                                   return out;
                               })
        .def_property_readonly("points", [](const Site& s) { return s.points(); })
        .def("view_open", [](const Site& s, const std::string& view) { return s.view_open(view); },
             py::arg("view"))
        .def("open_of",
             [](const Site& s, const std::vector<std::string>& names) { return s.open_of(names); },
             py::arg("points"))
        .def("empty_open", &Site::empty_open)
        .def("whole_open", &Site::whole_open)
        .def("__repr__", [](const Site& s) {
            return "Site(" + std::to_string(s.view_count()) + " views, " +
                   std::to_string(s.point_count()) + " interfaces)";
        });

    m.def(
        "union_all",
        [](const std::shared_ptr<const Site>& site, const std::vector<OpenSet>& family) {
            return union_all(site, family);
        },
        py::arg("site"), py::arg("family"));
    m.def(
        "is_cover",
        [](const std::vector<OpenSet>& family, const OpenSet& target) {
            return is_cover(family, target);
        },
        py::arg("family"), py::arg("target"));
    m.def("intersect", &intersect, py::arg("a"), py::arg("b"));

    // --- presheaf -----------------------------------------------------------
    py::class_<Section>(m, "Section")
        .def_property_readonly("domain", &Section::domain)
        .def_property_readonly("assignment", &as_dict)
        .def("value", [](const Section& s, const std::string& point)
             { return s.value_label(point); }, py::arg("point"))
        .def("__eq__", [](const Section& a, const Section& b) { return a == b; })
        .def("__repr__", &Section::to_string);

    py::class_<Presheaf, std::shared_ptr<Presheaf>>(m, "Presheaf")
        .def_static(
            "create",
            [](const std::shared_ptr<const Site>& site,
               const std::map<std::string, std::vector<std::string>>& domains) {
                std::vector<ParameterDomain> decls;
                for (const auto& [point, values] : domains) decls.push_back({point, values});
                return Presheaf::create(site, std::move(decls));
            },
            py::arg("site"), py::arg("domains"))
        .def_property_readonly("site", &Presheaf::site)
        .def("domain_values",
             [](const Presheaf& p, const std::string& point) {
                 auto idx = p.site()->point_index(point);
                 if (!idx) throw Error(errc::unknown_point, "unknown point '" + point + "'");
                 return p.domain_values(*idx);
             },
             py::arg("point"))
        .def("section", &section_from_dict, py::arg("open"), py::arg("assignment"))
        .def("section_count",
             [](const std::shared_ptr<const Presheaf>& p, const OpenSet& open) {
                 return p->section_count(open);
             },
             py::arg("open"))
        .def("enumerate_sections",
             [](const std::shared_ptr<const Presheaf>& p, const OpenSet& open, std::uint64_t cap) {
                 return p->enumerate_sections(open, cap);
             },
             py::arg("open"), py::arg("cap") = kDefaultEnumCap);

    m.def("restrict", &restrict, py::arg("section"), py::arg("open"),
          "Projection of a section onto a sub-open");
    m.def(
        "check_functor_laws",
        [](const std::shared_ptr<const Presheaf>& p, std::size_t point_cap) {
            LawReport report = check_functor_laws(p, point_cap);
            py::dict out;
            out["holds"] = report.holds;
            out["exhaustive"] = report.exhaustive;
            out["checks"] = report.checks;
            return out;
        },
        py::arg("presheaf"), py::arg("point_cap") = 12);

    // --- consistency ---------------------------------------------------------
    py::class_<Conflict>(m, "Conflict")
        .def_readonly("member_a", &Conflict::member_a)
        .def_readonly("member_b", &Conflict::member_b)
        .def_readonly("point", &Conflict::point)
        .def_readonly("value_a", &Conflict::value_a)
        .def_readonly("value_b", &Conflict::value_b)
        .def("__repr__", [](const Conflict& c) {
            return "Conflict(" + c.point + ": " + c.member_a + "=" + c.value_a + " vs " +
                   c.member_b + "=" + c.value_b + ")";
        });

    py::class_<ConflictReport>(m, "ConflictReport")
        .def_readonly("conflicts", &ConflictReport::conflicts)
        .def_readonly("pairs_compared", &ConflictReport::pairs_compared)
        .def("__bool__", [](const ConflictReport& r) { return !r.empty(); })
        .def("__len__", [](const ConflictReport& r) { return r.conflicts.size(); });

    py::class_<FamilyMember>(m, "FamilyMember")
        .def_readonly("label", &FamilyMember::label)
        .def_readonly("section", &FamilyMember::section)
        .def_property_readonly("open", &FamilyMember::open);

    py::class_<LocalFamily>(m, "LocalFamily")
        .def_static(
            "create",
            [](const std::shared_ptr<const Presheaf>& p,
               const std::vector<std::pair<std::string, Section>>& members) {
                std::vector<FamilyMember> out;
                for (const auto& [label, section] : members) out.push_back({label, section});
                return LocalFamily::create(p, std::move(out));
            },
            py::arg("presheaf"), py::arg("members"))
        .def_property_readonly("members", &LocalFamily::members)
        .def("__len__", &LocalFamily::size);

    py::class_<GluingResult>(m, "GluingResult")
        .def_readonly("glued", &GluingResult::glued)
        .def_property_readonly("witness", [](const GluingResult& g) {
            std::map<std::string, std::string> out;
            for (const auto& [point, label] : g.witness_map()) out[point] = label;
            return out;
        });

    m.def("check_pairwise", &check_pairwise, py::arg("family"));
    m.def("pairwise_check_count", &pairwise_check_count, py::arg("n"));
    m.def("glue", &glue, py::arg("family"));
    m.def(
        "verify_unique",
        [](const LocalFamily& family, const GluingResult& g, std::uint64_t cap) {
            UniquenessResult u = verify_unique(family, g, cap);
            py::dict out;
            out["unique"] = u.unique;
            out["exhaustive"] = u.exhaustive;
            out["candidates_checked"] = u.candidates_checked;
            return out;
        },
        py::arg("family"), py::arg("gluing"), py::arg("cap") = kDefaultEnumCap);
    m.def(
        "oracle_equivalence",
        [](const std::shared_ptr<const Presheaf>& p, const std::vector<OpenSet>& opens,
           std::uint64_t cap) {
            EquivalenceReport r = oracle_equivalence(p, opens, cap);
            py::dict out;
            out["holds"] = r.holds;
            out["families"] = r.families;
            out["compatible"] = r.compatible;
            out["uniquely_glueable"] = r.uniquely_glueable;
            return out;
        },
        py::arg("presheaf"), py::arg("opens"), py::arg("cap") = kDefaultEnumCap);

    // --- properties ----------------------------------------------------------
    py::class_<PropertyMap>(m, "PropertyMap")
        .def_static(
            "create",
            [](const std::shared_ptr<const Presheaf>& base, const std::string& name,
               const std::map<std::string, std::map<std::string, std::string>>& per_point,
               const std::map<std::string, std::vector<std::string>>& derived_domains) {
                std::vector<ParameterDomain> derived;
                for (const auto& [point, values] : derived_domains) {
                    derived.push_back({point, values});
                }
                return PropertyMap::create(base, name, per_point, std::move(derived));
            },
            py::arg("base"), py::arg("name"), py::arg("per_point"), py::arg("derived_domains"))
        .def_property_readonly("name", &PropertyMap::name)
        .def_property_readonly("derived_presheaf", &PropertyMap::derived);

    m.def("identity_property", &identity_property, py::arg("base"),
          py::arg("name") = std::string("identity"));
    m.def("apply_property",
          py::overload_cast<const PropertyMap&, const Section&>(&apply_property),
          py::arg("map"), py::arg("section"));
    m.def("apply_property_family",
          py::overload_cast<const PropertyMap&, const LocalFamily&>(&apply_property),
          py::arg("map"), py::arg("family"));
    m.def("derived_glue_commutes", &derived_glue_commutes, py::arg("map"), py::arg("family"));

    // --- ingest ---------------------------------------------------------------
    py::class_<Diagnostic>(m, "Diagnostic")
        .def_property_readonly("severity",
                               [](const Diagnostic& d) {
                                   return d.severity == Diagnostic::Severity::error ? "error"
                                                                                    : "warning";
                               })
        .def_readonly("code", &Diagnostic::code)
        .def_readonly("message", &Diagnostic::message)
        .def_readonly("location", &Diagnostic::location)
        .def("__repr__", [](const Diagnostic& d) { return to_string(d); });

    py::class_<Model>(m, "Model")
        .def_readonly("site", &Model::site)
        .def_readonly("presheaf", &Model::presheaf)
        .def_readonly("designs", &Model::designs)
        .def_property_readonly("properties",
                               [](const Model& m_) {
                                   std::vector<std::string> names;
                                   for (const PropertyMap& p : m_.properties) {
                                       names.push_back(p.name());
                                   }
                                   return names;
                               })
        .def("property",
             [](const Model& m_, const std::string& name) {
                 const PropertyMap* p = m_.find_property(name);
                 if (!p) throw Error(errc::bad_argument, "unknown property '" + name + "'");
                 return *p;
             },
             py::arg("name"))
        .def("canonical_json", [](const Model& m_) { return canonical_json(m_.doc); });

    py::class_<LoadResult>(m, "LoadResult")
        .def_property_readonly("ok", &LoadResult::ok)
        .def_property_readonly("model",
                               [](const LoadResult& r) {
                                   return r.model ? py::cast(*r.model) : py::none().cast<py::object>();
                               })
        .def_readonly("diagnostics", &LoadResult::diagnostics);

    m.def("load_file", &load_file, py::arg("path"));
    m.def("load_text", [](const std::string& text) { return load_text(text); }, py::arg("text"));

    // --- oracle ----------------------------------------------------------------
    py::class_<oracle::CertCheck>(m, "CertCheck")
        .def_readonly("name", &oracle::CertCheck::name)
        .def_readonly("held", &oracle::CertCheck::held)
        .def_readonly("cases", &oracle::CertCheck::cases)
        .def_readonly("failures", &oracle::CertCheck::failures);

    py::class_<oracle::CertReport>(m, "CertReport")
        .def_readonly("seed", &oracle::CertReport::seed)
        .def_readonly("sampled", &oracle::CertReport::sampled)
        .def_readonly("families_examined", &oracle::CertReport::families_examined)
        .def_readonly("compatible_families", &oracle::CertReport::compatible_families)
        .def_readonly("checks", &oracle::CertReport::checks)
        .def_property_readonly("all_held", &oracle::CertReport::all_held)
        .def("__repr__", &oracle::CertReport::summary);

    py::class_<oracle::SmallInstance>(m, "SmallInstance")
        .def_readonly("seed", &oracle::SmallInstance::seed)
        .def_readonly("site", &oracle::SmallInstance::site)
        .def_readonly("presheaf", &oracle::SmallInstance::presheaf)
        .def_readonly("cover_views", &oracle::SmallInstance::cover_views)
        .def("canonical_json",
             [](const oracle::SmallInstance& i) { return canonical_json(i.doc); });

    m.def(
        "gen_instance", [](std::uint64_t seed) { return oracle::gen_instance(seed); },
        py::arg("seed"));
    m.def(
        "certify", [](const oracle::SmallInstance& i) { return oracle::certify(i); },
        py::arg("instance"));

    m.def("sha256_hex", [](const std::string& bytes) { return sha256_hex(bytes); },
          py::arg("bytes"));

    m.attr("FORMAT_VERSION") = kFormatVersion;
    m.attr("DEFAULT_ENUM_CAP") = kDefaultEnumCap;
    m.attr("__version__") = "0.1.0";
}

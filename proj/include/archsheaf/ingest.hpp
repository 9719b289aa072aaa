#ifndef ARCHSHEAF_INGEST_HPP
#define ARCHSHEAF_INGEST_HPP

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "archsheaf/consistency.hpp"
#include "archsheaf/presheaf.hpp"
#include "archsheaf/properties.hpp"
#include "archsheaf/topology.hpp"

namespace archsheaf {

inline constexpr char kFormatVersion[] = "archsheaf/1";

struct Diagnostic {
    enum class Severity { error, warning };

    Severity severity = Severity::error;
    std::string code;
    std::string message;
    std::string location;  // JSON-pointer-style path, or "line L, column C" for syntax errors
};

std::string to_string(const Diagnostic& d);
bool has_errors(const std::vector<Diagnostic>& diagnostics);

// --- document model -------------------------------------------------------

struct InterfaceDecl {
    std::string name;
    std::string end_a;
    std::string end_b;
};

struct DomainDecl {
    std::string point;
    std::vector<std::string> values;
    // Declared as a bare cardinality n (labels "0".."n-1"); kept so the
    // canonical form round-trips the author's choice.
    bool fin_form = false;
};

struct DesignDecl {
    std::string label;
    std::string view;
    std::vector<std::pair<std::string, std::string>> assign;  // point -> value
};

struct PropertyDecl {
    std::string name;
    // point -> (source value -> derived value)
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>>
        per_point;
    std::vector<DomainDecl> derived_domains;
};

struct ArchitectureDoc {
    std::string version;
    std::vector<std::string> views;
    std::vector<InterfaceDecl> interfaces;
    std::vector<DomainDecl> domains;
    std::vector<DesignDecl> designs;
    std::vector<PropertyDecl> properties;
};

// --- parse / validate / load ----------------------------------------------

struct ParseResult {
    std::optional<ArchitectureDoc> doc;  // present iff no error diagnostics
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return doc.has_value(); }
};

// Total: malformed input yields diagnostics, never an exception.
ParseResult parse_text(std::string_view text);

// The validated semantic model of a document.
struct Model {
    std::shared_ptr<const Site> site;
    std::shared_ptr<const Presheaf> presheaf;
    LocalFamily designs;
    std::vector<PropertyMap> properties;
    ArchitectureDoc doc;  // normalized to canonical field order

    const PropertyMap* find_property(std::string_view name) const;
};

struct ValidateResult {
    std::optional<Model> model;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return model.has_value(); }
};

ValidateResult validate_doc(const ArchitectureDoc& doc);

struct LoadResult {
    std::optional<Model> model;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return model.has_value(); }
};

// parse + validate; diagnostics from both stages.
LoadResult load_text(std::string_view text);
LoadResult load_file(const std::string& path);

// Canonical serialization: two-space indent, keys in schema order, arrays in
// declaration order, LF line endings, trailing newline.
std::string canonical_json(const ArchitectureDoc& doc);

}  // namespace archsheaf

#endif

#ifndef ARCHSHEAF_ERROR_HPP
#define ARCHSHEAF_ERROR_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace archsheaf {

// Stable error codes, shared between thrown errors and file diagnostics.
namespace errc {
inline constexpr char empty_document[]    = "E-EMPTY";
inline constexpr char syntax[]            = "E-SYNTAX";
inline constexpr char bad_type[]          = "E-TYPE";
inline constexpr char version_mismatch[]  = "E-VERSION";
inline constexpr char missing_field[]     = "E-MISSING-FIELD";
inline constexpr char unknown_field[]     = "W-UNKNOWN-FIELD";
inline constexpr char io[]                = "E-IO";
inline constexpr char bad_name[]          = "E-BAD-NAME";
inline constexpr char duplicate_name[]    = "E-DUP-NAME";
inline constexpr char self_interface[]    = "E-SELF-INTERFACE";
inline constexpr char unknown_view[]      = "E-UNKNOWN-VIEW";
inline constexpr char unknown_point[]     = "E-UNKNOWN-POINT";
inline constexpr char no_domain[]         = "E-NO-DOMAIN";
inline constexpr char bad_value[]         = "E-BAD-VALUE";
inline constexpr char missing_point[]     = "E-MISSING-POINT";
inline constexpr char extra_point[]       = "E-EXTRA-POINT";

// Engine-side failures that carry no document location.
inline constexpr char not_a_subset[]      = "E-NOT-A-SUBSET";
inline constexpr char mixed_site[]        = "E-MIXED-SITE";
inline constexpr char mixed_presheaf[]    = "E-MIXED-PRESHEAF";
inline constexpr char cap_exceeded[]      = "E-CAP-EXCEEDED";
inline constexpr char incompatible[]      = "E-INCOMPATIBLE";
inline constexpr char missing_point_map[] = "E-MISSING-POINT-MAP";
inline constexpr char bad_image[]         = "E-BAD-IMAGE";
inline constexpr char bad_argument[]      = "E-BAD-ARGUMENT";
}  // namespace errc

class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

class CapExceededError : public Error {
public:
    CapExceededError(const std::string& message, std::uint64_t estimate)
        : Error(errc::cap_exceeded, message), estimate_(estimate) {}

    // Estimated number of items that would have to be enumerated.
    std::uint64_t estimate() const noexcept { return estimate_; }

private:
    std::uint64_t estimate_;
};

}  // namespace archsheaf

#endif

#ifndef ARCHSHEAF_DIGEST_HPP
#define ARCHSHEAF_DIGEST_HPP

#include <string>
#include <string_view>

namespace archsheaf {

// Lowercase hex SHA-256 of the bytes.
std::string sha256_hex(std::string_view bytes);

}  // namespace archsheaf

#endif

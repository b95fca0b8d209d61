#pragma once
#include <string>
#include <string_view>

namespace gw {

// SHA-256 (FIPS 180-4), lowercase hex.
std::string sha256_hex(std::string_view data);

// First 16 hex chars of sha256; used for operator digests and cache directories.
std::string short_digest(std::string_view data);

// Fixed-width decimal-independent float formatting ("%.17g") so that digests
// and CSV output are reproducible byte-for-byte.
std::string format_double(double v);

}  // namespace gw

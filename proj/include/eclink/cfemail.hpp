#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace eclink {

// Decodes the hex payload produced by CloudFlare's email obfuscation: the
// first byte is an XOR key, every following byte is a character of the
// address. Requires an even-length hex string of at least 4 digits and a
// valid UTF-8 result; on failure returns nullopt and sets *error.
std::optional<std::string> decode_cf_email(std::string_view hex_payload,
                                           std::string* error = nullptr);

bool is_valid_utf8(std::string_view s);

}  // namespace eclink

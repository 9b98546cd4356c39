#include "eclink/cfemail.hpp"

#include <cstdint>

namespace eclink {

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

void set_error(std::string* error, const char* what) {
  if (error) *error = what;
}

}  // namespace

bool is_valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b = static_cast<unsigned char>(s[i]);
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if (b < 0x80) {
      ++i;
      continue;
    } else if ((b & 0xe0) == 0xc0) {
      len = 1;
      cp = b & 0x1f;
    } else if ((b & 0xf0) == 0xe0) {
      len = 2;
      cp = b & 0x0f;
    } else if ((b & 0xf8) == 0xf0) {
      len = 3;
      cp = b & 0x07;
    } else {
      return false;
    }
    if (i + len >= s.size()) return false;
    for (std::size_t k = 1; k <= len; ++k) {
      const auto c = static_cast<unsigned char>(s[i + k]);
      if ((c & 0xc0) != 0x80) return false;
      cp = (cp << 6) | (c & 0x3f);
    }
    // Reject overlong forms, surrogates and out-of-range code points.
    static constexpr std::uint32_t min_for_len[4] = {0, 0x80, 0x800, 0x10000};
    if (cp < min_for_len[len] || cp > 0x10ffff || (cp >= 0xd800 && cp <= 0xdfff)) return false;
    i += len + 1;
  }
  return true;
}

std::optional<std::string> decode_cf_email(std::string_view hex_payload, std::string* error) {
  if (hex_payload.size() < 4) {
    set_error(error, "payload shorter than key plus one byte");
    return std::nullopt;
  }
  if (hex_payload.size() % 2 != 0) {
    set_error(error, "odd-length hex payload");
    return std::nullopt;
  }
  std::string bytes;
  bytes.reserve(hex_payload.size() / 2);
  for (std::size_t i = 0; i < hex_payload.size(); i += 2) {
    const int hi = hex_value(hex_payload[i]);
    const int lo = hex_value(hex_payload[i + 1]);
    if (hi < 0 || lo < 0) {
      set_error(error, "non-hex character in payload");
      return std::nullopt;
    }
    bytes.push_back(static_cast<char>(hi * 16 + lo));
  }
  const auto key = static_cast<unsigned char>(bytes[0]);
  std::string out;
  out.reserve(bytes.size() - 1);
  for (std::size_t i = 1; i < bytes.size(); ++i)
    out.push_back(static_cast<char>(static_cast<unsigned char>(bytes[i]) ^ key));
  if (!is_valid_utf8(out)) {
    set_error(error, "decoded bytes are not valid UTF-8");
    return std::nullopt;
  }
  return out;
}

}  // namespace eclink

#pragma once

#include <string>
#include <string_view>

namespace eclink {

// Rewrites "." as "[.]" within the hostname part of url so the string cannot
// be navigated by accident. Scheme, path and query are left untouched.
std::string defang(std::string_view url);

// Inverse of defang: every "[.]" becomes ".". Total on arbitrary strings.
std::string refang(std::string_view url);

}  // namespace eclink

#include "eclink/defang.hpp"

namespace eclink {

namespace {

// [host_begin, host_end) of the authority's hostname within url.
std::pair<std::size_t, std::size_t> host_span(std::string_view url) {
  std::size_t begin = 0;
  if (auto scheme = url.find("://"); scheme != std::string_view::npos) begin = scheme + 3;
  std::size_t end = url.find_first_of("/?#", begin);
  if (end == std::string_view::npos) end = url.size();
  // Skip userinfo; stop the host at an explicit port.
  if (auto at = url.rfind('@', end == 0 ? 0 : end - 1); at != std::string_view::npos && at >= begin)
    begin = at + 1;
  if (auto colon = url.find(':', begin); colon != std::string_view::npos && colon < end) end = colon;
  return {begin, end};
}

}  // namespace

std::string defang(std::string_view url) {
  auto [begin, end] = host_span(url);
  std::string out;
  out.reserve(url.size() + 16);
  for (std::size_t i = 0; i < url.size(); ++i) {
    if (url[i] == '.' && i >= begin && i < end)
      out += "[.]";
    else
      out += url[i];
  }
  return out;
}

std::string refang(std::string_view url) {
  std::string out;
  out.reserve(url.size());
  for (std::size_t i = 0; i < url.size();) {
    if (i + 2 < url.size() && url[i] == '[' && url[i + 1] == '.' && url[i + 2] == ']') {
      out += '.';
      i += 3;
    } else {
      out += url[i++];
    }
  }
  return out;
}

}  // namespace eclink

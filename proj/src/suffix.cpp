#include "eclink/suffix.hpp"

#include <fstream>
#include <sstream>

#include "eclink/errors.hpp"

namespace eclink {

extern const char* const kBundledSuffixSnapshot;

std::vector<std::string_view> split_labels(std::string_view host) {
  std::vector<std::string_view> labels;
  std::size_t start = 0;
  while (true) {
    const auto dot = host.find('.', start);
    if (dot == std::string_view::npos) {
      labels.push_back(host.substr(start));
      break;
    }
    labels.push_back(host.substr(start, dot - start));
    start = dot + 1;
  }
  return labels;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string join_from(const std::vector<std::string_view>& labels, std::size_t first) {
  std::string out;
  for (std::size_t i = first; i < labels.size(); ++i) {
    if (i > first) out += '.';
    out += labels[i];
  }
  return out;
}

}  // namespace

PublicSuffixList PublicSuffixList::from_string(std::string_view text) {
  PublicSuffixList psl;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = trim(text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos));
    if (line.rfind("//", 0) == 0) {
      std::string_view body = trim(line.substr(2));
      if (body.rfind("version:", 0) == 0) psl.version_ = std::string(trim(body.substr(8)));
    } else if (!line.empty()) {
      std::string rule(line);
      for (auto& c : rule) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      if (rule[0] == '!')
        psl.exception_.insert(rule.substr(1));
      else if (rule.rfind("*.", 0) == 0)
        psl.wildcard_.insert(rule.substr(2));
      else
        psl.exact_.insert(rule);
    }
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }
  return psl;
}

PublicSuffixList PublicSuffixList::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read suffix list: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_string(buf.str());
}

const PublicSuffixList& PublicSuffixList::bundled() {
  static const PublicSuffixList psl = from_string(kBundledSuffixSnapshot);
  return psl;
}

std::string PublicSuffixList::public_suffix(std::string_view host) const {
  const auto labels = split_labels(host);
  // Exception rules beat everything; otherwise the longest match wins.
  // Suffix candidates are scanned longest-first, so the first hit is final.
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::string candidate = join_from(labels, i);
    if (exception_.count(candidate)) return join_from(labels, i + 1);
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::string candidate = join_from(labels, i);
    if (exact_.count(candidate)) return candidate;
    // "*.x": the wildcard consumes labels[i], the base must follow.
    if (i + 1 < labels.size() && wildcard_.count(join_from(labels, i + 1))) return candidate;
  }
  // Implicit "*" rule: the last label is the suffix.
  return std::string(labels.back());
}

std::string PublicSuffixList::registrable_domain(std::string_view host) const {
  const std::string suffix = public_suffix(host);
  if (suffix.size() >= host.size()) return {};
  // One label left of the suffix.
  const std::size_t boundary = host.size() - suffix.size() - 1;  // the dot
  const auto prev_dot = host.rfind('.', boundary == 0 ? 0 : boundary - 1);
  const std::size_t start = prev_dot == std::string_view::npos ? 0 : prev_dot + 1;
  return std::string(host.substr(start));
}

}  // namespace eclink

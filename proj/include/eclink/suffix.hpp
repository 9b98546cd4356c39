#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace eclink {

// Registrable-domain (eTLD+1) resolution against a bundled, versioned
// public-suffix snapshot. Rule syntax follows publicsuffix.org: one rule per
// line, "//" comments, "*." wildcards, "!" exceptions. The implicit "*" rule
// applies when nothing matches, so an unknown multi-label host still yields
// its last two labels.
class PublicSuffixList {
 public:
  static PublicSuffixList from_string(std::string_view text);
  // Throws InputError when the file cannot be read.
  static PublicSuffixList from_file(const std::string& path);
  // The snapshot compiled into the library.
  static const PublicSuffixList& bundled();

  // Snapshot version, taken from a "// version: X" comment line.
  const std::string& version() const { return version_; }
  std::size_t rule_count() const { return exact_.size() + wildcard_.size() + exception_.size(); }

  // host must be lowercase and refanged. Returns the matched public suffix.
  std::string public_suffix(std::string_view host) const;

  // eTLD+1 of host, or empty when the host is itself a public suffix
  // (single label or exact suffix match).
  std::string registrable_domain(std::string_view host) const;

 private:
  std::unordered_set<std::string> exact_;
  std::unordered_set<std::string> wildcard_;   // rule "*.x" stored as "x"
  std::unordered_set<std::string> exception_;  // rule "!x" stored as "x"
  std::string version_ = "unversioned";
};

// Dot-separated labels of host, left to right. Empty labels are preserved so
// callers can reject "a..b" style hosts.
std::vector<std::string_view> split_labels(std::string_view host);

}  // namespace eclink

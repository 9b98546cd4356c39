#pragma once

#include <string>
#include <vector>

#include "eclink/date.hpp"

namespace eclink {

// One observation of a fake EC site. Entity lists are kept sorted and
// deduplicated; domain is the registrable domain of site_host (or site_host
// itself when the suffix is unknown, flagged by domain_is_fallback).
struct SiteRecord {
  std::string site_url;
  std::string site_host;
  std::string domain;
  bool domain_is_fallback = false;
  std::vector<std::string> emails;
  std::vector<std::string> matomo_urls;
  std::vector<std::string> la51_ids;
  Date observed_at;

  friend bool operator==(const SiteRecord&, const SiteRecord&) = default;
};

struct RecordError {
  std::size_t line_no = 0;
  std::string reason;
};

// Canonical record order used when persisting artifacts.
bool record_less(const SiteRecord& a, const SiteRecord& b);

}  // namespace eclink

#include "eclink/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <json.hpp>
#include <sstream>

#include "eclink/cfemail.hpp"
#include "eclink/defang.hpp"
#include "eclink/errors.hpp"

namespace eclink {

const char* const kCsvHeader = "url,emails,emails_cfencoded,matomo_urls,la51_ids,observed_at";

bool record_less(const SiteRecord& a, const SiteRecord& b) {
  return std::tie(a.domain, a.site_host, a.observed_at, a.emails, a.matomo_urls, a.la51_ids) <
         std::tie(b.domain, b.site_host, b.observed_at, b.emails, b.matomo_urls, b.la51_ids);
}

std::optional<InputFormat> input_format_from_string(std::string_view name) {
  if (name == "jsonl") return InputFormat::Jsonl;
  if (name == "csv") return InputFormat::Csv;
  return std::nullopt;
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool set_err(std::string* error, const char* what) {
  if (error) *error = what;
  return false;
}

bool valid_host_labels(std::string_view host, std::string* error) {
  if (host.empty()) return set_err(error, "empty hostname");
  for (const auto label : split_labels(host)) {
    if (label.empty()) return set_err(error, "empty label in hostname");
    if (label.size() > 63) return set_err(error, "hostname label too long");
    for (const char c : label) {
      const auto u = static_cast<unsigned char>(c);
      if (!(std::isalnum(u) || c == '-' || c == '_')) return set_err(error, "invalid character in hostname");
    }
  }
  return true;
}

bool is_ip_literal(std::string_view host) {
  if (host.find(':') != std::string_view::npos) return true;  // IPv6
  const auto labels = split_labels(host);
  if (labels.size() != 4) return false;
  for (const auto label : labels) {
    if (label.empty() || label.size() > 3) return false;
    for (const char c : label)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

// Hostname span of a refanged URL-ish string: skip scheme and userinfo,
// stop at port, path, query or fragment.
std::string_view extract_host(std::string_view url) {
  if (const auto scheme = url.find("://"); scheme != std::string_view::npos)
    url = url.substr(scheme + 3);
  const auto end = url.find_first_of("/?#");
  std::string_view authority = end == std::string_view::npos ? url : url.substr(0, end);
  if (const auto at = authority.rfind('@'); at != std::string_view::npos)
    authority = authority.substr(at + 1);
  if (const auto colon = authority.find(':'); colon != std::string_view::npos)
    authority = authority.substr(0, colon);
  return authority;
}

std::string_view trim_ws(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

void sort_unique(std::vector<std::string>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

std::optional<NormalizedSite> normalize_site(std::string_view url, const PublicSuffixList& psl,
                                             std::string* error) {
  const std::string refanged = refang(trim_ws(url));
  std::string host = lower(extract_host(refanged));
  while (!host.empty() && host.back() == '.') host.pop_back();
  if (host.empty()) {
    set_err(error, "no hostname in URL");
    return std::nullopt;
  }
  NormalizedSite out;
  if (is_ip_literal(host)) {
    out.host = host;
    out.domain = host;
    out.fallback = true;
    return out;
  }
  if (!valid_host_labels(host, error)) return std::nullopt;
  out.host = host;
  out.domain = psl.registrable_domain(host);
  if (out.domain.empty()) {
    // Host is itself a public suffix (or single-label); keep it, flagged.
    out.domain = host;
    out.fallback = true;
  }
  return out;
}

std::optional<std::string> normalize_matomo_url(std::string_view url) {
  std::string refanged = refang(trim_ws(url));
  if (refanged.empty()) return std::nullopt;
  std::string scheme = "http";
  std::string_view rest = refanged;
  if (const auto pos = refanged.find("://"); pos != std::string::npos) {
    scheme = lower(std::string_view(refanged).substr(0, pos));
    rest = std::string_view(refanged).substr(pos + 3);
  }
  auto path_start = rest.find_first_of("/?#");
  std::string_view authority = path_start == std::string_view::npos ? rest : rest.substr(0, path_start);
  std::string_view path;
  if (path_start != std::string_view::npos && rest[path_start] == '/') {
    auto tail = rest.substr(path_start);
    const auto q = tail.find_first_of("?#");
    path = q == std::string_view::npos ? tail : tail.substr(0, q);
  }
  std::string port;
  if (const auto colon = authority.find(':'); colon != std::string_view::npos) {
    port = std::string(authority.substr(colon + 1));
    authority = authority.substr(0, colon);
  }
  std::string host = lower(authority);
  while (!host.empty() && host.back() == '.') host.pop_back();
  if (host.empty() || !valid_host_labels(host, nullptr)) {
    if (!is_ip_literal(host)) return std::nullopt;
  }
  if ((scheme == "http" && port == "80") || (scheme == "https" && port == "443")) port.clear();
  std::string out = scheme + "://" + host;
  if (!port.empty()) out += ":" + port;
  if (!path.empty() && path != "/") out += std::string(path);
  return out;
}

bool is_plausible_email(std::string_view s) {
  const auto at = s.find('@');
  if (at == std::string_view::npos || at == 0 || at + 1 >= s.size()) return false;
  if (s.find('@', at + 1) != std::string_view::npos) return false;
  for (const char c : s) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isspace(u) || std::iscntrl(u)) return false;
  }
  return true;
}

namespace {

struct LineContext {
  std::size_t line_no;
  const ParseOptions& opts;
  const PublicSuffixList& psl;
  std::vector<RecordError>& errors;
  std::vector<RecordError>& warnings;
};

struct RawLineFields {
  std::string url;
  std::string observed_at;
  std::vector<std::string> emails;
  std::vector<std::string> emails_cfencoded;
  std::vector<std::string> matomo_urls;
  std::vector<std::string> la51_ids;
};

std::optional<SiteRecord> finish_record(const RawLineFields& raw, LineContext& ctx) {
  std::string err;
  const auto site = normalize_site(raw.url, ctx.psl, &err);
  if (!site) {
    ctx.errors.push_back({ctx.line_no, "bad_url: " + err});
    return std::nullopt;
  }
  const auto date = Date::parse(raw.observed_at);
  if (!date) {
    ctx.errors.push_back({ctx.line_no, "bad_date: '" + raw.observed_at + "'"});
    return std::nullopt;
  }
  if (ctx.opts.window && !ctx.opts.window->contains(*date)) {
    ctx.errors.push_back({ctx.line_no, "date_out_of_window: " + date->to_string()});
    return std::nullopt;
  }

  SiteRecord rec;
  rec.site_url = refang(trim_ws(raw.url));
  rec.site_host = site->host;
  rec.domain = site->domain;
  rec.domain_is_fallback = site->fallback;
  rec.observed_at = *date;
  if (site->fallback) ctx.warnings.push_back({ctx.line_no, "domain_fallback: " + site->host});

  for (const auto& e : raw.emails) {
    const std::string email = lower(refang(trim_ws(e)));
    if (is_plausible_email(email))
      rec.emails.push_back(email);
    else
      ctx.warnings.push_back({ctx.line_no, "bad_email: '" + email + "'"});
  }
  for (const auto& payload : raw.emails_cfencoded) {
    std::string derr;
    const auto decoded = decode_cf_email(trim_ws(payload), &derr);
    if (!decoded) {
      ctx.warnings.push_back({ctx.line_no, "cfemail_decode: " + derr});
      continue;
    }
    const std::string email = lower(*decoded);
    if (is_plausible_email(email))
      rec.emails.push_back(email);
    else
      ctx.warnings.push_back({ctx.line_no, "bad_email: '" + email + "'"});
  }
  for (const auto& m : raw.matomo_urls) {
    if (auto norm = normalize_matomo_url(m))
      rec.matomo_urls.push_back(std::move(*norm));
    else
      ctx.warnings.push_back({ctx.line_no, "bad_matomo_url: '" + std::string(trim_ws(m)) + "'"});
  }
  for (const auto& id : raw.la51_ids) {
    const auto t = trim_ws(id);
    if (!t.empty()) rec.la51_ids.emplace_back(t);
  }
  sort_unique(rec.emails);
  sort_unique(rec.matomo_urls);
  sort_unique(rec.la51_ids);
  return rec;
}

bool read_json_string_list(const nlohmann::json& obj, const char* key, std::vector<std::string>& out,
                           std::string& err) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return true;
  if (!it->is_array()) {
    err = std::string(key) + " is not an array";
    return false;
  }
  for (const auto& v : *it) {
    if (!v.is_string()) {
      err = std::string(key) + " contains a non-string";
      return false;
    }
    out.push_back(v.get<std::string>());
  }
  return true;
}

std::optional<SiteRecord> parse_jsonl_line(std::string_view line, LineContext& ctx) {
  const auto obj = nlohmann::json::parse(line, nullptr, false);
  if (obj.is_discarded() || !obj.is_object()) {
    ctx.errors.push_back({ctx.line_no, "bad_json"});
    return std::nullopt;
  }
  RawLineFields raw;
  if (!obj.contains("url") || !obj["url"].is_string()) {
    ctx.errors.push_back({ctx.line_no, "missing_url"});
    return std::nullopt;
  }
  raw.url = obj["url"].get<std::string>();
  if (!obj.contains("observed_at") || !obj["observed_at"].is_string()) {
    ctx.errors.push_back({ctx.line_no, "missing_date"});
    return std::nullopt;
  }
  raw.observed_at = obj["observed_at"].get<std::string>();
  std::string err;
  if (!read_json_string_list(obj, "emails", raw.emails, err) ||
      !read_json_string_list(obj, "emails_cfencoded", raw.emails_cfencoded, err) ||
      !read_json_string_list(obj, "matomo_urls", raw.matomo_urls, err) ||
      !read_json_string_list(obj, "la51_ids", raw.la51_ids, err)) {
    ctx.errors.push_back({ctx.line_no, "bad_field: " + err});
    return std::nullopt;
  }
  return finish_record(raw, ctx);
}

}  // namespace

std::optional<std::vector<std::string>> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"' && cur.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) return std::nullopt;
  fields.push_back(std::move(cur));
  return fields;
}

namespace {

std::vector<std::string> split_list_field(std::string_view field) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= field.size()) {
    const auto semi = field.find(';', start);
    const auto piece = trim_ws(field.substr(start, semi == std::string_view::npos ? std::string_view::npos
                                                                                  : semi - start));
    if (!piece.empty()) out.emplace_back(piece);
    if (semi == std::string_view::npos) break;
    start = semi + 1;
  }
  return out;
}

std::optional<SiteRecord> parse_csv_line(std::string_view line, LineContext& ctx) {
  const auto fields = split_csv_line(line);
  if (!fields || fields->size() != 6) {
    ctx.errors.push_back({ctx.line_no, "bad_csv: expected 6 columns"});
    return std::nullopt;
  }
  RawLineFields raw;
  raw.url = (*fields)[0];
  raw.emails = split_list_field((*fields)[1]);
  raw.emails_cfencoded = split_list_field((*fields)[2]);
  raw.matomo_urls = split_list_field((*fields)[3]);
  raw.la51_ids = split_list_field((*fields)[4]);
  raw.observed_at = std::string(trim_ws((*fields)[5]));
  return finish_record(raw, ctx);
}

}  // namespace

ParseResult parse_records(std::istream& input, const ParseOptions& opts) {
  ParseResult result;
  const PublicSuffixList& psl = opts.suffix_list ? *opts.suffix_list : PublicSuffixList::bundled();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(input, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim_ws(line).empty()) continue;
    if (opts.format == InputFormat::Csv && line_no == 1 && trim_ws(line) == kCsvHeader) continue;
    LineContext ctx{line_no, opts, psl, result.errors, result.warnings};
    auto rec = opts.format == InputFormat::Jsonl ? parse_jsonl_line(line, ctx) : parse_csv_line(line, ctx);
    if (rec) result.records.push_back(std::move(*rec));
  }
  return result;
}

ParseResult parse_records_file(const std::string& path, const ParseOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read input file: " + path);
  return parse_records(in, opts);
}

std::string record_to_jsonl(const SiteRecord& rec) {
  nlohmann::json obj;
  obj["url"] = rec.site_url;
  obj["emails"] = rec.emails;
  obj["emails_cfencoded"] = nlohmann::json::array();
  obj["matomo_urls"] = rec.matomo_urls;
  obj["la51_ids"] = rec.la51_ids;
  obj["observed_at"] = rec.observed_at.to_string();
  return obj.dump();
}

}  // namespace eclink

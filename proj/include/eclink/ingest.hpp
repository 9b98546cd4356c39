#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eclink/record.hpp"
#include "eclink/suffix.hpp"

namespace eclink {

enum class InputFormat { Jsonl, Csv };

std::optional<InputFormat> input_format_from_string(std::string_view name);

struct NormalizedSite {
  std::string host;    // lowercase, refanged, trailing dot stripped
  std::string domain;  // registrable domain, or host on fallback
  bool fallback = false;
};

// Hostname extraction and registrable-domain resolution. Accepts bare hosts
// and full URLs, defanged or not. Returns nullopt (with *error set) when no
// syntactically valid hostname is present.
std::optional<NormalizedSite> normalize_site(std::string_view url, const PublicSuffixList& psl,
                                             std::string* error = nullptr);

// Matomo identity is the full normalized URL: lowercase scheme and host,
// default ports stripped, path kept, query and fragment dropped. A missing
// scheme defaults to http.
std::optional<std::string> normalize_matomo_url(std::string_view url);

// Deliberately permissive: exactly one "@", non-empty local and domain
// parts, no whitespace or control characters.
bool is_plausible_email(std::string_view s);

struct ParseOptions {
  InputFormat format = InputFormat::Jsonl;
  const PublicSuffixList* suffix_list = nullptr;  // bundled() when null
  std::optional<CollectionWindow> window;         // when set, rejects out-of-window records
};

struct ParseResult {
  std::vector<SiteRecord> records;    // input order
  std::vector<RecordError> errors;    // malformed lines; no record emitted
  std::vector<RecordError> warnings;  // per-field drops on lines that still produced a record
};

// Line-delimited input, one record per line. Malformed lines are reported
// and skipped; parsing always continues to the end of the stream.
ParseResult parse_records(std::istream& input, const ParseOptions& opts);

// Throws InputError when the file cannot be opened.
ParseResult parse_records_file(const std::string& path, const ParseOptions& opts);

// The JSONL schema emitted for normalized-record artifacts and by the
// synthetic generator; parse_records reads it back.
std::string record_to_jsonl(const SiteRecord& rec);

// Comma-split with minimal double-quote handling ("" escapes a quote inside
// a quoted field). nullopt on an unterminated quote.
std::optional<std::vector<std::string>> split_csv_line(std::string_view line);

extern const char* const kCsvHeader;  // url,emails,emails_cfencoded,matomo_urls,la51_ids,observed_at

}  // namespace eclink

#pragma once

// Common Log Format ingestion.
//
//   host ident authuser [dd/Mon/yyyy:HH:MM:SS zone] "METHOD path PROTO" status bytes
//
// Only page views survive parsing: GET requests with a 2xx/3xx status for a
// path that is not an embedded asset. Everything else is reported as a skip.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "wum/types.h"

namespace wum::clf {

struct LogEntry {
  std::string user_id;  // remote host, normally an IP address
  Timestamp timestamp = 0;
  std::string page;  // canonical path
  int status = 0;
  std::size_t raw_line_no = 0;

  friend bool operator==(const LogEntry&, const LogEntry&) = default;
};

struct Skipped {
  std::size_t line_no = 0;
  std::string reason;
};

struct ParseError {
  std::size_t line_no = 0;
  std::string message;
};

using ParseResult = std::variant<LogEntry, Skipped, ParseError>;

struct FilterOptions {
  std::set<std::string> methods = {"GET"};
  int min_status = 200;
  int max_status = 399;
  // Lowercase, without the dot.
  std::set<std::string> asset_extensions = {"gif", "jpg", "jpeg", "png",
                                            "css", "js",  "ico"};
};

ParseResult parse_line(std::string_view line, std::size_t line_no,
                       const FilterOptions& options = {});

// Strips query and fragment, drops a scheme://host prefix, collapses
// duplicate slashes and maps a trailing /index.html to /. Returns nullopt when
// nothing usable remains.
std::optional<std::string> canonicalize_path(std::string_view target);

// Parses "dd/Mon/yyyy:HH:MM:SS +hhmm" into UTC seconds. Years outside
// 1990..2100 are rejected.
std::optional<Timestamp> parse_timestamp(std::string_view text);

// Formats a UTC instant as "dd/Mon/yyyy:HH:MM:SS +0000".
std::string format_timestamp(Timestamp t);

// Writes `entry` back as one CLF line (no trailing newline). The byte count
// is not retained by parsing and is written as "-".
std::string format_line(const LogEntry& entry);

struct Diagnostic {
  std::size_t line_no = 0;
  bool is_error = false;
  std::string message;
};

struct ParsedLog {
  std::vector<LogEntry> entries;
  std::vector<Diagnostic> diagnostics;
  std::size_t lines_read = 0;
};

ParsedLog parse_stream(std::istream& in, const FilterOptions& options = {});

// Plain or gzip-compressed file.
ParsedLog parse_file(const std::filesystem::path& path,
                     const FilterOptions& options = {});

struct UserStream {
  std::string user_id;
  std::vector<LogEntry> entries;  // sorted by (timestamp, raw_line_no)
};

// One stream per distinct user, ordered by user id.
std::vector<UserStream> group_by_user(std::vector<LogEntry> entries);

// Maps "/P13", "/p13.html", "/P13.htm" to P13.
std::optional<PageId> page_from_path(std::string_view path);

// The path the simulator writes for a page.
std::string path_for_page(PageId page);

// Resolves every entry's path to a PageId. Entries that do not resolve are
// dropped and reported in `diagnostics` when it is non-null.
VisitStream to_visit_stream(const UserStream& stream,
                            std::vector<Diagnostic>* diagnostics = nullptr);

}  // namespace wum::clf

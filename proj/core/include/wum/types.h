#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wum {

// Seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

// Identifies one static page. Pages are written as "P<value>" in every text
// format this library reads or writes.
struct PageId {
  std::uint32_t value = 0;

  friend constexpr auto operator<=>(PageId, PageId) = default;
};

std::string to_string(PageId page);

// Parses "P<digits>" (also accepts a lowercase 'p'). Returns nullopt for
// anything else.
std::optional<PageId> parse_page_id(std::string_view text);

// A single page view: which page and when.
struct Visit {
  PageId page;
  Timestamp time = 0;

  friend constexpr bool operator==(const Visit&, const Visit&) = default;
};

// An ordered list of page visits attributed to one user. Used for ground
// truth sessions, candidate sessions and reconstructed sessions alike.
struct Session {
  std::string user;
  std::vector<Visit> visits;

  std::vector<PageId> pages() const;
  std::size_t size() const { return visits.size(); }
  bool empty() const { return visits.empty(); }

  friend bool operator==(const Session&, const Session&) = default;
};

// Per-user request stream with page ids resolved, sorted by time.
struct VisitStream {
  std::string user;
  std::vector<Visit> visits;
};

// Raised for malformed input files. `line()` is 1-based, 0 when the error is
// not tied to a line.
class FormatError : public std::runtime_error {
 public:
  FormatError(std::size_t line, const std::string& message);

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// True iff `needle` occurs as a contiguous run inside `haystack`.
bool is_subsession(std::span<const PageId> needle,
                   std::span<const PageId> haystack);

}  // namespace wum

template <>
struct std::hash<wum::PageId> {
  std::size_t operator()(wum::PageId p) const noexcept {
    return std::hash<std::uint32_t>{}(p.value);
  }
};

#include "wum/types.h"

#include <algorithm>
#include <charconv>

namespace wum {

std::string to_string(PageId page) {
  return "P" + std::to_string(page.value);
}

std::optional<PageId> parse_page_id(std::string_view text) {
  if (text.size() < 2 || (text[0] != 'P' && text[0] != 'p')) {
    return std::nullopt;
  }
  std::uint32_t value = 0;
  const char* first = text.data() + 1;
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    return std::nullopt;
  }
  return PageId{value};
}

std::vector<PageId> Session::pages() const {
  std::vector<PageId> out;
  out.reserve(visits.size());
  for (const Visit& v : visits) {
    out.push_back(v.page);
  }
  return out;
}

FormatError::FormatError(std::size_t line, const std::string& message)
    : std::runtime_error(line == 0 ? message
                                   : "line " + std::to_string(line) + ": " +
                                         message),
      line_(line) {}

bool is_subsession(std::span<const PageId> needle,
                   std::span<const PageId> haystack) {
  if (needle.empty()) {
    return true;
  }
  return std::search(haystack.begin(), haystack.end(), needle.begin(),
                     needle.end()) != haystack.end();
}

}  // namespace wum

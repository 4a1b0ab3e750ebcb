#include "wum/clf.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <istream>
#include <map>

#include "wum/text_reader.h"

namespace wum::clf {
namespace {

constexpr std::array<std::string_view, 12> kMonths = {
    "Jan", "Feb", "Mar", "Apr", "May", "Jun",
    "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

bool is_space(char c) { return c == ' ' || c == '\t'; }

char lower(char c) {
  return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

bool iequals_prefix(std::string_view text, std::string_view prefix) {
  if (text.size() < prefix.size()) {
    return false;
  }
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (lower(text[i]) != lower(prefix[i])) {
      return false;
    }
  }
  return true;
}

template <typename Int>
bool parse_int(std::string_view text, Int& out) {
  if (text.empty()) {
    return false;
  }
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

// Cursor over one log line.
class Scanner {
 public:
  explicit Scanner(std::string_view line) : line_(line) {}

  void skip_spaces() {
    while (pos_ < line_.size() && is_space(line_[pos_])) {
      ++pos_;
    }
  }

  bool at_end() {
    skip_spaces();
    return pos_ >= line_.size();
  }

  std::optional<std::string_view> token() {
    skip_spaces();
    std::size_t start = pos_;
    while (pos_ < line_.size() && !is_space(line_[pos_])) {
      ++pos_;
    }
    if (start == pos_) {
      return std::nullopt;
    }
    return line_.substr(start, pos_ - start);
  }

  std::optional<std::string_view> bracketed() {
    skip_spaces();
    if (pos_ >= line_.size() || line_[pos_] != '[') {
      return std::nullopt;
    }
    std::size_t close = line_.find(']', pos_ + 1);
    if (close == std::string_view::npos) {
      return std::nullopt;
    }
    std::string_view inside = line_.substr(pos_ + 1, close - pos_ - 1);
    pos_ = close + 1;
    return inside;
  }

  // Quoted field with backslash escapes.
  std::optional<std::string> quoted() {
    skip_spaces();
    if (pos_ >= line_.size() || line_[pos_] != '"') {
      return std::nullopt;
    }
    std::string out;
    for (std::size_t i = pos_ + 1; i < line_.size(); ++i) {
      char c = line_[i];
      if (c == '\\' && i + 1 < line_.size()) {
        out.push_back(line_[++i]);
      } else if (c == '"') {
        pos_ = i + 1;
        return out;
      } else {
        out.push_back(c);
      }
    }
    return std::nullopt;
  }

 private:
  std::string_view line_;
  std::size_t pos_ = 0;
};

bool is_asset(std::string_view path, const std::set<std::string>& extensions) {
  std::size_t slash = path.rfind('/');
  std::string_view last = slash == std::string_view::npos
                              ? path
                              : path.substr(slash + 1);
  std::size_t dot = last.rfind('.');
  if (dot == std::string_view::npos) {
    return false;
  }
  std::string ext(last.substr(dot + 1));
  std::transform(ext.begin(), ext.end(), ext.begin(), lower);
  return extensions.contains(ext);
}

}  // namespace

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  // dd/Mon/yyyy:HH:MM:SS +hhmm
  if (text.size() != 26 || text[2] != '/' || text[6] != '/' ||
      text[11] != ':' || text[14] != ':' || text[17] != ':' ||
      text[20] != ' ') {
    return std::nullopt;
  }
  unsigned day = 0, hour = 0, minute = 0, second = 0;
  int year = 0;
  if (!parse_int(text.substr(0, 2), day) ||
      !parse_int(text.substr(7, 4), year) ||
      !parse_int(text.substr(12, 2), hour) ||
      !parse_int(text.substr(15, 2), minute) ||
      !parse_int(text.substr(18, 2), second)) {
    return std::nullopt;
  }
  auto month_it = std::find(kMonths.begin(), kMonths.end(), text.substr(3, 3));
  if (month_it == kMonths.end()) {
    return std::nullopt;
  }
  unsigned month = static_cast<unsigned>(month_it - kMonths.begin()) + 1;
  if (year < 1990 || year > 2100 || hour > 23 || minute > 59 || second > 60) {
    return std::nullopt;
  }
  char sign = text[21];
  unsigned zone_h = 0, zone_m = 0;
  if ((sign != '+' && sign != '-') || !parse_int(text.substr(22, 2), zone_h) ||
      !parse_int(text.substr(24, 2), zone_m) || zone_h > 23 || zone_m > 59) {
    return std::nullopt;
  }

  using namespace std::chrono;
  year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                     std::chrono::day{day}};
  if (!ymd.ok()) {
    return std::nullopt;
  }
  Timestamp local = sys_days{ymd}.time_since_epoch().count() * 86400LL +
                    hour * 3600LL + minute * 60LL + second;
  Timestamp offset = zone_h * 3600LL + zone_m * 60LL;
  return sign == '+' ? local - offset : local + offset;
}

std::string format_timestamp(Timestamp t) {
  using namespace std::chrono;
  Timestamp days = t >= 0 ? t / 86400 : (t - 86399) / 86400;
  Timestamp secs = t - days * 86400;
  year_month_day ymd{sys_days{std::chrono::days{days}}};
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%02u/%s/%04d:%02lld:%02lld:%02lld +0000",
                static_cast<unsigned>(ymd.day()),
                kMonths[static_cast<unsigned>(ymd.month()) - 1].data(),
                static_cast<int>(ymd.year()),
                static_cast<long long>(secs / 3600),
                static_cast<long long>((secs / 60) % 60),
                static_cast<long long>(secs % 60));
  return buf;
}

std::optional<std::string> canonicalize_path(std::string_view target) {
  if (iequals_prefix(target, "http://") || iequals_prefix(target, "https://")) {
    std::size_t host_start = target.find("//") + 2;
    std::size_t slash = target.find('/', host_start);
    target = slash == std::string_view::npos ? std::string_view("/")
                                             : target.substr(slash);
  }
  std::size_t cut = target.find_first_of("?#");
  if (cut != std::string_view::npos) {
    target = target.substr(0, cut);
  }
  if (target.empty() || target.front() != '/') {
    return std::nullopt;
  }
  std::string out;
  out.reserve(target.size());
  for (char c : target) {
    if (c == '/' && !out.empty() && out.back() == '/') {
      continue;
    }
    out.push_back(c);
  }
  constexpr std::string_view kIndex = "/index.html";
  if (out.size() >= kIndex.size() &&
      out.compare(out.size() - kIndex.size(), kIndex.size(), kIndex) == 0) {
    out.resize(out.size() - kIndex.size() + 1);
  }
  return out;
}

ParseResult parse_line(std::string_view line, std::size_t line_no,
                       const FilterOptions& options) {
  auto fail = [&](std::string message) -> ParseResult {
    return ParseError{line_no, std::move(message)};
  };

  Scanner scan(line);
  auto host = scan.token();
  auto ident = scan.token();
  auto authuser = scan.token();
  if (!host || !ident || !authuser) {
    return fail("too few fields");
  }
  auto stamp_text = scan.bracketed();
  if (!stamp_text) {
    return fail("missing [timestamp]");
  }
  auto stamp = parse_timestamp(*stamp_text);
  if (!stamp) {
    return fail("unparseable timestamp '" + std::string(*stamp_text) + "'");
  }
  auto request = scan.quoted();
  if (!request) {
    return fail("request line is not quoted");
  }
  auto status_text = scan.token();
  auto bytes_text = scan.token();
  if (!status_text || !bytes_text) {
    return fail("too few fields");
  }
  if (!scan.at_end()) {
    return fail("too many fields");
  }
  int status = 0;
  if (!parse_int(*status_text, status) || status < 100 || status > 999) {
    return fail("bad status '" + std::string(*status_text) + "'");
  }
  long long bytes = 0;
  if (*bytes_text != "-" && !parse_int(*bytes_text, bytes)) {
    return fail("bad byte count '" + std::string(*bytes_text) + "'");
  }

  Scanner req(*request);
  auto method = req.token();
  auto target = req.token();
  auto protocol = req.token();
  if (!method || !target || !req.at_end()) {
    return fail("malformed request line '" + *request + "'");
  }
  (void)protocol;  // HTTP/0.9 lines omit it
  auto page = canonicalize_path(*target);
  if (!page) {
    return fail("unusable request target '" + std::string(*target) + "'");
  }

  if (!options.methods.contains(std::string(*method))) {
    return Skipped{line_no, "method " + std::string(*method)};
  }
  if (status < options.min_status || status > options.max_status) {
    return Skipped{line_no, "status " + std::to_string(status)};
  }
  if (is_asset(*page, options.asset_extensions)) {
    return Skipped{line_no, "asset " + *page};
  }
  return LogEntry{std::string(*host), *stamp, std::move(*page), status,
                  line_no};
}

std::string format_line(const LogEntry& entry) {
  return entry.user_id + " - - [" + format_timestamp(entry.timestamp) +
         "] \"GET " + entry.page + " HTTP/1.0\" " +
         std::to_string(entry.status) + " -";
}

namespace {

template <typename NextLine>
ParsedLog parse_lines(NextLine&& next_line, const FilterOptions& options) {
  ParsedLog out;
  std::string line;
  std::size_t line_no = 0;
  while (next_line(line, line_no)) {
    ++out.lines_read;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    ParseResult r = parse_line(line, line_no, options);
    if (auto* e = std::get_if<LogEntry>(&r)) {
      out.entries.push_back(std::move(*e));
    } else if (auto* s = std::get_if<Skipped>(&r)) {
      out.diagnostics.push_back({s->line_no, false, std::move(s->reason)});
    } else {
      auto& err = std::get<ParseError>(r);
      out.diagnostics.push_back({err.line_no, true, std::move(err.message)});
    }
  }
  return out;
}

}  // namespace

ParsedLog parse_stream(std::istream& in, const FilterOptions& options) {
  return parse_lines(
      [&](std::string& line, std::size_t& line_no) {
        if (!std::getline(in, line)) {
          return false;
        }
        if (!line.empty() && line.back() == '\r') {
          line.pop_back();
        }
        ++line_no;
        return true;
      },
      options);
}

ParsedLog parse_file(const std::filesystem::path& path,
                     const FilterOptions& options) {
  TextReader reader(path);
  return parse_lines(
      [&](std::string& line, std::size_t& line_no) {
        if (!reader.next(line)) {
          return false;
        }
        line_no = reader.line_no();
        return true;
      },
      options);
}

std::vector<UserStream> group_by_user(std::vector<LogEntry> entries) {
  std::map<std::string, std::vector<LogEntry>> by_user;
  for (LogEntry& e : entries) {
    by_user[e.user_id].push_back(std::move(e));
  }
  std::vector<UserStream> out;
  out.reserve(by_user.size());
  for (auto& [user, list] : by_user) {
    std::sort(list.begin(), list.end(),
              [](const LogEntry& a, const LogEntry& b) {
                return a.timestamp != b.timestamp
                           ? a.timestamp < b.timestamp
                           : a.raw_line_no < b.raw_line_no;
              });
    out.push_back({user, std::move(list)});
  }
  return out;
}

std::optional<PageId> page_from_path(std::string_view path) {
  if (path.empty() || path.front() != '/') {
    return std::nullopt;
  }
  path.remove_prefix(1);
  for (std::string_view ext : {".html", ".htm"}) {
    if (path.size() > ext.size() &&
        iequals_prefix(path.substr(path.size() - ext.size()), ext)) {
      path.remove_suffix(ext.size());
      break;
    }
  }
  return parse_page_id(path);
}

std::string path_for_page(PageId page) {
  return "/" + to_string(page) + ".html";
}

VisitStream to_visit_stream(const UserStream& stream,
                            std::vector<Diagnostic>* diagnostics) {
  VisitStream out{stream.user_id, {}};
  out.visits.reserve(stream.entries.size());
  for (const LogEntry& e : stream.entries) {
    if (auto page = page_from_path(e.page)) {
      out.visits.push_back({*page, e.timestamp});
    } else if (diagnostics != nullptr) {
      diagnostics->push_back(
          {e.raw_line_no, false, "no page id for path " + e.page});
    }
  }
  return out;
}

}  // namespace wum::clf

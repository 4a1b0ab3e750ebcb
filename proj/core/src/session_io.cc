#include "wum/session_io.h"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace wum {

std::string format_session(const Session& session) {
  std::string out = session.user;
  out += '\t';
  for (std::size_t i = 0; i < session.visits.size(); ++i) {
    if (i > 0) {
      out += ',';
    }
    out += to_string(session.visits[i].page);
    out += '@';
    out += std::to_string(session.visits[i].time);
  }
  return out;
}

Session parse_session(std::string_view line, std::size_t line_no) {
  std::size_t tab = line.find('\t');
  if (tab == std::string_view::npos) {
    throw FormatError(line_no, "expected '<user>\\t<visits>'");
  }
  Session s{std::string(line.substr(0, tab)), {}};
  if (s.user.empty()) {
    throw FormatError(line_no, "empty user field");
  }
  std::string_view rest = line.substr(tab + 1);
  if (rest.empty()) {
    throw FormatError(line_no, "session has no visits");
  }
  std::size_t start = 0;
  while (true) {
    std::size_t comma = rest.find(',', start);
    std::string_view item = rest.substr(
        start, comma == std::string_view::npos ? std::string_view::npos
                                               : comma - start);
    std::size_t at = item.find('@');
    if (at == std::string_view::npos) {
      throw FormatError(line_no, "visit '" + std::string(item) +
                                     "' is not P<i>@<epoch>");
    }
    auto page = parse_page_id(item.substr(0, at));
    Timestamp t = 0;
    std::string_view time = item.substr(at + 1);
    auto [ptr, ec] = std::from_chars(time.data(), time.data() + time.size(), t);
    if (!page || ec != std::errc{} || ptr != time.data() + time.size()) {
      throw FormatError(line_no, "visit '" + std::string(item) +
                                     "' is not P<i>@<epoch>");
    }
    s.visits.push_back({*page, t});
    if (comma == std::string_view::npos) {
      break;
    }
    start = comma + 1;
  }
  return s;
}

void write_sessions(std::ostream& out, std::span<const Session> sessions) {
  for (const Session& s : sessions) {
    out << format_session(s) << '\n';
  }
}

std::vector<Session> read_sessions(std::istream& in) {
  std::vector<Session> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    out.push_back(parse_session(line, line_no));
  }
  return out;
}

void save_sessions(std::span<const Session> sessions,
                   const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  write_sessions(out, sessions);
}

std::vector<Session> load_sessions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  return read_sessions(in);
}

}  // namespace wum

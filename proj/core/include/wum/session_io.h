#pragma once

// Session text format, one session per line:
//
//   <user><TAB>P<i>@<epoch>,P<j>@<epoch>,...
//
// Shared by simulator ground truth and reconstructed sessions.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wum/types.h"

namespace wum {

std::string format_session(const Session& session);

// Throws FormatError (with `line_no`) on malformed input or an empty
// session.
Session parse_session(std::string_view line, std::size_t line_no = 0);

void write_sessions(std::ostream& out, std::span<const Session> sessions);
std::vector<Session> read_sessions(std::istream& in);

void save_sessions(std::span<const Session> sessions,
                   const std::filesystem::path& path);
std::vector<Session> load_sessions(const std::filesystem::path& path);

}  // namespace wum

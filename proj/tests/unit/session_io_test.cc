#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "fixtures.h"
#include "wum/session_io.h"

namespace wum {
namespace {

using testing::pages_of;

TEST(SessionIo, Format) {
  Session s{"17", {{PageId{1}, 1136073600}, {PageId{20}, 1136073660}}};
  EXPECT_EQ(format_session(s), "17\tP1@1136073600,P20@1136073660");
  EXPECT_EQ(parse_session(format_session(s)), s);
}

TEST(SessionIo, RoundTripFile) {
  std::vector<Session> sessions = testing::example_sessions();
  sessions.push_back({"10.0.0.1", {{PageId{5}, -3}}});
  auto path = std::filesystem::temp_directory_path() / "wum_sessions_rt.txt";
  save_sessions(sessions, path);
  EXPECT_EQ(load_sessions(path), sessions);
  std::filesystem::remove(path);
}

TEST(SessionIo, Errors) {
  for (const char* bad : {"no tab here", "\tP1@1", "u\t", "u\tP1", "u\tP1@", "u\tX1@5",
                          "u\tP1@5,", "u\tP1@5x"}) {
    EXPECT_THROW(parse_session(bad, 4), FormatError) << bad;
  }
  std::istringstream in("a\tP1@1\n\nb\tbroken\n");
  try {
    (void)read_sessions(in);
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

}  // namespace
}  // namespace wum

#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <string>

namespace wum {

// Line reader for plain or gzip-compressed text files. Compression is
// detected from the stream content, not the file name.
class TextReader {
 public:
  explicit TextReader(const std::filesystem::path& path);
  ~TextReader();

  TextReader(TextReader&&) noexcept;
  TextReader& operator=(TextReader&&) noexcept;

  // Reads the next line without its terminator. Returns false at EOF.
  bool next(std::string& line);

  // 1-based number of the line last returned by next().
  std::size_t line_no() const { return line_no_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::size_t line_no_ = 0;
};

}  // namespace wum

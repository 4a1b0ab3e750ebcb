#include "wum/text_reader.h"

#include <zlib.h>

#include <stdexcept>

namespace wum {

struct TextReader::Impl {
  gzFile file = nullptr;
  char buffer[1 << 16];

  ~Impl() {
    if (file != nullptr) {
      gzclose(file);
    }
  }
};

TextReader::TextReader(const std::filesystem::path& path)
    : impl_(std::make_unique<Impl>()) {
  impl_->file = gzopen(path.c_str(), "rb");
  if (impl_->file == nullptr) {
    throw std::runtime_error("cannot open " + path.string());
  }
  gzbuffer(impl_->file, 1 << 17);
}

TextReader::~TextReader() = default;
TextReader::TextReader(TextReader&&) noexcept = default;
TextReader& TextReader::operator=(TextReader&&) noexcept = default;

bool TextReader::next(std::string& line) {
  line.clear();
  bool got_any = false;
  while (gzgets(impl_->file, impl_->buffer, sizeof(impl_->buffer)) != nullptr) {
    got_any = true;
    line.append(impl_->buffer);
    if (!line.empty() && line.back() == '\n') {
      line.pop_back();
      break;
    }
  }
  if (!got_any) {
    int err = 0;
    const char* msg = gzerror(impl_->file, &err);
    if (err != Z_OK && err != Z_STREAM_END) {
      throw std::runtime_error(std::string("read error: ") + msg);
    }
    return false;
  }
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  ++line_no_;
  return true;
}

}  // namespace wum

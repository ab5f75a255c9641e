#pragma once

#include <zlib.h>

#include <filesystem>
#include <fstream>
#include <memory>
#include <string>

namespace draftbots::detail {

/// Line-by-line reader over a plain or gzip-compressed file (chosen by extension).
class LineReader {
 public:
  explicit LineReader(const std::filesystem::path& path);
  ~LineReader();
  LineReader(const LineReader&) = delete;
  LineReader& operator=(const LineReader&) = delete;

  bool ok() const { return gz_ != nullptr || plain_.is_open(); }
  bool next(std::string& line);

 private:
  std::ifstream plain_;
  gzFile gz_ = nullptr;
};

}  // namespace draftbots::detail

#include "line_reader.hpp"

#include <array>

namespace draftbots::detail {

LineReader::LineReader(const std::filesystem::path& path) {
  if (path.extension() == ".gz") {
    gz_ = gzopen(path.c_str(), "rb");
  } else {
    plain_.open(path, std::ios::binary);
  }
}

LineReader::~LineReader() {
  if (gz_ != nullptr) gzclose(gz_);
}

bool LineReader::next(std::string& line) {
  line.clear();
  if (gz_ == nullptr) {
    if (!std::getline(plain_, line)) return false;
  } else {
    std::array<char, 8192> buf{};
    bool any = false;
    while (gzgets(gz_, buf.data(), static_cast<int>(buf.size())) != nullptr) {
      any = true;
      line.append(buf.data());
      if (!line.empty() && line.back() == '\n') break;
    }
    if (!any) return false;
    if (!line.empty() && line.back() == '\n') line.pop_back();
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

}  // namespace draftbots::detail

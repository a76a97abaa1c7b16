#include "anosov/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "anosov/errors.hpp"

namespace anosov {

std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw ConfigError("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_pgm(const std::string& path, int width, int height, const std::vector<std::uint8_t>& pixels) {
  if (static_cast<std::size_t>(width) * static_cast<std::size_t>(height) != pixels.size())
    throw ConfigError("pgm: pixel buffer does not match dimensions");
  std::string header = "P5 " + std::to_string(width) + " " + std::to_string(height) + " 255\n";
  std::string blob = header;
  blob.append(reinterpret_cast<const char*>(pixels.data()), pixels.size());
  write_file(path, blob);
}

}  // namespace anosov

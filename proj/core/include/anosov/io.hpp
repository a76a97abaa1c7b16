#pragma once

// small formatting / file helpers shared by the csv, ppm and report writers.
// all floating point output goes through fmt_g17 (shortest round-trippable
// form via %.17g) so files are reproducible byte for byte.

#include <cstdint>
#include <string>
#include <vector>

namespace anosov {

std::string fmt_g17(double v);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// 8-bit grayscale, binary P5; pixels row-major from the top row
void write_pgm(const std::string& path, int width, int height, const std::vector<std::uint8_t>& pixels);

}  // namespace anosov

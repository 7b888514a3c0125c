#pragma once

#include <string>

#include "gol/types.hpp"

namespace gol {

// GOHM heatmap file: 16-byte header (magic "GOHM", uint32 LE width, uint32 LE
// height, uint32 LE version = 1) followed by H*W little-endian float32 values,
// row-major, top row first.
void gohm_write(const std::string& path, const HeatmapGrid& grid);
HeatmapGrid gohm_read(const std::string& path);

}  // namespace gol

#include "gol/gohm.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace gol {

namespace {

constexpr char kMagic[4] = {'G', 'O', 'H', 'M'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ofstream& out, std::uint32_t v) {
  const unsigned char bytes[4] = {static_cast<unsigned char>(v & 0xff),
                                  static_cast<unsigned char>((v >> 8) & 0xff),
                                  static_cast<unsigned char>((v >> 16) & 0xff),
                                  static_cast<unsigned char>((v >> 24) & 0xff)};
  out.write(reinterpret_cast<const char*>(bytes), 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char bytes[4];
  in.read(reinterpret_cast<char*>(bytes), 4);
  return static_cast<std::uint32_t>(bytes[0]) | (static_cast<std::uint32_t>(bytes[1]) << 8) |
         (static_cast<std::uint32_t>(bytes[2]) << 16) |
         (static_cast<std::uint32_t>(bytes[3]) << 24);
}

}  // namespace

void gohm_write(const std::string& path, const HeatmapGrid& grid) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("gohm_write: cannot open " + path);
  }
  out.write(kMagic, 4);
  put_u32(out, static_cast<std::uint32_t>(grid.width));
  put_u32(out, static_cast<std::uint32_t>(grid.height));
  put_u32(out, kVersion);
  std::vector<float> row(grid.width);
  for (int i = 0; i < grid.height; ++i) {
    for (int j = 0; j < grid.width; ++j) {
      row[j] = static_cast<float>(grid.values(i, j));
    }
    out.write(reinterpret_cast<const char*>(row.data()), grid.width * sizeof(float));
  }
  if (!out) {
    throw std::runtime_error("gohm_write: write failure on " + path);
  }
}

HeatmapGrid gohm_read(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("gohm_read: cannot open " + path);
  }
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw std::runtime_error("gohm_read: bad magic in " + path);
  }
  const std::uint32_t w = get_u32(in);
  const std::uint32_t h = get_u32(in);
  const std::uint32_t version = get_u32(in);
  if (!in || version != kVersion) {
    throw std::runtime_error("gohm_read: unsupported version in " + path);
  }
  if (w == 0 || h == 0 || w > (1u << 20) || h > (1u << 20)) {
    throw std::runtime_error("gohm_read: implausible dimensions in " + path);
  }
  HeatmapGrid grid;
  grid.width = static_cast<int>(w);
  grid.height = static_cast<int>(h);
  grid.values.resize(grid.height, grid.width);
  std::vector<float> row(grid.width);
  for (int i = 0; i < grid.height; ++i) {
    in.read(reinterpret_cast<char*>(row.data()), grid.width * sizeof(float));
    if (!in) {
      throw std::runtime_error("gohm_read: truncated file " + path);
    }
    for (int j = 0; j < grid.width; ++j) {
      grid.values(i, j) = row[j];
    }
  }
  return grid;
}

}  // namespace gol

#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace scone {

/// Passability grid. Cell (r, c) is stored row-major; row 0 is the top line
/// of a `.map` file.
class GridMap {
 public:
  GridMap() = default;
  GridMap(int rows, int cols, bool passable = true);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  bool passable(int r, int c) const { return cells_[index(r, c)] != 0; }
  void set_passable(int r, int c, bool value) { cells_[index(r, c)] = value ? 1 : 0; }
  bool in_bounds(int r, int c) const noexcept { return r >= 0 && c >= 0 && r < rows_ && c < cols_; }

  /// Fill the rectangle [r0, r0+h) x [c0, c0+w) with `value`, clipped to the grid.
  void fill_block(int r0, int c0, int h, int w, bool value);

  bool operator==(const GridMap&) const = default;

 private:
  std::size_t index(int r, int c) const { return static_cast<std::size_t>(r) * cols_ + c; }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::uint8_t> cells_;
};

/// Characters treated as passable when reading Moving-AI style `.map` files.
inline constexpr std::string_view kDefaultPassable = ".G";

/// Parses the benchmark map format:
///   type octile / height H / width W / map / H rows of W characters.
/// Throws ParseError naming the offending line.
GridMap parse_map(std::istream& in, std::string_view passable_chars = kDefaultPassable);
GridMap load_map(const std::filesystem::path& path, std::string_view passable_chars = kDefaultPassable);

/// Renders with '.' for passable and '@' for blocked cells.
std::string render_map(const GridMap& grid);

}  // namespace scone

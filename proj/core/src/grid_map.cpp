#include "scone/grid_map.hpp"

#include <fstream>
#include <sstream>

#include "scone/error.hpp"

namespace scone {

GridMap::GridMap(int rows, int cols, bool passable)
    : rows_(rows), cols_(cols),
      cells_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), passable ? 1 : 0) {
  if (rows <= 0 || cols <= 0) throw InvalidInput("GridMap: dimensions must be positive");
}

void GridMap::fill_block(int r0, int c0, int h, int w, bool value) {
  for (int r = r0; r < r0 + h; ++r)
    for (int c = c0; c < c0 + w; ++c)
      if (in_bounds(r, c)) set_passable(r, c, value);
}

namespace {

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

int header_value(const std::string& line, std::string_view key, std::size_t lineno) {
  std::istringstream ss(line);
  std::string k;
  int v = 0;
  if (!(ss >> k) || k != key || !(ss >> v) || v <= 0)
    throw ParseError(lineno, "expected '" + std::string(key) + " <positive int>'");
  return v;
}

}  // namespace

GridMap parse_map(std::istream& in, std::string_view passable_chars) {
  std::string line;
  std::size_t lineno = 0;
  auto next_line = [&](const char* what) {
    if (!std::getline(in, line)) throw ParseError(lineno + 1, std::string("unexpected end of file, expected ") + what);
    ++lineno;
    line = strip_cr(line);
  };

  next_line("'type'");
  if (line.rfind("type", 0) != 0) throw ParseError(lineno, "expected 'type <name>'");
  next_line("'height'");
  const int height = header_value(line, "height", lineno);
  next_line("'width'");
  const int width = header_value(line, "width", lineno);
  next_line("'map'");
  if (line != "map") throw ParseError(lineno, "expected 'map'");

  GridMap grid(height, width, false);
  for (int r = 0; r < height; ++r) {
    next_line("a map row");
    if (static_cast<int>(line.size()) != width)
      throw ParseError(lineno, "row has " + std::to_string(line.size()) + " characters, expected " +
                                   std::to_string(width));
    for (int c = 0; c < width; ++c)
      grid.set_passable(r, c, passable_chars.find(line[static_cast<std::size_t>(c)]) != std::string_view::npos);
  }
  return grid;
}

GridMap load_map(const std::filesystem::path& path, std::string_view passable_chars) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open map file " + path.string());
  return parse_map(in, passable_chars);
}

std::string render_map(const GridMap& grid) {
  std::ostringstream out;
  out << "type octile\nheight " << grid.rows() << "\nwidth " << grid.cols() << "\nmap\n";
  for (int r = 0; r < grid.rows(); ++r) {
    for (int c = 0; c < grid.cols(); ++c) out << (grid.passable(r, c) ? '.' : '@');
    out << '\n';
  }
  return out.str();
}

}  // namespace scone

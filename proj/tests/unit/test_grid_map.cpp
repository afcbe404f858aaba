#include <gtest/gtest.h>

#include <sstream>

#include "scone/error.hpp"
#include "scone/grid_map.hpp"

using namespace scone;

TEST(GridMap, ParsesBenchmarkFormat) {
  std::istringstream in("type octile\nheight 2\nwidth 3\nmap\n.@G\nT..\n");
  const auto g = parse_map(in);
  EXPECT_EQ(g.rows(), 2);
  EXPECT_EQ(g.cols(), 3);
  EXPECT_TRUE(g.passable(0, 0));
  EXPECT_FALSE(g.passable(0, 1));
  EXPECT_TRUE(g.passable(0, 2));
  EXPECT_FALSE(g.passable(1, 0));
}

TEST(GridMap, CustomPassableSet) {
  std::istringstream in("type octile\nheight 1\nwidth 3\nmap\n.TS\n");
  const auto g = parse_map(in, ".S");
  EXPECT_TRUE(g.passable(0, 0));
  EXPECT_FALSE(g.passable(0, 1));
  EXPECT_TRUE(g.passable(0, 2));
}

TEST(GridMap, RenderRoundTrip) {
  GridMap g(4, 5);
  g.fill_block(1, 1, 2, 2, false);
  g.set_passable(3, 4, false);
  std::istringstream in(render_map(g));
  EXPECT_EQ(parse_map(in), g);
}

TEST(GridMap, ErrorsNameTheLine) {
  auto line_of = [](const std::string& text) -> std::size_t {
    std::istringstream in(text);
    try {
      parse_map(in);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("type octile\nheight x\n"), 2u);
  EXPECT_EQ(line_of("type octile\nheight 2\nwidth 2\nmap\n..\n.\n"), 6u);
  EXPECT_EQ(line_of("type octile\nheight 2\nwidth 2\nmap\n..\n"), 6u);
  EXPECT_EQ(line_of("octile\n"), 1u);
}

TEST(GridMap, FillBlockClips) {
  GridMap g(3, 3);
  g.fill_block(2, 2, 5, 5, false);
  EXPECT_FALSE(g.passable(2, 2));
  EXPECT_TRUE(g.passable(1, 2));
  EXPECT_THROW(GridMap(0, 3), InvalidInput);
}

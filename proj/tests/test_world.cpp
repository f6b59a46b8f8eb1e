#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "trustmaze/world.hpp"

using namespace trustmaze;

namespace {

// Test-side oracle: plain flood fill over the rendered grid, independent of
// Maze's own BFS.
std::map<std::pair<int, int>, int> oracle_distances(const std::string& grid, int sx, int sy) {
  std::vector<std::string> rows;
  size_t pos = 0;
  while (pos < grid.size()) {
    size_t nl = grid.find('\n', pos);
    if (nl == std::string::npos) nl = grid.size();
    if (nl > pos) rows.push_back(grid.substr(pos, nl - pos));
    pos = nl + 1;
  }
  std::map<std::pair<int, int>, int> dist;
  auto open = [&rows](int x, int y) {
    if (y < 0 || y >= static_cast<int>(rows.size())) return false;
    if (x < 0 || x >= static_cast<int>(rows[y].size())) return false;
    return rows[y][x] != '#';
  };
  if (!open(sx, sy)) return dist;
  std::deque<std::pair<int, int>> queue{{sx, sy}};
  dist[{sx, sy}] = 0;
  while (!queue.empty()) {
    auto [x, y] = queue.front();
    queue.pop_front();
    const int dx[] = {0, 1, 0, -1};
    const int dy[] = {-1, 0, 1, 0};
    for (int i = 0; i < 4; ++i) {
      int nx = x + dx[i], ny = y + dy[i];
      if (!open(nx, ny) || dist.count({nx, ny})) continue;
      dist[{nx, ny}] = dist[{x, y}] + 1;
      queue.push_back({nx, ny});
    }
  }
  return dist;
}

int count_char(const std::string& s, char c) {
  return static_cast<int>(std::count(s.begin(), s.end(), c));
}

}  // namespace

TEST_CASE("load_maze maps characters to cells") {
  Maze maze = Maze::load("###\n#SE\n###");
  CHECK(maze.width() == 3);
  CHECK(maze.height() == 3);
  REQUIRE(maze.starts().size() == 1);
  REQUIRE(maze.exits().size() == 1);
  CHECK(maze.starts()[0] == Position{1, 1});
  CHECK(maze.exits()[0] == Position{2, 1});
  CHECK(maze.at({0, 0}).kind == CellKind::Wall);
}

TEST_CASE("load_maze maps 'T' to one active red square") {
  Maze maze = Maze::load("####\n#ST#\n#.E#\n####");
  CHECK(maze.count_active_red() == 1);
  CHECK(maze.count_inactive_red() == 0);
  CHECK(maze.active_red_at({2, 1}));
}

TEST_CASE("load_maze rejects malformed input") {
  try {
    Maze::load("##\n###");
    FAIL("expected RaggedRows");
  } catch (const SimError& e) {
    CHECK(e.code() == ErrorCode::RaggedRows);
  }
  try {
    Maze::load("###\n#.E\n###");
    FAIL("expected NoStart");
  } catch (const SimError& e) {
    CHECK(e.code() == ErrorCode::NoStart);
  }
  try {
    Maze::load("###\n#.S\n###");
    FAIL("expected NoExit");
  } catch (const SimError& e) {
    CHECK(e.code() == ErrorCode::NoExit);
  }
  try {
    Maze::load("###\n#SX\n###");
    FAIL("expected UnknownChar");
  } catch (const SimError& e) {
    CHECK(e.code() == ErrorCode::UnknownChar);
    CHECK(std::string(e.what()).find("(2,1)") != std::string::npos);
  }
}

TEST_CASE("grid round-trip is bit-exact") {
  const char* text = "#####\n#S.T#\n#.#G#\n#..E#\n#####\n";
  Maze maze = Maze::load(text);
  CHECK(maze.render() == text);
  CHECK(Maze::load(maze.render()) == maze);

  Maze generated = Maze::generate(11, 11, 3, 2, 42);
  CHECK(Maze::load(generated.render()) == generated);
}

TEST_CASE("generate rejects bad parameters") {
  try {
    Maze::generate(4, 11, 0, 0, 1);
    FAIL("expected TooSmall");
  } catch (const SimError& e) {
    CHECK(e.code() == ErrorCode::TooSmall);
  }
  try {
    Maze::generate(3, 3, 0, 0, 1);
    FAIL("expected TooSmall");
  } catch (const SimError& e) {
    CHECK(e.code() == ErrorCode::TooSmall);
  }
  try {
    Maze::generate(5, 5, 100, 100, 1);
    FAIL("expected PlacementOverflow");
  } catch (const SimError& e) {
    CHECK(e.code() == ErrorCode::PlacementOverflow);
  }
}

TEST_CASE("generated maze is perfect: every open cell reachable from start") {
  Maze maze = Maze::generate(5, 5, 0, 0, 1);
  std::string grid = maze.render();
  auto dist = oracle_distances(grid, maze.starts()[0].x, maze.starts()[0].y);
  int open_cells = static_cast<int>(grid.size()) - count_char(grid, '#') - count_char(grid, '\n');
  CHECK(static_cast<int>(dist.size()) == open_cells);
}

TEST_CASE("generate is deterministic") {
  Maze a = Maze::generate(21, 21, 5, 3, 9);
  Maze b = Maze::generate(21, 21, 5, 3, 9);
  CHECK(a.render() == b.render());
  Maze c = Maze::generate(21, 21, 5, 3, 10);
  CHECK(a.render() != c.render());
}

TEST_CASE("bfs_distance agrees with the flood-fill oracle") {
  Maze maze = Maze::generate(21, 21, 5, 3, 7);
  Position start = maze.starts()[0];
  Position exit = maze.exits()[0];
  auto oracle = oracle_distances(maze.render(), start.x, start.y);
  REQUIRE(oracle.count({exit.x, exit.y}) == 1);
  auto got = maze.bfs_distance(start, exit);
  REQUIRE(got.has_value());
  CHECK(*got == oracle[{exit.x, exit.y}]);
}

TEST_CASE("wall_follow_step walks a corridor straight") {
  Maze maze = Maze::load("#####\n#S.E#\n#####");
  auto [pos, heading] = wall_follow_step(maze, {1, 1}, Heading::East, Hand::Left);
  CHECK(pos == Position{2, 1});
  CHECK(heading == Heading::East);
}

TEST_CASE("left-hand rule prefers the open left side") {
  // junction: heading East at (2,2), open to the North (left side)
  Maze maze = Maze::load("#####\n##.##\n#S.E#\n#####");
  auto [pos, heading] = wall_follow_step(maze, {2, 2}, Heading::East, Hand::Left);
  CHECK(heading == Heading::North);
  CHECK(pos == Position{2, 1});
}

TEST_CASE("blocked on all four sides reverses heading in place") {
  Maze maze = Maze::load("###\n#S#\n###\n#E#\n###");
  auto [pos, heading] = wall_follow_step(maze, {1, 1}, Heading::North, Hand::Right);
  CHECK(pos == Position{1, 1});
  CHECK(heading == Heading::South);
}

TEST_CASE("wall_follow_step never lands on a wall") {
  Maze maze = Maze::generate(11, 11, 4, 2, 3);
  Position pos = maze.starts()[0];
  Heading heading = Heading::North;
  for (int i = 0; i < 500; ++i) {
    auto [next, h] = wall_follow_step(maze, pos, heading, Hand::Left);
    CHECK(traversable(maze.at(next)));
    pos = next;
    heading = h;
  }
}

TEST_CASE("wall following reaches an exit in generated mazes (both hands, 100+ seeds)") {
  for (uint64_t seed = 1; seed <= 110; ++seed) {
    int size = seed % 2 == 0 ? 11 : 15;
    Maze maze = Maze::generate(size, size, 0, 0, seed);
    int budget = 4 * maze.open_cell_count();
    Hand hand = seed % 2 == 0 ? Hand::Left : Hand::Right;
    Position pos = maze.starts()[0];
    Heading heading = Heading::North;
    bool escaped = false;
    for (int step_count = 0; step_count < budget; ++step_count) {
      auto [next, h] = wall_follow_step(maze, pos, heading, hand);
      pos = next;
      heading = h;
      if (maze.at(pos).kind == CellKind::Exit) {
        escaped = true;
        break;
      }
    }
    CAPTURE(seed);
    CHECK(escaped);
  }
}

TEST_CASE("set_cell replaces cells and round-trips") {
  Maze maze = Maze::load("#####\n#S.E#\n#####");
  maze.set_cell({2, 1}, Cell{CellKind::RedSquare, true});
  CHECK(maze.at({2, 1}).kind == CellKind::RedSquare);
  CHECK(maze.active_red_at({2, 1}));
  maze.set_cell({2, 1}, Cell{CellKind::RedSquare, false});
  CHECK_FALSE(maze.active_red_at({2, 1}));
  CHECK(maze.at({2, 1}).kind == CellKind::RedSquare);

  try {
    maze.set_cell({99, 1}, Cell{});
    FAIL("expected OutOfBounds");
  } catch (const SimError& e) {
    CHECK(e.code() == ErrorCode::OutOfBounds);
  }
}

TEST_CASE("deactivating a red square reduces the active count by one") {
  Maze maze = Maze::generate(11, 11, 4, 0, 5);
  int before = maze.count_active_red();
  REQUIRE(before == 4);
  // find one by recounting the grid, like a collector pickup would
  for (int y = 0; y < maze.height() && before == maze.count_active_red(); ++y)
    for (int x = 0; x < maze.width(); ++x)
      if (maze.active_red_at({x, y})) {
        maze.set_cell({x, y}, Cell{CellKind::RedSquare, false});
        break;
      }
  CHECK(maze.count_active_red() == before - 1);
  CHECK(maze.count_inactive_red() == 1);
  CHECK(maze.count_active_red() + maze.count_inactive_red() == before);
}

TEST_CASE("bfs_next_step moves one cell along a shortest path") {
  Maze maze = Maze::load("#####\n#S.E#\n#####");
  auto next = maze.bfs_next_step({1, 1}, {3, 1});
  REQUIRE(next.has_value());
  CHECK(*next == Position{2, 1});
  CHECK_FALSE(maze.bfs_next_step({1, 1}, {1, 1}).has_value());
}

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "trustmaze/error.hpp"

namespace trustmaze {

struct Position {
  int x = 0;  // column, 0-based
  int y = 0;  // row, 0-based

  bool operator==(const Position&) const = default;
  bool operator<(const Position& o) const { return y != o.y ? y < o.y : x < o.x; }
};

// y grows downward (row index), so North is y-1.
enum class Heading : uint8_t { North, East, South, West };
enum class Hand : uint8_t { Left, Right };

Position step(Position pos, Heading heading);
Heading turn_left(Heading h);
Heading turn_right(Heading h);
Heading reverse(Heading h);
const char* to_string(Heading h);
const char* to_string(Hand h);
std::optional<Heading> heading_from_string(std::string_view s);
std::optional<Hand> hand_from_string(std::string_view s);

enum class CellKind : uint8_t { Path, Wall, RedSquare, Gate, Exit, Start };

struct Cell {
  CellKind kind = CellKind::Path;
  bool red_active = false;  // meaningful only for RedSquare

  bool operator==(const Cell&) const = default;
};

inline bool traversable(const Cell& c) { return c.kind != CellKind::Wall; }

// Maze file alphabet: '#' Wall, '.' Path, 'T' active RedSquare, 'G' Gate,
// 'S' Start, 'E' Exit. A deactivated red square renders as '.', so the
// bit-exact round-trip guarantee covers mazes in their loaded state.
class Maze {
 public:
  Maze() = default;

  static Maze load(std::string_view text);
  static Maze generate(int width, int height, int token_count, int gate_count, uint64_t seed);

  std::string render() const;

  int width() const { return width_; }
  int height() const { return height_; }
  bool in_bounds(Position p) const {
    return p.x >= 0 && p.x < width_ && p.y >= 0 && p.y < height_;
  }

  const Cell& at(Position p) const;          // throws OutOfBounds
  void set_cell(Position p, Cell c);         // throws OutOfBounds
  bool traversable_at(Position p) const {    // out of bounds counts as wall
    return in_bounds(p) && traversable(cells_[index(p)]);
  }
  bool active_red_at(Position p) const {
    if (!in_bounds(p)) return false;
    const Cell& c = cells_[index(p)];
    return c.kind == CellKind::RedSquare && c.red_active;
  }

  const std::vector<Position>& starts() const { return starts_; }
  const std::vector<Position>& exits() const { return exits_; }

  int open_cell_count() const;  // traversable cells
  int count_active_red() const;
  int count_inactive_red() const;

  // Shortest-path distance over traversable cells, 4-connected.
  std::optional<int> bfs_distance(Position from, Position to) const;
  // First step of a shortest path from -> to; nullopt if unreachable or from==to.
  std::optional<Position> bfs_next_step(Position from, Position to) const;

  bool operator==(const Maze&) const = default;

 private:
  int index(Position p) const { return p.y * width_ + p.x; }

  int width_ = 0;
  int height_ = 0;
  std::vector<Cell> cells_;
  std::vector<Position> starts_;
  std::vector<Position> exits_;
};

// One step of hand-on-wall movement: prefer the hand side, then straight,
// then the off side; blocked on all four sides reverses heading in place.
std::pair<Position, Heading> wall_follow_step(const Maze& maze, Position pos, Heading heading,
                                              Hand hand);

}  // namespace trustmaze

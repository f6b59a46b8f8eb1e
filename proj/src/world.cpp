#include "trustmaze/world.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "trustmaze/rng.hpp"

namespace trustmaze {

Position step(Position pos, Heading heading) {
  switch (heading) {
    case Heading::North: return {pos.x, pos.y - 1};
    case Heading::East: return {pos.x + 1, pos.y};
    case Heading::South: return {pos.x, pos.y + 1};
    case Heading::West: return {pos.x - 1, pos.y};
  }
  return pos;
}

Heading turn_left(Heading h) {
  return static_cast<Heading>((static_cast<int>(h) + 3) % 4);
}

Heading turn_right(Heading h) {
  return static_cast<Heading>((static_cast<int>(h) + 1) % 4);
}

Heading reverse(Heading h) {
  return static_cast<Heading>((static_cast<int>(h) + 2) % 4);
}

const char* to_string(Heading h) {
  switch (h) {
    case Heading::North: return "north";
    case Heading::East: return "east";
    case Heading::South: return "south";
    case Heading::West: return "west";
  }
  return "?";
}

const char* to_string(Hand h) { return h == Hand::Left ? "left" : "right"; }

std::optional<Heading> heading_from_string(std::string_view s) {
  for (Heading h : {Heading::North, Heading::East, Heading::South, Heading::West})
    if (s == to_string(h)) return h;
  return std::nullopt;
}

std::optional<Hand> hand_from_string(std::string_view s) {
  if (s == "left") return Hand::Left;
  if (s == "right") return Hand::Right;
  return std::nullopt;
}

namespace {

std::optional<Cell> cell_from_char(char c) {
  switch (c) {
    case '#': return Cell{CellKind::Wall, false};
    case '.': return Cell{CellKind::Path, false};
    case 'T': return Cell{CellKind::RedSquare, true};
    case 'G': return Cell{CellKind::Gate, false};
    case 'S': return Cell{CellKind::Start, false};
    case 'E': return Cell{CellKind::Exit, false};
    default: return std::nullopt;
  }
}

char char_from_cell(const Cell& c) {
  switch (c.kind) {
    case CellKind::Wall: return '#';
    case CellKind::Path: return '.';
    case CellKind::RedSquare: return c.red_active ? 'T' : '.';
    case CellKind::Gate: return 'G';
    case CellKind::Start: return 'S';
    case CellKind::Exit: return 'E';
  }
  return '?';
}

}  // namespace

Maze Maze::load(std::string_view text) {
  Maze maze;
  std::vector<std::string_view> lines;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw SimError(ErrorCode::RaggedRows, "empty maze text");

  maze.height_ = static_cast<int>(lines.size());
  maze.width_ = static_cast<int>(lines[0].size());
  for (int y = 0; y < maze.height_; ++y) {
    if (static_cast<int>(lines[y].size()) != maze.width_)
      throw SimError(ErrorCode::RaggedRows,
                     "row " + std::to_string(y) + " has length " +
                         std::to_string(lines[y].size()) + ", expected " +
                         std::to_string(maze.width_));
    for (int x = 0; x < maze.width_; ++x) {
      auto cell = cell_from_char(lines[y][x]);
      if (!cell)
        throw SimError(ErrorCode::UnknownChar, std::string("'") + lines[y][x] + "' at (" +
                                                   std::to_string(x) + "," + std::to_string(y) + ")");
      maze.cells_.push_back(*cell);
      if (cell->kind == CellKind::Start) maze.starts_.push_back({x, y});
      if (cell->kind == CellKind::Exit) maze.exits_.push_back({x, y});
    }
  }
  if (maze.starts_.empty()) throw SimError(ErrorCode::NoStart, "maze has no 'S' cell");
  if (maze.exits_.empty()) throw SimError(ErrorCode::NoExit, "maze has no 'E' cell");
  return maze;
}

std::string Maze::render() const {
  std::string out;
  out.reserve(static_cast<size_t>(height_) * (width_ + 1));
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) out.push_back(char_from_cell(cells_[index({x, y})]));
    out.push_back('\n');
  }
  return out;
}

const Cell& Maze::at(Position p) const {
  if (!in_bounds(p))
    throw SimError(ErrorCode::OutOfBounds,
                   "(" + std::to_string(p.x) + "," + std::to_string(p.y) + ")");
  return cells_[index(p)];
}

void Maze::set_cell(Position p, Cell c) {
  if (!in_bounds(p))
    throw SimError(ErrorCode::OutOfBounds,
                   "(" + std::to_string(p.x) + "," + std::to_string(p.y) + ")");
  Cell& slot = cells_[index(p)];
  if (slot.kind == CellKind::Start) {
    std::erase(starts_, p);
  } else if (slot.kind == CellKind::Exit) {
    std::erase(exits_, p);
  }
  slot = c;
  if (c.kind == CellKind::Start) starts_.push_back(p);
  if (c.kind == CellKind::Exit) exits_.push_back(p);
}

int Maze::open_cell_count() const {
  return static_cast<int>(std::count_if(cells_.begin(), cells_.end(),
                                        [](const Cell& c) { return traversable(c); }));
}

int Maze::count_active_red() const {
  return static_cast<int>(std::count_if(cells_.begin(), cells_.end(), [](const Cell& c) {
    return c.kind == CellKind::RedSquare && c.red_active;
  }));
}

int Maze::count_inactive_red() const {
  return static_cast<int>(std::count_if(cells_.begin(), cells_.end(), [](const Cell& c) {
    return c.kind == CellKind::RedSquare && !c.red_active;
  }));
}

std::optional<int> Maze::bfs_distance(Position from, Position to) const {
  if (!traversable_at(from) || !traversable_at(to)) return std::nullopt;
  if (from == to) return 0;
  std::vector<int> dist(cells_.size(), -1);
  std::deque<Position> queue{from};
  dist[index(from)] = 0;
  while (!queue.empty()) {
    Position p = queue.front();
    queue.pop_front();
    for (Heading h : {Heading::North, Heading::East, Heading::South, Heading::West}) {
      Position n = step(p, h);
      if (!traversable_at(n) || dist[index(n)] >= 0) continue;
      dist[index(n)] = dist[index(p)] + 1;
      if (n == to) return dist[index(n)];
      queue.push_back(n);
    }
  }
  return std::nullopt;
}

std::optional<Position> Maze::bfs_next_step(Position from, Position to) const {
  if (from == to || !traversable_at(from) || !traversable_at(to)) return std::nullopt;
  // BFS from the target so the parent pointers give the step out of `from`.
  std::vector<int> dist(cells_.size(), -1);
  std::deque<Position> queue{to};
  dist[index(to)] = 0;
  while (!queue.empty()) {
    Position p = queue.front();
    queue.pop_front();
    if (p == from) break;
    for (Heading h : {Heading::North, Heading::East, Heading::South, Heading::West}) {
      Position n = step(p, h);
      if (!traversable_at(n) || dist[index(n)] >= 0) continue;
      dist[index(n)] = dist[index(p)] + 1;
      queue.push_back(n);
    }
  }
  if (dist[index(from)] < 0) return std::nullopt;
  for (Heading h : {Heading::North, Heading::East, Heading::South, Heading::West}) {
    Position n = step(from, h);
    if (traversable_at(n) && dist[index(n)] == dist[index(from)] - 1) return n;
  }
  return std::nullopt;
}

Maze Maze::generate(int width, int height, int token_count, int gate_count, uint64_t seed) {
  if (width < 5 || height < 5 || width % 2 == 0 || height % 2 == 0)
    throw SimError(ErrorCode::TooSmall, "dimensions must be odd and >= 5, got " +
                                            std::to_string(width) + "x" + std::to_string(height));
  if (token_count < 0 || gate_count < 0)
    throw SimError(ErrorCode::PlacementOverflow, "negative placement count");

  Maze maze;
  maze.width_ = width;
  maze.height_ = height;
  maze.cells_.assign(static_cast<size_t>(width) * height, Cell{CellKind::Wall, false});

  Stream rng(mix64(seed));

  // Depth-first carving over the odd-coordinate lattice. The result is a
  // perfect maze: every pair of open cells is joined by exactly one path.
  Position start{1, height - 2};
  auto carve = [&](Position p) { maze.cells_[maze.index(p)] = Cell{CellKind::Path, false}; };
  std::vector<Position> stack{start};
  carve(start);
  while (!stack.empty()) {
    Position cur = stack.back();
    std::array<Heading, 4> dirs = {Heading::North, Heading::East, Heading::South, Heading::West};
    for (int i = 3; i > 0; --i) std::swap(dirs[i], dirs[rng.next_below(i + 1)]);
    bool advanced = false;
    for (Heading h : dirs) {
      Position mid = step(cur, h);
      Position next = step(mid, h);
      if (!maze.in_bounds(next) || next.x == 0 || next.y == 0 || next.x == width - 1 ||
          next.y == height - 1)
        continue;
      if (maze.cells_[maze.index(next)].kind != CellKind::Wall) continue;
      carve(mid);
      carve(next);
      stack.push_back(next);
      advanced = true;
      break;
    }
    if (!advanced) stack.pop_back();
  }

  // BFS from the start; used for the exit choice and the start region.
  std::vector<int> dist(maze.cells_.size(), -1);
  std::vector<Position> order;
  std::deque<Position> queue{start};
  dist[maze.index(start)] = 0;
  while (!queue.empty()) {
    Position p = queue.front();
    queue.pop_front();
    order.push_back(p);
    for (Heading h : {Heading::North, Heading::East, Heading::South, Heading::West}) {
      Position n = step(p, h);
      if (!maze.traversable_at(n) || dist[maze.index(n)] >= 0) continue;
      dist[maze.index(n)] = dist[maze.index(p)] + 1;
      queue.push_back(n);
    }
  }

  // Exit: breach the boundary wall next to the farthest open cell.
  Position far = start;
  for (Position p : order)
    if (dist[maze.index(p)] > dist[maze.index(far)]) far = p;
  Position exit_cell = far;
  for (Heading h : {Heading::West, Heading::North, Heading::East, Heading::South}) {
    Position b = step(far, h);
    if (b.x == 0 || b.y == 0 || b.x == width - 1 || b.y == height - 1) {
      exit_cell = b;
      break;
    }
  }
  if (exit_cell == far) {
    // farthest cell is interior; walk outward to the nearest boundary-adjacent open cell
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      for (Heading h : {Heading::West, Heading::North, Heading::East, Heading::South}) {
        Position b = step(*it, h);
        if (b.x == 0 || b.y == 0 || b.x == width - 1 || b.y == height - 1) {
          exit_cell = b;
          break;
        }
      }
      if (!(exit_cell == far)) break;
    }
  }
  maze.cells_[maze.index(exit_cell)] = Cell{CellKind::Exit, false};
  maze.exits_.push_back(exit_cell);

  // Start region: the carve origin plus its nearest open cells, bottom-left.
  int start_cells = std::min<int>(4, static_cast<int>(order.size()));
  for (int i = 0; i < start_cells; ++i) {
    maze.cells_[maze.index(order[i])] = Cell{CellKind::Start, false};
    maze.starts_.push_back(order[i]);
  }

  // Tokens and gates on distinct plain-path cells, seeded shuffle.
  std::vector<Position> open;
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      if (maze.cells_[maze.index({x, y})].kind == CellKind::Path) open.push_back({x, y});
  if (token_count + gate_count > static_cast<int>(open.size()))
    throw SimError(ErrorCode::PlacementOverflow,
                   std::to_string(token_count) + " tokens + " + std::to_string(gate_count) +
                       " gates > " + std::to_string(open.size()) + " free cells");
  for (size_t i = open.size() - 1; i > 0; --i) std::swap(open[i], open[rng.next_below(i + 1)]);
  int placed = 0;
  for (int i = 0; i < token_count; ++i, ++placed)
    maze.cells_[maze.index(open[placed])] = Cell{CellKind::RedSquare, true};
  for (int i = 0; i < gate_count; ++i, ++placed)
    maze.cells_[maze.index(open[placed])] = Cell{CellKind::Gate, false};

  std::sort(maze.starts_.begin(), maze.starts_.end());
  std::sort(maze.exits_.begin(), maze.exits_.end());
  return maze;
}

std::pair<Position, Heading> wall_follow_step(const Maze& maze, Position pos, Heading heading,
                                              Hand hand) {
  const Heading hand_side = hand == Hand::Left ? turn_left(heading) : turn_right(heading);
  const Heading off_side = hand == Hand::Left ? turn_right(heading) : turn_left(heading);
  for (Heading h : {hand_side, heading, off_side}) {
    Position next = step(pos, h);
    if (maze.traversable_at(next)) return {next, h};
  }
  Position back = step(pos, reverse(heading));
  if (maze.traversable_at(back)) return {back, reverse(heading)};
  return {pos, reverse(heading)};
}

}  // namespace trustmaze

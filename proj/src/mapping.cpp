#include "touchmap/mapping.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "csv_util.hpp"
#include "touchmap/errors.hpp"

namespace touchmap {

namespace {

// Inclusive index window of cells overlapping [p - r, p + r] on both axes.
struct CellWindow {
  int row_lo, row_hi, col_lo, col_hi;
};

CellWindow window_around(const GridFrame& f, Vec2 p, double r) {
  const auto [row_top, col_lo] = f.cell_of({p.x - r, p.y + r});
  const auto [row_bottom, col_hi] = f.cell_of({p.x + r, p.y - r});
  return {row_top, row_bottom, col_lo, col_hi};
}

std::uint8_t density_byte(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

std::uint8_t state_byte(CellState s) {
  switch (s) {
    case CellState::Obstacle: return 255;
    case CellState::Free: return 128;
    default: return 0;
  }
}

template <class T, class ToByte>
void write_pgm(const Grid<T>& grid, const std::filesystem::path& path, ToByte to_byte) {
  auto out = detail::open_for_writing(path, true);
  out << "P5\n" << grid.frame.cols << ' ' << grid.frame.rows << "\n255\n";
  std::vector<char> bytes;
  bytes.reserve(grid.cells.size());
  for (const T& v : grid.cells) bytes.push_back(static_cast<char>(to_byte(v)));
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  detail::finish_writing(out, path);
}

template <class T, class ToText>
void write_csv(const Grid<T>& grid, const std::filesystem::path& path, ToText to_text) {
  auto out = detail::open_for_writing(path);
  std::string line;
  for (int r = 0; r < grid.frame.rows; ++r) {
    line.clear();
    for (int c = 0; c < grid.frame.cols; ++c) {
      if (c > 0) line += ',';
      line += to_text(grid.at(r, c));
    }
    line += '\n';
    out << line;
  }
  detail::finish_writing(out, path);
}

template <class T, class FromText>
Grid<T> read_csv(const std::filesystem::path& path, const GridFrame& frame, FromText from_text) {
  const auto lines = detail::read_lines(path);
  if (lines.size() != static_cast<std::size_t>(frame.rows))
    throw ParseError(fmt::format("{}: expected {} rows, found {}", path.string(), frame.rows, lines.size()));
  Grid<T> grid(frame, T{});
  for (int r = 0; r < frame.rows; ++r) {
    const auto fields = detail::split_fields(lines[static_cast<std::size_t>(r)]);
    if (fields.size() != static_cast<std::size_t>(frame.cols))
      throw ParseError(fmt::format("{}:{}: expected {} columns, found {}", path.string(), r + 1, frame.cols,
                                   fields.size()));
    for (int c = 0; c < frame.cols; ++c)
      grid.at(r, c) = from_text(fields[static_cast<std::size_t>(c)], static_cast<std::size_t>(r + 1));
  }
  return grid;
}

}  // namespace

GridFrame GridFrame::covering(const AxisAlignedRect& bounds, double cell_size) {
  if (!(cell_size > 0.0)) throw InvalidParam(fmt::format("cell size must be positive, got {}", cell_size));
  // Snap ratios that are integral up to rounding noise (1.5 / 0.01).
  auto span_cells = [cell_size](double extent) {
    const double ratio = extent / cell_size;
    const double nearest = std::round(ratio);
    return static_cast<int>(std::abs(ratio - nearest) < 1e-9 ? nearest : std::ceil(ratio));
  };
  GridFrame f;
  f.origin = bounds.min;
  f.cell_size = cell_size;
  f.cols = std::max(1, span_cells(bounds.width()));
  f.rows = std::max(1, span_cells(bounds.height()));
  return f;
}

std::pair<int, int> GridFrame::cell_of(Vec2 p) const {
  const int col = std::clamp(static_cast<int>(std::floor((p.x - origin.x) / cell_size)), 0, cols - 1);
  const int level = std::clamp(static_cast<int>(std::floor((p.y - origin.y) / cell_size)), 0, rows - 1);
  return {rows - 1 - level, col};
}

AxisAlignedRect GridFrame::cell_rect(int row, int col) const {
  const int level = rows - 1 - row;
  const Vec2 lo{origin.x + col * cell_size, origin.y + level * cell_size};
  return {lo, lo + Vec2{cell_size, cell_size}};
}

Vec2 GridFrame::cell_center(int row, int col) const { return cell_rect(row, col).center(); }

std::vector<Vec2> aggregate(std::span<const std::vector<Vec2>> local_sets) {
  std::vector<Vec2> out;
  std::set<std::pair<double, double>> seen;
  for (const auto& set : local_sets)
    for (const Vec2& p : set)
      if (seen.insert({p.x, p.y}).second) out.push_back(p);
  return out;
}

TriStateGrid classify_grid(std::span<const std::vector<Vec2>> trajectories, std::span<const Vec2> global_points,
                           const World& world, double cell_size, double robot_radius) {
  TriStateGrid grid(GridFrame::covering(world.bounds, cell_size), CellState::Unexplored);
  const GridFrame& f = grid.frame;
  for (const auto& path : trajectories) {
    for (std::size_t i = 0; i < path.size(); ++i) {
      const Vec2 p = path[i];
      if (i > 0 && path[i - 1] == p) continue;  // parked robots repeat their pose
      const CellWindow w = window_around(f, p, robot_radius);
      for (int r = w.row_lo; r <= w.row_hi; ++r)
        for (int c = w.col_lo; c <= w.col_hi; ++c)
          if (distance_point_to_rect(p, f.cell_rect(r, c)) <= robot_radius) grid.at(r, c) = CellState::Free;
    }
  }
  for (const Vec2& o : global_points) {
    const auto [r, c] = f.cell_of(o);
    grid.at(r, c) = CellState::Obstacle;
  }
  return grid;
}

DensityGrid interpolate_map(std::span<const Vec2> global_points, const World& world, double cell_size,
                            double kernel_radius) {
  if (!(kernel_radius >= cell_size))
    throw InvalidParam(fmt::format("kernel radius {} must be at least the cell size {}", kernel_radius, cell_size));
  DensityGrid grid(GridFrame::covering(world.bounds, cell_size), 0.0);
  const GridFrame& f = grid.frame;

  // Fixed accumulation order makes the floating-point sums order-free.
  std::vector<Vec2> points(global_points.begin(), global_points.end());
  std::sort(points.begin(), points.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });

  for (const Vec2& p : points) {
    const CellWindow w = window_around(f, p, kernel_radius);
    for (int r = w.row_lo; r <= w.row_hi; ++r)
      for (int c = w.col_lo; c <= w.col_hi; ++c) {
        const double d = euclidean(p, f.cell_center(r, c));
        grid.at(r, c) += std::max(0.0, 1.0 - d / kernel_radius);
      }
  }
  const double peak = grid.cells.empty() ? 0.0 : *std::max_element(grid.cells.begin(), grid.cells.end());
  if (peak > 0.0)
    for (double& v : grid.cells) v = std::min(1.0, v / peak);
  return grid;
}

ExplorationMap build_exploration_map(std::vector<std::vector<Vec2>> local_sets,
                                     std::span<const std::vector<Vec2>> trajectories, const World& world,
                                     double cell_size, double robot_radius) {
  ExplorationMap map;
  map.global_set = aggregate(local_sets);
  map.grid = classify_grid(trajectories, map.global_set, world, cell_size, robot_radius);
  map.local_sets = std::move(local_sets);
  map.cell_size = cell_size;
  map.origin = map.grid.frame.origin;
  return map;
}

double coverage_fraction(const TriStateGrid& grid) {
  if (grid.cells.empty()) return 0.0;
  const auto known = std::count_if(grid.cells.begin(), grid.cells.end(),
                                   [](CellState s) { return s != CellState::Unexplored; });
  return static_cast<double>(known) / static_cast<double>(grid.cells.size());
}

const char* cell_state_name(CellState s) {
  switch (s) {
    case CellState::Obstacle: return "obstacle";
    case CellState::Free: return "free";
    default: return "unexplored";
  }
}

void export_grid(const TriStateGrid& grid, const std::filesystem::path& path, GridFormat format) {
  if (format == GridFormat::Pgm) return write_pgm(grid, path, state_byte);
  write_csv(grid, path, [](CellState s) { return std::string(cell_state_name(s)); });
}

void export_grid(const DensityGrid& grid, const std::filesystem::path& path, GridFormat format) {
  if (format == GridFormat::Pgm) return write_pgm(grid, path, density_byte);
  write_csv(grid, path, [](double v) { return fmt::format("{}", v); });
}

TriStateGrid read_tristate_csv(const std::filesystem::path& path, const GridFrame& frame) {
  return read_csv<CellState>(path, frame, [&path](std::string_view text, std::size_t line) {
    if (text == "obstacle") return CellState::Obstacle;
    if (text == "free") return CellState::Free;
    if (text == "unexplored") return CellState::Unexplored;
    throw ParseError(fmt::format("{}:{}: unknown cell state '{}'", path.string(), line, text));
  });
}

DensityGrid read_density_csv(const std::filesystem::path& path, const GridFrame& frame) {
  return read_csv<double>(path, frame, [&path](std::string_view text, std::size_t line) {
    return detail::parse_double(text, path, line);
  });
}

void write_points_csv(std::span<const std::vector<Vec2>> local_sets, const std::filesystem::path& path) {
  auto out = detail::open_for_writing(path);
  out << "robot_id,seq,x,y\n";
  for (std::size_t id = 0; id < local_sets.size(); ++id)
    for (std::size_t seq = 0; seq < local_sets[id].size(); ++seq)
      out << fmt::format("{},{},{},{}\n", id, seq, local_sets[id][seq].x, local_sets[id][seq].y);
  detail::finish_writing(out, path);
}

std::vector<std::vector<Vec2>> read_points_csv(const std::filesystem::path& path) {
  const auto lines = detail::read_lines(path);
  if (lines.empty() || lines.front() != "robot_id,seq,x,y")
    throw ParseError(fmt::format("{}:1: expected header robot_id,seq,x,y", path.string()));
  std::vector<std::vector<Vec2>> sets;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = detail::split_fields(lines[i]);
    if (f.size() != 4) throw ParseError(fmt::format("{}:{}: expected 4 fields", path.string(), i + 1));
    const auto id = detail::parse_int(f[0], path, i + 1);
    if (id < 0) throw ParseError(fmt::format("{}:{}: negative robot id", path.string(), i + 1));
    if (sets.size() <= static_cast<std::size_t>(id)) sets.resize(static_cast<std::size_t>(id) + 1);
    sets[static_cast<std::size_t>(id)].push_back(
        {detail::parse_double(f[2], path, i + 1), detail::parse_double(f[3], path, i + 1)});
  }
  return sets;
}

}  // namespace touchmap

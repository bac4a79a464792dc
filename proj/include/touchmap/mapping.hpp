#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "touchmap/geometry.hpp"
#include "touchmap/world.hpp"

namespace touchmap {

/// Placement of a regular grid over the workspace. Row 0 is the top row
/// (highest y) so that grids export as upright images; column 0 is the
/// lowest x.
struct GridFrame {
  Vec2 origin;  // lower-left corner of the covered area
  double cell_size{0.01};
  int cols{0};
  int rows{0};

  /// Smallest grid anchored at bounds.min that covers bounds. Throws
  /// InvalidParam for a non-positive cell size.
  static GridFrame covering(const AxisAlignedRect& bounds, double cell_size);

  std::size_t cell_count() const { return static_cast<std::size_t>(cols) * static_cast<std::size_t>(rows); }
  /// (row, col) of the cell holding p; points on or past the edge map to
  /// the nearest edge cell.
  std::pair<int, int> cell_of(Vec2 p) const;
  AxisAlignedRect cell_rect(int row, int col) const;
  Vec2 cell_center(int row, int col) const;

  bool operator==(const GridFrame&) const = default;
};

template <class T>
struct Grid {
  GridFrame frame;
  std::vector<T> cells;  // row-major

  Grid() = default;
  Grid(GridFrame f, T fill) : frame(f), cells(f.cell_count(), fill) {}

  T& at(int row, int col) { return cells[index(row, col)]; }
  const T& at(int row, int col) const { return cells[index(row, col)]; }

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(frame.cols) + static_cast<std::size_t>(col);
  }
};

enum class CellState : std::uint8_t { Unexplored, Free, Obstacle };

using TriStateGrid = Grid<CellState>;
using DensityGrid = Grid<double>;

/// Per-robot and merged obstacle points plus the tri-state classification.
struct ExplorationMap {
  std::vector<std::vector<Vec2>> local_sets;
  std::vector<Vec2> global_set;
  TriStateGrid grid;
  double cell_size{0.01};
  Vec2 origin;
};

/// Concatenates the local sets in robot then log order, dropping points whose
/// coordinates exactly repeat an earlier one.
std::vector<Vec2> aggregate(std::span<const std::vector<Vec2>> local_sets);

/// Cells within robot_radius of any trajectory point become Free; cells that
/// hold an obstacle point become Obstacle, overriding Free.
TriStateGrid classify_grid(std::span<const std::vector<Vec2>> trajectories, std::span<const Vec2> global_points,
                           const World& world, double cell_size, double robot_radius);

/// Triangular-kernel density of the points at cell centers, scaled so the
/// largest cell is 1. All zeros when there are no points. The result does not
/// depend on the order of the input points.
DensityGrid interpolate_map(std::span<const Vec2> global_points, const World& world, double cell_size,
                            double kernel_radius);

ExplorationMap build_exploration_map(std::vector<std::vector<Vec2>> local_sets,
                                     std::span<const std::vector<Vec2>> trajectories, const World& world,
                                     double cell_size, double robot_radius);

/// Fraction of cells that are not Unexplored.
double coverage_fraction(const TriStateGrid& grid);

enum class GridFormat { Pgm, Csv };

/// PGM is binary P5: Obstacle 255, Free 128, Unexplored 0; densities scale
/// to 0..255. CSV is one line per grid row. Throws IoError.
void export_grid(const TriStateGrid& grid, const std::filesystem::path& path, GridFormat format);
void export_grid(const DensityGrid& grid, const std::filesystem::path& path, GridFormat format);

/// Inverse of the CSV export. The frame must match the file's dimensions;
/// throws ParseError otherwise, IoError if the file cannot be read.
TriStateGrid read_tristate_csv(const std::filesystem::path& path, const GridFrame& frame);
DensityGrid read_density_csv(const std::filesystem::path& path, const GridFrame& frame);

/// Point cloud as CSV columns robot_id, seq, x, y.
void write_points_csv(std::span<const std::vector<Vec2>> local_sets, const std::filesystem::path& path);
std::vector<std::vector<Vec2>> read_points_csv(const std::filesystem::path& path);

const char* cell_state_name(CellState s);

}  // namespace touchmap

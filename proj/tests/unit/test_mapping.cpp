#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>

#include "touchmap/errors.hpp"
#include "touchmap/mapping.hpp"

using namespace touchmap;

namespace {

World arena() { return World{{{-0.75, -0.75}, {0.75, 0.75}}, {}, true}; }

std::filesystem::path scratch(const char* name) {
  const auto dir = std::filesystem::temp_directory_path() / "touchmap_mapping_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(GridFrame, CoversArenaAtDefaultResolution) {
  const auto f = GridFrame::covering(arena().bounds, 0.01);
  EXPECT_EQ(f.cols, 150);
  EXPECT_EQ(f.rows, 150);
  EXPECT_EQ(f.cell_of({-0.75, -0.75}), (std::pair{149, 0}));
  EXPECT_EQ(f.cell_of({0.75, 0.75}), (std::pair{0, 149}));
  EXPECT_EQ(f.cell_of({-0.745, 0.745}), (std::pair{0, 0}));
  const auto g = GridFrame::covering(arena().bounds, 0.4);
  EXPECT_EQ(g.cols, 4);
  EXPECT_THROW(GridFrame::covering(arena().bounds, 0.0), InvalidParam);
}

TEST(Aggregate, Examples) {
  const std::vector<std::vector<Vec2>> empty(3);
  EXPECT_TRUE(aggregate(empty).empty());
  const std::vector<std::vector<Vec2>> dup{{{1, 1}}, {{1, 1}}};
  EXPECT_EQ(aggregate(dup), (std::vector<Vec2>{{1, 1}}));
  const std::vector<std::vector<Vec2>> ordered{{{0, 1}, {0, 2}}, {{0, 3}, {0, 1}, {0, 4}}};
  EXPECT_EQ(aggregate(ordered), (std::vector<Vec2>{{0, 1}, {0, 2}, {0, 3}, {0, 4}}));
}

TEST(Aggregate, IdempotentAndBounded) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> cell(0, 20);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::vector<Vec2>> sets(4);
    std::size_t total = 0;
    for (auto& s : sets) {
      for (int k = 0; k < 15; ++k) s.push_back({cell(rng) * 0.01, cell(rng) * 0.01});
      total += s.size();
    }
    const auto once = aggregate(sets);
    const std::vector<std::vector<Vec2>> wrapped{once};
    EXPECT_EQ(aggregate(wrapped), once);
    EXPECT_LE(once.size(), total);
  }
}

TEST(ClassifyGrid, EmptyInputIsUnexplored) {
  const auto g = classify_grid({}, {}, arena(), 0.01, 0.037);
  EXPECT_TRUE(std::ranges::all_of(g.cells, [](CellState s) { return s == CellState::Unexplored; }));
  EXPECT_EQ(coverage_fraction(g), 0.0);
}

TEST(ClassifyGrid, StationaryRobotFreesIntersectingCells) {
  const std::vector<std::vector<Vec2>> traj{{{0, 0}}};
  const double radius = 0.037;
  const auto g = classify_grid(traj, {}, arena(), 0.01, radius);
  int free_cells = 0;
  for (int r = 0; r < g.frame.rows; ++r)
    for (int c = 0; c < g.frame.cols; ++c) {
      // Cell bounds computed here from the row/col convention.
      const double x0 = -0.75 + c * 0.01, x1 = x0 + 0.01;
      const double y0 = 0.75 - (r + 1) * 0.01, y1 = y0 + 0.01;
      const double dx = std::max({x0, 0.0, -x1});
      const double dy = std::max({y0, 0.0, -y1});
      const bool hits = std::hypot(dx, dy) <= radius;
      EXPECT_EQ(g.at(r, c) == CellState::Free, hits) << r << "," << c;
      free_cells += hits;
    }
  EXPECT_GT(free_cells, 0);
}

TEST(ClassifyGrid, ObstacleOverridesFree) {
  const std::vector<std::vector<Vec2>> traj{{{0, 0}}};
  const std::vector<Vec2> pts{{0.005, 0.005}};
  const auto g = classify_grid(traj, pts, arena(), 0.01, 0.037);
  const auto [r, c] = g.frame.cell_of({0.005, 0.005});
  EXPECT_EQ(g.at(r, c), CellState::Obstacle);
  EXPECT_EQ(g.at(r, c + 1), CellState::Free);
}

TEST(ClassifyGrid, ObstacleCellsMatchPoints) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-0.74, 0.74);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::vector<Vec2>> traj(2);
    std::vector<Vec2> pts;
    for (auto& t : traj)
      for (int k = 0; k < 10; ++k) t.push_back({u(rng), u(rng)});
    for (int k = 0; k < 10; ++k) pts.push_back({u(rng), u(rng)});
    const auto g = classify_grid(traj, pts, arena(), 0.05, 0.037);
    std::vector<char> holds(g.cells.size(), 0);
    for (const Vec2& p : pts) {
      const auto [r, c] = g.frame.cell_of(p);
      EXPECT_EQ(g.at(r, c), CellState::Obstacle);
      holds[static_cast<std::size_t>(r * g.frame.cols + c)] = 1;
    }
    for (std::size_t i = 0; i < g.cells.size(); ++i)
      if (g.cells[i] == CellState::Obstacle) EXPECT_TRUE(holds[i]);
  }
}

TEST(ClassifyGrid, CoverageGrowsWithTrajectoryPrefix) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> step(-0.02, 0.02);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Vec2> path{{0, 0}};
    for (int k = 0; k < 60; ++k) {
      const Vec2 last = path.back();
      path.push_back({std::clamp(last.x + step(rng), -0.7, 0.7), std::clamp(last.y + step(rng), -0.7, 0.7)});
    }
    double prev = 0.0;
    for (std::size_t n = 1; n <= path.size(); n += 7) {
      const std::vector<std::vector<Vec2>> traj{{path.begin(), path.begin() + static_cast<std::ptrdiff_t>(n)}};
      const double cov = coverage_fraction(classify_grid(traj, {}, arena(), 0.02, 0.037));
      EXPECT_GE(cov, prev);
      prev = cov;
    }
  }
}

TEST(InterpolateMap, NoPointsIsAllZero) {
  const auto g = interpolate_map({}, arena(), 0.01, 0.03);
  EXPECT_TRUE(std::ranges::all_of(g.cells, [](double v) { return v == 0.0; }));
}

TEST(InterpolateMap, SinglePointAtCellCenter) {
  const GridFrame f = GridFrame::covering(arena().bounds, 0.05);
  const Vec2 p = f.cell_center(10, 12);
  const std::vector<Vec2> pts{p};
  const auto g = interpolate_map(pts, arena(), 0.05, 0.05);
  EXPECT_DOUBLE_EQ(g.at(10, 12), 1.0);
  for (int r = 0; r < g.frame.rows; ++r)
    for (int c = 0; c < g.frame.cols; ++c)
      if (std::abs(r - 10) > 1 || std::abs(c - 12) > 1) {
        EXPECT_EQ(g.at(r, c), 0.0) << r << "," << c;
      } else if (r != 10 || c != 12) {
        EXPECT_NEAR(g.at(r, c), 0.0, 1e-12);  // one full kernel radius away
      }
}

TEST(InterpolateMap, WallSegmentMakesRidge) {
  std::vector<Vec2> pts;
  for (int k = 0; k < 100; ++k) pts.push_back({-0.7 + 1.4 * k / 99.0, -0.745});
  const auto g = interpolate_map(pts, arena(), 0.01, 0.03);
  const int bottom = g.frame.rows - 1;
  for (int c = 10; c < g.frame.cols - 10; ++c) {
    EXPECT_GT(g.at(bottom, c), 0.8) << c;
    for (int r = 0; r < bottom - 3; ++r) EXPECT_EQ(g.at(r, c), 0.0);
  }
  EXPECT_LE(*std::ranges::max_element(g.cells), 1.0);
  EXPECT_EQ(*std::ranges::max_element(g.cells), 1.0);
}

TEST(InterpolateMap, PermutationInvariant) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-0.75, 0.75);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Vec2> pts;
    for (int k = 0; k < 30; ++k) pts.push_back({u(rng), u(rng)});
    auto shuffled = pts;
    std::ranges::shuffle(shuffled, rng);
    EXPECT_EQ(interpolate_map(pts, arena(), 0.05, 0.1).cells, interpolate_map(shuffled, arena(), 0.05, 0.1).cells);
  }
}

TEST(InterpolateMap, KernelSmallerThanCellRejected) {
  EXPECT_THROW(interpolate_map({}, arena(), 0.05, 0.01), InvalidParam);
}

TEST(ExportGrid, TriStatePgmBytes) {
  TriStateGrid g(GridFrame{{0, 0}, 1.0, 2, 2}, CellState::Unexplored);
  g.at(0, 0) = CellState::Obstacle;
  g.at(0, 1) = CellState::Free;
  const auto path = scratch("tri.pgm");
  export_grid(g, path, GridFormat::Pgm);
  EXPECT_EQ(slurp(path), std::string("P5\n2 2\n255\n\xff\x80\x00\x00", 15));
}

TEST(ExportGrid, EmptyDensityIsBlack) {
  const auto g = interpolate_map({}, World{{{0, 0}, {0.03, 0.02}}, {}, true}, 0.01, 0.01);
  const auto path = scratch("dens.pgm");
  export_grid(g, path, GridFormat::Pgm);
  EXPECT_EQ(slurp(path), std::string("P5\n3 2\n255\n") + std::string(6, '\0'));
}

TEST(ExportGrid, CsvRoundTrips) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-0.75, 0.75);
  std::vector<Vec2> pts;
  for (int k = 0; k < 40; ++k) pts.push_back({u(rng), u(rng)});
  const std::vector<std::vector<Vec2>> traj{{{0, 0}, {0.3, 0.3}}};
  const auto density = interpolate_map(pts, arena(), 0.05, 0.1);
  const auto tri = classify_grid(traj, pts, arena(), 0.05, 0.037);
  export_grid(density, scratch("d.csv"), GridFormat::Csv);
  export_grid(tri, scratch("t.csv"), GridFormat::Csv);
  EXPECT_EQ(read_density_csv(scratch("d.csv"), density.frame).cells, density.cells);
  EXPECT_EQ(read_tristate_csv(scratch("t.csv"), tri.frame).cells, tri.cells);
  GridFrame wrong = tri.frame;
  wrong.rows += 1;
  EXPECT_THROW(read_tristate_csv(scratch("t.csv"), wrong), ParseError);
}

TEST(ExportGrid, UnwritablePathThrows) {
  const TriStateGrid g(GridFrame{{0, 0}, 1.0, 1, 1}, CellState::Free);
  EXPECT_THROW(export_grid(g, "/nonexistent-dir/x.pgm", GridFormat::Pgm), IoError);
}

TEST(PointsCsv, RoundTrips) {
  const std::vector<std::vector<Vec2>> sets{{{0.1, 0.2}, {-0.3, 0.123456789}}, {}, {{0.7, -0.7}}};
  write_points_csv(sets, scratch("pts.csv"));
  const auto back = read_points_csv(scratch("pts.csv"));
  ASSERT_GE(back.size(), 3u);
  EXPECT_EQ(back[0], sets[0]);
  EXPECT_TRUE(back[1].empty());
  EXPECT_EQ(back[2], sets[2]);
}

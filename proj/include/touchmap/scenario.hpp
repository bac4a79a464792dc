#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "touchmap/engine.hpp"
#include "touchmap/world.hpp"

namespace touchmap {

/// Current version of the JSON scenario format.
inline constexpr int kScenarioFormatVersion = 1;

struct Scenario {
  std::string name;
  World world;
  std::vector<Vec2> starts;
  SimConfig config;
  double start_jitter{0.0};  // m, seeded per-run perturbation of the starts
};

/// Parses a scenario document. Syntax errors raise ParseError with the line
/// and column; wrong or unknown fields raise ParseError naming the field
/// path; a well-formed scenario that fails run preconditions raises
/// InvalidScenario. `source` labels diagnostics.
Scenario parse_scenario(std::string_view text, std::string_view source = "<scenario>");
Scenario load_scenario(const std::filesystem::path& path);

/// Serializes every field, defaults included, so a saved copy reproduces the
/// run without the original file.
std::string scenario_to_json(const Scenario& s);

/// The scenario's starts perturbed by a uniform offset in
/// [-start_jitter, start_jitter]^2 drawn from `seed`. Draws are repeated
/// until the placement is valid; after 100 failures the unperturbed starts
/// are returned. Identical seeds give identical starts on every platform.
std::vector<Vec2> jittered_starts(const Scenario& s, std::span<const Vec2> starts, std::uint64_t seed);

}  // namespace touchmap

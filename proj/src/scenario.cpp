#include "touchmap/scenario.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "json_util.hpp"

namespace touchmap {

namespace detail {

Json parse_json(std::string_view text, std::string_view source) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError(fmt::format("{}:{}:{}: syntax error: {}", source, line, column, e.what()));
  }
}

const Json& require(const Json& obj, const char* key, std::string_view source, const std::string& path) {
  if (!obj.is_object()) field_error(source, path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) field_error(source, path.empty() ? key : path + "." + key, "is required");
  return *it;
}

double read_number(const Json& v, std::string_view source, const std::string& path) {
  if (!v.is_number()) field_error(source, path, "expected a number");
  return v.get<double>();
}

std::int64_t read_integer(const Json& v, std::string_view source, const std::string& path) {
  if (!v.is_number_integer()) field_error(source, path, "expected an integer");
  return v.get<std::int64_t>();
}

bool read_bool(const Json& v, std::string_view source, const std::string& path) {
  if (!v.is_boolean()) field_error(source, path, "expected true or false");
  return v.get<bool>();
}

Vec2 read_vec2(const Json& v, std::string_view source, const std::string& path) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    field_error(source, path, "expected [x, y]");
  const Vec2 p{v[0].get<double>(), v[1].get<double>()};
  if (!p.is_finite()) field_error(source, path, "coordinates must be finite");
  return p;
}

void apply_config(SimConfig& cfg, const Json& obj, std::string_view source, const std::string& path) {
  if (!obj.is_object()) field_error(source, path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    const std::string at = path + "." + key;
    auto num = [&] { return read_number(value, source, at); };
    auto integer = [&] { return read_integer(value, source, at); };
    auto flag = [&] { return read_bool(value, source, at); };
    if (key == "dt") cfg.dt = num();
    else if (key == "robot_radius") cfg.robot_radius = num();
    else if (key == "speed") cfg.speed = num();
    else if (key == "tactile_range") cfg.tactile_range = num();
    else if (key == "goal_radius") cfg.goal_radius = num();
    else if (key == "candidate_count") cfg.candidate_count = static_cast<int>(integer());
    else if (key == "beta") cfg.beta = num();
    else if (key == "gamma") cfg.gamma = num();
    else if (key == "redundancy_exponent") cfg.redundancy_exponent = static_cast<int>(integer());
    else if (key == "r_comm") cfg.r_comm = num();
    else if (key == "d_min") cfg.d_min = value.is_null() ? std::nullopt : std::optional<double>(num());
    else if (key == "points_to_log") cfg.points_to_log = static_cast<int>(integer());
    else if (key == "max_steps") cfg.max_steps = integer();
    else if (key == "backoff_distance") cfg.backoff_distance = num();
    else if (key == "seed") {
      const auto s = integer();
      if (s < 0) field_error(source, at, "must be non-negative");
      cfg.seed = static_cast<std::uint64_t>(s);
    } else if (key == "log_at_robot_center") cfg.log_at_robot_center = flag();
    else if (key == "walls_are_tactile") cfg.walls_are_tactile = flag();
    else if (key == "goal_reached_tolerance") cfg.goal_reached_tolerance = num();
    else if (key == "collision_hysteresis") cfg.collision_hysteresis = num();
    else if (key == "min_point_separation") cfg.min_point_separation = num();
    else if (key == "backoff_on_obstacle") cfg.backoff_on_obstacle = flag();
    else if (key == "map_cell_size") cfg.map_cell_size = num();
    else if (key == "kernel_radius") cfg.kernel_radius = num();
    else if (key == "redundancy_cell_size") cfg.redundancy_cell_size = num();
    else field_error(source, at, "unknown config key");
  }
}

Json config_to_json(const SimConfig& cfg) {
  return Json{
      {"dt", cfg.dt},
      {"robot_radius", cfg.robot_radius},
      {"speed", cfg.speed},
      {"tactile_range", cfg.tactile_range},
      {"goal_radius", cfg.goal_radius},
      {"candidate_count", cfg.candidate_count},
      {"beta", cfg.beta},
      {"gamma", cfg.gamma},
      {"redundancy_exponent", cfg.redundancy_exponent},
      {"r_comm", cfg.r_comm},
      {"d_min", cfg.effective_d_min()},
      {"points_to_log", cfg.points_to_log},
      {"max_steps", cfg.max_steps},
      {"backoff_distance", cfg.backoff_distance},
      {"seed", cfg.seed},
      {"log_at_robot_center", cfg.log_at_robot_center},
      {"walls_are_tactile", cfg.walls_are_tactile},
      {"goal_reached_tolerance", cfg.goal_reached_tolerance},
      {"collision_hysteresis", cfg.collision_hysteresis},
      {"min_point_separation", cfg.min_point_separation},
      {"backoff_on_obstacle", cfg.backoff_on_obstacle},
      {"map_cell_size", cfg.map_cell_size},
      {"kernel_radius", cfg.kernel_radius},
      {"redundancy_cell_size", cfg.redundancy_cell_size},
  };
}

}  // namespace detail

namespace {

using detail::Json;

Shape read_shape(const Json& v, std::string_view source, const std::string& path) {
  const Json& type = detail::require(v, "type", source, path);
  if (!type.is_string()) detail::field_error(source, path + ".type", "expected a string");
  const auto kind = type.get<std::string>();
  if (kind == "circle") {
    return Circle{detail::read_vec2(detail::require(v, "center", source, path), source, path + ".center"),
                  detail::read_number(detail::require(v, "radius", source, path), source, path + ".radius")};
  }
  if (kind == "rect") {
    return AxisAlignedRect{detail::read_vec2(detail::require(v, "min", source, path), source, path + ".min"),
                           detail::read_vec2(detail::require(v, "max", source, path), source, path + ".max")};
  }
  if (kind == "polygon") {
    const Json& verts = detail::require(v, "vertices", source, path);
    if (!verts.is_array()) detail::field_error(source, path + ".vertices", "expected a list of [x, y]");
    ConvexPolygon poly;
    for (std::size_t i = 0; i < verts.size(); ++i)
      poly.vertices.push_back(detail::read_vec2(verts[i], source, fmt::format("{}.vertices[{}]", path, i)));
    return poly;
  }
  detail::field_error(source, path + ".type", "must be one of circle, rect, polygon");
}

Json shape_to_json(const Shape& s) {
  auto vec = [](Vec2 p) { return Json::array({p.x, p.y}); };
  if (const auto* c = std::get_if<Circle>(&s)) return Json{{"type", "circle"}, {"center", vec(c->center)}, {"radius", c->radius}};
  if (const auto* r = std::get_if<AxisAlignedRect>(&s)) return Json{{"type", "rect"}, {"min", vec(r->min)}, {"max", vec(r->max)}};
  Json verts = Json::array();
  for (const Vec2& p : std::get<ConvexPolygon>(s).vertices) verts.push_back(vec(p));
  return Json{{"type", "polygon"}, {"vertices", verts}};
}

}  // namespace

Scenario parse_scenario(std::string_view text, std::string_view source) {
  const Json doc = detail::parse_json(text, source);
  if (!doc.is_object()) detail::field_error(source, "<root>", "expected an object");

  const auto version = detail::read_integer(detail::require(doc, "format_version", source, ""), source, "format_version");
  if (version != kScenarioFormatVersion)
    detail::field_error(source, "format_version", fmt::format("unsupported version {}, expected {}", version,
                                                              kScenarioFormatVersion));

  for (const auto& [key, value] : doc.items())
    if (key != "format_version" && key != "name" && key != "world" && key != "starts" && key != "config" &&
        key != "start_jitter")
      detail::field_error(source, key, "unknown key");

  Scenario s;
  if (const auto it = doc.find("name"); it != doc.end()) {
    if (!it->is_string()) detail::field_error(source, "name", "expected a string");
    s.name = it->get<std::string>();
  }

  const Json& world = detail::require(doc, "world", source, "");
  const Json& bounds = detail::require(world, "bounds", source, "world");
  s.world.bounds = {detail::read_vec2(detail::require(bounds, "min", source, "world.bounds"), source, "world.bounds.min"),
                    detail::read_vec2(detail::require(bounds, "max", source, "world.bounds.max"), source,
                                      "world.bounds.max")};
  if (const auto it = world.find("obstacles"); it != world.end()) {
    if (!it->is_array()) detail::field_error(source, "world.obstacles", "expected a list");
    for (std::size_t i = 0; i < it->size(); ++i)
      s.world.obstacles.push_back(read_shape((*it)[i], source, fmt::format("world.obstacles[{}]", i)));
  }
  if (const auto it = world.find("walls_are_tactile"); it != world.end())
    s.config.walls_are_tactile = detail::read_bool(*it, source, "world.walls_are_tactile");

  const Json& starts = detail::require(doc, "starts", source, "");
  if (!starts.is_array()) detail::field_error(source, "starts", "expected a list of [x, y]");
  for (std::size_t i = 0; i < starts.size(); ++i)
    s.starts.push_back(detail::read_vec2(starts[i], source, fmt::format("starts[{}]", i)));

  if (const auto it = doc.find("config"); it != doc.end()) detail::apply_config(s.config, *it, source, "config");
  s.world.walls_are_tactile = s.config.walls_are_tactile;

  if (const auto it = doc.find("start_jitter"); it != doc.end()) {
    s.start_jitter = detail::read_number(*it, source, "start_jitter");
    if (s.start_jitter < 0.0) detail::field_error(source, "start_jitter", "must be non-negative");
  }

  try {
    validate_run_inputs(s.world, s.starts, s.config);
  } catch (const InvalidScenario& e) {
    throw InvalidScenario(fmt::format("{}: {}", source, e.what()));
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open scenario {}", path.string()));
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str(), path.string());
}

std::string scenario_to_json(const Scenario& s) {
  Json obstacles = Json::array();
  for (const Shape& shape : s.world.obstacles) obstacles.push_back(shape_to_json(shape));
  Json starts = Json::array();
  for (const Vec2& p : s.starts) starts.push_back(Json::array({p.x, p.y}));
  const Json doc{
      {"format_version", kScenarioFormatVersion},
      {"name", s.name},
      {"world",
       {{"bounds", {{"min", {s.world.bounds.min.x, s.world.bounds.min.y}}, {"max", {s.world.bounds.max.x, s.world.bounds.max.y}}}},
        {"walls_are_tactile", s.config.walls_are_tactile},
        {"obstacles", obstacles}}},
      {"starts", starts},
      {"start_jitter", s.start_jitter},
      {"config", detail::config_to_json(s.config)},
  };
  return doc.dump(2) + "\n";
}

std::vector<Vec2> jittered_starts(const Scenario& s, std::span<const Vec2> starts, std::uint64_t seed) {
  std::vector<Vec2> base(starts.begin(), starts.end());
  if (s.start_jitter <= 0.0) return base;

  std::mt19937_64 rng(seed);
  // Raw 53-bit draws keep the sequence identical across standard libraries.
  auto uniform = [&rng](double half_width) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return (2.0 * u - 1.0) * half_width;
  };
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<Vec2> moved = base;
    for (Vec2& p : moved) {
      const double dx = uniform(s.start_jitter);
      const double dy = uniform(s.start_jitter);
      p += Vec2{dx, dy};
    }
    try {
      validate_run_inputs(s.world, moved, s.config);
      return moved;
    } catch (const InvalidScenario&) {
    }
  }
  return base;
}

}  // namespace touchmap

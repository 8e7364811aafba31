#include "lemma/world.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "lemma/error.hpp"

namespace lemma {
namespace {

using DoubleField = double World::*;

const std::array<std::pair<const char*, DoubleField>, 33>& scalar_fields() {
  static const std::array<std::pair<const char*, DoubleField>, 33> fields{{
      {"table.x_min", &World::table_x_min},
      {"table.x_max", &World::table_x_max},
      {"table.y_min", &World::table_y_min},
      {"table.y_max", &World::table_y_max},
      {"robot.ur5_reach", &World::ur5_reach},
      {"robot.ur10_reach", &World::ur10_reach},
      {"cube.side", &World::cube_side},
      {"cube.height", &World::cube_height},
      {"pad.radius", &World::pad_radius},
      {"pad.height", &World::pad_height},
      {"tool.long_arm", &World::tool_long_arm},
      {"tool.short_arm", &World::tool_short_arm},
      {"tool.width", &World::tool_width},
      {"tool.height", &World::tool_height},
      {"sim.snap_radius", &World::snap_radius},
      {"sim.ee_speed", &World::ee_speed},
      {"sim.grasp_time", &World::grasp_time},
      {"sim.release_time", &World::release_time},
      {"sim.tool_standoff", &World::tool_standoff},
      {"sim.tool_align_tolerance", &World::tool_align_tolerance},
      {"sim.tool_heading_tolerance", &World::tool_heading_tolerance},
      {"sim.max_push", &World::max_push},
      {"sim.transit_height", &World::transit_height},
      {"sim.tool_work_height", &World::tool_work_height},
      {"gen.placement_margin", &World::placement_margin},
      {"gen.workspace_margin", &World::workspace_margin},
      {"gen.sampling_clearance", &World::sampling_clearance},
      {"gen.shared_keepout", &World::shared_keepout},
      {"gen.shared_slot_spacing", &World::shared_slot_spacing},
      {"robot.base0_x", nullptr},
      {"robot.base0_y", nullptr},
      {"robot.base1_x", nullptr},
      {"robot.base1_y", nullptr},
  }};
  return fields;
}

double* base_component(World& world, std::string_view key) {
  if (key == "robot.base0_x") return &world.base0.x();
  if (key == "robot.base0_y") return &world.base0.y();
  if (key == "robot.base1_x") return &world.base1.x();
  if (key == "robot.base1_y") return &world.base1.y();
  return nullptr;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view value) {
  // from_chars for double is available in libstdc++ 11.
  double out = 0.0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError("world config: bad number for '" + std::string(key) + "': " +
                      std::string(value));
  }
  return out;
}

}  // namespace

World parse_world(std::string_view text) {
  World world;
  std::set<std::string, std::less<>> seen;
  bool have_version = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("world config line " + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (!seen.emplace(key).second) {
      throw ConfigError("world config: duplicate key '" + std::string(key) + "'");
    }
    if (key == "version") {
      if (value != "1") {
        throw ConfigError("world config: unsupported version " + std::string(value));
      }
      have_version = true;
      continue;
    }
    if (double* component = base_component(world, key)) {
      *component = parse_double(key, value);
      continue;
    }
    bool matched = false;
    for (const auto& [name, field] : scalar_fields()) {
      if (field != nullptr && key == name) {
        world.*field = parse_double(key, value);
        matched = true;
        break;
      }
    }
    if (!matched) throw ConfigError("world config: unknown key '" + std::string(key) + "'");
  }
  if (!have_version) throw ConfigError("world config: missing version");
  return world;
}

World load_world(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open world config: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_world(buffer.str());
}

std::string world_to_config(const World& world) {
  std::string out = "version = 1\n";
  char buf[64];
  auto emit = [&](const char* key, double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += key;
    out += " = ";
    out += buf;
    out += '\n';
  };
  for (const auto& [name, field] : scalar_fields()) {
    if (field != nullptr) {
      emit(name, world.*field);
    } else {
      World copy = world;
      emit(name, *base_component(copy, name));
    }
  }
  return out;
}

std::uint64_t world_hash(const World& world) {
  std::uint64_t h = 14695981039346656037ULL;
  for (const unsigned char c : world_to_config(world)) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace lemma

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace lemma {

/// Declared world constants. Every length is in meters, every angle in
/// radians, every duration in seconds. The defaults match config/world.cfg.
struct World {
  int version = 1;

  // Table rectangle.
  double table_x_min = -1.25;
  double table_x_max = 1.25;
  double table_y_min = -0.70;
  double table_y_max = 0.70;

  // Robot bases and nominal reach.
  Eigen::Vector2d base0{-0.75, 0.0};
  Eigen::Vector2d base1{0.75, 0.0};
  double ur5_reach = 0.85;
  double ur10_reach = 1.30;

  // Object dimensions.
  double cube_side = 0.05;
  double cube_height = 0.05;
  double pad_radius = 0.06;
  double pad_height = 0.005;
  double tool_long_arm = 0.40;
  double tool_short_arm = 0.10;
  double tool_width = 0.02;
  double tool_height = 0.02;

  // Simulator.
  double snap_radius = 0.03;
  double ee_speed = 0.25;
  double grasp_time = 2.0;
  double release_time = 2.0;
  double tool_standoff = 0.07;
  double tool_align_tolerance = 0.10;
  double tool_heading_tolerance = 0.20;
  double max_push = 0.60;
  double transit_height = 0.30;
  double tool_work_height = 0.05;

  // Generation and planning.
  double placement_margin = 0.05;
  double workspace_margin = 0.05;
  double sampling_clearance = 0.02;
  double shared_keepout = 0.10;
  double shared_slot_spacing = 0.20;

  double table_width() const { return table_x_max - table_x_min; }
  double table_depth() const { return table_y_max - table_y_min; }
  Eigen::Vector2d table_center() const {
    return {0.5 * (table_x_min + table_x_max), 0.5 * (table_y_min + table_y_max)};
  }
  bool on_table(const Eigen::Vector2d& p, double margin = 0.0) const {
    return p.x() >= table_x_min + margin && p.x() <= table_x_max - margin &&
           p.y() >= table_y_min + margin && p.y() <= table_y_max - margin;
  }

  bool operator==(const World&) const = default;
};

/// Parses the key = value text format. Unknown keys and a version other than
/// 1 are rejected with ConfigError.
World parse_world(std::string_view text);
World load_world(const std::string& path);
std::string world_to_config(const World& world);

/// FNV-1a over the canonical config text.
std::uint64_t world_hash(const World& world);

}  // namespace lemma

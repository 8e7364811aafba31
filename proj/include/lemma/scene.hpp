#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lemma/geometry.hpp"
#include "lemma/world.hpp"

namespace lemma {

enum class RobotId { R0 = 0, R1 = 1 };
enum class RobotModel { UR5, UR10 };
enum class BodyColor { Red, White };
enum class ObjectKind { Cube, Pad, Tool };
enum class Color { Pink, Red, White, Blue, Green, Yellow };

/// Colors available to cubes and pads. Tools are always yellow.
inline constexpr std::array<Color, 5> kObjectColors{Color::Pink, Color::Red, Color::White,
                                                    Color::Blue, Color::Green};

inline constexpr int kTable = -1;

inline int index_of(RobotId id) { return static_cast<int>(id); }
inline RobotId other(RobotId id) { return id == RobotId::R0 ? RobotId::R1 : RobotId::R0; }

std::string_view to_string(RobotId id);
std::string_view to_string(RobotModel model);
std::string_view to_string(BodyColor color);
std::string_view to_string(ObjectKind kind);
std::string_view to_string(Color color);

// These throw ParseError on unknown names.
RobotId robot_id_from_string(std::string_view s);
RobotModel robot_model_from_string(std::string_view s);
BodyColor body_color_from_string(std::string_view s);
ObjectKind object_kind_from_string(std::string_view s);
Color color_from_string(std::string_view s);

struct RobotSpec {
  RobotId id = RobotId::R0;
  RobotModel model = RobotModel::UR5;
  BodyColor body_color = BodyColor::Red;
  Pose2 base;
  double reach_radius = 0.0;

  bool operator==(const RobotSpec&) const = default;
};

/// Builds a robot at its fixed base with the model's nominal reach.
RobotSpec make_robot(RobotId id, RobotModel model, BodyColor body_color, const World& world = {});

struct ObjectSpec {
  int id = 0;
  ObjectKind kind = ObjectKind::Cube;
  Color color = Color::Pink;

  bool operator==(const ObjectSpec&) const = default;
};

struct SceneObject {
  ObjectSpec spec;
  Pose2 pose;
  int support = kTable;  // id of the supporting object, or kTable

  bool operator==(const SceneObject&) const = default;
};

/// A (color, kind) pair; goal conditions and instructions refer to objects
/// this way.
struct ColorKind {
  Color color = Color::Pink;
  ObjectKind kind = ObjectKind::Cube;

  bool operator==(const ColorKind&) const = default;
  auto operator<=>(const ColorKind&) const = default;
};

/// "red_cube", "white_pad", "yellow_tool".
std::string to_token(const ColorKind& ck);
ColorKind color_kind_from_token(std::string_view token);

struct SceneState {
  std::vector<SceneObject> objects;
  std::array<RobotSpec, 2> robots;
  std::array<std::optional<int>, 2> holding;
  double clock = 0.0;

  const SceneObject* find(int id) const;
  SceneObject* find(int id);
  const SceneObject& at(int id) const;  // throws UnknownObject
  const RobotSpec& robot(RobotId id) const { return robots[index_of(id)]; }

  /// Ids of all objects matching (color, kind).
  std::vector<int> lookup(const ColorKind& ck) const;

  /// Number of objects beneath `id` in its support chain.
  int stack_level(int id) const;
  /// Height of the object's bottom / top surface above the table.
  double base_z(int id, const World& world = {}) const;
  double top_z(int id, const World& world = {}) const;

  bool operator==(const SceneState&) const = default;
};

double object_height(ObjectKind kind, const World& world = {});

struct GoalAtom {
  ColorKind top;
  ColorKind bottom;

  bool operator==(const GoalAtom&) const = default;
};

struct GoalCondition {
  std::vector<GoalAtom> atoms;

  bool operator==(const GoalCondition&) const = default;
};

/// Disk test on the robot base.
bool reachable(const RobotSpec& robot, const Vec2& p);
inline bool reachable(const RobotSpec& robot, const Pose2& p) { return reachable(robot, p.position); }

/// Plain reach plus the long arm of the L-tool.
double tool_extended_reach(const RobotSpec& robot, const World& world = {});

/// Intersection of two reach disks clipped to the table.
struct Region {
  Vec2 center0;
  double radius0 = 0.0;
  Vec2 center1;
  double radius1 = 0.0;
  double x_min = 0.0, x_max = 0.0, y_min = 0.0, y_max = 0.0;
  Vec2 representative;

  bool contains(const Vec2& p) const;
};

/// Throws EmptyRegion when the reach disks do not intersect on the table.
Region shared_workspace(const RobotSpec& r0, const RobotSpec& r1, const World& world = {});

/// Hand-off points inside the shared workspace, in preference order: the
/// base midpoint first, then points offset along the perpendicular.
std::array<Vec2, 3> shared_slots(const RobotSpec& r0, const RobotSpec& r1, const World& world = {});

/// True iff nothing is supported by `id`. Throws UnknownObject.
bool top_of_stack(const SceneState& state, int id);

/// Footprint as capsules for overlap tests.
std::vector<Capsule> footprint(const SceneObject& object, const World& world = {});

/// The L-tool's working tip (end of the long arm).
Vec2 tool_tip(const Pose2& tool_pose, const World& world = {});

/// Support graph is a forest rooted at the table, held objects are outside
/// it, and no two table-supported objects of one kind overlap.
bool support_forest_valid(const SceneState& state, const World& world = {});

}  // namespace lemma

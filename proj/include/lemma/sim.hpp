#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "lemma/scene.hpp"

namespace lemma {

enum class Primitive { Move, PreHook, Hook, PrePoke, Poke, Stop };

inline constexpr std::array<Primitive, 6> kPrimitives{Primitive::Move,    Primitive::PreHook,
                                                      Primitive::Hook,    Primitive::PrePoke,
                                                      Primitive::Poke,    Primitive::Stop};

std::string_view to_string(Primitive p);
Primitive primitive_from_string(std::string_view s);

inline bool uses_tool(Primitive p) {
  return p == Primitive::PreHook || p == Primitive::Hook || p == Primitive::PrePoke ||
         p == Primitive::Poke;
}

struct PrimitiveAction {
  RobotId robot = RobotId::R0;
  Primitive primitive = Primitive::Stop;
  Pose2 t_pick;
  Pose2 t_place;

  bool operator==(const PrimitiveAction&) const = default;
};

struct Displacement {
  int object = 0;
  Pose2 from;
  Pose2 to;

  bool operator==(const Displacement&) const = default;
};

struct TransitionReceipt {
  double duration = 0.0;
  std::optional<int> picked;
  std::vector<Displacement> displaced;

  bool operator==(const TransitionReceipt&) const = default;
};

enum class SimError {
  None,
  OutOfReach,
  HandNotEmpty,
  HandEmpty,
  NotTopOfStack,
  ToolNotAligned,
  OffTable,
  NothingToPick,
  Blocked,
};

std::string_view to_string(SimError e);
SimError sim_error_from_string(std::string_view s);

struct StepResult {
  SceneState state;
  TransitionReceipt receipt;
  SimError error = SimError::None;

  bool ok() const { return error == SimError::None; }
};

/// Time model: travel base -> pick -> place at the end-effector speed plus
/// grasp and release overheads. Stop costs nothing.
double action_duration(const RobotSpec& robot, const PrimitiveAction& action, const World& world = {});

/// Object selected by a pick at `point`: nearest center within the snap
/// radius, ties broken by the higher stack level.
std::optional<int> object_under(const SceneState& state, const Vec2& point, const World& world = {});

/// Tool grasp pose that puts the tool tip `tool_standoff` short of `cube`
/// on the ray from the robot base through the cube.
Pose2 tool_alignment_pose(const RobotSpec& robot, const Vec2& cube, const World& world = {});

/// Tool is aligned for a poke/hook of `cube` by `robot`.
bool tool_aligned(const RobotSpec& robot, const Pose2& tool_pose, const Vec2& cube,
                  const World& world = {});

/// Executes one primitive. On any error the returned state equals the input
/// state and the receipt is empty.
StepResult apply(const SceneState& state, const PrimitiveAction& action, const World& world = {});

/// Every atom On(top, bottom) holds: top is directly supported by bottom and
/// their centers lie within the snap radius. Throws UnknownColorKind when an
/// atom names an object that is absent or not unique.
bool check_goal(const SceneState& state, const GoalCondition& goal, const World& world = {});

inline bool within_budget(const SceneState& state, double t_max) { return state.clock <= t_max; }

}  // namespace lemma

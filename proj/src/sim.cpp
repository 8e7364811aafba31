#include "lemma/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lemma/error.hpp"

namespace lemma {
namespace {

constexpr std::array<std::pair<Primitive, std::string_view>, 6> kPrimitiveNames{{
    {Primitive::Move, "move"},
    {Primitive::PreHook, "prehook"},
    {Primitive::Hook, "hook"},
    {Primitive::PrePoke, "prepoke"},
    {Primitive::Poke, "poke"},
    {Primitive::Stop, "stop"},
}};

constexpr std::array<std::pair<SimError, std::string_view>, 9> kSimErrorNames{{
    {SimError::None, "none"},
    {SimError::OutOfReach, "out_of_reach"},
    {SimError::HandNotEmpty, "hand_not_empty"},
    {SimError::HandEmpty, "hand_empty"},
    {SimError::NotTopOfStack, "not_top_of_stack"},
    {SimError::ToolNotAligned, "tool_not_aligned"},
    {SimError::OffTable, "off_table"},
    {SimError::NothingToPick, "nothing_to_pick"},
    {SimError::Blocked, "blocked"},
}};

StepResult fail(const SceneState& state, SimError error) { return StepResult{state, {}, error}; }

bool is_held(const SceneState& state, int id) {
  return std::any_of(state.holding.begin(), state.holding.end(),
                     [id](const auto& h) { return h && *h == id; });
}

/// Nearest cube to `point` within `radius`, ties to the higher stack level.
std::optional<int> nearest_cube(const SceneState& state, const Vec2& point, double radius) {
  std::optional<int> best;
  double best_d = std::numeric_limits<double>::infinity();
  int best_level = -1;
  for (const auto& o : state.objects) {
    if (o.spec.kind != ObjectKind::Cube || is_held(state, o.spec.id)) continue;
    const double d = distance(o.pose.position, point);
    if (d > radius) continue;
    const int level = state.stack_level(o.spec.id);
    if (d < best_d || (d == best_d && level > best_level)) {
      best = o.spec.id;
      best_d = d;
      best_level = level;
    }
  }
  return best;
}

/// A cube resting on the table at `p` would overlap another table cube.
bool cube_blocked(const SceneState& state, int moving, const Vec2& p, const World& world) {
  SceneObject probe = state.at(moving);
  probe.pose.position = p;
  const auto fp = footprint(probe, world);
  for (const auto& o : state.objects) {
    if (o.spec.id == moving || o.support != kTable || o.spec.kind != probe.spec.kind) continue;
    if (is_held(state, o.spec.id)) continue;
    if (overlaps(fp, footprint(o, world))) return true;
  }
  return false;
}

StepResult finish(SceneState next, const RobotSpec& robot, const PrimitiveAction& action,
                  int picked, std::vector<Displacement> displaced, const World& world) {
  TransitionReceipt receipt;
  receipt.duration = action_duration(robot, action, world);
  receipt.picked = picked;
  receipt.displaced = std::move(displaced);
  next.clock += receipt.duration;
  return StepResult{std::move(next), std::move(receipt), SimError::None};
}

StepResult apply_move(const SceneState& state, const RobotSpec& robot, const PrimitiveAction& action,
                      int picked, const World& world) {
  const SceneObject& obj = state.at(picked);
  if (!reachable(robot, obj.pose)) return fail(state, SimError::OutOfReach);
  if (!top_of_stack(state, picked)) return fail(state, SimError::NotTopOfStack);
  if (!reachable(robot, action.t_place)) return fail(state, SimError::OutOfReach);

  // Only cubes stack; they land on the highest pad or cube under the place
  // point.
  int support = kTable;
  if (obj.spec.kind == ObjectKind::Cube) {
    double best_top = -1.0;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& o : state.objects) {
      if (o.spec.id == picked || o.spec.kind == ObjectKind::Tool || is_held(state, o.spec.id)) {
        continue;
      }
      const double d = distance(o.pose.position, action.t_place.position);
      if (d > world.snap_radius || !top_of_stack(state, o.spec.id)) continue;
      const double top = state.top_z(o.spec.id, world);
      if (top > best_top || (top == best_top && d < best_d)) {
        support = o.spec.id;
        best_top = top;
        best_d = d;
      }
    }
  }
  if (support == kTable && cube_blocked(state, picked, action.t_place.position, world)) {
    return fail(state, SimError::Blocked);
  }

  SceneState next = state;
  SceneObject& moved = *next.find(picked);
  const Pose2 from = moved.pose;
  moved.pose = action.t_place;
  moved.support = support;
  return finish(std::move(next), robot, action, picked, {{picked, from, action.t_place}}, world);
}

StepResult apply_tool_alignment(const SceneState& state, const RobotSpec& robot,
                                const PrimitiveAction& action, int picked, const World& world) {
  const SceneObject& tool = state.at(picked);
  if (tool.spec.kind != ObjectKind::Tool) return fail(state, SimError::HandEmpty);
  if (!reachable(robot, tool.pose)) return fail(state, SimError::OutOfReach);
  if (!top_of_stack(state, picked)) return fail(state, SimError::NotTopOfStack);

  const auto target = nearest_cube(state, action.t_place.position, world.snap_radius);
  if (!target) return fail(state, SimError::ToolNotAligned);
  const Vec2 cube = state.at(*target).pose.position;
  if (distance(robot.base.position, cube) > tool_extended_reach(robot, world)) {
    return fail(state, SimError::OutOfReach);
  }
  const Pose2 aligned = tool_alignment_pose(robot, cube, world);
  if (!reachable(robot, aligned)) return fail(state, SimError::OutOfReach);
  if (!world.on_table(aligned.position) || !world.on_table(tool_tip(aligned, world))) {
    return fail(state, SimError::OffTable);
  }

  SceneState next = state;
  SceneObject& moved = *next.find(picked);
  const Pose2 from = moved.pose;
  moved.pose = aligned;
  moved.support = kTable;
  return finish(std::move(next), robot, action, picked, {{picked, from, aligned}}, world);
}

StepResult apply_tool_stroke(const SceneState& state, const RobotSpec& robot,
                             const PrimitiveAction& action, int picked, const World& world) {
  const SceneObject& tool = state.at(picked);
  if (tool.spec.kind != ObjectKind::Tool) return fail(state, SimError::HandEmpty);
  if (!reachable(robot, tool.pose)) return fail(state, SimError::OutOfReach);
  if (!top_of_stack(state, picked)) return fail(state, SimError::NotTopOfStack);

  // The tool works at low height: only the cube nearest its tip interacts.
  const auto target = nearest_cube(state, tool_tip(tool.pose, world), world.tool_align_tolerance);
  if (!target) return fail(state, SimError::ToolNotAligned);
  const SceneObject& cube = state.at(*target);
  if (!tool_aligned(robot, tool.pose, cube.pose.position, world)) {
    return fail(state, SimError::ToolNotAligned);
  }
  if (distance(robot.base.position, cube.pose.position) > tool_extended_reach(robot, world)) {
    return fail(state, SimError::OutOfReach);
  }
  if (!top_of_stack(state, *target)) return fail(state, SimError::NotTopOfStack);

  const Vec2 axis = direction(robot.base.position, cube.pose.position);
  const double stroke =
      std::min(distance(action.t_place.position, cube.pose.position), world.max_push);
  const double sign = action.primitive == Primitive::Poke ? 1.0 : -1.0;
  const Vec2 dest = cube.pose.position + sign * stroke * axis;

  if (!world.on_table(dest, 0.5 * world.cube_side)) return fail(state, SimError::OffTable);
  if (action.primitive == Primitive::Hook && !reachable(robot, dest)) {
    return fail(state, SimError::OutOfReach);
  }
  if (cube_blocked(state, *target, dest, world)) return fail(state, SimError::Blocked);

  SceneState next = state;
  SceneObject& moved = *next.find(*target);
  const Pose2 from = moved.pose;
  moved.pose = Pose2{dest, from.theta};
  moved.support = kTable;
  // The tool is set back down where it was picked up.
  return finish(std::move(next), robot, action, picked, {{*target, from, moved.pose}}, world);
}

}  // namespace

std::string_view to_string(Primitive p) {
  for (const auto& [value, name] : kPrimitiveNames) {
    if (value == p) return name;
  }
  return "?";
}

Primitive primitive_from_string(std::string_view s) {
  for (const auto& [value, name] : kPrimitiveNames) {
    if (name == s) return value;
  }
  throw ParseError("unknown primitive '" + std::string(s) + "'");
}

std::string_view to_string(SimError e) {
  for (const auto& [value, name] : kSimErrorNames) {
    if (value == e) return name;
  }
  return "?";
}

SimError sim_error_from_string(std::string_view s) {
  for (const auto& [value, name] : kSimErrorNames) {
    if (name == s) return value;
  }
  throw ParseError("unknown sim error '" + std::string(s) + "'");
}

double action_duration(const RobotSpec& robot, const PrimitiveAction& action, const World& world) {
  if (action.primitive == Primitive::Stop) return 0.0;
  const double travel = distance(robot.base.position, action.t_pick.position) +
                        distance(action.t_pick.position, action.t_place.position);
  return travel / world.ee_speed + world.grasp_time + world.release_time;
}

std::optional<int> object_under(const SceneState& state, const Vec2& point, const World& world) {
  std::optional<int> best;
  double best_d = std::numeric_limits<double>::infinity();
  int best_level = -1;
  for (const auto& o : state.objects) {
    if (is_held(state, o.spec.id)) continue;
    const double d = distance(o.pose.position, point);
    if (d > world.snap_radius) continue;
    const int level = state.stack_level(o.spec.id);
    if (d < best_d || (d == best_d && level > best_level)) {
      best = o.spec.id;
      best_d = d;
      best_level = level;
    }
  }
  return best;
}

Pose2 tool_alignment_pose(const RobotSpec& robot, const Vec2& cube, const World& world) {
  const Vec2 axis = direction(robot.base.position, cube);
  const Vec2 grasp = cube - (world.tool_long_arm + world.tool_standoff) * axis;
  return Pose2::at(grasp, std::atan2(axis.y(), axis.x()));
}

bool tool_aligned(const RobotSpec& robot, const Pose2& tool_pose, const Vec2& cube,
                  const World& world) {
  if (distance(tool_tip(tool_pose, world), cube) > world.tool_align_tolerance) return false;
  const Vec2 axis = direction(robot.base.position, cube);
  const double heading_error =
      std::abs(normalize_angle(tool_pose.theta - std::atan2(axis.y(), axis.x())));
  return heading_error <= world.tool_heading_tolerance;
}

StepResult apply(const SceneState& state, const PrimitiveAction& action, const World& world) {
  if (action.primitive == Primitive::Stop) return StepResult{state, {}, SimError::None};

  const RobotSpec& robot = state.robot(action.robot);
  if (!world.on_table(action.t_pick.position) || !world.on_table(action.t_place.position)) {
    return fail(state, SimError::OffTable);
  }
  if (state.holding[index_of(action.robot)]) return fail(state, SimError::HandNotEmpty);
  const auto picked = object_under(state, action.t_pick.position, world);
  if (!picked) return fail(state, SimError::NothingToPick);

  switch (action.primitive) {
    case Primitive::Move:
      return apply_move(state, robot, action, *picked, world);
    case Primitive::PrePoke:
    case Primitive::PreHook:
      return apply_tool_alignment(state, robot, action, *picked, world);
    case Primitive::Poke:
    case Primitive::Hook:
      return apply_tool_stroke(state, robot, action, *picked, world);
    case Primitive::Stop:
      break;
  }
  return StepResult{state, {}, SimError::None};
}

bool check_goal(const SceneState& state, const GoalCondition& goal, const World& world) {
  for (const auto& atom : goal.atoms) {
    const auto tops = state.lookup(atom.top);
    const auto bottoms = state.lookup(atom.bottom);
    if (tops.size() != 1 || bottoms.size() != 1) {
      throw UnknownColorKind("goal references " + to_token(tops.size() != 1 ? atom.top : atom.bottom) +
                             " which is absent or ambiguous");
    }
    const SceneObject& top = state.at(tops.front());
    const SceneObject& bottom = state.at(bottoms.front());
    if (top.support != bottom.spec.id) return false;
    if (distance(top.pose.position, bottom.pose.position) > world.snap_radius) return false;
  }
  return true;
}

}  // namespace lemma

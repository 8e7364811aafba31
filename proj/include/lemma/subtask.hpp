#pragma once

#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "lemma/sim.hpp"

namespace lemma {

enum class SiteKind {
  SharedPoint,     // first free hand-off slot in the shared workspace
  PadOf,           // on the pad of a color
  StackOn,         // on the cube of a color
  AlignWith,       // tool alignment against the cube of a color
  ReturnSpot,      // park point in front of the acting robot
  OwnWorkspace,    // hook destination inside the acting robot's disk
  OtherWorkspace,  // poke destination inside the other robot's disk
};

struct Site {
  SiteKind kind = SiteKind::SharedPoint;
  Color color = Color::Pink;  // meaningful for PadOf, StackOn, AlignWith only

  static Site shared() { return {SiteKind::SharedPoint, Color::Pink}; }
  static Site pad_of(Color c) { return {SiteKind::PadOf, c}; }
  static Site stack_on(Color c) { return {SiteKind::StackOn, c}; }
  static Site align_with(Color c) { return {SiteKind::AlignWith, c}; }
  static Site return_spot() { return {SiteKind::ReturnSpot, Color::Pink}; }
  static Site own_workspace() { return {SiteKind::OwnWorkspace, Color::Pink}; }
  static Site other_workspace() { return {SiteKind::OtherWorkspace, Color::Pink}; }

  bool has_color() const {
    return kind == SiteKind::PadOf || kind == SiteKind::StackOn || kind == SiteKind::AlignWith;
  }

  bool operator==(const Site&) const = default;
};

/// Either a concrete object or a placement site.
using EntityRef = std::variant<ColorKind, Site>;

struct SubTask {
  int id = 0;
  Primitive primitive = Primitive::Move;
  EntityRef pick;
  EntityRef place;
  std::vector<int> depends_on;

  bool operator==(const SubTask&) const = default;
};

struct SubTaskDag {
  std::vector<SubTask> tasks;

  int size() const { return static_cast<int>(tasks.size()); }
  /// (before, after) precedence pairs.
  std::vector<std::pair<int, int>> edges() const;
  bool acyclic() const;
  /// Kahn's algorithm, always taking the smallest ready id. Throws
  /// std::invalid_argument on a cycle or a dangling edge.
  std::vector<int> topological_order() const;

  bool operator==(const SubTaskDag&) const = default;
};

/// A sub-task resolved against a live scene for one robot.
struct Grounding {
  PrimitiveAction action;
  int object = 0;         // the pick entity
  Vec2 pick_point;        // where the pick entity is now
  Vec2 place_point;       // resolved place site
  std::optional<int> tool;
  bool destination_ok = true;  // false when no push/drag reaches the target disk
};

/// Minimal drag along the base ray that brings `cube` `workspace_margin`
/// inside the robot's disk.
Vec2 hook_destination(const RobotSpec& robot, const Vec2& cube, const World& world = {});

/// Minimal push along the base ray of `pusher` that brings `cube`
/// `workspace_margin` inside the receiver's disk; empty when the ray misses.
std::optional<Vec2> poke_destination(const RobotSpec& pusher, const RobotSpec& receiver,
                                     const Vec2& cube, const World& world = {});

/// Resolves the pick and place entities of (primitive, pick, place) for
/// `robot` in `state`. Throws UnresolvableEntity.
Grounding ground(Primitive primitive, const EntityRef& pick, const EntityRef& place, RobotId robot,
                 const SceneState& state, const World& world = {});
inline Grounding ground(const SubTask& sub, RobotId robot, const SceneState& state,
                        const World& world = {}) {
  return ground(sub.primitive, sub.pick, sub.place, robot, state, world);
}

/// Reach-based executability of a grounded sub-task.
bool grounding_feasible(const Grounding& g, const SceneState& state, const World& world = {});

}  // namespace lemma

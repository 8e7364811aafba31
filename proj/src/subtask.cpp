#include "lemma/subtask.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "lemma/error.hpp"

namespace lemma {

std::vector<std::pair<int, int>> SubTaskDag::edges() const {
  std::vector<std::pair<int, int>> out;
  for (const auto& t : tasks) {
    for (const int dep : t.depends_on) out.emplace_back(dep, t.id);
  }
  return out;
}

std::vector<int> SubTaskDag::topological_order() const {
  const int n = size();
  std::vector<int> indegree(n, 0);
  std::vector<std::vector<int>> successors(n);
  for (int i = 0; i < n; ++i) {
    if (tasks[i].id != i) throw std::invalid_argument("sub-task ids must be 0..M-1 in order");
    for (const int dep : tasks[i].depends_on) {
      if (dep < 0 || dep >= n) throw std::invalid_argument("dangling precedence edge");
      successors[dep].push_back(i);
      ++indegree[i];
    }
  }
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (int i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push(i);
  }
  std::vector<int> order;
  order.reserve(n);
  while (!ready.empty()) {
    const int m = ready.top();
    ready.pop();
    order.push_back(m);
    for (const int s : successors[m]) {
      if (--indegree[s] == 0) ready.push(s);
    }
  }
  if (static_cast<int>(order.size()) != n) throw std::invalid_argument("sub-task graph has a cycle");
  return order;
}

bool SubTaskDag::acyclic() const {
  try {
    (void)topological_order();
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

Vec2 hook_destination(const RobotSpec& robot, const Vec2& cube, const World& world) {
  const double d = distance(robot.base.position, cube);
  const double drag = std::max(0.0, d - (robot.reach_radius - world.workspace_margin));
  return cube - drag * direction(robot.base.position, cube);
}

std::optional<Vec2> poke_destination(const RobotSpec& pusher, const RobotSpec& receiver,
                                     const Vec2& cube, const World& world) {
  const Vec2 axis = direction(pusher.base.position, cube);
  const Vec2 w = cube - receiver.base.position;
  const double r = receiver.reach_radius - world.workspace_margin;
  const double c = w.squaredNorm() - r * r;
  if (c <= 0.0) return cube;
  // |w + p axis|^2 = r^2, smallest non-negative root.
  const double b = w.dot(axis);
  const double disc = b * b - c;
  if (disc < 0.0) return std::nullopt;
  const double p = -b - std::sqrt(disc);
  if (p < 0.0) return std::nullopt;
  return cube + p * axis;
}

namespace {

const SceneObject& resolve_object(const SceneState& state, const ColorKind& ck) {
  const auto ids = state.lookup(ck);
  if (ids.size() != 1) {
    throw UnresolvableEntity("cannot resolve " + to_token(ck) + ": " + std::to_string(ids.size()) +
                             " matches");
  }
  return state.at(ids.front());
}

const SceneObject& resolve_tool(const SceneState& state) {
  const SceneObject* tool = nullptr;
  for (const auto& o : state.objects) {
    if (o.spec.kind != ObjectKind::Tool) continue;
    if (tool != nullptr) throw UnresolvableEntity("more than one tool in the scene");
    tool = &o;
  }
  if (tool == nullptr) throw UnresolvableEntity("no tool in the scene");
  return *tool;
}

Vec2 free_shared_slot(const SceneState& state, int mover, const World& world) {
  for (const Vec2& slot : shared_slots(state.robots[0], state.robots[1], world)) {
    const bool occupied = std::any_of(state.objects.begin(), state.objects.end(), [&](const auto& o) {
      return o.spec.id != mover && distance(o.pose.position, slot) < world.shared_keepout;
    });
    if (!occupied) return slot;
  }
  throw UnresolvableEntity("no free hand-off slot in the shared workspace");
}

Vec2 resolve_site(const Site& site, RobotId robot, int mover, const SceneState& state,
                  const World& world, bool& destination_ok) {
  const RobotSpec& self = state.robot(robot);
  const Vec2 from = state.at(mover).pose.position;
  switch (site.kind) {
    case SiteKind::SharedPoint:
      return free_shared_slot(state, mover, world);
    case SiteKind::PadOf:
      return resolve_object(state, {site.color, ObjectKind::Pad}).pose.position;
    case SiteKind::StackOn:
    case SiteKind::AlignWith:
      return resolve_object(state, {site.color, ObjectKind::Cube}).pose.position;
    case SiteKind::ReturnSpot:
      return self.base.position +
             world.tool_long_arm * direction(self.base.position, world.table_center());
    case SiteKind::OwnWorkspace:
      return hook_destination(self, from, world);
    case SiteKind::OtherWorkspace: {
      const auto dest = poke_destination(self, state.robot(other(robot)), from, world);
      if (dest) return *dest;
      destination_ok = false;
      return from + world.max_push * direction(self.base.position, from);
    }
  }
  throw UnresolvableEntity("unknown site");
}

}  // namespace

Grounding ground(Primitive primitive, const EntityRef& pick, const EntityRef& place, RobotId robot,
                 const SceneState& state, const World& world) {
  if (primitive == Primitive::Stop) throw UnresolvableEntity("stop has no entities");
  const auto* pick_ck = std::get_if<ColorKind>(&pick);
  if (pick_ck == nullptr) throw UnresolvableEntity("pick entity must be an object");
  const SceneObject& picked = resolve_object(state, *pick_ck);

  Grounding g;
  g.object = picked.spec.id;
  g.pick_point = picked.pose.position;
  g.action.robot = robot;
  g.action.primitive = primitive;

  if (const auto* place_ck = std::get_if<ColorKind>(&place)) {
    g.place_point = resolve_object(state, *place_ck).pose.position;
  } else {
    g.place_point = resolve_site(std::get<Site>(place), robot, picked.spec.id, state, world,
                                 g.destination_ok);
  }

  switch (primitive) {
    case Primitive::Move:
      g.action.t_pick = picked.pose;
      g.action.t_place = Pose2{g.place_point, picked.pose.theta};
      break;
    case Primitive::PrePoke:
    case Primitive::PreHook:
      if (picked.spec.kind != ObjectKind::Tool) {
        throw UnresolvableEntity("tool alignment must pick the tool");
      }
      g.tool = picked.spec.id;
      g.action.t_pick = picked.pose;
      g.action.t_place = Pose2{g.place_point, 0.0};
      break;
    case Primitive::Poke:
    case Primitive::Hook: {
      const SceneObject& tool = resolve_tool(state);
      g.tool = tool.spec.id;
      g.action.t_pick = tool.pose;
      g.action.t_place = Pose2{g.place_point, picked.pose.theta};
      break;
    }
    case Primitive::Stop:
      break;
  }
  return g;
}

bool grounding_feasible(const Grounding& g, const SceneState& state, const World& world) {
  const RobotSpec& robot = state.robot(g.action.robot);
  const double extended = tool_extended_reach(robot, world);
  switch (g.action.primitive) {
    case Primitive::Move:
      return reachable(robot, g.pick_point) && reachable(robot, g.place_point);
    case Primitive::PrePoke:
    case Primitive::PreHook:
      return reachable(robot, g.pick_point) &&
             distance(robot.base.position, g.place_point) <= extended &&
             reachable(robot, tool_alignment_pose(robot, g.place_point, world));
    case Primitive::Poke:
    case Primitive::Hook: {
      const Pose2& tool_pose = state.at(*g.tool).pose;
      if (!reachable(robot, tool_pose) || !g.destination_ok) return false;
      if (distance(robot.base.position, g.pick_point) > extended) return false;
      if (!tool_aligned(robot, tool_pose, g.pick_point, world)) return false;
      if (distance(robot.base.position, g.place_point) > extended) return false;
      return g.action.primitive == Primitive::Poke || reachable(robot, g.place_point);
    }
    case Primitive::Stop:
      return false;
  }
  return false;
}

}  // namespace lemma

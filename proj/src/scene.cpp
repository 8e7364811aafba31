#include "lemma/scene.hpp"

#include <algorithm>
#include <cmath>

#include "lemma/error.hpp"

namespace lemma {
namespace {

template <typename Enum, std::size_t N>
Enum from_table(std::string_view s, const std::array<std::pair<Enum, std::string_view>, N>& table,
                const char* what) {
  for (const auto& [value, name] : table) {
    if (name == s) return value;
  }
  throw ParseError(std::string("unknown ") + what + ": '" + std::string(s) + "'");
}

template <typename Enum, std::size_t N>
std::string_view to_table(Enum e, const std::array<std::pair<Enum, std::string_view>, N>& table) {
  for (const auto& [value, name] : table) {
    if (value == e) return name;
  }
  return "?";
}

constexpr std::array<std::pair<RobotId, std::string_view>, 2> kRobotIds{
    {{RobotId::R0, "robot0"}, {RobotId::R1, "robot1"}}};
constexpr std::array<std::pair<RobotModel, std::string_view>, 2> kRobotModels{
    {{RobotModel::UR5, "UR5"}, {RobotModel::UR10, "UR10"}}};
constexpr std::array<std::pair<BodyColor, std::string_view>, 2> kBodyColors{
    {{BodyColor::Red, "red"}, {BodyColor::White, "white"}}};
constexpr std::array<std::pair<ObjectKind, std::string_view>, 3> kKinds{
    {{ObjectKind::Cube, "cube"}, {ObjectKind::Pad, "pad"}, {ObjectKind::Tool, "tool"}}};
constexpr std::array<std::pair<Color, std::string_view>, 6> kColors{{{Color::Pink, "pink"},
                                                                     {Color::Red, "red"},
                                                                     {Color::White, "white"},
                                                                     {Color::Blue, "blue"},
                                                                     {Color::Green, "green"},
                                                                     {Color::Yellow, "yellow"}}};

}  // namespace

std::string_view to_string(RobotId id) { return to_table(id, kRobotIds); }
std::string_view to_string(RobotModel model) { return to_table(model, kRobotModels); }
std::string_view to_string(BodyColor color) { return to_table(color, kBodyColors); }
std::string_view to_string(ObjectKind kind) { return to_table(kind, kKinds); }
std::string_view to_string(Color color) { return to_table(color, kColors); }

RobotId robot_id_from_string(std::string_view s) { return from_table(s, kRobotIds, "robot id"); }
RobotModel robot_model_from_string(std::string_view s) {
  return from_table(s, kRobotModels, "robot model");
}
BodyColor body_color_from_string(std::string_view s) {
  return from_table(s, kBodyColors, "body color");
}
ObjectKind object_kind_from_string(std::string_view s) {
  return from_table(s, kKinds, "object kind");
}
Color color_from_string(std::string_view s) { return from_table(s, kColors, "color"); }

std::string to_token(const ColorKind& ck) {
  return std::string(to_string(ck.color)) + "_" + std::string(to_string(ck.kind));
}

ColorKind color_kind_from_token(std::string_view token) {
  const auto us = token.find('_');
  if (us == std::string_view::npos) {
    throw ParseError("expected <color>_<kind>, got '" + std::string(token) + "'");
  }
  return ColorKind{color_from_string(token.substr(0, us)),
                   object_kind_from_string(token.substr(us + 1))};
}

RobotSpec make_robot(RobotId id, RobotModel model, BodyColor body_color, const World& world) {
  RobotSpec robot;
  robot.id = id;
  robot.model = model;
  robot.body_color = body_color;
  robot.base = Pose2::at(id == RobotId::R0 ? world.base0 : world.base1);
  robot.reach_radius = model == RobotModel::UR5 ? world.ur5_reach : world.ur10_reach;
  return robot;
}

const SceneObject* SceneState::find(int id) const {
  for (const auto& o : objects) {
    if (o.spec.id == id) return &o;
  }
  return nullptr;
}

SceneObject* SceneState::find(int id) {
  for (auto& o : objects) {
    if (o.spec.id == id) return &o;
  }
  return nullptr;
}

const SceneObject& SceneState::at(int id) const {
  const SceneObject* o = find(id);
  if (o == nullptr) throw UnknownObject("unknown object id " + std::to_string(id));
  return *o;
}

std::vector<int> SceneState::lookup(const ColorKind& ck) const {
  std::vector<int> ids;
  for (const auto& o : objects) {
    if (o.spec.color == ck.color && o.spec.kind == ck.kind) ids.push_back(o.spec.id);
  }
  return ids;
}

int SceneState::stack_level(int id) const {
  int level = 0;
  int cur = at(id).support;
  while (cur != kTable && level <= static_cast<int>(objects.size())) {
    ++level;
    cur = at(cur).support;
  }
  return level;
}

double object_height(ObjectKind kind, const World& world) {
  switch (kind) {
    case ObjectKind::Cube:
      return world.cube_height;
    case ObjectKind::Pad:
      return world.pad_height;
    case ObjectKind::Tool:
      return world.tool_height;
  }
  return 0.0;
}

double SceneState::base_z(int id, const World& world) const {
  const int support = at(id).support;
  return support == kTable ? 0.0 : top_z(support, world);
}

double SceneState::top_z(int id, const World& world) const {
  return base_z(id, world) + object_height(at(id).spec.kind, world);
}

bool reachable(const RobotSpec& robot, const Vec2& p) {
  return distance(robot.base.position, p) <= robot.reach_radius;
}

double tool_extended_reach(const RobotSpec& robot, const World& world) {
  return robot.reach_radius + world.tool_long_arm;
}

bool Region::contains(const Vec2& p) const {
  return p.x() >= x_min && p.x() <= x_max && p.y() >= y_min && p.y() <= y_max &&
         distance(p, center0) <= radius0 && distance(p, center1) <= radius1;
}

Region shared_workspace(const RobotSpec& r0, const RobotSpec& r1, const World& world) {
  Region region;
  region.center0 = r0.base.position;
  region.radius0 = r0.reach_radius;
  region.center1 = r1.base.position;
  region.radius1 = r1.reach_radius;
  region.x_min = world.table_x_min;
  region.x_max = world.table_x_max;
  region.y_min = world.table_y_min;
  region.y_max = world.table_y_max;
  region.representative = 0.5 * (region.center0 + region.center1);
  if (distance(region.center0, region.center1) > region.radius0 + region.radius1 ||
      !region.contains(region.representative)) {
    throw EmptyRegion("robot reach disks do not overlap on the table");
  }
  return region;
}

std::array<Vec2, 3> shared_slots(const RobotSpec& r0, const RobotSpec& r1, const World& world) {
  const Vec2 mid = 0.5 * (r0.base.position + r1.base.position);
  const Vec2 axis = direction(r0.base.position, r1.base.position);
  const Vec2 normal{-axis.y(), axis.x()};
  return {mid, mid + world.shared_slot_spacing * normal, mid - world.shared_slot_spacing * normal};
}

bool top_of_stack(const SceneState& state, int id) {
  (void)state.at(id);
  return std::none_of(state.objects.begin(), state.objects.end(),
                      [id](const SceneObject& o) { return o.support == id; });
}

Vec2 tool_tip(const Pose2& tool_pose, const World& world) {
  return tool_pose.position + world.tool_long_arm * tool_pose.heading();
}

std::vector<Capsule> footprint(const SceneObject& object, const World& world) {
  const Vec2 c = object.pose.position;
  switch (object.spec.kind) {
    case ObjectKind::Cube:
      return {Capsule{c, c, 0.5 * std::sqrt(2.0) * world.cube_side}};
    case ObjectKind::Pad:
      return {Capsule{c, c, world.pad_radius}};
    case ObjectKind::Tool: {
      const Vec2 h = object.pose.heading();
      const Vec2 tip = c + world.tool_long_arm * h;
      const Vec2 hook = tip + world.tool_short_arm * Vec2{-h.y(), h.x()};
      return {Capsule{c, tip, 0.5 * world.tool_width}, Capsule{tip, hook, 0.5 * world.tool_width}};
    }
  }
  return {};
}

bool support_forest_valid(const SceneState& state, const World& world) {
  const int n = static_cast<int>(state.objects.size());
  for (const auto& o : state.objects) {
    const bool held = std::any_of(state.holding.begin(), state.holding.end(),
                                  [&](const auto& h) { return h && *h == o.spec.id; });
    if (held && o.support != kTable) return false;
    int cur = o.support;
    int steps = 0;
    while (cur != kTable) {
      const SceneObject* s = state.find(cur);
      if (s == nullptr || ++steps > n) return false;
      const bool support_held = std::any_of(state.holding.begin(), state.holding.end(),
                                            [&](const auto& h) { return h && *h == cur; });
      if (support_held) return false;
      cur = s->support;
    }
  }
  for (std::size_t i = 0; i < state.objects.size(); ++i) {
    const auto& a = state.objects[i];
    if (a.support != kTable) continue;
    const auto fa = footprint(a, world);
    for (std::size_t j = i + 1; j < state.objects.size(); ++j) {
      const auto& b = state.objects[j];
      if (b.support != kTable || b.spec.kind != a.spec.kind) continue;
      if (overlaps(fa, footprint(b, world))) return false;
    }
  }
  return true;
}

}  // namespace lemma

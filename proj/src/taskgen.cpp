#include "lemma/taskgen.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <numbers>
#include <set>

#include "lemma/error.hpp"
#include "lemma/oracle.hpp"
#include "lemma/rng.hpp"
#include "lemma/subtask.hpp"

namespace lemma {
namespace {

// Sampled roles keep this far from every reach boundary they depend on.
constexpr double kRoleMargin = 0.02;
// Position draws per object before the whole attempt is abandoned.
constexpr int kDrawsPerObject = 20000;

using Region = std::function<bool(const Vec2&)>;

double table_gap(const std::vector<Capsule>& fp, const World& w) {
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& c : fp) {
    for (const Vec2& p : {c.a, c.b}) {
      gap = std::min({gap, p.x() - c.radius - w.table_x_min, w.table_x_max - p.x() - c.radius,
                      p.y() - c.radius - w.table_y_min, w.table_y_max - p.y() - c.radius});
    }
  }
  return gap;
}

bool slots_clear(const SceneObject& o, const std::array<Vec2, 3>& slots, const World& w) {
  const auto fp = footprint(o, w);
  for (const Vec2& slot : slots) {
    if (distance(o.pose.position, slot) < w.shared_keepout) return false;
    for (const auto& c : fp) {
      if (point_segment_distance(slot, c.a, c.b) - c.radius < 0.5 * w.shared_keepout) return false;
    }
  }
  return true;
}

int reach_count(const SceneState& s, const Vec2& p) {
  return static_cast<int>(reachable(s.robots[0], p)) + static_cast<int>(reachable(s.robots[1], p));
}

std::optional<RobotId> sole_reacher(const SceneState& s, const Vec2& p) {
  const bool r0 = reachable(s.robots[0], p);
  const bool r1 = reachable(s.robots[1], p);
  if (r0 == r1) return std::nullopt;
  return r0 ? RobotId::R0 : RobotId::R1;
}

bool alignment_ok(const RobotSpec& r, const Vec2& cube, const World& w, double margin) {
  const Pose2 aligned = tool_alignment_pose(r, cube, w);
  return distance(r.base.position, aligned.position) <= r.reach_radius - margin &&
         w.on_table(aligned.position, margin) && w.on_table(tool_tip(aligned, w), margin);
}

bool pokeable(const RobotSpec& a, const RobotSpec& b, const Vec2& p, const World& w, double margin) {
  const double da = distance(a.base.position, p);
  if (da < a.reach_radius + margin || distance(b.base.position, p) < b.reach_radius + margin) return false;
  if (da > tool_extended_reach(a, w) - margin || !alignment_ok(a, p, w, margin)) return false;
  const auto dest = poke_destination(a, b, p, w);
  return dest && w.on_table(*dest, 0.5 * w.cube_side + margin) &&
         distance(a.base.position, *dest) <= tool_extended_reach(a, w) - margin;
}

bool hookable(const RobotSpec& a, const RobotSpec& b, const Vec2& p, const World& w, double margin) {
  const double da = distance(a.base.position, p);
  if (da < a.reach_radius + margin || distance(b.base.position, p) < b.reach_radius + margin) return false;
  if (da > tool_extended_reach(a, w) - margin || !alignment_ok(a, p, w, margin)) return false;
  return w.on_table(hook_destination(a, p, w), 0.5 * w.cube_side + margin);
}

class Builder {
 public:
  Builder(CounterRng& rng, SceneState& scene, const World& w)
      : rng_(rng), scene_(scene), w_(w), slots_(shared_slots(scene.robots[0], scene.robots[1], w)) {}

  Region exclusive(RobotId id) const {
    const RobotSpec a = scene_.robot(id);
    const RobotSpec b = scene_.robot(other(id));
    return [a, b](const Vec2& p) {
      return distance(a.base.position, p) <= a.reach_radius - kRoleMargin &&
             distance(b.base.position, p) >= b.reach_radius + kRoleMargin;
    };
  }
  Region poke_zone(RobotId pusher) const {
    const RobotSpec a = scene_.robot(pusher);
    const RobotSpec b = scene_.robot(other(pusher));
    const World w = w_;
    return [a, b, w](const Vec2& p) { return pokeable(a, b, p, w, kRoleMargin); };
  }
  Region hook_zone(RobotId hooker) const {
    const RobotSpec a = scene_.robot(hooker);
    const RobotSpec b = scene_.robot(other(hooker));
    const World w = w_;
    return [a, b, w](const Vec2& p) { return hookable(a, b, p, w, kRoleMargin); };
  }
  static Region anywhere() {
    return [](const Vec2&) { return true; };
  }

  bool place(ObjectKind kind, Color color, const Region& region) {
    SceneObject o;
    o.spec = ObjectSpec{static_cast<int>(scene_.objects.size()), kind, color};
    for (int draw = 0; draw < kDrawsPerObject; ++draw) {
      const Vec2 p{rng_.uniform(w_.table_x_min + w_.placement_margin, w_.table_x_max - w_.placement_margin),
                   rng_.uniform(w_.table_y_min + w_.placement_margin, w_.table_y_max - w_.placement_margin)};
      double theta = 0.0;
      if (kind != ObjectKind::Pad) theta = rng_.uniform(-std::numbers::pi, std::numbers::pi);
      if (!region(p)) continue;
      o.pose = Pose2::at(p, theta);
      if (fits(o)) {
        scene_.objects.push_back(o);
        return true;
      }
    }
    return false;
  }

 private:
  bool fits(const SceneObject& o) const {
    const auto fp = footprint(o, w_);
    if (table_gap(fp, w_) < w_.placement_margin - 0.5 * w_.cube_side) return false;
    if (!slots_clear(o, slots_, w_)) return false;
    return std::none_of(scene_.objects.begin(), scene_.objects.end(), [&](const SceneObject& other_obj) {
      return overlaps(fp, footprint(other_obj, w_), w_.sampling_clearance);
    });
  }

  CounterRng& rng_;
  SceneState& scene_;
  const World& w_;
  std::array<Vec2, 3> slots_;
};

RobotId pick_robot(CounterRng& rng) { return rng.bernoulli(0.5) ? RobotId::R1 : RobotId::R0; }

/// Distinct colors drawn without replacement.
std::vector<Color> draw_colors(CounterRng& rng, int n) {
  std::vector<Color> colors(kObjectColors.begin(), kObjectColors.end());
  rng.shuffle(std::span<Color>(colors));
  colors.resize(static_cast<std::size_t>(n));
  return colors;
}

// Places the goal-essential objects of one attempt. Returns false when a
// role could not be placed.
bool place_essentials(TaskType type, CounterRng& rng, Builder& b, GoalCondition& goal) {
  const auto cube = [](Color c) { return ColorKind{c, ObjectKind::Cube}; };
  const auto pad = [](Color c) { return ColorKind{c, ObjectKind::Pad}; };
  switch (type) {
    case TaskType::Pass: {
      const RobotId a = pick_robot(rng);
      const Color cc = draw_colors(rng, 1)[0];
      const Color pc = draw_colors(rng, 1)[0];
      goal.atoms = {{cube(cc), pad(pc)}};
      return b.place(ObjectKind::Cube, cc, b.exclusive(a)) && b.place(ObjectKind::Pad, pc, b.exclusive(other(a)));
    }
    case TaskType::Pass2: {
      const RobotId a = pick_robot(rng);
      const auto cc = draw_colors(rng, 2);
      const auto pc = draw_colors(rng, 2);
      goal.atoms = {{cube(cc[0]), pad(pc[0])}, {cube(cc[1]), pad(pc[1])}};
      return b.place(ObjectKind::Cube, cc[0], b.exclusive(a)) &&
             b.place(ObjectKind::Pad, pc[0], b.exclusive(other(a))) &&
             b.place(ObjectKind::Cube, cc[1], b.exclusive(other(a))) &&
             b.place(ObjectKind::Pad, pc[1], b.exclusive(a));
    }
    case TaskType::Stack: {
      const RobotId a = pick_robot(rng);
      const auto c = draw_colors(rng, 2);
      goal.atoms = {{cube(c[0]), cube(c[1])}};
      return b.place(ObjectKind::Cube, c[0], b.exclusive(a)) &&
             b.place(ObjectKind::Cube, c[1], b.exclusive(other(a)));
    }
    case TaskType::Stack2: {
      const RobotId a0 = pick_robot(rng);
      const RobotId a1 = pick_robot(rng);
      const auto c = draw_colors(rng, 4);
      goal.atoms = {{cube(c[0]), cube(c[1])}, {cube(c[2]), cube(c[3])}};
      return b.place(ObjectKind::Cube, c[0], b.exclusive(a0)) &&
             b.place(ObjectKind::Cube, c[1], b.exclusive(other(a0))) &&
             b.place(ObjectKind::Cube, c[2], b.exclusive(a1)) &&
             b.place(ObjectKind::Cube, c[3], b.exclusive(other(a1)));
    }
    case TaskType::Poke: {
      const RobotId a = pick_robot(rng);
      const Color cc = draw_colors(rng, 1)[0];
      const Color pc = draw_colors(rng, 1)[0];
      goal.atoms = {{cube(cc), pad(pc)}};
      return b.place(ObjectKind::Cube, cc, b.poke_zone(a)) &&
             b.place(ObjectKind::Tool, Color::Yellow, b.exclusive(a)) &&
             b.place(ObjectKind::Pad, pc, b.exclusive(other(a)));
    }
    case TaskType::PokeStack: {
      const RobotId a = pick_robot(rng);
      const auto c = draw_colors(rng, 2);
      goal.atoms = {{cube(c[0]), cube(c[1])}};
      return b.place(ObjectKind::Cube, c[0], b.poke_zone(a)) &&
             b.place(ObjectKind::Cube, c[1], b.poke_zone(a)) &&
             b.place(ObjectKind::Tool, Color::Yellow, b.exclusive(a));
    }
    case TaskType::Hook: {
      const RobotId a = pick_robot(rng);
      const Color cc = draw_colors(rng, 1)[0];
      const Color pc = draw_colors(rng, 1)[0];
      goal.atoms = {{cube(cc), pad(pc)}};
      return b.place(ObjectKind::Cube, cc, b.hook_zone(a)) &&
             b.place(ObjectKind::Tool, Color::Yellow, b.exclusive(a)) &&
             b.place(ObjectKind::Pad, pc, b.exclusive(other(a)));
    }
    case TaskType::HookStack: {
      const RobotId a = pick_robot(rng);
      const auto c = draw_colors(rng, 2);
      goal.atoms = {{cube(c[0]), cube(c[1])}};
      return b.place(ObjectKind::Cube, c[0], b.hook_zone(a)) &&
             b.place(ObjectKind::Cube, c[1], b.hook_zone(other(a))) &&
             b.place(ObjectKind::Tool, Color::Yellow, b.exclusive(a));
    }
  }
  return false;
}

bool place_distractors(int count, CounterRng& rng, Builder& b, const SceneState& scene) {
  for (int k = 0; k < count; ++k) {
    std::vector<ColorKind> free;
    for (const ObjectKind kind : {ObjectKind::Cube, ObjectKind::Pad}) {
      for (const Color c : kObjectColors) {
        if (scene.lookup({c, kind}).empty()) free.push_back({c, kind});
      }
    }
    if (free.empty()) return false;
    const ColorKind ck = rng.pick(std::span<const ColorKind>(free));
    if (!b.place(ck.kind, ck.color, Builder::anywhere())) return false;
  }
  return true;
}

std::string fmt_atom(const GoalAtom& a) { return to_token(a.top) + " on " + to_token(a.bottom); }

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, TaskType type, int index) {
  const std::uint64_t lane = (static_cast<std::uint64_t>(type) << 32) | static_cast<std::uint32_t>(index);
  return mix64(master ^ mix64(lane));
}

std::string instance_id(TaskType type, int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "_%04d", index);
  return std::string(to_string(type)) + buf;
}

RobotId tool_holder(const SceneState& state) {
  const SceneObject* tool = nullptr;
  for (const auto& o : state.objects) {
    if (o.spec.kind != ObjectKind::Tool) continue;
    if (tool != nullptr) throw UnresolvableEntity("more than one tool");
    tool = &o;
  }
  if (tool == nullptr) throw UnresolvableEntity("no tool in the scene");
  const auto holder = sole_reacher(state, tool->pose.position);
  if (!holder) throw UnresolvableEntity("tool is not reachable by exactly one robot");
  return *holder;
}

TaskInstance sample_task(TaskType type, std::uint64_t seed, const World& world) {
  const ObjectCountRange range = object_count_range(type);
  for (int attempt = 0; attempt < kMaxGenerationAttempts; ++attempt) {
    CounterRng rng(seed, static_cast<std::uint64_t>(attempt));
    TaskInstance inst;
    inst.type = type;
    inst.seed = seed;
    SceneState& scene = inst.scene0;
    for (const RobotId id : {RobotId::R0, RobotId::R1}) {
      const RobotModel model = rng.bernoulli(0.5) ? RobotModel::UR10 : RobotModel::UR5;
      const BodyColor body = rng.bernoulli(0.5) ? BodyColor::White : BodyColor::Red;
      scene.robots[index_of(id)] = make_robot(id, model, body, world);
    }
    const int total = static_cast<int>(rng.uniform_int(range.min, range.max));
    Builder builder(rng, scene, world);
    if (!place_essentials(type, rng, builder, inst.goal)) continue;
    if (!place_distractors(total - static_cast<int>(scene.objects.size()), rng, builder, scene)) continue;
    if (validation_failures(inst, world).empty()) return inst;
  }
  throw GenerationExhausted(std::string(to_string(type)) + ": no valid instance for seed " +
                            std::to_string(seed) + " after " + std::to_string(kMaxGenerationAttempts) +
                            " attempts");
}

std::vector<std::string> validation_failures(const TaskInstance& inst, const World& world, bool dry) {
  std::vector<std::string> out;
  const SceneState& s = inst.scene0;
  const TaskType type = inst.type;

  const ObjectCountRange range = object_count_range(type);
  const int n = static_cast<int>(s.objects.size());
  if (n < range.min || n > range.max) out.push_back("object count " + std::to_string(n) + " outside range");

  for (const RobotId id : {RobotId::R0, RobotId::R1}) {
    const RobotSpec& r = s.robot(id);
    const RobotSpec expect = make_robot(id, r.model, r.body_color, world);
    if (!(r == expect)) out.push_back(std::string(to_string(id)) + " differs from its nominal spec");
  }
  if (s.holding[0] || s.holding[1] || s.clock != 0.0) out.emplace_back("initial scene is not at rest");

  std::set<int> ids;
  int tools = 0;
  for (const auto& o : s.objects) {
    if (!ids.insert(o.spec.id).second) out.push_back("duplicate object id " + std::to_string(o.spec.id));
    if (o.support != kTable) out.push_back("object " + std::to_string(o.spec.id) + " is not on the table");
    if (o.spec.kind == ObjectKind::Tool) {
      ++tools;
      if (o.spec.color != Color::Yellow) out.emplace_back("tool is not yellow");
    } else if (o.spec.color == Color::Yellow) {
      out.push_back("yellow " + std::string(to_string(o.spec.kind)));
    }
    if (table_gap(footprint(o, world), world) < 0.0) {
      out.push_back("object " + std::to_string(o.spec.id) + " leaves the table");
    }
  }
  if (tools != (uses_tool(type) ? 1 : 0)) out.push_back("tool count " + std::to_string(tools));

  for (std::size_t i = 0; i < s.objects.size(); ++i) {
    const auto fi = footprint(s.objects[i], world);
    for (std::size_t j = i + 1; j < s.objects.size(); ++j) {
      if (overlaps(fi, footprint(s.objects[j], world))) {
        out.push_back("objects " + std::to_string(s.objects[i].spec.id) + " and " +
                      std::to_string(s.objects[j].spec.id) + " overlap");
      }
    }
  }
  const auto slots = shared_slots(s.robots[0], s.robots[1], world);
  for (const auto& o : s.objects) {
    if (!slots_clear(o, slots, world)) out.push_back("object " + std::to_string(o.spec.id) + " blocks a hand-off slot");
  }
  try {
    (void)shared_workspace(s.robots[0], s.robots[1], world);
  } catch (const EmptyRegion&) {
    out.emplace_back("robots share no workspace");
  }

  // Goal shape and color uniqueness.
  if (static_cast<int>(inst.goal.atoms.size()) != goal_atom_count(type)) {
    out.emplace_back("goal atom count does not match the task type");
    return out;
  }
  const ObjectKind bottom_kind = has_pads(type) ? ObjectKind::Pad : ObjectKind::Cube;
  std::set<ColorKind> goal_objects;
  for (const auto& atom : inst.goal.atoms) {
    if (atom.top.kind != ObjectKind::Cube || atom.bottom.kind != bottom_kind) {
      out.push_back("goal atom " + fmt_atom(atom) + " has the wrong kinds");
    }
    for (const ColorKind& ck : {atom.top, atom.bottom}) {
      if (!goal_objects.insert(ck).second) out.push_back(to_token(ck) + " appears twice in the goal");
      if (s.lookup(ck).size() != 1) out.push_back(to_token(ck) + " is not unique in the scene");
    }
  }
  if (!out.empty()) return out;

  const auto pos = [&](const ColorKind& ck) { return s.at(s.lookup(ck).front()).pose.position; };
  const auto split = [&](const ColorKind& a, const ColorKind& b) {
    const auto ra = sole_reacher(s, pos(a));
    const auto rb = sole_reacher(s, pos(b));
    if (!ra) out.push_back(to_token(a) + " is not reachable by exactly one robot");
    if (!rb) out.push_back(to_token(b) + " is not reachable by exactly one robot");
    if (ra && rb && *ra == *rb) out.push_back(to_token(a) + " and " + to_token(b) + " share a robot");
  };
  const auto out_of_reach = [&](const ColorKind& ck) {
    if (reach_count(s, pos(ck)) != 0) out.push_back(to_token(ck) + " is reachable without the tool");
  };

  std::optional<RobotId> holder;
  if (uses_tool(type)) {
    try {
      holder = tool_holder(s);
    } catch (const UnresolvableEntity& e) {
      out.emplace_back(e.what());
      return out;
    }
  }

  switch (type) {
    case TaskType::Pass:
    case TaskType::Pass2:
    case TaskType::Stack:
    case TaskType::Stack2:
      for (const auto& atom : inst.goal.atoms) split(atom.top, atom.bottom);
      break;
    case TaskType::Poke:
    case TaskType::PokeStack: {
      const RobotSpec& a = s.robot(*holder);
      const RobotSpec& b = s.robot(other(*holder));
      std::vector<ColorKind> targets{inst.goal.atoms[0].top};
      if (type == TaskType::PokeStack) targets.push_back(inst.goal.atoms[0].bottom);
      for (const auto& ck : targets) {
        out_of_reach(ck);
        if (!pokeable(a, b, pos(ck), world, 0.0)) out.push_back(to_token(ck) + " has no feasible push");
      }
      if (type == TaskType::Poke && sole_reacher(s, pos(inst.goal.atoms[0].bottom)) != b.id) {
        out.emplace_back("pad is not reachable by the receiving robot alone");
      }
      break;
    }
    case TaskType::Hook:
    case TaskType::HookStack: {
      const RobotSpec& a = s.robot(*holder);
      const RobotSpec& b = s.robot(other(*holder));
      const ColorKind top = inst.goal.atoms[0].top;
      const ColorKind bottom = inst.goal.atoms[0].bottom;
      out_of_reach(top);
      if (!hookable(a, b, pos(top), world, 0.0)) out.push_back(to_token(top) + " has no feasible drag");
      if (type == TaskType::Hook) {
        if (sole_reacher(s, pos(bottom)) != b.id) out.emplace_back("pad is not reachable by the other robot alone");
      } else {
        out_of_reach(bottom);
        if (!hookable(b, a, pos(bottom), world, 0.0)) out.push_back(to_token(bottom) + " has no feasible drag");
      }
      break;
    }
  }

  // Goal objects are unique per (color, kind), so distractors never reuse a
  // goal color within their kind.

  if (out.empty() && dry) {
    const DryRun run = dry_run(inst, kTimeBudget, world);
    if (!run.success) out.push_back("oracle dry run failed: " + run.failure);
  }
  return out;
}

std::vector<TaskInstance> generate_instances(std::span<const TaskType> types, int count,
                                             std::uint64_t master, const World& world) {
  if (count < 0) throw BadCount("instance count must be non-negative");
  std::vector<TaskInstance> out;
  out.reserve(types.size() * static_cast<std::size_t>(count));
  for (const TaskType type : types) {
    for (int i = 0; i < count; ++i) {
      TaskInstance inst = sample_task(type, derive_seed(master, type, i), world);
      inst.id = instance_id(type, i);
      out.push_back(std::move(inst));
    }
  }
  return out;
}

}  // namespace lemma

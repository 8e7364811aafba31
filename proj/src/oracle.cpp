#include "lemma/oracle.hpp"

#include "lemma/error.hpp"
#include "lemma/rng.hpp"
#include "lemma/taskgen.hpp"

namespace lemma {
namespace {

constexpr ColorKind kTool{Color::Yellow, ObjectKind::Tool};

Vec2 position_of(const SceneState& s, const ColorKind& ck) {
  const auto ids = s.lookup(ck);
  if (ids.size() != 1) {
    throw DecompositionFailure(to_token(ck) + " matches " + std::to_string(ids.size()) + " objects");
  }
  return s.at(ids.front()).pose.position;
}

struct DagBuilder {
  SubTaskDag dag;

  int add(Primitive p, EntityRef pick, EntityRef place, std::vector<int> deps = {}) {
    const int id = dag.size();
    dag.tasks.push_back(SubTask{id, p, std::move(pick), std::move(place), std::move(deps)});
    return id;
  }
};

void pass_chain(DagBuilder& b, const GoalAtom& atom) {
  const int hand_off = b.add(Primitive::Move, atom.top, Site::shared());
  b.add(Primitive::Move, atom.top, Site::pad_of(atom.bottom.color), {hand_off});
}

void stack_chain(DagBuilder& b, const GoalAtom& atom, const SceneState& s, const Vec2& slot) {
  // The cube nearer the hand-off point crosses; the other robot stacks.
  const double dt = distance(position_of(s, atom.top), slot);
  const double db = distance(position_of(s, atom.bottom), slot);
  const ColorKind passed = db < dt ? atom.bottom : atom.top;
  const int hand_off = b.add(Primitive::Move, passed, Site::shared());
  b.add(Primitive::Move, atom.top, Site::stack_on(atom.bottom.color), {hand_off});
}

RobotId holder_or_fail(const SceneState& s) {
  try {
    return tool_holder(s);
  } catch (const UnresolvableEntity& e) {
    throw DecompositionFailure(e.what());
  }
}

}  // namespace

SubTaskDag decompose(const TaskInstance& inst, const World& world) {
  const SceneState& s = inst.scene0;
  if (static_cast<int>(inst.goal.atoms.size()) != goal_atom_count(inst.type)) {
    throw DecompositionFailure("goal does not match the task type");
  }
  for (const auto& atom : inst.goal.atoms) {
    (void)position_of(s, atom.top);
    (void)position_of(s, atom.bottom);
  }
  const GoalAtom& g = inst.goal.atoms.front();
  const Vec2 slot = shared_slots(s.robots[0], s.robots[1], world)[0];
  DagBuilder b;
  switch (inst.type) {
    case TaskType::Pass:
      pass_chain(b, g);
      break;
    case TaskType::Pass2:
      pass_chain(b, inst.goal.atoms[0]);
      pass_chain(b, inst.goal.atoms[1]);
      break;
    case TaskType::Stack:
      stack_chain(b, g, s, slot);
      break;
    case TaskType::Stack2:
      stack_chain(b, inst.goal.atoms[0], s, slot);
      stack_chain(b, inst.goal.atoms[1], s, slot);
      break;
    case TaskType::Poke: {
      (void)holder_or_fail(s);
      const int align = b.add(Primitive::PrePoke, kTool, Site::align_with(g.top.color));
      const int push = b.add(Primitive::Poke, g.top, Site::other_workspace(), {align});
      b.add(Primitive::Move, g.top, Site::pad_of(g.bottom.color), {push});
      break;
    }
    case TaskType::PokeStack: {
      (void)holder_or_fail(s);
      const int a0 = b.add(Primitive::PrePoke, kTool, Site::align_with(g.bottom.color));
      const int p0 = b.add(Primitive::Poke, g.bottom, Site::other_workspace(), {a0});
      const int a1 = b.add(Primitive::PrePoke, kTool, Site::align_with(g.top.color), {p0});
      const int p1 = b.add(Primitive::Poke, g.top, Site::other_workspace(), {a1});
      b.add(Primitive::Move, g.top, Site::stack_on(g.bottom.color), {p1});
      break;
    }
    case TaskType::Hook: {
      (void)holder_or_fail(s);
      const int align = b.add(Primitive::PreHook, kTool, Site::align_with(g.top.color));
      const int drag = b.add(Primitive::Hook, g.top, Site::own_workspace(), {align});
      const int hand_off = b.add(Primitive::Move, g.top, Site::shared(), {drag});
      b.add(Primitive::Move, g.top, Site::pad_of(g.bottom.color), {hand_off});
      break;
    }
    case TaskType::HookStack: {
      // The tool holder hooks the cube on its side, passes the tool, and
      // the other robot hooks the second cube.
      const Vec2 base = s.robot(holder_or_fail(s)).base.position;
      const bool top_first = distance(base, position_of(s, g.top)) <= distance(base, position_of(s, g.bottom));
      const ColorKind first = top_first ? g.top : g.bottom;
      const ColorKind second = top_first ? g.bottom : g.top;
      const int a0 = b.add(Primitive::PreHook, kTool, Site::align_with(first.color));
      const int h0 = b.add(Primitive::Hook, first, Site::own_workspace(), {a0});
      const int tool_pass = b.add(Primitive::Move, kTool, Site::shared(), {h0});
      const int a1 = b.add(Primitive::PreHook, kTool, Site::align_with(second.color), {tool_pass});
      const int h1 = b.add(Primitive::Hook, second, Site::own_workspace(), {a1});
      const int cube_pass = b.add(Primitive::Move, first, Site::shared(), {h0});
      b.add(Primitive::Move, g.top, Site::stack_on(g.bottom.color), {h1, cube_pass});
      break;
    }
  }
  return b.dag;
}

Execution execute(const SceneState& scene, const SubTaskDag& dag, const std::vector<int>& order,
                  const std::vector<std::optional<RobotId>>& gamma, const World& world) {
  Execution ex;
  ex.state = scene;
  for (const int m : order) {
    const SubTask& sub = dag.tasks.at(static_cast<std::size_t>(m));
    const RobotId robot = gamma.at(static_cast<std::size_t>(m)).value();
    const Grounding g = ground(sub, robot, ex.state, world);
    StepResult r = apply(ex.state, g.action, world);
    if (!r.ok()) {
      ex.error = r.error;
      ex.failed_subtask = m;
      return ex;
    }
    EpisodeStep step;
    step.clock = ex.state.clock;
    step.sub = SubInstruction{robot, sub.primitive, sub.pick, sub.place};
    step.action = g.action;
    step.receipt = std::move(r.receipt);
    ex.steps.push_back(std::move(step));
    ex.state = std::move(r.state);
  }
  return ex;
}

DryRun dry_run(const TaskInstance& inst, double t_max, const World& world) {
  DryRun run;
  run.final_state = inst.scene0;
  try {
    run.dag = decompose(inst, world);
    run.allocation = solve_exact(run.dag, inst.scene0, t_max, world);
    if (!run.allocation.complete()) {
      run.failure = "allocation assigns " + std::to_string(run.allocation.assigned()) + " of " +
                    std::to_string(run.dag.size()) + " sub-tasks";
      return run;
    }
    Execution ex = execute(inst.scene0, run.dag, run.allocation.order, run.allocation.gamma, world);
    run.steps = std::move(ex.steps);
    run.final_state = std::move(ex.state);
    if (ex.error != SimError::None) {
      run.failure = "sub-task " + std::to_string(ex.failed_subtask) + " failed: " + std::string(to_string(ex.error));
      return run;
    }
    if (!within_budget(run.final_state, t_max)) {
      run.failure = "clock " + std::to_string(run.final_state.clock) + " s exceeds the budget";
      return run;
    }
    if (!check_goal(run.final_state, inst.goal, world)) {
      run.failure = "goal not reached";
      return run;
    }
    run.success = true;
  } catch (const Error& e) {
    run.failure = e.what();
  } catch (const std::invalid_argument& e) {
    run.failure = e.what();
  }
  return run;
}

int human_template_id(const TaskInstance& inst, const TemplatePool& pool) {
  const int n = pool.size(inst.type);
  if (n == 0) throw UnknownTemplate("no templates for " + std::string(to_string(inst.type)));
  CounterRng rng(inst.seed, 0x48554DULL);
  return static_cast<int>(rng.uniform_int(0, n - 1));
}

EpisodeRecord generate_demonstration(const TaskInstance& inst, const World& world) {
  DryRun run = dry_run(inst, kTimeBudget, world);
  if (!run.success) throw DemonstrationFailure(inst.id + ": " + run.failure);
  EpisodeRecord rec;
  rec.instance = inst;
  rec.high = lexicalize_high(inst.goal, inst.type);
  rec.human = lexicalize_human(inst.goal, inst.type, human_template_id(inst), inst.seed);
  rec.steps = std::move(run.steps);
  rec.success = true;
  return rec;
}

SceneState replay(const EpisodeRecord& record, std::size_t k, const World& world) {
  if (k > record.steps.size()) throw OutOfBounds("step index past the end of the episode");
  SceneState state = record.instance.scene0;
  for (std::size_t i = 0; i < k; ++i) {
    StepResult r = apply(state, record.steps[i].action, world);
    if (!r.ok()) {
      throw DemonstrationFailure(record.id() + ": replay of step " + std::to_string(i) + " failed with " +
                                 std::string(to_string(r.error)));
    }
    state = std::move(r.state);
  }
  return state;
}

}  // namespace lemma

#include <doctest.h>

#include <algorithm>

#include "lemma/error.hpp"
#include "lemma/oracle.hpp"
#include "lemma/taskgen.hpp"
#include "oracles.hpp"

using namespace lemma;

namespace {

Vec2 pos(const TaskInstance& inst, const ColorKind& ck) {
  return inst.scene0.at(inst.scene0.lookup(ck).front()).pose.position;
}

int tool_side(const TaskInstance& inst) {
  const Vec2 p = pos(inst, {Color::Yellow, ObjectKind::Tool});
  return oracle::reach_mask(inst, p.x(), p.y()) == 1 ? 0 : 1;
}

}  // namespace

TEST_CASE("task type tables") {
  CHECK(subtask_count(TaskType::Pass) == 2);
  CHECK(subtask_count(TaskType::Pass2) == 4);
  CHECK(subtask_count(TaskType::Stack) == 2);
  CHECK(subtask_count(TaskType::Stack2) == 4);
  CHECK(subtask_count(TaskType::Poke) == 3);
  CHECK(subtask_count(TaskType::PokeStack) == 5);
  CHECK(subtask_count(TaskType::Hook) == 4);
  CHECK(subtask_count(TaskType::HookStack) == 7);
  CHECK(object_count_range(TaskType::Pass).min == 3);
  CHECK(object_count_range(TaskType::Pass).max == 6);
  for (const TaskType t : kTaskTypes) CHECK(task_type_from_string(to_string(t)) == t);
  CHECK(display_name(TaskType::PokeStack) == "Poke&Stack");
  CHECK_THROWS_AS(task_type_from_string("juggle"), ParseError);
}

TEST_CASE("seed derivation and ids") {
  CHECK(instance_id(TaskType::PokeStack, 7) == "poke_stack_0007");
  CHECK(derive_seed(1, TaskType::Pass, 0) != derive_seed(1, TaskType::Pass, 1));
  CHECK(derive_seed(1, TaskType::Pass, 0) != derive_seed(1, TaskType::Pass2, 0));
  CHECK(derive_seed(1, TaskType::Pass, 0) != derive_seed(2, TaskType::Pass, 0));
  CHECK(derive_seed(1, TaskType::Pass, 0) == derive_seed(1, TaskType::Pass, 0));
}

TEST_CASE("pass instance from seed 7") {
  const TaskInstance inst = sample_task(TaskType::Pass, 7);
  const int n = static_cast<int>(inst.scene0.objects.size());
  CHECK(n >= 3);
  CHECK(n <= 6);
  REQUIRE(inst.goal.atoms.size() == 1);
  CHECK(inst.goal.atoms[0].top.kind == ObjectKind::Cube);
  CHECK(inst.goal.atoms[0].bottom.kind == ObjectKind::Pad);
  CHECK(validate_instance(inst));
}

TEST_CASE("sampling is deterministic") {
  CHECK(sample_task(TaskType::HookStack, 7) == sample_task(TaskType::HookStack, 7));
  CHECK_FALSE(sample_task(TaskType::Stack, 7) == sample_task(TaskType::Stack, 8));
}

TEST_CASE("sampled instances satisfy their role predicates by direct distance checks") {
  for (const TaskType type : kTaskTypes) {
    for (int i = 0; i < 40; ++i) {
      const TaskInstance inst = sample_task(type, derive_seed(17, type, i));
      CAPTURE(inst.id);
      CHECK(validation_failures(inst).empty());
      const auto& atom0 = inst.goal.atoms.front();
      switch (type) {
        case TaskType::Pass:
        case TaskType::Pass2:
        case TaskType::Stack:
        case TaskType::Stack2:
          for (const auto& atom : inst.goal.atoms) {
            const Vec2 a = pos(inst, atom.top);
            const Vec2 b = pos(inst, atom.bottom);
            const int ma = oracle::reach_mask(inst, a.x(), a.y());
            const int mb = oracle::reach_mask(inst, b.x(), b.y());
            CHECK((ma == 1 || ma == 2));
            CHECK((mb == 1 || mb == 2));
            CHECK(ma != mb);
          }
          break;
        case TaskType::Poke:
        case TaskType::PokeStack:
        case TaskType::Hook:
        case TaskType::HookStack: {
          std::vector<ColorKind> targets{atom0.top};
          if (type == TaskType::PokeStack || type == TaskType::HookStack) targets.push_back(atom0.bottom);
          const int holder = tool_side(inst);
          for (const auto& ck : targets) {
            const Vec2 p = pos(inst, ck);
            // The second hook of a hook-stack is made by the robot receiving the tool.
            const int actor = type == TaskType::HookStack && ck == atom0.bottom ? 1 - holder : holder;
            CHECK(oracle::reach_mask(inst, p.x(), p.y()) == 0);
            CHECK(oracle::dist_to_base(actor, p.x(), p.y()) <= oracle::kUr5Reach + oracle::kToolArm);
          }
          break;
        }
      }
    }
  }
}

TEST_CASE("validation rejects broken role layouts") {
  SUBCASE("pass target moved into the shared workspace") {
    TaskInstance inst = sample_task(TaskType::Pass, 3);
    const int id = inst.scene0.lookup(inst.goal.atoms[0].top).front();
    inst.scene0.objects[static_cast<std::size_t>(id)].pose = Pose2::make(0.0, 0.33);
    const auto failures = validation_failures(inst, {}, false);
    CHECK(std::any_of(failures.begin(), failures.end(),
                      [](const std::string& f) { return f.find("exactly one robot") != std::string::npos; }));
  }
  SUBCASE("stack cubes on one side") {
    TaskInstance inst = sample_task(TaskType::Stack, 3);
    const auto& atom = inst.goal.atoms[0];
    const int top = inst.scene0.lookup(atom.top).front();
    const int bottom = inst.scene0.lookup(atom.bottom).front();
    inst.scene0.objects[static_cast<std::size_t>(top)].pose = Pose2::make(-0.9, 0.5);
    inst.scene0.objects[static_cast<std::size_t>(bottom)].pose = Pose2::make(-0.9, -0.5);
    CHECK_FALSE(validate_instance(inst));
  }
  SUBCASE("goal color missing from the scene") {
    TaskInstance inst = sample_task(TaskType::Pass, 3);
    for (const Color c : kObjectColors) {
      if (inst.scene0.lookup({c, ObjectKind::Cube}).empty()) {
        inst.goal.atoms[0].top.color = c;
        break;
      }
    }
    CHECK_FALSE(validate_instance(inst));
  }
  SUBCASE("wrong atom count") {
    TaskInstance inst = sample_task(TaskType::Pass, 3);
    inst.type = TaskType::Pass2;
    CHECK_FALSE(validate_instance(inst));
  }
}

TEST_CASE("generate_instances") {
  const std::array<TaskType, 2> types{TaskType::Pass, TaskType::Hook};
  const auto a = generate_instances(types, 5, 42);
  REQUIRE(a.size() == 10);
  CHECK(a == generate_instances(types, 5, 42));
  CHECK(a[0].id == "pass_0000");
  CHECK(a[9].id == "hook_0004");
  CHECK(a[0].seed == derive_seed(42, TaskType::Pass, 0));
  CHECK(generate_instances(types, 0, 42).empty());
  CHECK_THROWS_AS(generate_instances(types, -1, 42), BadCount);
}

TEST_CASE("canonical decompositions") {
  for (const TaskType type : kTaskTypes) {
    const TaskInstance inst = sample_task(type, derive_seed(5, type, 0));
    const SubTaskDag dag = decompose(inst);
    CAPTURE(to_string(type));
    CHECK(dag.size() == subtask_count(type));
    CHECK(dag.acyclic());
    CHECK(dag.topological_order().size() == static_cast<std::size_t>(dag.size()));
  }
  const SubTaskDag hs = decompose(sample_task(TaskType::HookStack, 9));
  const auto tool_moves = std::count_if(hs.tasks.begin(), hs.tasks.end(), [](const SubTask& t) {
    return t.primitive == Primitive::Move && t.pick == EntityRef{ColorKind{Color::Yellow, ObjectKind::Tool}};
  });
  CHECK(tool_moves == 1);

  TaskInstance broken = sample_task(TaskType::Pass, 4);
  broken.goal.atoms.clear();
  CHECK_THROWS_AS(decompose(broken), DecompositionFailure);
}

TEST_CASE("demonstrations reach the goal inside the budget") {
  for (const TaskType type : kTaskTypes) {
    for (int i = 0; i < 10; ++i) {
      const TaskInstance inst = sample_task(type, derive_seed(23, type, i));
      const EpisodeRecord rec = generate_demonstration(inst);
      CAPTURE(inst.id);
      CHECK(rec.success);
      CHECK(rec.steps.size() == static_cast<std::size_t>(subtask_count(type)));
      const SceneState end = replay(rec, rec.steps.size());
      CHECK(check_goal(end, inst.goal));
      CHECK(end.clock <= kTimeBudget);
      CHECK_THROWS_AS(replay(rec, rec.steps.size() + 1), OutOfBounds);
    }
  }
}

TEST_CASE("swapping the two pass sub-tasks fails with OutOfReach") {
  for (int i = 0; i < 20; ++i) {
    const TaskInstance inst = sample_task(TaskType::Pass, derive_seed(31, TaskType::Pass, i));
    const DryRun run = dry_run(inst);
    REQUIRE(run.success);
    const Execution ex = execute(inst.scene0, run.dag, {1, 0}, run.allocation.gamma);
    CHECK(ex.error == SimError::OutOfReach);
    CHECK(ex.failed_subtask == 1);
  }
}

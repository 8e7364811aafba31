#include <doctest.h>

#include "lemma/alloc.hpp"
#include "lemma/oracle.hpp"
#include "lemma/rng.hpp"
#include "lemma/taskgen.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace lemma;
using testing::add;
using testing::two_robots;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Random problem with a random DAG; edges only go from lower to higher ids.
AllocationProblem random_problem(CounterRng& rng, int m) {
  AllocationProblem p;
  p.quality = Eigen::MatrixXd::Constant(2, m, kQuality);
  p.tau = Eigen::MatrixXd::Zero(2, m);
  p.cost = Eigen::MatrixXd::Zero(2, m);
  p.utility = Eigen::MatrixXd::Constant(2, m, kNegInf);
  p.predecessors.assign(static_cast<std::size_t>(m), {});
  for (int k = 0; k < m; ++k) {
    for (int i = 0; i < 2; ++i) {
      const double tau = rng.uniform(4.0, 16.0);
      p.tau(i, k) = tau;
      p.cost(i, k) = kCostPerSecond * tau;
      if (rng.bernoulli(0.75)) p.utility(i, k) = kQuality - kCostPerSecond * tau;
    }
    for (int j = 0; j < k; ++j) {
      if (rng.bernoulli(0.3)) p.predecessors[static_cast<std::size_t>(k)].push_back(j);
    }
  }
  return p;
}

AllocationProblem independent(const std::vector<std::array<double, 2>>& taus) {
  const int m = static_cast<int>(taus.size());
  AllocationProblem p;
  p.quality = Eigen::MatrixXd::Constant(2, m, kQuality);
  p.tau = Eigen::MatrixXd::Zero(2, m);
  p.cost = Eigen::MatrixXd::Zero(2, m);
  p.utility = Eigen::MatrixXd::Constant(2, m, kNegInf);
  p.predecessors.assign(static_cast<std::size_t>(m), {});
  for (int k = 0; k < m; ++k) {
    for (int i = 0; i < 2; ++i) {
      const double tau = taus[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
      if (tau <= 0.0) continue;
      p.tau(i, k) = tau;
      p.cost(i, k) = kCostPerSecond * tau;
      p.utility(i, k) = kQuality - kCostPerSecond * tau;
    }
  }
  return p;
}

}  // namespace

TEST_CASE("utility of a feasible move") {
  SceneState s = two_robots(RobotModel::UR10, RobotModel::UR5);
  add(s, ObjectKind::Cube, Color::Red, -0.5, 0.2);
  const SubTask sub{0, Primitive::Move, ColorKind{Color::Red, ObjectKind::Cube}, Site::shared(), {}};
  const UtilityTerms u = utility(s.robots[0], sub, s);
  const double tau = oracle::move_duration(-0.75, 0, -0.5, 0.2, 0, 0);
  CHECK(u.tau == doctest::Approx(tau));
  CHECK(u.u == doctest::Approx(1.0 - 0.001 * tau));
  CHECK(u.feasible());
  CHECK_FALSE(utility(s.robots[1], sub, s).feasible());
  CHECK(utility(s.robots[1], sub, s).u == kNegInf);
}

TEST_CASE("feasibility per robot") {
  SceneState s = two_robots();
  add(s, ObjectKind::Cube, Color::Pink, -0.6, 0.3);
  const SubTask sub{0, Primitive::Move, ColorKind{Color::Pink, ObjectKind::Cube}, Site::shared(), {}};
  CHECK(feasible(s.robots[0], sub, s));
  CHECK_FALSE(feasible(s.robots[1], sub, s));

  SceneState h = two_robots();
  add(h, ObjectKind::Cube, Color::Pink, 0.15, 0.4);  // 0.983 m from robot 0
  add(h, ObjectKind::Tool, Color::Yellow, -0.5, -0.3);
  const SubTask align{0, Primitive::PreHook, ColorKind{Color::Yellow, ObjectKind::Tool}, Site::align_with(Color::Pink),
                      {}};
  const SubTask hook{1, Primitive::Hook, ColorKind{Color::Pink, ObjectKind::Cube}, Site::own_workspace(), {0}};
  CHECK(feasible(h.robots[0], align, h));
  CHECK_FALSE(feasible(h.robots[1], align, h));
  CHECK_FALSE(feasible(h.robots[0], hook, h));  // tool not aligned yet
  const StepResult r = apply(h, ground(align, RobotId::R0, h).action);
  REQUIRE(r.ok());
  CHECK(feasible(r.state.robots[0], hook, r.state));
}

TEST_CASE("slower robot gets strictly smaller utility") {
  SceneState s = two_robots(RobotModel::UR10, RobotModel::UR10);
  add(s, ObjectKind::Cube, Color::Red, -0.2, 0.1);
  const SubTask sub{0, Primitive::Move, ColorKind{Color::Red, ObjectKind::Cube}, Site::shared(), {}};
  const UtilityTerms near = utility(s.robots[0], sub, s);
  const UtilityTerms far = utility(s.robots[1], sub, s);
  REQUIRE(near.feasible());
  REQUIRE(far.feasible());
  CHECK(far.tau > near.tau);
  CHECK(far.u < near.u);
}

TEST_CASE("pass allocation matches brute force") {
  const TaskInstance inst = sample_task(TaskType::Pass, 12);
  const SubTaskDag dag = decompose(inst);
  const AllocationProblem p = build_problem(dag, inst.scene0);
  const Allocation a = solve_exact(p, kTimeBudget);
  REQUIRE(a.complete());
  CHECK(a.gamma[0] != a.gamma[1]);
  CHECK(a.total_utility == doctest::Approx(2.0 - 0.001 * (a.total_time)));
  CHECK(a.total_utility == doctest::Approx(oracle::exhaustive(p, kTimeBudget).utility));
}

TEST_CASE("empty and zero-budget problems") {
  const AllocationProblem empty = independent({});
  const Allocation a = solve_exact(empty, 100.0);
  CHECK(a.gamma.empty());
  CHECK(a.total_utility == 0.0);
  CHECK(solve_greedy(empty, 100.0).gamma.empty());

  const TaskInstance inst = sample_task(TaskType::HookStack, 3);
  const AllocationProblem p = build_problem(decompose(inst), inst.scene0);
  const Allocation full = solve_exact(p, kTimeBudget);
  CHECK(full.assigned() == 7);
  const Allocation none = solve_exact(p, 0.0);
  CHECK(none.assigned() == 0);
  CHECK(none.total_utility == 0.0);
}

TEST_CASE("exact solver equals exhaustive enumeration on random problems") {
  CounterRng rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const int m = static_cast<int>(rng.uniform_int(1, 7));
    const AllocationProblem p = random_problem(rng, m);
    const double t_max = rng.uniform(0.0, 70.0);
    const Allocation exact = solve_exact(p, t_max);
    const oracle::Best best = oracle::exhaustive(p, t_max);
    CAPTURE(trial);
    CHECK(exact.total_utility == doctest::Approx(best.utility).epsilon(1e-12));
    CHECK(check_allocation(p, exact, t_max).empty());
    const Allocation greedy = solve_greedy(p, t_max);
    CHECK(check_allocation(p, greedy, t_max).empty());
    CHECK(greedy.total_utility <= exact.total_utility + 1e-12);
  }
}

TEST_CASE("greedy loses when an early long sub-task eats the budget") {
  const AllocationProblem p = independent({{9.0, 0.0}, {5.0, 0.0}, {0.0, 5.0}});
  const Allocation exact = solve_exact(p, 10.0);
  const Allocation greedy = solve_greedy(p, 10.0);
  CHECK(greedy.assigned() == 1);
  CHECK(exact.assigned() == 2);
  CHECK(greedy.total_utility == doctest::Approx(1.0 - 0.009));
  CHECK(exact.total_utility == doctest::Approx(2.0 - 0.010));
  CHECK(greedy.total_utility < exact.total_utility);
}

TEST_CASE("greedy equals exact on pass instances") {
  for (int i = 0; i < 50; ++i) {
    const TaskInstance inst = sample_task(TaskType::Pass, derive_seed(8, TaskType::Pass, i));
    const AllocationProblem p = build_problem(decompose(inst), inst.scene0);
    const Allocation e = solve_exact(p, kTimeBudget);
    const Allocation g = solve_greedy(p, kTimeBudget);
    CHECK(e.gamma == g.gamma);
    CHECK(e.total_utility == doctest::Approx(g.total_utility));
  }
}

TEST_CASE("optimal assignment is invariant under positive scaling of utilities") {
  CounterRng rng(5150);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = static_cast<int>(rng.uniform_int(2, 6));
    AllocationProblem p = random_problem(rng, m);
    const double t_max = rng.uniform(20.0, 70.0);
    const Allocation base = solve_exact(p, t_max);
    AllocationProblem scaled = p;
    scaled.utility = p.utility * 3.5;
    const Allocation s = solve_exact(scaled, t_max);
    CHECK(s.gamma == base.gamma);
    CHECK(s.total_utility == doctest::Approx(3.5 * base.total_utility));
  }
}

TEST_CASE("check_allocation flags violations") {
  AllocationProblem p = independent({{5.0, 6.0}, {5.0, 0.0}});
  p.predecessors[1] = {0};
  CHECK(check_allocation(p, make_allocation(p, {RobotId::R0, RobotId::R0}), 100.0).empty());
  CHECK_FALSE(check_allocation(p, make_allocation(p, {std::nullopt, RobotId::R0}), 100.0).empty());
  CHECK_FALSE(check_allocation(p, make_allocation(p, {RobotId::R0, RobotId::R1}), 100.0).empty());
  CHECK_FALSE(check_allocation(p, make_allocation(p, {RobotId::R0, RobotId::R0}), 9.0).empty());
}

TEST_CASE("solve_exact rejects oversized problems") {
  std::vector<std::array<double, 2>> taus(kMaxExactSubtasks + 1, {1.0, 1.0});
  CHECK_THROWS_AS(solve_exact(independent(taus), 100.0), std::invalid_argument);
}

TEST_CASE("dag topological order") {
  SubTaskDag dag;
  dag.tasks = {{0, Primitive::Move, Site::shared(), Site::shared(), {2}},
               {1, Primitive::Move, Site::shared(), Site::shared(), {}},
               {2, Primitive::Move, Site::shared(), Site::shared(), {1}}};
  CHECK(dag.acyclic());
  CHECK(dag.topological_order() == std::vector<int>{1, 2, 0});
  dag.tasks[1].depends_on = {0};
  CHECK_FALSE(dag.acyclic());
  CHECK_THROWS_AS(dag.topological_order(), std::invalid_argument);
}

#include "lemma/alloc.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "lemma/error.hpp"

namespace lemma {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// robot 0 < robot 1 < unassigned, element by element.
int gamma_rank(const std::optional<RobotId>& g) { return g ? index_of(*g) : 2; }

bool gamma_less(const std::vector<std::optional<RobotId>>& a,
                const std::vector<std::optional<RobotId>>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                      [](const auto& x, const auto& y) {
                                        return gamma_rank(x) < gamma_rank(y);
                                      });
}

bool better(const Allocation& a, const Allocation& b) {
  if (a.total_utility != b.total_utility) return a.total_utility > b.total_utility;
  if (a.total_time != b.total_time) return a.total_time < b.total_time;
  return gamma_less(a.gamma, b.gamma);
}

std::vector<int> topo_order(const AllocationProblem& problem) {
  SubTaskDag dag;
  for (int m = 0; m < problem.subtasks(); ++m) {
    dag.tasks.push_back(SubTask{m, Primitive::Move, ColorKind{}, Site::shared(),
                                problem.predecessors[static_cast<std::size_t>(m)]});
  }
  return dag.topological_order();
}

}  // namespace

int Allocation::assigned() const {
  return static_cast<int>(std::count_if(gamma.begin(), gamma.end(), [](const auto& g) {
    return g.has_value();
  }));
}

bool feasible(const RobotSpec& robot, const SubTask& sub, const SceneState& scene,
              const World& world) {
  return grounding_feasible(ground(sub, robot.id, scene, world), scene, world);
}

UtilityTerms utility(const RobotSpec& robot, const SubTask& sub, const SceneState& scene,
                     const World& world) {
  UtilityTerms terms;
  try {
    const Grounding g = ground(sub, robot.id, scene, world);
    terms.q = kQuality;
    terms.tau = action_duration(robot, g.action, world);
    terms.c = kCostPerSecond * terms.tau;
    if (grounding_feasible(g, scene, world)) terms.u = terms.q - terms.c;
  } catch (const UnresolvableEntity&) {
    terms.u = kNegInf;
  }
  return terms;
}

AllocationProblem build_problem(const SubTaskDag& dag, const SceneState& scene, const World& world) {
  const int n = static_cast<int>(scene.robots.size());
  const int m_count = dag.size();
  AllocationProblem problem;
  problem.quality = Eigen::MatrixXd::Zero(n, m_count);
  problem.cost = Eigen::MatrixXd::Zero(n, m_count);
  problem.tau = Eigen::MatrixXd::Zero(n, m_count);
  problem.utility = Eigen::MatrixXd::Constant(n, m_count, kNegInf);
  for (const auto& t : dag.tasks) problem.predecessors.push_back(t.depends_on);

  SceneState predicted = scene;
  for (const int m : dag.topological_order()) {
    const SubTask& sub = dag.tasks[static_cast<std::size_t>(m)];
    int best = -1;
    for (int i = 0; i < n; ++i) {
      const UtilityTerms terms = utility(scene.robots[i], sub, predicted, world);
      problem.quality(i, m) = terms.q;
      problem.cost(i, m) = terms.c;
      problem.tau(i, m) = terms.tau;
      problem.utility(i, m) = terms.u;
      if (terms.feasible() && (best < 0 || terms.u > problem.utility(best, m))) best = i;
    }
    if (best < 0) continue;
    const Grounding g = ground(sub, scene.robots[best].id, predicted, world);
    StepResult step = apply(predicted, g.action, world);
    if (step.ok()) predicted = std::move(step.state);
  }
  return problem;
}

Allocation make_allocation(const AllocationProblem& problem,
                           std::vector<std::optional<RobotId>> gamma) {
  Allocation a;
  const int n = problem.robots();
  const int m_count = problem.subtasks();
  a.v = Eigen::MatrixXi::Zero(n, m_count);
  for (int m = 0; m < m_count; ++m) {
    if (const auto& g = gamma[static_cast<std::size_t>(m)]) {
      const int i = index_of(*g);
      a.v(i, m) = 1;
      a.total_utility += problem.utility(i, m);
      a.total_time += problem.tau(i, m);
    }
  }
  for (const int m : topo_order(problem)) {
    if (gamma[static_cast<std::size_t>(m)]) a.order.push_back(m);
  }
  a.gamma = std::move(gamma);
  return a;
}

Allocation solve_exact(const AllocationProblem& problem, double t_max) {
  const int n = problem.robots();
  const int m_count = problem.subtasks();
  if (m_count > kMaxExactSubtasks) {
    throw std::invalid_argument("solve_exact supports at most " +
                                std::to_string(kMaxExactSubtasks) + " sub-tasks");
  }
  const std::vector<int> order = topo_order(problem);

  // Optimistic remaining utility from position k onwards.
  std::vector<double> remaining(static_cast<std::size_t>(m_count) + 1, 0.0);
  for (int k = m_count - 1; k >= 0; --k) {
    double best = 0.0;
    for (int i = 0; i < n; ++i) {
      if (problem.feasible(i, order[k])) best = std::max(best, problem.utility(i, order[k]));
    }
    remaining[k] = remaining[k + 1] + best;
  }

  std::vector<std::optional<RobotId>> gamma(static_cast<std::size_t>(m_count));
  std::optional<Allocation> incumbent;
  constexpr double kSlack = 1e-9;

  std::function<void(int, double, double)> search = [&](int k, double u, double t) {
    if (incumbent && u + remaining[k] < incumbent->total_utility - kSlack) return;
    if (k == m_count) {
      Allocation candidate = make_allocation(problem, gamma);
      if (candidate.total_time > t_max) return;
      if (!incumbent || better(candidate, *incumbent)) incumbent = std::move(candidate);
      return;
    }
    const int m = order[k];
    const auto& preds = problem.predecessors[static_cast<std::size_t>(m)];
    const bool closed = std::all_of(preds.begin(), preds.end(), [&](int p) {
      return gamma[static_cast<std::size_t>(p)].has_value();
    });
    if (closed) {
      for (int i = 0; i < n; ++i) {
        if (!problem.feasible(i, m) || t + problem.tau(i, m) > t_max + kSlack) continue;
        gamma[static_cast<std::size_t>(m)] = static_cast<RobotId>(i);
        search(k + 1, u + problem.utility(i, m), t + problem.tau(i, m));
      }
    }
    gamma[static_cast<std::size_t>(m)].reset();
    search(k + 1, u, t);
  };
  search(0, 0.0, 0.0);

  // The empty assignment always satisfies the constraints.
  if (!incumbent) incumbent = make_allocation(problem, std::vector<std::optional<RobotId>>(m_count));
  return *incumbent;
}

Allocation solve_exact(const SubTaskDag& dag, const SceneState& scene, double t_max,
                       const World& world) {
  return solve_exact(build_problem(dag, scene, world), t_max);
}

Allocation solve_greedy(const AllocationProblem& problem, double t_max) {
  const int n = problem.robots();
  std::vector<std::optional<RobotId>> gamma(static_cast<std::size_t>(problem.subtasks()));
  double running = 0.0;
  for (const int m : topo_order(problem)) {
    const auto& preds = problem.predecessors[static_cast<std::size_t>(m)];
    const bool closed = std::all_of(preds.begin(), preds.end(), [&](int p) {
      return gamma[static_cast<std::size_t>(p)].has_value();
    });
    if (!closed) continue;
    int best = -1;
    for (int i = 0; i < n; ++i) {
      if (problem.feasible(i, m) && (best < 0 || problem.utility(i, m) > problem.utility(best, m))) {
        best = i;
      }
    }
    if (best < 0 || running + problem.tau(best, m) > t_max) continue;
    gamma[static_cast<std::size_t>(m)] = static_cast<RobotId>(best);
    running += problem.tau(best, m);
  }
  return make_allocation(problem, std::move(gamma));
}

Allocation solve_greedy(const SubTaskDag& dag, const SceneState& scene, double t_max,
                        const World& world) {
  return solve_greedy(build_problem(dag, scene, world), t_max);
}

std::vector<std::string> check_allocation(const AllocationProblem& problem,
                                          const Allocation& allocation, double t_max) {
  std::vector<std::string> violations;
  const int n = problem.robots();
  const int m_count = problem.subtasks();
  if (static_cast<int>(allocation.gamma.size()) != m_count || allocation.v.rows() != n ||
      allocation.v.cols() != m_count) {
    violations.emplace_back("allocation shape does not match the problem");
    return violations;
  }
  double time = 0.0;
  double util = 0.0;
  for (int m = 0; m < m_count; ++m) {
    int column = 0;
    for (int i = 0; i < n; ++i) {
      const int v = allocation.v(i, m);
      if (v != 0 && v != 1) violations.push_back("v(" + std::to_string(i) + "," + std::to_string(m) + ") is not binary");
      column += v;
      if (v == 1) {
        if (!problem.feasible(i, m)) {
          violations.push_back("sub-task " + std::to_string(m) + " assigned to an incapable robot");
        }
        time += problem.tau(i, m);
        util += problem.utility(i, m);
      }
    }
    if (column > 1) violations.push_back("sub-task " + std::to_string(m) + " assigned more than once");
    const auto& g = allocation.gamma[static_cast<std::size_t>(m)];
    const bool agrees = g ? (allocation.v(index_of(*g), m) == 1 && column == 1) : column == 0;
    if (!agrees) violations.push_back("gamma and v disagree at sub-task " + std::to_string(m));
    if (g) {
      for (const int p : problem.predecessors[static_cast<std::size_t>(m)]) {
        if (!allocation.gamma[static_cast<std::size_t>(p)]) {
          violations.push_back("sub-task " + std::to_string(m) + " assigned without predecessor " +
                               std::to_string(p));
        }
      }
    }
  }
  if (time > t_max) violations.push_back("time budget exceeded");
  if (time != allocation.total_time) violations.emplace_back("total_time does not match v");
  if (util != allocation.total_utility) violations.emplace_back("total_utility does not match v");

  std::vector<int> position(static_cast<std::size_t>(m_count), -1);
  for (std::size_t k = 0; k < allocation.order.size(); ++k) {
    const int m = allocation.order[k];
    if (m < 0 || m >= m_count || position[static_cast<std::size_t>(m)] >= 0 ||
        !allocation.gamma[static_cast<std::size_t>(m)]) {
      violations.emplace_back("order lists an unassigned or repeated sub-task");
      return violations;
    }
    position[static_cast<std::size_t>(m)] = static_cast<int>(k);
  }
  if (static_cast<int>(allocation.order.size()) != allocation.assigned()) {
    violations.emplace_back("order does not cover every assigned sub-task");
  }
  for (int m = 0; m < m_count; ++m) {
    if (position[static_cast<std::size_t>(m)] < 0) continue;
    for (const int p : problem.predecessors[static_cast<std::size_t>(m)]) {
      if (position[static_cast<std::size_t>(p)] >= position[static_cast<std::size_t>(m)]) {
        violations.push_back("order runs sub-task " + std::to_string(m) + " before predecessor " +
                             std::to_string(p));
      }
    }
  }
  return violations;
}

}  // namespace lemma

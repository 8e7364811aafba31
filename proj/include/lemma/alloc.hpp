#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lemma/subtask.hpp"

namespace lemma {

/// Per (robot, sub-task) terms of the allocation objective.
struct UtilityTerms {
  double q = 0.0;
  double c = 0.0;
  double tau = 0.0;
  double u = -std::numeric_limits<double>::infinity();

  bool feasible() const { return u != -std::numeric_limits<double>::infinity(); }
};

/// Quality is constant and cost is proportional to the estimated duration,
/// so completing more sub-tasks always dominates and time breaks ties.
inline constexpr double kQuality = 1.0;
inline constexpr double kCostPerSecond = 0.001;

/// Bound on the number of sub-tasks solve_exact accepts.
inline constexpr int kMaxExactSubtasks = 12;

/// Dense form of the assignment problem: N x M matrices indexed by
/// (robot, sub-task) and the precedence lists.
struct AllocationProblem {
  Eigen::MatrixXd quality;
  Eigen::MatrixXd cost;
  Eigen::MatrixXd tau;
  Eigen::MatrixXd utility;  // -inf where the robot cannot execute the sub-task
  std::vector<std::vector<int>> predecessors;

  int robots() const { return static_cast<int>(utility.rows()); }
  int subtasks() const { return static_cast<int>(utility.cols()); }
  bool feasible(int i, int m) const {
    return utility(i, m) != -std::numeric_limits<double>::infinity();
  }
};

struct Allocation {
  std::vector<std::optional<RobotId>> gamma;  // per sub-task; empty = unassigned
  Eigen::MatrixXi v;                          // N x M indicator
  std::vector<int> order;                     // topological order of assigned sub-tasks
  double total_utility = 0.0;
  double total_time = 0.0;

  int assigned() const;
  bool complete() const { return assigned() == static_cast<int>(gamma.size()); }
};

bool feasible(const RobotSpec& robot, const SubTask& sub, const SceneState& scene,
              const World& world = {});
UtilityTerms utility(const RobotSpec& robot, const SubTask& sub, const SceneState& scene,
                     const World& world = {});

/// Evaluates every (robot, sub-task) pair. Sub-tasks are visited in
/// topological order against a predicted scene in which each predecessor has
/// already been carried out by its best robot, so a pick that a predecessor
/// brings into reach is judged at the predecessor's place site.
AllocationProblem build_problem(const SubTaskDag& dag, const SceneState& scene,
                                const World& world = {});

/// Maximizes sum u_im v_im subject to the time budget, at most one robot per
/// sub-task, and precedence closure. Ties prefer the smaller total time, then
/// the lexicographically smallest gamma (robot 0 < robot 1 < unassigned).
/// Throws std::invalid_argument if M > kMaxExactSubtasks.
Allocation solve_exact(const AllocationProblem& problem, double t_max);
Allocation solve_exact(const SubTaskDag& dag, const SceneState& scene, double t_max,
                       const World& world = {});

/// Topological sweep assigning each sub-task to its best feasible robot
/// while the running time fits the budget.
Allocation solve_greedy(const AllocationProblem& problem, double t_max);
Allocation solve_greedy(const SubTaskDag& dag, const SceneState& scene, double t_max,
                        const World& world = {});

/// Builds the full Allocation record (v, order, totals) from gamma. Totals are
/// summed in sub-task index order.
Allocation make_allocation(const AllocationProblem& problem,
                           std::vector<std::optional<RobotId>> gamma);

/// Lists every violated constraint; empty means the allocation is valid.
std::vector<std::string> check_allocation(const AllocationProblem& problem,
                                          const Allocation& allocation, double t_max);

}  // namespace lemma

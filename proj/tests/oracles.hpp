#pragma once

// Reference computations written without the library's geometry or solver
// code. Tests and the acceptance runner compare library output against them.

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "lemma/alloc.hpp"
#include "lemma/task.hpp"

namespace oracle {

inline constexpr double kUr5Reach = 0.85;
inline constexpr double kUr10Reach = 1.30;
inline constexpr double kToolArm = 0.40;
inline constexpr double kBaseX = 0.75;

inline double nominal_reach(lemma::RobotModel m) { return m == lemma::RobotModel::UR5 ? kUr5Reach : kUr10Reach; }

inline double base_x(int robot) { return robot == 0 ? -kBaseX : kBaseX; }

inline double dist_to_base(int robot, double x, double y) { return std::hypot(x - base_x(robot), y); }

/// Robots whose plain disk covers (x, y), as a bitmask.
inline int reach_mask(const lemma::TaskInstance& inst, double x, double y) {
  int mask = 0;
  for (int r = 0; r < 2; ++r) {
    if (dist_to_base(r, x, y) <= nominal_reach(inst.scene0.robots[static_cast<std::size_t>(r)].model)) mask |= 1 << r;
  }
  return mask;
}

/// Straight-line travel base -> pick -> place at 0.25 m/s plus 4 s overhead.
inline double move_duration(double bx, double by, double px, double py, double qx, double qy) {
  const double leg1 = std::sqrt((px - bx) * (px - bx) + (py - by) * (py - by));
  const double leg2 = std::sqrt((qx - px) * (qx - px) + (qy - py) * (qy - py));
  return (leg1 + leg2) / 0.25 + 2.0 + 2.0;
}

struct Best {
  double utility = 0.0;
  double time = 0.0;
  int assigned = 0;
};

/// Enumerates all 3^M assignments (robot 0, robot 1, skipped) and keeps the
/// best one that respects the budget, precedence closure and feasibility.
inline Best exhaustive(const lemma::AllocationProblem& p, double t_max) {
  const int m = p.subtasks();
  const int n = p.robots();
  const int choices = n + 1;
  long total = 1;
  for (int k = 0; k < m; ++k) total *= choices;
  Best best;
  bool found = false;
  std::vector<int> pick(static_cast<std::size_t>(m));
  for (long code = 0; code < total; ++code) {
    long c = code;
    for (int k = 0; k < m; ++k) {
      pick[static_cast<std::size_t>(k)] = static_cast<int>(c % choices);
      c /= choices;
    }
    double u = 0.0;
    double t = 0.0;
    int count = 0;
    bool ok = true;
    for (int k = 0; k < m && ok; ++k) {
      const int r = pick[static_cast<std::size_t>(k)];
      if (r == n) continue;
      if (!std::isfinite(p.utility(r, k))) ok = false;
      for (const int pre : p.predecessors[static_cast<std::size_t>(k)]) {
        if (pick[static_cast<std::size_t>(pre)] == n) ok = false;
      }
      u += p.utility(r, k);
      t += p.tau(r, k);
      ++count;
    }
    if (!ok || t > t_max) continue;
    if (!found || u > best.utility + 1e-12 || (std::abs(u - best.utility) <= 1e-12 && t < best.time)) {
      best = {u, t, count};
      found = true;
    }
  }
  return best;
}

}  // namespace oracle

#pragma once

#include <string>
#include <vector>

#include "lemma/alloc.hpp"
#include "lemma/lang.hpp"
#include "lemma/task.hpp"

namespace lemma {

/// Episode time budget in seconds.
inline constexpr double kTimeBudget = 100.0;

struct EpisodeStep {
  double clock = 0.0;  // scene clock before the step
  SubInstruction sub;
  PrimitiveAction action;
  TransitionReceipt receipt;
  std::string observation_ref;  // relative raster path without extension; empty when not rendered

  bool operator==(const EpisodeStep&) const = default;
};

struct EpisodeRecord {
  TaskInstance instance;
  Instruction high;
  Instruction human;
  std::vector<EpisodeStep> steps;
  std::string final_observation_ref;
  bool success = false;

  const std::string& id() const { return instance.id; }
  bool operator==(const EpisodeRecord&) const = default;
};

/// Canonical sub-task graph of the instance's type, derived from the goal and
/// the initial scene only. Throws DecompositionFailure.
SubTaskDag decompose(const TaskInstance& instance, const World& world = {});

/// Outcome of running decompose -> solve_exact -> sim in allocation order.
struct DryRun {
  SubTaskDag dag;
  Allocation allocation;
  std::vector<EpisodeStep> steps;
  SceneState final_state;
  bool success = false;
  std::string failure;  // empty on success
};

/// Never throws for library errors; failures are reported in `failure`.
DryRun dry_run(const TaskInstance& instance, double t_max = kTimeBudget, const World& world = {});

/// Executes the sub-tasks of `dag` listed in `order` with the robots in
/// `gamma`, re-grounding every entity against the live state. Stops at the
/// first sim error.
struct Execution {
  std::vector<EpisodeStep> steps;
  SceneState state;
  SimError error = SimError::None;
  int failed_subtask = -1;
};
Execution execute(const SceneState& scene, const SubTaskDag& dag, const std::vector<int>& order,
                  const std::vector<std::optional<RobotId>>& gamma, const World& world = {});

/// Template id drawn for the instance's human instruction.
int human_template_id(const TaskInstance& instance, const TemplatePool& pool = TemplatePool::builtin());

/// Expert demonstration with both instructions. Throws DemonstrationFailure.
EpisodeRecord generate_demonstration(const TaskInstance& instance, const World& world = {});

/// Replays the recorded actions from the initial scene. Returns the scene
/// before step `k` (k = steps.size() gives the final scene).
SceneState replay(const EpisodeRecord& record, std::size_t k, const World& world = {});

}  // namespace lemma

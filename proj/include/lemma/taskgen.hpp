#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lemma/task.hpp"

namespace lemma {

inline constexpr int kMaxGenerationAttempts = 10000;

/// Seed of instance `index` of `type` under a master seed.
std::uint64_t derive_seed(std::uint64_t master, TaskType type, int index);

/// "<type>_<index:04d>", e.g. "poke_stack_0007".
std::string instance_id(TaskType type, int index);

/// Rejection-samples a valid instance. Deterministic in (type, seed, world).
/// Throws GenerationExhausted after kMaxGenerationAttempts whole-instance
/// rejections.
TaskInstance sample_task(TaskType type, std::uint64_t seed, const World& world = {});

/// Every violated predicate, empty when the instance is valid. With
/// `dry_run` the oracle demonstration is also executed and must reach the
/// goal within the time budget.
std::vector<std::string> validation_failures(const TaskInstance& instance, const World& world = {},
                                             bool dry_run = true);

inline bool validate_instance(const TaskInstance& instance, const World& world = {}) {
  return validation_failures(instance, world).empty();
}

/// `count` instances per type, ids and seeds derived from `master`.
std::vector<TaskInstance> generate_instances(std::span<const TaskType> types, int count,
                                             std::uint64_t master, const World& world = {});

/// The robot whose disk holds the tool; throws UnresolvableEntity when there
/// is no tool or both or neither robot reaches it.
RobotId tool_holder(const SceneState& state);

}  // namespace lemma

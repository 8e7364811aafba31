#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "lemma/scene.hpp"

namespace lemma {

enum class TaskType { Pass, Pass2, Stack, Stack2, Poke, PokeStack, Hook, HookStack };

inline constexpr std::array<TaskType, 8> kTaskTypes{
    TaskType::Pass, TaskType::Pass2,     TaskType::Stack, TaskType::Stack2,
    TaskType::Poke, TaskType::PokeStack, TaskType::Hook,  TaskType::HookStack};

/// Snake-case name, also used as the dataset directory name.
std::string_view to_string(TaskType type);
/// Column header as printed in reports ("Poke&Stack").
std::string_view display_name(TaskType type);
TaskType task_type_from_string(std::string_view s);

struct ObjectCountRange {
  int min = 0;
  int max = 0;
};

/// Total object counts per task type.
ObjectCountRange object_count_range(TaskType type);
/// Number of sub-tasks in the canonical decomposition.
int subtask_count(TaskType type);
int goal_atom_count(TaskType type);
bool uses_tool(TaskType type);
bool has_pads(TaskType type);
/// Number of objects the goal and its execution need (targets, pads, tool).
int essential_object_count(TaskType type);

struct TaskInstance {
  std::string id;
  TaskType type = TaskType::Pass;
  SceneState scene0;
  GoalCondition goal;
  std::uint64_t seed = 0;

  const std::array<RobotSpec, 2>& robot_pair() const { return scene0.robots; }

  bool operator==(const TaskInstance&) const = default;
};

}  // namespace lemma

#include "lemma/task.hpp"

#include "lemma/error.hpp"

namespace lemma {
namespace {

struct TaskTraits {
  TaskType type;
  std::string_view name;
  std::string_view display;
  ObjectCountRange objects;
  int subtasks;
  int atoms;
  bool tool;
  bool pads;
};

constexpr std::array<TaskTraits, 8> kTraits{{
    {TaskType::Pass, "pass", "Pass", {3, 6}, 2, 1, false, true},
    {TaskType::Pass2, "pass2", "Pass2", {6, 8}, 4, 2, false, true},
    {TaskType::Stack, "stack", "Stack", {2, 5}, 2, 1, false, false},
    {TaskType::Stack2, "stack2", "Stack2", {4, 6}, 4, 2, false, false},
    {TaskType::Poke, "poke", "Poke", {4, 6}, 3, 1, true, true},
    {TaskType::PokeStack, "poke_stack", "Poke&Stack", {3, 5}, 5, 1, true, false},
    {TaskType::Hook, "hook", "Hook", {3, 5}, 4, 1, true, true},
    {TaskType::HookStack, "hook_stack", "Hook&Stack", {3, 6}, 7, 1, true, false},
}};

const TaskTraits& traits(TaskType type) { return kTraits[static_cast<std::size_t>(type)]; }

}  // namespace

std::string_view to_string(TaskType type) { return traits(type).name; }
std::string_view display_name(TaskType type) { return traits(type).display; }

TaskType task_type_from_string(std::string_view s) {
  for (const auto& t : kTraits) {
    if (t.name == s || t.display == s) return t.type;
  }
  throw ParseError("unknown task type '" + std::string(s) + "'");
}

ObjectCountRange object_count_range(TaskType type) { return traits(type).objects; }
int subtask_count(TaskType type) { return traits(type).subtasks; }
int goal_atom_count(TaskType type) { return traits(type).atoms; }
bool uses_tool(TaskType type) { return traits(type).tool; }
bool has_pads(TaskType type) { return traits(type).pads; }

int essential_object_count(TaskType type) {
  // Two objects per goal atom, plus the tool.
  return 2 * goal_atom_count(type) + (uses_tool(type) ? 1 : 0);
}

}  // namespace lemma

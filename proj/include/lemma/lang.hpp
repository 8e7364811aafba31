#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lemma/subtask.hpp"
#include "lemma/task.hpp"

namespace lemma {

enum class InstructionKind { HighLevel, Human };

std::string_view to_string(InstructionKind kind);
InstructionKind instruction_kind_from_string(std::string_view s);

struct Instruction {
  std::string text;
  InstructionKind kind = InstructionKind::HighLevel;
  int template_id = 0;

  std::vector<std::string> tokens() const;

  bool operator==(const Instruction&) const = default;
};

/// (robot, primitive, pick entity, place entity) for one allocated sub-task.
struct SubInstruction {
  RobotId robot = RobotId::R0;
  Primitive primitive = Primitive::Move;
  EntityRef pick;
  EntityRef place;

  bool operator==(const SubInstruction&) const = default;
};

// High-level instructions --------------------------------------------------

Instruction lexicalize_high(const GoalCondition& goal, TaskType type);

struct ParsedGoal {
  GoalCondition goal;
  std::set<TaskType> ambiguity;  // task types sharing the matched template
};

/// Throws ParseError when the text matches no high-level template.
ParsedGoal parse_high(std::string_view text);

// Human-style instructions ------------------------------------------------

struct HumanTemplate {
  TaskType type = TaskType::Pass;
  int id = 0;
  std::string pattern;
};

/// Template pool read from a TSV table: task_type <TAB> template_id <TAB>
/// pattern, with {pick-color}/{place-color} slots (suffixed 1/2 for
/// two-atom tasks).
class TemplatePool {
 public:
  static TemplatePool parse(std::string_view tsv);
  static TemplatePool load(const std::string& path);
  /// The pool shipped in data/templates.tsv, compiled in.
  static const TemplatePool& builtin();

  int size(TaskType type) const;
  /// Throws UnknownTemplate.
  const HumanTemplate& get(TaskType type, int id) const;
  const std::vector<HumanTemplate>& all() const { return templates_; }

  /// Lint: every template mentions all goal slots of its task type.
  std::vector<std::string> lint() const;

 private:
  std::vector<HumanTemplate> templates_;
  std::map<TaskType, std::vector<std::size_t>> by_type_;
};

/// Fills the template's color slots. For two-atom goals `rng_seed` decides
/// which atom fills the "1" slots.
Instruction lexicalize_human(const GoalCondition& goal, TaskType type, int template_id,
                             std::uint64_t rng_seed,
                             const TemplatePool& pool = TemplatePool::builtin());

// Sub-instruction codec ---------------------------------------------------

std::string encode_entity(const EntityRef& ref);
EntityRef decode_entity(std::string_view token);

/// "<robot> <primitive> <pick> <place>", e.g. "robot0 move red_cube shared_space".
/// Throws CodecError for Stop, which carries no entities.
std::string encode_sub_instruction(const SubInstruction& s);
/// Throws CodecError on malformed text.
SubInstruction decode_sub_instruction(std::string_view text);

}  // namespace lemma

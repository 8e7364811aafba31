#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lemma/dataset.hpp"

namespace lemma {

enum class ObservationMode { Symbolic, RasterOnly };

std::string_view to_string(ObservationMode mode);
ObservationMode observation_mode_from_string(std::string_view s);

inline constexpr int kMaxDecisions = 32;

struct EvalConfig {
  double t_max = kTimeBudget;
  int runs = 10;
  InstructionKind instruction_kind = InstructionKind::HighLevel;
  ObservationMode observation_mode = ObservationMode::Symbolic;
  int max_decisions = kMaxDecisions;
};

/// A sub-instruction with the concrete poses to execute.
struct Act {
  SubInstruction sub;
  PrimitiveAction action;

  bool operator==(const Act&) const = default;
};

struct StopDecision {
  bool operator==(const StopDecision&) const = default;
};

using PolicyDecision = std::variant<Act, StopDecision>;

struct TraceEntry {
  Act act;
  SimError error = SimError::None;
  double clock = 0.0;  // scene clock after the decision
};

struct PolicyInput {
  const Instruction& instruction;
  const SceneState* state = nullptr;         // symbolic mode, or any mode for privileged policies
  const Observation* observation = nullptr;  // raster mode
  const TaskInstance* instance = nullptr;    // privileged policies only
  const std::vector<TraceEntry>& history;
  double t_max = kTimeBudget;
};

class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string name() const = 0;
  virtual bool privileged() const { return false; }
  /// Called before every episode; `seed` drives any policy randomness.
  virtual void reset(std::uint64_t seed) { (void)seed; }
  virtual PolicyDecision decide(const PolicyInput& input) = 0;
};

/// decompose + solve_exact on the privileged instance, grounded on the live
/// state.
std::unique_ptr<Policy> make_oracle_policy(const World& world = {});
/// parse_high for the goal, symbolic state for geometry, canonical DAG with
/// the greedy solver. Stops when the instruction does not parse.
std::unique_ptr<Policy> make_scripted_policy(const World& world = {});
/// Uniform sub-instructions among those that ground in the current scene.
std::unique_ptr<Policy> make_random_policy(const World& world = {});
/// "oracle", "scripted" or "random"; throws ParseError otherwise.
std::unique_ptr<Policy> make_policy(std::string_view name, const World& world = {});

struct EpisodeResult {
  bool success = false;
  double elapsed = 0.0;
  int decisions = 0;
  std::vector<TraceEntry> trace;
  std::string fault;  // policy raised or returned a malformed decision
  SceneState final_state;
};

EpisodeResult run_episode(Policy& policy, const TaskInstance& instance, const Instruction& instruction,
                          const EvalConfig& config, std::uint64_t seed, const World& world = {});

struct TypeScore {
  double mean = 0.0;  // success rate in percent
  double std = 0.0;   // population deviation over runs
  std::vector<double> per_run;
  int episodes = 0;
};

struct EpisodeOutcome {
  std::string id;
  TaskType type = TaskType::Pass;
  int run = 0;
  bool success = false;
  double elapsed = 0.0;
  std::string fault;
};

struct EvalReport {
  std::string policy;
  std::string split;
  EvalConfig config;
  std::map<TaskType, TypeScore> per_type;
  TypeScore average;  // per-run mean over the task types present
  std::vector<EpisodeOutcome> episodes;

  /// One row per policy with a column per task type and Avg.
  std::string table() const;
  std::string to_json_text() const;
};

/// Per-run seed of the policy for one episode.
std::uint64_t run_seed(const TaskInstance& instance, int run);

EvalReport evaluate(Policy& policy, std::span<const EpisodeRecord> episodes, const EvalConfig& config,
                    const World& world = {});
/// Loads `split` from a dataset directory. Throws MissingSplit.
EvalReport evaluate_split(Policy& policy, const std::string& dir, std::string_view split,
                          const EvalConfig& config, const World& world = {});

std::string format_table(std::span<const EvalReport> reports);

}  // namespace lemma

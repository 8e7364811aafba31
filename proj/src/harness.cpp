#include "lemma/harness.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

#include "lemma/error.hpp"
#include "lemma/rng.hpp"
#include "lemma/serialize.hpp"

namespace lemma {
namespace {

/// Executes a fixed plan one sub-task per decision, grounded on the live
/// state.
class PlanFollower {
 public:
  void clear() {
    planned_ = false;
    next_ = 0;
    dag_ = {};
    allocation_ = {};
  }
  bool planned() const { return planned_; }
  void set(SubTaskDag dag, Allocation allocation) {
    dag_ = std::move(dag);
    allocation_ = std::move(allocation);
    planned_ = true;
  }
  void give_up() {
    planned_ = true;
    allocation_ = {};
  }

  PolicyDecision next(const SceneState& state, const World& world) {
    if (next_ >= allocation_.order.size()) return StopDecision{};
    const int m = allocation_.order[next_++];
    const SubTask& sub = dag_.tasks[static_cast<std::size_t>(m)];
    const RobotId robot = *allocation_.gamma[static_cast<std::size_t>(m)];
    try {
      const Grounding g = ground(sub, robot, state, world);
      return Act{SubInstruction{robot, sub.primitive, sub.pick, sub.place}, g.action};
    } catch (const UnresolvableEntity&) {
      return StopDecision{};
    }
  }

 private:
  bool planned_ = false;
  std::size_t next_ = 0;
  SubTaskDag dag_;
  Allocation allocation_;
};

class OraclePolicy : public Policy {
 public:
  explicit OraclePolicy(const World& world) : world_(world) {}
  std::string name() const override { return "oracle"; }
  bool privileged() const override { return true; }
  void reset(std::uint64_t) override { plan_.clear(); }

  PolicyDecision decide(const PolicyInput& in) override {
    if (in.instance == nullptr || in.state == nullptr) throw PolicyFault("oracle needs privileged state");
    if (!plan_.planned()) {
      SubTaskDag dag = decompose(*in.instance, world_);
      Allocation a = solve_exact(dag, in.instance->scene0, in.t_max, world_);
      if (a.complete()) {
        plan_.set(std::move(dag), std::move(a));
      } else {
        plan_.give_up();
      }
    }
    return plan_.next(*in.state, world_);
  }

 private:
  World world_;
  PlanFollower plan_;
};

class ScriptedPolicy : public Policy {
 public:
  explicit ScriptedPolicy(const World& world) : world_(world) {}
  std::string name() const override { return "scripted"; }
  void reset(std::uint64_t) override { plan_.clear(); }

  PolicyDecision decide(const PolicyInput& in) override {
    if (in.state == nullptr) return StopDecision{};
    if (!plan_.planned()) plan(in);
    return plan_.next(*in.state, world_);
  }

 private:
  void plan(const PolicyInput& in) {
    ParsedGoal parsed;
    try {
      parsed = parse_high(in.instruction.text);
    } catch (const ParseError&) {
      plan_.give_up();
      return;
    }
    for (const TaskType type : parsed.ambiguity) {
      TaskInstance probe;
      probe.type = type;
      probe.scene0 = *in.state;
      probe.goal = parsed.goal;
      try {
        SubTaskDag dag = decompose(probe, world_);
        Allocation a = solve_greedy(dag, *in.state, in.t_max - in.state->clock, world_);
        if (a.complete()) {
          plan_.set(std::move(dag), std::move(a));
          return;
        }
      } catch (const DecompositionFailure&) {
      }
    }
    plan_.give_up();
  }

  World world_;
  PlanFollower plan_;
};

class RandomPolicy : public Policy {
 public:
  explicit RandomPolicy(const World& world) : world_(world), rng_(0) {}
  std::string name() const override { return "random"; }
  void reset(std::uint64_t seed) override { rng_ = CounterRng(seed, 0x52414E44ULL); }

  PolicyDecision decide(const PolicyInput& in) override {
    if (in.state == nullptr) return StopDecision{};
    const SceneState& s = *in.state;
    std::vector<EntityRef> picks;
    for (const auto& o : s.objects) {
      const EntityRef ref = ColorKind{o.spec.color, o.spec.kind};
      if (std::find(picks.begin(), picks.end(), ref) == picks.end()) picks.push_back(ref);
    }
    if (picks.empty()) return StopDecision{};
    std::vector<EntityRef> places = picks;
    for (const Site site : {Site::shared(), Site::return_spot(), Site::own_workspace(), Site::other_workspace()}) {
      places.push_back(site);
    }
    for (const Color c : kObjectColors) {
      places.push_back(Site::pad_of(c));
      places.push_back(Site::stack_on(c));
      places.push_back(Site::align_with(c));
    }
    static constexpr std::array<Primitive, 5> kActs{Primitive::Move, Primitive::PreHook, Primitive::Hook,
                                                    Primitive::PrePoke, Primitive::Poke};
    for (int attempt = 0; attempt < 16; ++attempt) {
      const RobotId robot = rng_.bernoulli(0.5) ? RobotId::R1 : RobotId::R0;
      const Primitive p = rng_.pick(std::span<const Primitive>(kActs));
      const EntityRef& pick = rng_.pick(std::span<const EntityRef>(picks));
      const EntityRef& place = rng_.pick(std::span<const EntityRef>(places));
      try {
        const Grounding g = ground(p, pick, place, robot, s, world_);
        return Act{SubInstruction{robot, p, pick, place}, g.action};
      } catch (const UnresolvableEntity&) {
      }
    }
    return StopDecision{};
  }

 private:
  World world_;
  CounterRng rng_;
};

void score(TypeScore& s) {
  if (s.per_run.empty()) return;
  const double n = static_cast<double>(s.per_run.size());
  s.mean = std::accumulate(s.per_run.begin(), s.per_run.end(), 0.0) / n;
  double var = 0.0;
  for (const double v : s.per_run) var += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(var / n);
}

std::string cell(const TypeScore& s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f ± %.2f", s.mean, s.std);
  return buf;
}

}  // namespace

std::string_view to_string(ObservationMode mode) {
  return mode == ObservationMode::Symbolic ? "symbolic" : "raster";
}

ObservationMode observation_mode_from_string(std::string_view s) {
  if (s == "symbolic") return ObservationMode::Symbolic;
  if (s == "raster") return ObservationMode::RasterOnly;
  throw ParseError("unknown observation mode '" + std::string(s) + "'");
}

std::unique_ptr<Policy> make_oracle_policy(const World& world) { return std::make_unique<OraclePolicy>(world); }
std::unique_ptr<Policy> make_scripted_policy(const World& world) { return std::make_unique<ScriptedPolicy>(world); }
std::unique_ptr<Policy> make_random_policy(const World& world) { return std::make_unique<RandomPolicy>(world); }

std::unique_ptr<Policy> make_policy(std::string_view name, const World& world) {
  if (name == "oracle") return make_oracle_policy(world);
  if (name == "scripted") return make_scripted_policy(world);
  if (name == "random") return make_random_policy(world);
  throw ParseError("unknown policy '" + std::string(name) + "'");
}

EpisodeResult run_episode(Policy& policy, const TaskInstance& instance, const Instruction& instruction,
                          const EvalConfig& config, std::uint64_t seed, const World& world) {
  EpisodeResult result;
  SceneState state = instance.scene0;
  policy.reset(seed);
  while (result.decisions < config.max_decisions && state.clock < config.t_max) {
    std::optional<Observation> raster;
    if (config.observation_mode == ObservationMode::RasterOnly) raster = render_raster(state, world);
    const bool symbolic = config.observation_mode == ObservationMode::Symbolic || policy.privileged();
    const PolicyInput input{instruction,
                            symbolic ? &state : nullptr,
                            raster ? &*raster : nullptr,
                            policy.privileged() ? &instance : nullptr,
                            result.trace,
                            config.t_max};
    PolicyDecision decision;
    try {
      decision = policy.decide(input);
    } catch (const std::exception& e) {
      result.fault = e.what();
      break;
    }
    ++result.decisions;
    if (std::holds_alternative<StopDecision>(decision)) break;
    const Act& act = std::get<Act>(decision);
    if (act.action.primitive == Primitive::Stop || act.action.robot != act.sub.robot ||
        act.action.primitive != act.sub.primitive || !world.on_table(act.action.t_pick.position) ||
        !world.on_table(act.action.t_place.position)) {
      result.fault = "malformed decision";
      break;
    }
    StepResult step = apply(state, act.action, world);
    if (step.ok()) state = std::move(step.state);
    result.trace.push_back(TraceEntry{act, step.error, state.clock});
  }
  bool goal = false;
  try {
    goal = check_goal(state, instance.goal, world);
  } catch (const UnknownColorKind&) {
  }
  result.success = result.fault.empty() && goal && within_budget(state, config.t_max);
  result.elapsed = state.clock;
  result.final_state = std::move(state);
  return result;
}

std::uint64_t run_seed(const TaskInstance& instance, int run) {
  return mix64(instance.seed ^ mix64(static_cast<std::uint64_t>(run) + 1));
}

EvalReport evaluate(Policy& policy, std::span<const EpisodeRecord> episodes, const EvalConfig& config,
                    const World& world) {
  if (config.runs < 1) throw BadCount("runs must be at least 1");
  EvalReport report;
  report.policy = policy.name();
  report.config = config;
  std::map<TaskType, std::vector<int>> successes;
  for (const auto& rec : episodes) {
    auto& s = report.per_type[rec.instance.type];
    ++s.episodes;
    successes[rec.instance.type].assign(static_cast<std::size_t>(config.runs), 0);
  }
  for (int run = 0; run < config.runs; ++run) {
    for (const auto& rec : episodes) {
      const Instruction& instr = config.instruction_kind == InstructionKind::HighLevel ? rec.high : rec.human;
      const EpisodeResult r = run_episode(policy, rec.instance, instr, config, run_seed(rec.instance, run), world);
      if (r.success) ++successes[rec.instance.type][static_cast<std::size_t>(run)];
      report.episodes.push_back(EpisodeOutcome{rec.id(), rec.instance.type, run, r.success, r.elapsed, r.fault});
    }
  }
  for (auto& [type, s] : report.per_type) {
    for (const int k : successes[type]) s.per_run.push_back(100.0 * k / s.episodes);
    score(s);
  }
  if (!report.per_type.empty()) {
    for (int run = 0; run < config.runs; ++run) {
      double sum = 0.0;
      for (const auto& [type, s] : report.per_type) sum += s.per_run[static_cast<std::size_t>(run)];
      report.average.per_run.push_back(sum / static_cast<double>(report.per_type.size()));
    }
    report.average.episodes = static_cast<int>(episodes.size());
    score(report.average);
  }
  return report;
}

EvalReport evaluate_split(Policy& policy, const std::string& dir, std::string_view split,
                          const EvalConfig& config, const World& world) {
  const auto episodes = load_split(dir, split);
  if (episodes.empty()) throw MissingSplit("split '" + std::string(split) + "' is empty");
  EvalReport report = evaluate(policy, episodes, config, world);
  report.split = std::string(split);
  return report;
}

std::string EvalReport::table() const { return format_table(std::span<const EvalReport>(this, 1)); }

std::string format_table(std::span<const EvalReport> reports) {
  std::string out = "| Method |";
  std::string rule = "|---|";
  for (const TaskType t : kTaskTypes) {
    out += " " + std::string(display_name(t)) + " |";
    rule += "---|";
  }
  out += " Avg |\n" + rule + "---|\n";
  for (const auto& r : reports) {
    out += "| " + r.policy + " (" + std::string(to_string(r.config.instruction_kind)) + ", " +
           std::string(to_string(r.config.observation_mode)) + ") |";
    for (const TaskType t : kTaskTypes) {
      const auto it = r.per_type.find(t);
      out += " " + (it == r.per_type.end() ? std::string("-") : cell(it->second)) + " |";
    }
    out += " " + (r.per_type.empty() ? std::string("-") : cell(r.average)) + " |\n";
  }
  return out;
}

std::string EvalReport::to_json_text() const {
  Json types = Json::object();
  for (const auto& [t, s] : per_type) {
    types[std::string(to_string(t))] = Json{{"mean", s.mean}, {"std", s.std}, {"runs", s.per_run}, {"episodes", s.episodes}};
  }
  Json eps = Json::array();
  for (const auto& e : episodes) {
    eps.push_back(Json{{"id", e.id}, {"run", e.run}, {"success", e.success}, {"elapsed", e.elapsed}, {"fault", e.fault}});
  }
  const Json j{{"policy", policy},
               {"split", split},
               {"config", Json{{"t_max", config.t_max},
                               {"runs", config.runs},
                               {"instructions", to_string(config.instruction_kind)},
                               {"observation", to_string(config.observation_mode)},
                               {"max_decisions", config.max_decisions}}},
               {"per_type", std::move(types)},
               {"avg", Json{{"mean", average.mean}, {"std", average.std}, {"runs", average.per_run}}},
               {"table", table()},
               {"episodes", std::move(eps)}};
  return j.dump(2) + "\n";
}

}  // namespace lemma

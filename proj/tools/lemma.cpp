// lemma: generate, demonstrate, allocate, evaluate and render tabletop tasks.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "lemma/dataset.hpp"
#include "lemma/error.hpp"
#include "lemma/harness.hpp"
#include "lemma/serialize.hpp"
#include "lemma/taskgen.hpp"

namespace fs = std::filesystem;
using namespace lemma;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

std::uint64_t parse_seed(const std::string& text) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used, 0);
  } catch (const std::exception&) {
    throw ConfigError("seed '" + text + "' is not an unsigned integer");
  }
  if (used != text.size()) throw ConfigError("seed '" + text + "' is not an unsigned integer");
  return v;
}

/// LEMMA_SEED wins over --seed, which wins over the fallback.
std::uint64_t master_seed(const CLI::Option* flag, std::uint64_t flag_value, std::uint64_t fallback) {
  if (const char* env = std::getenv("LEMMA_SEED"); env != nullptr && *env != '\0') return parse_seed(env);
  return flag->count() > 0 ? flag_value : fallback;
}

World world_from(const std::string& path) { return path.empty() ? World{} : load_world(path); }

std::vector<Json> read_json_lines(const std::string& path) {
  const std::string text = read_file(path);
  std::vector<Json> out;
  std::size_t start = 0;
  int line_no = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    ++line_no;
    const std::string_view line(text.data() + start, end - start);
    start = end + 1;
    if (line.empty()) continue;
    try {
      out.push_back(Json::parse(line));
    } catch (const Json::parse_error& e) {
      throw IoError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<TaskInstance> read_instances(const std::string& path) {
  std::vector<TaskInstance> out;
  for (const Json& j : read_json_lines(path)) out.push_back(instance_from_json(j));
  return out;
}

template <typename T>
const T& select(const std::vector<T>& items, const std::string& id, int index, const std::string& what) {
  if (!id.empty()) {
    for (const auto& it : items) {
      if constexpr (std::is_same_v<T, EpisodeRecord>) {
        if (it.id() == id) return it;
      } else {
        if (it.id == id) return it;
      }
    }
    throw UnknownObject("no " + what + " with id '" + id + "'");
  }
  if (index < 0 || index >= static_cast<int>(items.size())) {
    throw OutOfBounds(what + " index " + std::to_string(index) + " out of range");
  }
  return items[static_cast<std::size_t>(index)];
}

int run(int argc, char** argv) {
  CLI::App app{"Two-robot tabletop task generation, demonstration and evaluation"};
  app.require_subcommand(1);

  std::string world_path;
  app.add_option("--world", world_path, "World config file (defaults are built in)");

  // gen
  auto* gen = app.add_subcommand("gen", "Sample task instances");
  std::string gen_task = "all";
  int gen_count = kEpisodesPerType;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--task", gen_task, "Task type or 'all'");
  gen->add_option("--count", gen_count, "Instances per task type");
  auto* gen_seed_opt = gen->add_option("--seed", gen_seed, "Master seed");
  gen->add_option("--out", gen_out, "Output directory")->required();

  // demo
  auto* demo = app.add_subcommand("demo", "Generate expert demonstrations");
  std::string demo_instances;
  std::string demo_out;
  std::string demo_rasters = "all";
  std::uint64_t demo_seed = 0;
  demo->add_option("--instances", demo_instances, "Instances file written by gen")->required();
  demo->add_option("--out", demo_out, "Dataset directory")->required();
  demo->add_option("--rasters", demo_rasters, "Write observation rasters")->check(CLI::IsMember({"all", "none"}));
  auto* demo_seed_opt = demo->add_option("--seed", demo_seed, "Master seed for the splits");

  // alloc
  auto* alloc = app.add_subcommand("alloc", "Solve the sub-task allocation of one instance");
  std::string alloc_file;
  std::string alloc_id;
  int alloc_index = 0;
  std::string alloc_solver = "exact";
  double alloc_tmax = kTimeBudget;
  alloc->add_option("--instance", alloc_file, "Instances file")->required();
  alloc->add_option("--id", alloc_id, "Instance id (default: the first)");
  alloc->add_option("--index", alloc_index, "Instance index when no id is given");
  alloc->add_option("--solver", alloc_solver)->check(CLI::IsMember({"exact", "greedy"}));
  alloc->add_option("--t-max", alloc_tmax, "Time budget in seconds");

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate a policy on a dataset split");
  std::string eval_policy = "oracle";
  std::string eval_split = "test";
  std::string eval_instr = "high";
  std::string eval_obs = "symbolic";
  std::string eval_data;
  std::string eval_out;
  EvalConfig eval_cfg;
  eval->add_option("--policy", eval_policy)->check(CLI::IsMember({"oracle", "scripted", "random"}));
  eval->add_option("--split", eval_split)->check(CLI::IsMember({"train", "val", "test"}));
  eval->add_option("--instructions", eval_instr)->check(CLI::IsMember({"high", "human"}));
  eval->add_option("--observation", eval_obs)->check(CLI::IsMember({"symbolic", "raster"}));
  eval->add_option("--runs", eval_cfg.runs);
  eval->add_option("--t-max", eval_cfg.t_max);
  eval->add_option("--data", eval_data, "Dataset directory written by demo")->required();
  eval->add_option("--out", eval_out, "Report JSON path");

  // render
  auto* render = app.add_subcommand("render", "Draw the scene of an episode step as SVG");
  std::string render_file;
  std::string render_id;
  int render_index = 0;
  int render_step = 0;
  std::string render_out;
  render->add_option("--episode", render_file, "Episodes file")->required();
  render->add_option("--id", render_id, "Episode id (default: the first)");
  render->add_option("--index", render_index, "Episode index when no id is given");
  render->add_option("--step", render_step, "Step; the step count gives the final scene");
  render->add_option("--out", render_out, "Output SVG")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  const World world = world_from(world_path);

  if (*gen) {
    const std::uint64_t seed = master_seed(gen_seed_opt, gen_seed, 0);
    std::vector<TaskType> types;
    if (gen_task == "all") {
      types.assign(kTaskTypes.begin(), kTaskTypes.end());
    } else {
      types.push_back(task_type_from_string(gen_task));
    }
    const auto instances = generate_instances(types, gen_count, seed, world);
    std::error_code ec;
    fs::create_directories(gen_out, ec);
    if (ec) throw IoError("cannot create " + gen_out + ": " + ec.message());
    std::string text;
    for (const auto& inst : instances) text += instance_to_json(inst).dump() + "\n";
    write_file((fs::path(gen_out) / "instances.jsonl").string(), text);
    Json type_names = Json::array();
    for (const TaskType t : types) type_names.push_back(to_string(t));
    const Json meta{{"master_seed", seed}, {"count", gen_count}, {"types", type_names}, {"instances", instances.size()}};
    write_file((fs::path(gen_out) / "gen.meta").string(), meta.dump(2) + "\n");
    std::cout << "wrote " << instances.size() << " instances to " << (fs::path(gen_out) / "instances.jsonl").string()
              << "\n";
    return kExitOk;
  }

  if (*demo) {
    std::uint64_t fallback = 0;
    const fs::path meta_path = fs::path(demo_instances).parent_path() / "gen.meta";
    if (fs::exists(meta_path)) {
      try {
        fallback = Json::parse(read_file(meta_path.string())).at("master_seed").get<std::uint64_t>();
      } catch (const Json::exception& e) {
        throw IoError("malformed " + meta_path.string() + ": " + e.what());
      }
    }
    DatasetOptions options;
    options.master_seed = master_seed(demo_seed_opt, demo_seed, fallback);
    options.rasters = demo_rasters == "all";
    std::vector<EpisodeRecord> records;
    for (const auto& inst : read_instances(demo_instances)) records.push_back(generate_demonstration(inst, world));
    const std::size_t n = records.size();
    write_dataset(demo_out, std::move(records), options, world);
    std::cout << "wrote " << n << " episodes to " << demo_out << "\n";
    return kExitOk;
  }

  if (*alloc) {
    const auto instances = read_instances(alloc_file);
    const TaskInstance& inst = select(instances, alloc_id, alloc_index, "instance");
    const SubTaskDag dag = decompose(inst, world);
    const AllocationProblem problem = build_problem(dag, inst.scene0, world);
    const Allocation a = alloc_solver == "exact" ? solve_exact(problem, alloc_tmax) : solve_greedy(problem, alloc_tmax);
    Json out = allocation_to_json(a);
    out["id"] = inst.id;
    out["solver"] = alloc_solver;
    out["subtasks"] = dag_to_json(dag);
    std::cout << out.dump(2) << "\n";
    return kExitOk;
  }

  if (*eval) {
    eval_cfg.instruction_kind = instruction_kind_from_string(eval_instr);
    eval_cfg.observation_mode = observation_mode_from_string(eval_obs);
    auto policy = make_policy(eval_policy, world);
    const EvalReport report = evaluate_split(*policy, eval_data, eval_split, eval_cfg, world);
    std::cout << report.table();
    if (!eval_out.empty()) write_file(eval_out, report.to_json_text());
    return kExitOk;
  }

  if (*render) {
    const auto records = read_episodes(render_file);
    const EpisodeRecord& rec = select(records, render_id, render_index, "episode");
    if (render_step < 0 || render_step > static_cast<int>(rec.steps.size())) {
      throw OutOfBounds("step " + std::to_string(render_step) + " outside 0.." + std::to_string(rec.steps.size()));
    }
    write_file(render_out, render_svg(replay(rec, static_cast<std::size_t>(render_step), world), world));
    return kExitOk;
  }
  return kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const IoError& e) {
    std::cerr << "lemma: I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const SchemaVersionMismatch& e) {
    std::cerr << "lemma: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "lemma: I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    std::cerr << "lemma: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "lemma: " << e.what() << "\n";
    return kExitValidation;
  }
}

#include "lemma/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "lemma/error.hpp"
#include "lemma/rng.hpp"
#include "lemma/serialize.hpp"

namespace fs = std::filesystem;

namespace lemma {
namespace {

bool inside(const SceneObject& o, const Vec2& p, const World& w) {
  const Vec2 d = p - o.pose.position;
  switch (o.spec.kind) {
    case ObjectKind::Cube: {
      const double c = std::cos(o.pose.theta);
      const double s = std::sin(o.pose.theta);
      const double lx = c * d.x() + s * d.y();
      const double ly = -s * d.x() + c * d.y();
      return std::abs(lx) <= 0.5 * w.cube_side && std::abs(ly) <= 0.5 * w.cube_side;
    }
    case ObjectKind::Pad:
      return d.norm() <= w.pad_radius;
    case ObjectKind::Tool: {
      const Vec2 h = o.pose.heading();
      const Vec2 n{-h.y(), h.x()};
      const double half = 0.5 * w.tool_width;
      const double along = d.dot(h);
      if (along >= 0.0 && along <= w.tool_long_arm && std::abs(d.dot(n)) <= half) return true;
      const Vec2 e = d - w.tool_long_arm * h;
      const double side = e.dot(n);
      return side >= 0.0 && side <= w.tool_short_arm && std::abs(e.dot(h)) <= half;
    }
  }
  return false;
}

double bounding_radius(const SceneObject& o, const World& w) {
  switch (o.spec.kind) {
    case ObjectKind::Cube: return 0.5 * std::sqrt(2.0) * w.cube_side;
    case ObjectKind::Pad: return w.pad_radius;
    case ObjectKind::Tool: return std::hypot(w.tool_long_arm, w.tool_short_arm) + w.tool_width;
  }
  return 0.0;
}

std::string split_name_check(std::string_view split) {
  if (split != "train" && split != "val" && split != "test") {
    throw MissingSplit("unknown split '" + std::string(split) + "'");
  }
  return std::string(split);
}

SplitManifest partition(const std::map<TaskType, std::vector<std::string>>& ids, std::uint64_t seed) {
  SplitManifest m;
  for (const auto& [type, list] : ids) {
    std::vector<std::string> shuffled = list;
    std::sort(shuffled.begin(), shuffled.end());
    if (std::adjacent_find(shuffled.begin(), shuffled.end()) != shuffled.end()) {
      throw BadCount("duplicate episode id in " + std::string(to_string(type)));
    }
    CounterRng rng(seed, 0x53504C00ULL + static_cast<std::uint64_t>(type));
    rng.shuffle(std::span<std::string>(shuffled));
    const auto n = static_cast<long>(shuffled.size());
    const long val = std::lround(static_cast<double>(n) * kValSize / kEpisodesPerType);
    const long test = std::lround(static_cast<double>(n) * kTestSize / kEpisodesPerType);
    Split s;
    s.train.assign(shuffled.begin(), shuffled.begin() + (n - val - test));
    s.val.assign(shuffled.begin() + (n - val - test), shuffled.begin() + (n - test));
    s.test.assign(shuffled.begin() + (n - test), shuffled.end());
    for (auto* part : {&s.train, &s.val, &s.test}) std::sort(part->begin(), part->end());
    m.splits[type] = std::move(s);
  }
  return m;
}

}  // namespace

std::array<std::uint8_t, 3> Raster::color_at(int col, int row) const {
  const std::size_t k = 3 * (static_cast<std::size_t>(row) * static_cast<std::size_t>(width) + static_cast<std::size_t>(col));
  return {rgb[k], rgb[k + 1], rgb[k + 2]};
}

std::array<std::uint8_t, 3> color_rgb(Color color) {
  switch (color) {
    case Color::Pink: return {255, 105, 180};
    case Color::Red: return {210, 30, 30};
    case Color::White: return {245, 245, 245};
    case Color::Blue: return {30, 80, 220};
    case Color::Green: return {40, 170, 60};
    case Color::Yellow: return {240, 200, 20};
  }
  return kTableRgb;
}

Observation render_raster(const SceneState& state, const World& w) {
  Observation obs;
  Raster& r = obs.raster;
  r.width = static_cast<int>(std::lround(w.table_width() * kPixelsPerMeter));
  r.height = static_cast<int>(std::lround(w.table_depth() * kPixelsPerMeter));
  r.x_min = w.table_x_min;
  r.y_max = w.table_y_max;
  const std::size_t pixels = static_cast<std::size_t>(r.width) * static_cast<std::size_t>(r.height);
  r.rgb.resize(3 * pixels);
  for (std::size_t k = 0; k < pixels; ++k) std::copy(kTableRgb.begin(), kTableRgb.end(), r.rgb.begin() + 3 * k);
  r.height_mm.assign(pixels, 0);

  for (const RobotId id : {RobotId::R0, RobotId::R1}) {
    obs.robots[index_of(id)] = RobotView{id, state.robot(id).base, state.holding[index_of(id)].has_value()};
  }

  std::vector<const SceneObject*> order;
  for (const auto& o : state.objects) {
    if (!w.on_table(o.pose.position)) {
      throw OutOfBounds("object " + std::to_string(o.spec.id) + " lies outside the table");
    }
    order.push_back(&o);
  }
  std::sort(order.begin(), order.end(), [&](const SceneObject* a, const SceneObject* b) {
    const double za = state.base_z(a->spec.id, w);
    const double zb = state.base_z(b->spec.id, w);
    if (za != zb) return za < zb;
    return a->spec.id < b->spec.id;
  });

  for (const SceneObject* o : order) {
    const auto top = static_cast<std::uint16_t>(std::lround(state.top_z(o->spec.id, w) * 1000.0));
    const auto rgb = color_rgb(o->spec.color);
    const double reach = bounding_radius(*o, w);
    const auto lo = r.project(o->pose.position + Vec2{-reach, reach});
    const auto hi = r.project(o->pose.position + Vec2{reach, -reach});
    const int c0 = std::max(0, static_cast<int>(std::floor(lo[0])));
    const int r0 = std::max(0, static_cast<int>(std::floor(lo[1])));
    const int c1 = std::min(r.width - 1, static_cast<int>(std::floor(hi[0])));
    const int r1 = std::min(r.height - 1, static_cast<int>(std::floor(hi[1])));
    for (int row = r0; row <= r1; ++row) {
      for (int col = c0; col <= c1; ++col) {
        const Vec2 p{r.x_min + (col + 0.5) / kPixelsPerMeter, r.y_max - (row + 0.5) / kPixelsPerMeter};
        if (!inside(*o, p, w)) continue;
        const std::size_t k = static_cast<std::size_t>(row) * static_cast<std::size_t>(r.width) + static_cast<std::size_t>(col);
        if (top < r.height_mm[k]) continue;
        r.height_mm[k] = top;
        std::copy(rgb.begin(), rgb.end(), r.rgb.begin() + 3 * k);
      }
    }
  }
  return obs;
}

std::string render_svg(const SceneState& state, const World& w) {
  constexpr double kScale = 400.0;  // svg units per meter
  const double pad = 0.1;
  const double width = (w.table_width() + 2 * pad) * kScale;
  const double height = (w.table_depth() + 2 * pad) * kScale;
  const auto sx = [&](double x) { return (x - w.table_x_min + pad) * kScale; };
  const auto sy = [&](double y) { return (w.table_y_max - y + pad) * kScale; };
  const auto hex = [](Color c) {
    const auto rgb = color_rgb(c);
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
    return std::string(buf);
  };
  char buf[512];
  std::string out;
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" viewBox=\"0 0 %.1f %.1f\">\n",
                width, height, width, height);
  out += buf;
  std::snprintf(buf, sizeof buf, "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"#969696\"/>\n",
                sx(w.table_x_min), sy(w.table_y_max), w.table_width() * kScale, w.table_depth() * kScale);
  out += buf;
  for (const auto& r : state.robots) {
    std::snprintf(buf, sizeof buf,
                  "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"%.2f\" fill=\"none\" stroke=\"%s\" stroke-dasharray=\"6 4\"/>\n"
                  "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"8\" fill=\"%s\"/>\n"
                  "<text x=\"%.2f\" y=\"%.2f\" font-size=\"14\">%s %s</text>\n",
                  sx(r.base.x()), sy(r.base.y()), r.reach_radius * kScale,
                  r.body_color == BodyColor::Red ? "#b41e1e" : "#ffffff", sx(r.base.x()), sy(r.base.y()),
                  r.body_color == BodyColor::Red ? "#b41e1e" : "#ffffff", sx(r.base.x()) - 30, sy(r.base.y()) + 24,
                  std::string(to_string(r.id)).c_str(), std::string(to_string(r.model)).c_str());
    out += buf;
  }
  std::vector<const SceneObject*> order;
  for (const auto& o : state.objects) order.push_back(&o);
  std::sort(order.begin(), order.end(), [&](const SceneObject* a, const SceneObject* b) {
    const double za = state.base_z(a->spec.id, w);
    const double zb = state.base_z(b->spec.id, w);
    return za != zb ? za < zb : a->spec.id < b->spec.id;
  });
  for (const SceneObject* o : order) {
    const double x = sx(o->pose.x());
    const double y = sy(o->pose.y());
    switch (o->spec.kind) {
      case ObjectKind::Cube: {
        const double s = w.cube_side * kScale;
        std::snprintf(buf, sizeof buf,
                      "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"%s\" stroke=\"#000\" "
                      "transform=\"rotate(%.3f %.2f %.2f)\"/>\n",
                      x - s / 2, y - s / 2, s, s, hex(o->spec.color).c_str(), -o->pose.theta * 180.0 / std::numbers::pi, x, y);
        break;
      }
      case ObjectKind::Pad:
        std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"%.2f\" fill=\"%s\" stroke=\"#000\"/>\n", x, y,
                      w.pad_radius * kScale, hex(o->spec.color).c_str());
        break;
      case ObjectKind::Tool: {
        const Vec2 tip = tool_tip(o->pose, w);
        const Vec2 h = o->pose.heading();
        const Vec2 hook = tip + w.tool_short_arm * Vec2{-h.y(), h.x()};
        std::snprintf(buf, sizeof buf,
                      "<polyline points=\"%.2f,%.2f %.2f,%.2f %.2f,%.2f\" fill=\"none\" stroke=\"%s\" "
                      "stroke-width=\"%.2f\"/>\n",
                      x, y, sx(tip.x()), sy(tip.y()), sx(hook.x()), sy(hook.y()), hex(o->spec.color).c_str(),
                      w.tool_width * kScale);
        break;
      }
    }
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "<text x=\"10\" y=\"20\" font-size=\"16\">t = %.2f s</text>\n", state.clock);
  out += buf;
  out += "</svg>\n";
  return out;
}

std::string encode_ppm(const Raster& r) {
  std::string out = "P6\n" + std::to_string(r.width) + " " + std::to_string(r.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(r.rgb.data()), r.rgb.size());
  return out;
}

std::string encode_pgm16(const Raster& r) {
  std::string out = "P5\n" + std::to_string(r.width) + " " + std::to_string(r.height) + "\n65535\n";
  out.reserve(out.size() + 2 * r.height_mm.size());
  for (const std::uint16_t v : r.height_mm) {
    out.push_back(static_cast<char>(v >> 8));
    out.push_back(static_cast<char>(v & 0xFF));
  }
  return out;
}

void write_file(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write to " + path + " failed");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read from " + path + " failed");
  return ss.str();
}

std::string episode_line(const EpisodeRecord& record) {
  Json j = episode_to_json(record);
  j["schema"] = kSchemaVersion;
  return j.dump();
}

EpisodeRecord parse_episode_line(std::string_view line) {
  Json j;
  try {
    j = Json::parse(line);
  } catch (const Json::parse_error& e) {
    throw IoError(std::string("truncated or malformed episode record: ") + e.what());
  }
  if (!j.is_object() || !j.contains("schema") || !j["schema"].is_number_integer() ||
      j["schema"].get<int>() != kSchemaVersion) {
    throw SchemaVersionMismatch("episode record schema differs from " + std::to_string(kSchemaVersion));
  }
  try {
    return episode_from_json(j);
  } catch (const CodecError& e) {
    throw IoError(e.what());
  }
}

void write_episode(const std::string& path, const EpisodeRecord& record) {
  write_file(path, episode_line(record) + "\n");
}

EpisodeRecord read_episode(const std::string& path) {
  const auto records = read_episodes(path);
  if (records.empty()) throw IoError(path + " holds no episode");
  return records.front();
}

void write_episodes(const std::string& path, std::span<const EpisodeRecord> records) {
  std::string text;
  for (const auto& r : records) {
    text += episode_line(r);
    text += '\n';
  }
  write_file(path, text);
}

std::vector<EpisodeRecord> read_episodes(const std::string& path) {
  const std::string text = read_file(path);
  std::vector<EpisodeRecord> out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    const std::string_view line(text.data() + start, end - start);
    if (!line.empty()) out.push_back(parse_episode_line(line));
    start = end + 1;
  }
  return out;
}

const std::vector<std::string>& SplitManifest::ids(TaskType type, std::string_view split) const {
  const std::string name = split_name_check(split);
  const auto it = splits.find(type);
  if (it == splits.end()) throw MissingSplit("no split for " + std::string(to_string(type)));
  if (name == "train") return it->second.train;
  if (name == "val") return it->second.val;
  return it->second.test;
}

SplitManifest make_splits(const std::map<TaskType, std::vector<std::string>>& ids, std::uint64_t seed) {
  for (const auto& [type, list] : ids) {
    if (static_cast<int>(list.size()) != kEpisodesPerType) {
      throw BadCount(std::string(to_string(type)) + " has " + std::to_string(list.size()) + " episodes, expected " +
                     std::to_string(kEpisodesPerType));
    }
  }
  return partition(ids, seed);
}

SplitManifest make_proportional_splits(const std::map<TaskType, std::vector<std::string>>& ids,
                                       std::uint64_t seed) {
  return partition(ids, seed);
}

std::string splits_to_text(const SplitManifest& m) {
  Json j = Json::object();
  for (const auto& [type, s] : m.splits) {
    j[std::string(to_string(type))] = Json{{"train", s.train}, {"val", s.val}, {"test", s.test}};
  }
  return j.dump(2) + "\n";
}

SplitManifest splits_from_text(std::string_view text) {
  SplitManifest m;
  try {
    const Json j = Json::parse(text);
    for (const auto& [name, s] : j.items()) {
      Split split;
      split.train = s.at("train").get<std::vector<std::string>>();
      split.val = s.at("val").get<std::vector<std::string>>();
      split.test = s.at("test").get<std::vector<std::string>>();
      m.splits[task_type_from_string(name)] = std::move(split);
    }
  } catch (const Json::exception& e) {
    throw IoError(std::string("malformed split manifest: ") + e.what());
  } catch (const ParseError& e) {
    throw IoError(std::string("malformed split manifest: ") + e.what());
  }
  return m;
}

void write_dataset(const std::string& dir, std::vector<EpisodeRecord> records, const DatasetOptions& options,
                   const World& world) {
  std::map<TaskType, std::vector<EpisodeRecord>> by_type;
  for (auto& r : records) by_type[r.instance.type].push_back(std::move(r));

  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());

  std::map<TaskType, std::vector<std::string>> ids;
  std::size_t total = 0;
  for (auto& [type, list] : by_type) {
    const fs::path type_dir = fs::path(dir) / std::string(to_string(type));
    fs::create_directories(type_dir, ec);
    if (ec) throw IoError("cannot create " + type_dir.string() + ": " + ec.message());
    if (options.rasters) {
      fs::create_directories(type_dir / "obs", ec);
      if (ec) throw IoError("cannot create obs directory: " + ec.message());
    }
    for (auto& rec : list) {
      ids[type].push_back(rec.id());
      if (!options.rasters) continue;
      SceneState state = rec.instance.scene0;
      for (std::size_t k = 0; k <= rec.steps.size(); ++k) {
        const std::string ref = "obs/" + rec.id() + "_" + std::to_string(k);
        const Observation obs = render_raster(state, world);
        write_file((type_dir / (ref + ".ppm")).string(), encode_ppm(obs.raster));
        write_file((type_dir / (ref + ".pgm")).string(), encode_pgm16(obs.raster));
        if (k == rec.steps.size()) {
          rec.final_observation_ref = ref;
          break;
        }
        rec.steps[k].observation_ref = ref;
        StepResult step = apply(state, rec.steps[k].action, world);
        if (!step.ok()) throw DemonstrationFailure(rec.id() + ": recorded action does not replay");
        state = std::move(step.state);
      }
    }
    write_episodes((type_dir / "episodes.jsonl").string(), list);
    total += list.size();
  }

  const bool full = !ids.empty() && std::all_of(ids.begin(), ids.end(), [](const auto& kv) {
    return static_cast<int>(kv.second.size()) == kEpisodesPerType;
  });
  const SplitManifest manifest =
      full ? make_splits(ids, options.master_seed) : make_proportional_splits(ids, options.master_seed);
  write_file((fs::path(dir) / "splits.json").string(), splits_to_text(manifest));

  char hash[24];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(world_hash(world)));
  const Json meta{{"schema_version", kSchemaVersion},
                  {"master_seed", options.master_seed},
                  {"world_hash", hash},
                  {"episodes", total},
                  {"rasters", options.rasters}};
  write_file((fs::path(dir) / "dataset.meta").string(), meta.dump(2) + "\n");
}

std::vector<EpisodeRecord> load_split(const std::string& dir, std::string_view split) {
  const std::string name = split_name_check(split);
  const fs::path manifest_path = fs::path(dir) / "splits.json";
  if (!fs::exists(manifest_path)) throw MissingSplit("no split manifest in " + dir);
  const SplitManifest manifest = splits_from_text(read_file(manifest_path.string()));
  std::vector<EpisodeRecord> out;
  for (const auto& [type, s] : manifest.splits) {
    const auto& wanted = manifest.ids(type, name);
    const std::set<std::string> keep(wanted.begin(), wanted.end());
    for (auto& rec : read_episodes((fs::path(dir) / std::string(to_string(type)) / "episodes.jsonl").string())) {
      if (keep.contains(rec.id())) out.push_back(std::move(rec));
    }
  }
  return out;
}

}  // namespace lemma

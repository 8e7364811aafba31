#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lemma/oracle.hpp"

namespace lemma {

inline constexpr int kSchemaVersion = 1;
inline constexpr double kPixelsPerMeter = 160.0;
inline constexpr int kEpisodesPerType = 800;
inline constexpr int kTrainSize = 700;
inline constexpr int kValSize = 40;
inline constexpr int kTestSize = 60;

/// Top-down orthographic raster: row-major, row 0 at the far (max y) edge.
struct Raster {
  int width = 0;
  int height = 0;
  double x_min = 0.0;
  double y_max = 0.0;
  double pixels_per_meter = kPixelsPerMeter;
  std::vector<std::uint8_t> rgb;          // 3 bytes per pixel
  std::vector<std::uint16_t> height_mm;   // top-surface height

  std::array<std::uint8_t, 3> color_at(int col, int row) const;
  std::uint16_t height_at(int col, int row) const {
    return height_mm[static_cast<std::size_t>(row) * static_cast<std::size_t>(width) + static_cast<std::size_t>(col)];
  }
  /// Continuous pixel coordinates (col, row) of a table point.
  std::array<double, 2> project(const Vec2& p) const {
    return {(p.x() - x_min) * pixels_per_meter, (y_max - p.y()) * pixels_per_meter};
  }
};

struct RobotView {
  RobotId id = RobotId::R0;
  Pose2 base;
  bool holding = false;
};

struct Observation {
  Raster raster;
  std::array<RobotView, 2> robots;
};

std::array<std::uint8_t, 3> color_rgb(Color color);
inline constexpr std::array<std::uint8_t, 3> kTableRgb{150, 150, 150};

/// Painter's order by support height; a pixel takes the tallest object whose
/// shape contains its center. Throws OutOfBounds when an object center lies
/// off the table.
Observation render_raster(const SceneState& state, const World& world = {});

/// Vector drawing of a scene for inspection: table, reach disks, objects.
std::string render_svg(const SceneState& state, const World& world = {});

/// Binary PPM (P6) of the color channels.
std::string encode_ppm(const Raster& raster);
/// 16-bit big-endian PGM (P5) of the height channel.
std::string encode_pgm16(const Raster& raster);

/// Throws IoError.
void write_file(const std::string& path, std::string_view bytes);
std::string read_file(const std::string& path);

// Episode records, one JSON object per line -------------------------------

std::string episode_line(const EpisodeRecord& record);
/// Throws SchemaVersionMismatch or IoError.
EpisodeRecord parse_episode_line(std::string_view line);

void write_episode(const std::string& path, const EpisodeRecord& record);
EpisodeRecord read_episode(const std::string& path);
void write_episodes(const std::string& path, std::span<const EpisodeRecord> records);
std::vector<EpisodeRecord> read_episodes(const std::string& path);

// Splits --------------------------------------------------------------------

struct Split {
  std::vector<std::string> train;
  std::vector<std::string> val;
  std::vector<std::string> test;

  bool operator==(const Split&) const = default;
};

struct SplitManifest {
  std::map<TaskType, Split> splits;

  /// Throws MissingSplit for an unknown split name or absent type.
  const std::vector<std::string>& ids(TaskType type, std::string_view split) const;

  bool operator==(const SplitManifest&) const = default;
};

/// Shuffled 700/40/60 partition per type. Throws BadCount unless every type
/// has exactly 800 ids.
SplitManifest make_splits(const std::map<TaskType, std::vector<std::string>>& ids, std::uint64_t seed);
/// Same shuffle with sizes scaled to the id count (train takes the rest).
SplitManifest make_proportional_splits(const std::map<TaskType, std::vector<std::string>>& ids,
                                       std::uint64_t seed);

std::string splits_to_text(const SplitManifest& manifest);
SplitManifest splits_from_text(std::string_view text);

// Dataset directory ---------------------------------------------------------

struct DatasetOptions {
  std::uint64_t master_seed = 0;
  bool rasters = true;
};

/// Writes <dir>/<type>/episodes.jsonl, <dir>/<type>/obs/*, splits.json and
/// dataset.meta. Observation references are filled in when rasters are on.
void write_dataset(const std::string& dir, std::vector<EpisodeRecord> records, const DatasetOptions& options,
                   const World& world = {});

/// Episodes of one split across every type present. Throws MissingSplit.
std::vector<EpisodeRecord> load_split(const std::string& dir, std::string_view split);

}  // namespace lemma

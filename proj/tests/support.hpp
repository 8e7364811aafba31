#pragma once

#include <filesystem>
#include <string>

#include <unistd.h>

#include "lemma/scene.hpp"
#include "lemma/sim.hpp"

namespace testing {

inline lemma::SceneState two_robots(lemma::RobotModel m0 = lemma::RobotModel::UR5,
                                    lemma::RobotModel m1 = lemma::RobotModel::UR5) {
  lemma::SceneState s;
  s.robots[0] = lemma::make_robot(lemma::RobotId::R0, m0, lemma::BodyColor::Red);
  s.robots[1] = lemma::make_robot(lemma::RobotId::R1, m1, lemma::BodyColor::White);
  return s;
}

inline int add(lemma::SceneState& s, lemma::ObjectKind kind, lemma::Color color, double x, double y,
               double theta = 0.0, int support = lemma::kTable) {
  const int id = static_cast<int>(s.objects.size());
  s.objects.push_back({{id, kind, color}, lemma::Pose2::make(x, y, theta), support});
  return id;
}

inline lemma::PrimitiveAction act(lemma::RobotId r, lemma::Primitive p, lemma::Vec2 pick, lemma::Vec2 place,
                                  double place_theta = 0.0) {
  return {r, p, lemma::Pose2::at(pick), lemma::Pose2::at(place, place_theta)};
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() / ("lemma_test_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::string str(const std::string& leaf = "") const { return leaf.empty() ? path_.string() : (path_ / leaf).string(); }

 private:
  static int& counter() {
    static int n = 0;
    return n;
  }
  std::filesystem::path path_;
};

}  // namespace testing

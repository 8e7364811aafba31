#pragma once

#include <cmath>
#include <numbers>
#include <span>

#include <Eigen/Dense>

namespace lemma {

using Vec2 = Eigen::Vector2d;

/// Wraps an angle into [-pi, pi).
inline double normalize_angle(double theta) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double wrapped = std::fmod(theta + std::numbers::pi, two_pi);
  if (wrapped < 0.0) wrapped += two_pi;
  wrapped -= std::numbers::pi;
  // fmod can land exactly on +pi after the shift for inputs just below -pi.
  if (wrapped >= std::numbers::pi) wrapped -= two_pi;
  return wrapped;
}

/// Planar pose. theta is kept normalized by the factory.
struct Pose2 {
  Vec2 position = Vec2::Zero();
  double theta = 0.0;

  static Pose2 make(double x, double y, double theta = 0.0) {
    return Pose2{Vec2{x, y}, normalize_angle(theta)};
  }
  static Pose2 at(const Vec2& p, double theta = 0.0) { return Pose2{p, normalize_angle(theta)}; }

  double x() const { return position.x(); }
  double y() const { return position.y(); }
  Vec2 heading() const { return {std::cos(theta), std::sin(theta)}; }

  bool operator==(const Pose2&) const = default;
};

template <typename DerivedA, typename DerivedB>
double distance(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  return (a - b).norm();
}

/// Unit vector from `from` towards `to`; zero when they coincide.
template <typename DerivedA, typename DerivedB>
Vec2 direction(const Eigen::MatrixBase<DerivedA>& from, const Eigen::MatrixBase<DerivedB>& to) {
  const Vec2 d = to - from;
  const double n = d.norm();
  return n > 0.0 ? Vec2(d / n) : Vec2::Zero();
}

inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Segment with a radius; a disc is a capsule with a == b.
struct Capsule {
  Vec2 a;
  Vec2 b;
  double radius = 0.0;
};

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);
double segment_segment_distance(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1);

/// True when any capsule of `lhs` comes closer than the sum of radii plus
/// `clearance` to any capsule of `rhs`.
bool overlaps(std::span<const Capsule> lhs, std::span<const Capsule> rhs, double clearance = 0.0);

}  // namespace lemma

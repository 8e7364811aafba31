#include <doctest.h>

#include "lemma/error.hpp"
#include "lemma/rng.hpp"
#include "lemma/scene.hpp"
#include "lemma/world.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace lemma;
using testing::add;
using testing::two_robots;

TEST_CASE("world config round-trips and rejects bad input") {
  const World w;
  CHECK(parse_world(world_to_config(w)) == w);
  CHECK(world_hash(w) == world_hash(parse_world(world_to_config(w))));

  World other = w;
  other.ee_speed = 0.3;
  CHECK(world_hash(other) != world_hash(w));

  CHECK_THROWS_AS(parse_world("version = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_world("version = 1\nno.such_key = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_world("version = 1\ncube.side = abc\n"), ConfigError);
  CHECK_THROWS_AS(load_world("/nonexistent/world.cfg"), IoError);
}

TEST_CASE("shipped world config equals the built-in defaults") {
  CHECK(load_world(LEMMA_SOURCE_DIR "/config/world.cfg") == World{});
}

TEST_CASE("normalize_angle wraps into [-pi, pi)") {
  CounterRng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double t = rng.uniform(-50.0, 50.0);
    const double n = normalize_angle(t);
    CHECK(n >= -std::numbers::pi);
    CHECK(n < std::numbers::pi);
    CHECK(std::cos(n) == doctest::Approx(std::cos(t)).epsilon(1e-9));
    CHECK(std::sin(n) == doctest::Approx(std::sin(t)).epsilon(1e-9));
  }
  CHECK(normalize_angle(std::numbers::pi) == doctest::Approx(-std::numbers::pi));
}

TEST_CASE("segment distances") {
  CHECK(point_segment_distance({0, 1}, {-1, 0}, {1, 0}) == doctest::Approx(1.0));
  CHECK(point_segment_distance({3, 0}, {-1, 0}, {1, 0}) == doctest::Approx(2.0));
  CHECK(segment_segment_distance({0, 0}, {1, 0}, {0, 1}, {1, 1}) == doctest::Approx(1.0));
  CHECK(segment_segment_distance({0, -1}, {0, 1}, {-1, 0}, {1, 0}) == doctest::Approx(0.0));
  const std::vector<Capsule> a{{{0, 0}, {0, 0}, 0.1}};
  const std::vector<Capsule> b{{{0.25, 0}, {0.25, 0}, 0.1}};
  CHECK_FALSE(overlaps(a, b));
  CHECK(overlaps(a, b, 0.06));
}

TEST_CASE("reachability matches hand-computed distances") {
  const RobotSpec ur10 = make_robot(RobotId::R0, RobotModel::UR10, BodyColor::Red);
  const RobotSpec ur5 = make_robot(RobotId::R0, RobotModel::UR5, BodyColor::Red);
  CHECK(reachable(ur10, Vec2{0.0, 0.0}));
  CHECK_FALSE(reachable(ur5, Vec2{0.75, 0.0}));
  CHECK_FALSE(reachable(ur5, Vec2{0.0, 0.60}));
  CHECK(std::sqrt(0.75 * 0.75 + 0.60 * 0.60) == doctest::Approx(0.9605).epsilon(1e-4));
  CHECK(distance(ur5.base.position, Vec2{0.0, 0.60}) == doctest::Approx(0.9605).epsilon(1e-4));
}

TEST_CASE("reach predicate agrees with an independent disk test") {
  CounterRng rng(11);
  for (const RobotModel m : {RobotModel::UR5, RobotModel::UR10}) {
    for (const RobotId id : {RobotId::R0, RobotId::R1}) {
      const RobotSpec r = make_robot(id, m, BodyColor::White);
      for (int i = 0; i < 2000; ++i) {
        const double x = rng.uniform(-1.25, 1.25);
        const double y = rng.uniform(-0.7, 0.7);
        const bool expect = oracle::dist_to_base(index_of(id), x, y) <= oracle::nominal_reach(m);
        CHECK(reachable(r, Vec2{x, y}) == expect);
      }
    }
  }
}

TEST_CASE("tool-extended reach") {
  CHECK(tool_extended_reach(make_robot(RobotId::R0, RobotModel::UR5, BodyColor::Red)) == doctest::Approx(1.25));
  CHECK(tool_extended_reach(make_robot(RobotId::R1, RobotModel::UR10, BodyColor::Red)) == doctest::Approx(1.70));
  World w;
  w.tool_long_arm = 0.0;
  const RobotSpec r = make_robot(RobotId::R0, RobotModel::UR5, BodyColor::Red, w);
  CHECK(tool_extended_reach(r, w) == doctest::Approx(r.reach_radius));
}

TEST_CASE("shared workspace") {
  const SceneState ur5 = two_robots();
  const Region small = shared_workspace(ur5.robots[0], ur5.robots[1]);
  CHECK(small.representative.isApprox(Vec2{0.0, 0.0}));
  CHECK(reachable(ur5.robots[0], small.representative));
  CHECK(reachable(ur5.robots[1], small.representative));

  const SceneState ur10 = two_robots(RobotModel::UR10, RobotModel::UR10);
  const Region big = shared_workspace(ur10.robots[0], ur10.robots[1]);
  CounterRng rng(5);
  int only_big = 0;
  for (int i = 0; i < 5000; ++i) {
    const Vec2 p{rng.uniform(-1.25, 1.25), rng.uniform(-0.7, 0.7)};
    if (small.contains(p)) CHECK(big.contains(p));
    if (big.contains(p) && !small.contains(p)) ++only_big;
  }
  CHECK(only_big > 0);

  for (const auto& slot : shared_slots(ur5.robots[0], ur5.robots[1])) {
    CHECK(small.contains(slot));
  }

  World far;
  far.base0 = {-1.0, 0.0};
  far.base1 = {1.0, 0.0};
  const RobotSpec a = make_robot(RobotId::R0, RobotModel::UR5, BodyColor::Red, far);
  const RobotSpec b = make_robot(RobotId::R1, RobotModel::UR5, BodyColor::Red, far);
  CHECK_THROWS_AS(shared_workspace(a, b, far), EmptyRegion);
}

TEST_CASE("support forest and top-of-stack") {
  SceneState s = two_robots();
  const int lone = add(s, ObjectKind::Cube, Color::Red, -0.5, 0.2);
  CHECK(top_of_stack(s, lone));
  CHECK(support_forest_valid(s));

  const int bottom = add(s, ObjectKind::Cube, Color::Blue, 0.4, 0.3);
  const int top = add(s, ObjectKind::Cube, Color::Green, 0.4, 0.3, 0.0, bottom);
  CHECK_FALSE(top_of_stack(s, bottom));
  CHECK(top_of_stack(s, top));
  CHECK(s.stack_level(top) == 1);
  CHECK(s.top_z(top) == doctest::Approx(0.10));
  CHECK(support_forest_valid(s));

  s.holding[0] = lone;
  CHECK(top_of_stack(s, lone));
  CHECK(support_forest_valid(s));

  SceneState cyc = two_robots();
  add(cyc, ObjectKind::Cube, Color::Red, 0.1, 0.1, 0.0, 1);
  add(cyc, ObjectKind::Cube, Color::Blue, 0.1, 0.1, 0.0, 0);
  CHECK_FALSE(support_forest_valid(cyc));

  CHECK_THROWS_AS(top_of_stack(s, 99), UnknownObject);
  CHECK_THROWS_AS(s.at(99), UnknownObject);
}

TEST_CASE("name tables round-trip") {
  for (const Color c : {Color::Pink, Color::Red, Color::White, Color::Blue, Color::Green, Color::Yellow}) {
    CHECK(color_from_string(to_string(c)) == c);
  }
  for (const ObjectKind k : {ObjectKind::Cube, ObjectKind::Pad, ObjectKind::Tool}) {
    CHECK(object_kind_from_string(to_string(k)) == k);
  }
  CHECK(color_kind_from_token("red_cube") == ColorKind{Color::Red, ObjectKind::Cube});
  CHECK(to_token({Color::Yellow, ObjectKind::Tool}) == "yellow_tool");
  CHECK_THROWS_AS(color_from_string("mauve"), ParseError);
  CHECK_THROWS_AS(color_kind_from_token("red"), ParseError);
}

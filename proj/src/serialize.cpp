#include "lemma/serialize.hpp"

#include "lemma/error.hpp"

namespace lemma {
namespace {

template <typename F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw CodecError(std::string("malformed ") + what + ": " + e.what());
  } catch (const ParseError& e) {
    throw CodecError(std::string("malformed ") + what + ": " + e.what());
  }
}

Json robot_to_json(const RobotSpec& r) {
  return Json{{"id", to_string(r.id)},
              {"model", to_string(r.model)},
              {"body_color", to_string(r.body_color)},
              {"base", pose_to_json(r.base)},
              {"reach", r.reach_radius}};
}

RobotSpec robot_from_json(const Json& j) {
  RobotSpec r;
  r.id = robot_id_from_string(j.at("id").get<std::string>());
  r.model = robot_model_from_string(j.at("model").get<std::string>());
  r.body_color = body_color_from_string(j.at("body_color").get<std::string>());
  r.base = pose_from_json(j.at("base"));
  r.reach_radius = j.at("reach").get<double>();
  return r;
}

Json optional_int(const std::optional<int>& v) { return v ? Json(*v) : Json(nullptr); }
std::optional<int> optional_int(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<int>();
}

Json instruction_to_json(const Instruction& in) {
  return Json{{"text", in.text}, {"kind", to_string(in.kind)}, {"template_id", in.template_id}};
}

Instruction instruction_from_json(const Json& j) {
  Instruction in;
  in.text = j.at("text").get<std::string>();
  in.kind = instruction_kind_from_string(j.at("kind").get<std::string>());
  in.template_id = j.at("template_id").get<int>();
  return in;
}

}  // namespace

Json pose_to_json(const Pose2& pose) { return Json::array({pose.x(), pose.y(), pose.theta}); }

Pose2 pose_from_json(const Json& j) {
  return guarded("pose", [&] {
    if (!j.is_array() || j.size() != 3) throw CodecError("pose must be [x, y, theta]");
    return Pose2{Vec2{j[0].get<double>(), j[1].get<double>()}, j[2].get<double>()};
  });
}

Json scene_to_json(const SceneState& s) {
  Json objects = Json::array();
  for (const auto& o : s.objects) {
    objects.push_back(Json{{"id", o.spec.id},
                           {"kind", to_string(o.spec.kind)},
                           {"color", to_string(o.spec.color)},
                           {"pose", pose_to_json(o.pose)},
                           {"support", o.support}});
  }
  return Json{{"robots", Json::array({robot_to_json(s.robots[0]), robot_to_json(s.robots[1])})},
              {"objects", std::move(objects)},
              {"holding", Json::array({optional_int(s.holding[0]), optional_int(s.holding[1])})},
              {"clock", s.clock}};
}

SceneState scene_from_json(const Json& j) {
  return guarded("scene", [&] {
    SceneState s;
    const Json& robots = j.at("robots");
    if (!robots.is_array() || robots.size() != 2) throw CodecError("scene needs two robots");
    for (std::size_t i = 0; i < 2; ++i) s.robots[i] = robot_from_json(robots[i]);
    for (const Json& o : j.at("objects")) {
      SceneObject obj;
      obj.spec.id = o.at("id").get<int>();
      obj.spec.kind = object_kind_from_string(o.at("kind").get<std::string>());
      obj.spec.color = color_from_string(o.at("color").get<std::string>());
      obj.pose = pose_from_json(o.at("pose"));
      obj.support = o.at("support").get<int>();
      s.objects.push_back(obj);
    }
    const Json& holding = j.at("holding");
    if (!holding.is_array() || holding.size() != 2) throw CodecError("holding needs two entries");
    s.holding = {optional_int(holding[0]), optional_int(holding[1])};
    s.clock = j.at("clock").get<double>();
    return s;
  });
}

Json instance_to_json(const TaskInstance& inst) {
  Json goal = Json::array();
  for (const auto& a : inst.goal.atoms) goal.push_back(Json{{"top", to_token(a.top)}, {"bottom", to_token(a.bottom)}});
  return Json{{"id", inst.id},
              {"type", to_string(inst.type)},
              {"seed", inst.seed},
              {"scene", scene_to_json(inst.scene0)},
              {"goal", std::move(goal)}};
}

TaskInstance instance_from_json(const Json& j) {
  return guarded("instance", [&] {
    TaskInstance inst;
    inst.id = j.at("id").get<std::string>();
    inst.type = task_type_from_string(j.at("type").get<std::string>());
    inst.seed = j.at("seed").get<std::uint64_t>();
    inst.scene0 = scene_from_json(j.at("scene"));
    for (const Json& a : j.at("goal")) {
      inst.goal.atoms.push_back(GoalAtom{color_kind_from_token(a.at("top").get<std::string>()),
                                         color_kind_from_token(a.at("bottom").get<std::string>())});
    }
    return inst;
  });
}

Json action_to_json(const PrimitiveAction& a) {
  return Json{{"robot", to_string(a.robot)},
              {"primitive", to_string(a.primitive)},
              {"t_pick", pose_to_json(a.t_pick)},
              {"t_place", pose_to_json(a.t_place)}};
}

PrimitiveAction action_from_json(const Json& j) {
  return guarded("action", [&] {
    PrimitiveAction a;
    a.robot = robot_id_from_string(j.at("robot").get<std::string>());
    a.primitive = primitive_from_string(j.at("primitive").get<std::string>());
    a.t_pick = pose_from_json(j.at("t_pick"));
    a.t_place = pose_from_json(j.at("t_place"));
    return a;
  });
}

Json episode_to_json(const EpisodeRecord& rec) {
  Json steps = Json::array();
  for (const auto& s : rec.steps) {
    Json displaced = Json::array();
    for (const auto& d : s.receipt.displaced) {
      displaced.push_back(Json{{"object", d.object}, {"from", pose_to_json(d.from)}, {"to", pose_to_json(d.to)}});
    }
    steps.push_back(Json{{"clock", s.clock},
                         {"sub", encode_sub_instruction(s.sub)},
                         {"action", action_to_json(s.action)},
                         {"receipt", Json{{"duration", s.receipt.duration},
                                          {"picked", optional_int(s.receipt.picked)},
                                          {"displaced", std::move(displaced)}}},
                         {"obs", s.observation_ref}});
  }
  return Json{{"id", rec.id()},
              {"instance", instance_to_json(rec.instance)},
              {"instructions", Json{{"high", instruction_to_json(rec.high)}, {"human", instruction_to_json(rec.human)}}},
              {"steps", std::move(steps)},
              {"final_obs", rec.final_observation_ref},
              {"success", rec.success}};
}

EpisodeRecord episode_from_json(const Json& j) {
  return guarded("episode", [&] {
    EpisodeRecord rec;
    rec.instance = instance_from_json(j.at("instance"));
    if (j.at("id").get<std::string>() != rec.instance.id) throw CodecError("episode id differs from instance id");
    rec.high = instruction_from_json(j.at("instructions").at("high"));
    rec.human = instruction_from_json(j.at("instructions").at("human"));
    for (const Json& s : j.at("steps")) {
      EpisodeStep step;
      step.clock = s.at("clock").get<double>();
      step.sub = decode_sub_instruction(s.at("sub").get<std::string>());
      step.action = action_from_json(s.at("action"));
      const Json& r = s.at("receipt");
      step.receipt.duration = r.at("duration").get<double>();
      step.receipt.picked = optional_int(r.at("picked"));
      for (const Json& d : r.at("displaced")) {
        step.receipt.displaced.push_back(
            Displacement{d.at("object").get<int>(), pose_from_json(d.at("from")), pose_from_json(d.at("to"))});
      }
      step.observation_ref = s.at("obs").get<std::string>();
      rec.steps.push_back(std::move(step));
    }
    rec.final_observation_ref = j.at("final_obs").get<std::string>();
    rec.success = j.at("success").get<bool>();
    return rec;
  });
}

Json dag_to_json(const SubTaskDag& dag) {
  Json tasks = Json::array();
  for (const auto& t : dag.tasks) {
    tasks.push_back(Json{{"id", t.id},
                         {"primitive", to_string(t.primitive)},
                         {"pick", encode_entity(t.pick)},
                         {"place", encode_entity(t.place)},
                         {"depends_on", t.depends_on}});
  }
  return tasks;
}

Json allocation_to_json(const Allocation& a) {
  Json gamma = Json::array();
  for (const auto& g : a.gamma) gamma.push_back(g ? Json(to_string(*g)) : Json(nullptr));
  return Json{{"gamma", std::move(gamma)},
              {"order", a.order},
              {"utility", a.total_utility},
              {"time", a.total_time}};
}

}  // namespace lemma

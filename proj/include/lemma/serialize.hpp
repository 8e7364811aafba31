#pragma once

#include <json.hpp>

#include "lemma/alloc.hpp"
#include "lemma/oracle.hpp"

namespace lemma {

using Json = nlohmann::json;

// Poses are [x, y, theta]. Entities and sub-instructions use the text codec.
// The *_from_json functions throw CodecError on malformed input.

Json pose_to_json(const Pose2& pose);
Pose2 pose_from_json(const Json& j);

Json scene_to_json(const SceneState& scene);
SceneState scene_from_json(const Json& j);

Json instance_to_json(const TaskInstance& instance);
TaskInstance instance_from_json(const Json& j);

Json action_to_json(const PrimitiveAction& action);
PrimitiveAction action_from_json(const Json& j);

Json episode_to_json(const EpisodeRecord& record);
EpisodeRecord episode_from_json(const Json& j);

Json dag_to_json(const SubTaskDag& dag);
Json allocation_to_json(const Allocation& allocation);

}  // namespace lemma

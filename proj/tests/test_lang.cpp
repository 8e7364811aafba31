#include <doctest.h>

#include "lemma/error.hpp"
#include "lemma/lang.hpp"
#include "lemma/oracle.hpp"
#include "lemma/taskgen.hpp"

using namespace lemma;

namespace {

constexpr ColorKind cube(Color c) { return {c, ObjectKind::Cube}; }
constexpr ColorKind pad(Color c) { return {c, ObjectKind::Pad}; }

/// Every goal of the given type over distinct object colors.
std::vector<GoalCondition> all_goals(TaskType type) {
  std::vector<GoalCondition> out;
  const bool pads = has_pads(type);
  const auto bottom = [&](Color c) { return pads ? pad(c) : cube(c); };
  for (const Color a : kObjectColors) {
    for (const Color b : kObjectColors) {
      if (!pads && a == b) continue;
      if (goal_atom_count(type) == 1) {
        out.push_back({{{cube(a), bottom(b)}}});
        continue;
      }
      for (const Color c : kObjectColors) {
        for (const Color d : kObjectColors) {
          const std::set<ColorKind> used{cube(a), bottom(b), cube(c), bottom(d)};
          if (used.size() == 4) out.push_back({{{cube(a), bottom(b)}, {cube(c), bottom(d)}}});
        }
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("high-level lexicalization") {
  CHECK(lexicalize_high({{{cube(Color::Pink), pad(Color::White)}}}, TaskType::Pass).text ==
        "place the pink cube on top of the white pad");
  CHECK(lexicalize_high({{{cube(Color::Pink), cube(Color::Red)}}}, TaskType::Stack).text ==
        "place the pink cube on top of the red cube");
  CHECK(lexicalize_high({{{cube(Color::Pink), cube(Color::Red)}, {cube(Color::Blue), cube(Color::Green)}}},
                        TaskType::Stack2)
            .text == "place the pink cube on top of the red cube and place the blue cube on top of the green cube");
}

TEST_CASE("stack and poke-stack share their high-level text") {
  const GoalCondition g{{{cube(Color::Pink), cube(Color::Red)}}};
  CHECK(lexicalize_high(g, TaskType::Stack) == lexicalize_high(g, TaskType::PokeStack));
  CHECK(lexicalize_high(g, TaskType::Stack) == lexicalize_high(g, TaskType::HookStack));
}

TEST_CASE("parse_high inverts lexicalize_high") {
  int cases = 0;
  for (const TaskType type : kTaskTypes) {
    for (const GoalCondition& g : all_goals(type)) {
      const ParsedGoal parsed = parse_high(lexicalize_high(g, type).text);
      CHECK(parsed.goal == g);
      CHECK(parsed.ambiguity.count(type) == 1);
      ++cases;
    }
  }
  CHECK(cases >= 160);
}

TEST_CASE("parse_high ambiguity and errors") {
  const ParsedGoal p = parse_high("Place the pink cube on top of the red cube.");
  CHECK(p.goal == GoalCondition{{{cube(Color::Pink), cube(Color::Red)}}});
  CHECK(p.ambiguity == std::set<TaskType>{TaskType::Stack, TaskType::PokeStack, TaskType::HookStack});
  CHECK(parse_high("place the pink cube on top of the red pad").ambiguity ==
        std::set<TaskType>{TaskType::Pass, TaskType::Poke, TaskType::Hook});

  CHECK_THROWS_AS(parse_high("move the moon"), ParseError);
  CHECK_THROWS_AS(parse_high(""), ParseError);
  CHECK_THROWS_AS(parse_high("place the yellow cube on top of the red pad"), ParseError);
  CHECK_THROWS_AS(parse_high("place the pink cube on top of the red pad and place the blue cube on top of the "
                             "green cube"),
                  ParseError);
  CHECK_THROWS_AS(parse_high("place the pink cube on top of the red pad please"), ParseError);
}

TEST_CASE("template pool") {
  const TemplatePool& pool = TemplatePool::builtin();
  CHECK(pool.lint().empty());
  for (const TaskType t : kTaskTypes) CHECK(pool.size(t) >= 10);
  CHECK_THROWS_AS(pool.get(TaskType::Pass, 999), UnknownTemplate);
  CHECK(TemplatePool::load(LEMMA_SOURCE_DIR "/data/templates.tsv").all().size() == pool.all().size());

  const TemplatePool bad = TemplatePool::parse("stack\t0\tput {pick-color} somewhere\n");
  CHECK(bad.lint().size() == 1);
  CHECK_THROWS_AS(TemplatePool::parse("stack\t0\ta\nstack\t0\tb\n"), ParseError);
  CHECK_THROWS_AS(TemplatePool::parse("stack\tx\ta\n"), ParseError);
  CHECK_THROWS_AS(TemplatePool::parse("stack\t0\n"), ParseError);
  CHECK_THROWS_AS(TemplatePool::load("/nonexistent/templates.tsv"), IoError);
}

TEST_CASE("human lexicalization") {
  const GoalCondition stack{{{cube(Color::Pink), cube(Color::Red)}}};
  CHECK(lexicalize_human(stack, TaskType::Stack, 0, 1).text ==
        "take red block and place it in center under the pink block");
  const GoalCondition poke{{{cube(Color::Blue), pad(Color::Green)}}};
  CHECK(lexicalize_human(poke, TaskType::Poke, 0, 1).text ==
        "use the L object to push the blue block to the other robot and place it on the green pad");
  CHECK(lexicalize_human(stack, TaskType::Stack, 3, 9) == lexicalize_human(stack, TaskType::Stack, 3, 9));

  for (const TaskType type : kTaskTypes) {
    const GoalCondition g = all_goals(type).front();
    for (const auto& t : TemplatePool::builtin().all()) {
      if (t.type != type) continue;
      const Instruction ins = lexicalize_human(g, type, t.id, 4);
      CHECK(ins.text.find('{') == std::string::npos);
      CHECK(ins.kind == InstructionKind::Human);
      CHECK_THROWS_AS(parse_high(ins.text), ParseError);
      for (const auto& atom : g.atoms) {
        CHECK(ins.text.find(std::string(to_string(atom.top.color))) != std::string::npos);
        CHECK(ins.text.find(std::string(to_string(atom.bottom.color))) != std::string::npos);
      }
    }
  }
}

TEST_CASE("two-atom human instructions vary the atom order by seed") {
  const GoalCondition g{{{cube(Color::Pink), cube(Color::Red)}, {cube(Color::Blue), cube(Color::Green)}}};
  std::set<std::string> texts;
  for (std::uint64_t seed = 0; seed < 32; ++seed) texts.insert(lexicalize_human(g, TaskType::Stack2, 0, seed).text);
  CHECK(texts.size() == 2);
}

TEST_CASE("sub-instruction codec") {
  const SubInstruction s{RobotId::R0, Primitive::Move, cube(Color::Red), Site::shared()};
  CHECK(encode_sub_instruction(s) == "robot0 move red_cube shared_space");
  CHECK(decode_sub_instruction("robot0 move red_cube shared_space") == s);

  const SubInstruction h = decode_sub_instruction("robot1 hook pink_cube own_workspace");
  CHECK(h.robot == RobotId::R1);
  CHECK(h.primitive == Primitive::Hook);
  CHECK(h.pick == EntityRef{cube(Color::Pink)});
  CHECK(h.place == EntityRef{Site::own_workspace()});

  const std::vector<EntityRef> entities{
      cube(Color::Green),          pad(Color::White),          ColorKind{Color::Yellow, ObjectKind::Tool},
      Site::shared(),              Site::return_spot(),        Site::own_workspace(),
      Site::other_workspace(),     Site::pad_of(Color::Blue),  Site::stack_on(Color::Pink),
      Site::align_with(Color::Red)};
  for (const RobotId r : {RobotId::R0, RobotId::R1}) {
    for (const Primitive p : kPrimitives) {
      if (p == Primitive::Stop) continue;
      for (const auto& a : entities) {
        for (const auto& b : entities) {
          const SubInstruction x{r, p, a, b};
          CHECK(decode_sub_instruction(encode_sub_instruction(x)) == x);
        }
      }
    }
  }

  CHECK_THROWS_AS(encode_sub_instruction({RobotId::R0, Primitive::Stop, cube(Color::Red), Site::shared()}),
                  CodecError);
  CHECK_THROWS_AS(decode_sub_instruction("robot2 move red_cube shared_space"), CodecError);
  CHECK_THROWS_AS(decode_sub_instruction("robot0 fly red_cube shared_space"), CodecError);
  CHECK_THROWS_AS(decode_sub_instruction("robot0 move red_cube"), CodecError);
  CHECK_THROWS_AS(decode_sub_instruction("robot0 move mauve_cube shared_space"), CodecError);
  CHECK_THROWS_AS(decode_sub_instruction("robot0 stop red_cube shared_space"), CodecError);
}

TEST_CASE("demonstration instructions") {
  const TaskInstance inst = sample_task(TaskType::Stack2, 14);
  const EpisodeRecord rec = generate_demonstration(inst);
  CHECK(parse_high(rec.high.text).goal == inst.goal);
  CHECK(rec.human.template_id == human_template_id(inst));
  CHECK(rec.human.kind == InstructionKind::Human);
}

#include "lemma/lang.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "lemma/error.hpp"
#include "lemma/rng.hpp"

namespace lemma {

// Defined in the generated templates source.
extern const char* const kBuiltinTemplatesTsv;

namespace {

std::vector<std::string> split_ws(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (const char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::vector<std::string_view> split_on(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(text.substr(start));
      return out;
    }
    out.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
}

std::string clause(const GoalAtom& atom) {
  std::string s = "place the ";
  s += to_string(atom.top.color);
  s += " cube on top of the ";
  s += to_string(atom.bottom.color);
  s += ' ';
  s += to_string(atom.bottom.kind);
  return s;
}

Color object_color(std::string_view word) {
  const Color c = color_from_string(word);
  if (std::find(kObjectColors.begin(), kObjectColors.end(), c) == kObjectColors.end()) {
    throw ParseError("no cube or pad has color " + std::string(word));
  }
  return c;
}

// "place the <c> cube on top of the <c> <pad|cube>" starting at words[at].
GoalAtom parse_clause(const std::vector<std::string>& words, std::size_t at) {
  static const std::vector<std::string> shape{"place", "the", "", "cube", "on", "top", "of", "the", "", ""};
  if (words.size() < at + shape.size()) throw ParseError("instruction too short");
  for (std::size_t k = 0; k < shape.size(); ++k) {
    if (!shape[k].empty() && words[at + k] != shape[k]) {
      throw ParseError("unexpected word '" + words[at + k] + "'");
    }
  }
  GoalAtom atom;
  atom.top = {object_color(words[at + 2]), ObjectKind::Cube};
  const std::string& kind = words[at + 9];
  if (kind != "pad" && kind != "cube") throw ParseError("unexpected word '" + kind + "'");
  atom.bottom = {object_color(words[at + 8]), object_kind_from_string(kind)};
  return atom;
}

std::string normalize_text(std::string_view text) {
  std::string s;
  for (const char ch : text) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  while (!s.empty() && (s.back() == '.' || std::isspace(static_cast<unsigned char>(s.back())))) {
    s.pop_back();
  }
  return s;
}

std::vector<std::string> required_slots(TaskType type) {
  if (goal_atom_count(type) == 2) {
    return {"{pick-color1}", "{place-color1}", "{pick-color2}", "{place-color2}"};
  }
  return {"{pick-color}", "{place-color}"};
}

}  // namespace

std::string_view to_string(InstructionKind kind) {
  return kind == InstructionKind::HighLevel ? "high" : "human";
}

InstructionKind instruction_kind_from_string(std::string_view s) {
  if (s == "high") return InstructionKind::HighLevel;
  if (s == "human") return InstructionKind::Human;
  throw ParseError("unknown instruction kind '" + std::string(s) + "'");
}

std::vector<std::string> Instruction::tokens() const { return split_ws(text); }

Instruction lexicalize_high(const GoalCondition& goal, TaskType type) {
  (void)type;  // every type of a given atom shape shares one template
  Instruction out;
  out.kind = InstructionKind::HighLevel;
  for (std::size_t k = 0; k < goal.atoms.size(); ++k) {
    if (k > 0) out.text += " and ";
    out.text += clause(goal.atoms[k]);
  }
  return out;
}

ParsedGoal parse_high(std::string_view text) {
  const std::vector<std::string> words = split_ws(normalize_text(text));
  ParsedGoal parsed;
  parsed.goal.atoms.push_back(parse_clause(words, 0));
  if (words.size() > 10) {
    if (words[10] != "and") throw ParseError("expected 'and' after the first clause");
    parsed.goal.atoms.push_back(parse_clause(words, 11));
    if (words.size() != 21) throw ParseError("trailing words after the second clause");
  }
  const ObjectKind bottom = parsed.goal.atoms.front().bottom.kind;
  for (const auto& atom : parsed.goal.atoms) {
    if (atom.bottom.kind != bottom) throw ParseError("clauses mix pad and cube goals");
  }
  const std::size_t atoms = parsed.goal.atoms.size();
  for (const TaskType t : kTaskTypes) {
    const bool pads = has_pads(t);
    if (static_cast<std::size_t>(goal_atom_count(t)) == atoms && pads == (bottom == ObjectKind::Pad)) {
      parsed.ambiguity.insert(t);
    }
  }
  if (parsed.ambiguity.empty()) throw ParseError("no task type takes this goal shape");
  return parsed;
}

TemplatePool TemplatePool::parse(std::string_view tsv) {
  TemplatePool pool;
  int line_no = 0;
  for (std::string_view line : split_on(tsv, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split_on(line, '\t');
    if (fields.size() != 3) {
      throw ParseError("templates line " + std::to_string(line_no) + ": expected 3 fields");
    }
    if (fields[0] == "task_type") continue;
    HumanTemplate t;
    t.type = task_type_from_string(fields[0]);
    try {
      t.id = std::stoi(std::string(fields[1]));
    } catch (const std::exception&) {
      throw ParseError("templates line " + std::to_string(line_no) + ": bad template id");
    }
    t.pattern = std::string(fields[2]);
    auto& ids = pool.by_type_[t.type];
    for (const std::size_t k : ids) {
      if (pool.templates_[k].id == t.id) {
        throw ParseError("templates line " + std::to_string(line_no) + ": duplicate id");
      }
    }
    ids.push_back(pool.templates_.size());
    pool.templates_.push_back(std::move(t));
  }
  return pool;
}

TemplatePool TemplatePool::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const TemplatePool& TemplatePool::builtin() {
  static const TemplatePool pool = parse(kBuiltinTemplatesTsv);
  return pool;
}

int TemplatePool::size(TaskType type) const {
  const auto it = by_type_.find(type);
  return it == by_type_.end() ? 0 : static_cast<int>(it->second.size());
}

const HumanTemplate& TemplatePool::get(TaskType type, int id) const {
  const auto it = by_type_.find(type);
  if (it != by_type_.end()) {
    for (const std::size_t k : it->second) {
      if (templates_[k].id == id) return templates_[k];
    }
  }
  throw UnknownTemplate("no template " + std::to_string(id) + " for " + std::string(to_string(type)));
}

std::vector<std::string> TemplatePool::lint() const {
  std::vector<std::string> problems;
  for (const auto& t : templates_) {
    for (const auto& slot : required_slots(t.type)) {
      if (t.pattern.find(slot) == std::string::npos) {
        problems.push_back(std::string(to_string(t.type)) + "/" + std::to_string(t.id) + " lacks " + slot);
      }
    }
  }
  return problems;
}

Instruction lexicalize_human(const GoalCondition& goal, TaskType type, int template_id,
                             std::uint64_t rng_seed, const TemplatePool& pool) {
  const HumanTemplate& t = pool.get(type, template_id);
  Instruction out;
  out.kind = InstructionKind::Human;
  out.template_id = template_id;
  out.text = t.pattern;
  if (goal.atoms.size() == 2) {
    CounterRng rng(rng_seed, 0x4C4558ULL);
    const bool swap = rng.bernoulli(0.5);
    const GoalAtom& a = goal.atoms[swap ? 1 : 0];
    const GoalAtom& b = goal.atoms[swap ? 0 : 1];
    replace_all(out.text, "{pick-color1}", to_string(a.top.color));
    replace_all(out.text, "{place-color1}", to_string(a.bottom.color));
    replace_all(out.text, "{pick-color2}", to_string(b.top.color));
    replace_all(out.text, "{place-color2}", to_string(b.bottom.color));
  } else if (!goal.atoms.empty()) {
    replace_all(out.text, "{pick-color}", to_string(goal.atoms[0].top.color));
    replace_all(out.text, "{place-color}", to_string(goal.atoms[0].bottom.color));
  }
  return out;
}

std::string encode_entity(const EntityRef& ref) {
  if (const auto* ck = std::get_if<ColorKind>(&ref)) return to_token(*ck);
  const Site& site = std::get<Site>(ref);
  const std::string color(to_string(site.color));
  switch (site.kind) {
    case SiteKind::SharedPoint: return "shared_space";
    case SiteKind::PadOf: return "on_" + color + "_pad";
    case SiteKind::StackOn: return "on_" + color + "_cube";
    case SiteKind::AlignWith: return "align_" + color + "_cube";
    case SiteKind::ReturnSpot: return "return_spot";
    case SiteKind::OwnWorkspace: return "own_workspace";
    case SiteKind::OtherWorkspace: return "other_workspace";
  }
  throw CodecError("unknown site kind");
}

EntityRef decode_entity(std::string_view token) {
  if (token == "shared_space") return Site::shared();
  if (token == "return_spot") return Site::return_spot();
  if (token == "own_workspace") return Site::own_workspace();
  if (token == "other_workspace") return Site::other_workspace();
  try {
    const auto parts = split_on(token, '_');
    if (parts.size() == 3 && parts[0] == "on" && parts[2] == "pad") return Site::pad_of(color_from_string(parts[1]));
    if (parts.size() == 3 && parts[0] == "on" && parts[2] == "cube") return Site::stack_on(color_from_string(parts[1]));
    if (parts.size() == 3 && parts[0] == "align" && parts[2] == "cube") {
      return Site::align_with(color_from_string(parts[1]));
    }
    if (parts.size() == 2) return color_kind_from_token(token);
  } catch (const ParseError& e) {
    throw CodecError(std::string("bad entity '") + std::string(token) + "': " + e.what());
  }
  throw CodecError("bad entity '" + std::string(token) + "'");
}

std::string encode_sub_instruction(const SubInstruction& s) {
  if (s.primitive == Primitive::Stop) throw CodecError("stop carries no entities");
  std::string out(to_string(s.robot));
  out += ' ';
  out += to_string(s.primitive);
  out += ' ';
  out += encode_entity(s.pick);
  out += ' ';
  out += encode_entity(s.place);
  return out;
}

SubInstruction decode_sub_instruction(std::string_view text) {
  const auto words = split_ws(text);
  if (words.size() != 4) throw CodecError("expected 4 fields in '" + std::string(text) + "'");
  SubInstruction s;
  try {
    s.robot = robot_id_from_string(words[0]);
    s.primitive = primitive_from_string(words[1]);
  } catch (const ParseError& e) {
    throw CodecError(e.what());
  }
  if (s.primitive == Primitive::Stop) throw CodecError("stop carries no entities");
  s.pick = decode_entity(words[2]);
  s.place = decode_entity(words[3]);
  return s;
}

}  // namespace lemma

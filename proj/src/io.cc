// Copyright 2026 The Vigil Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vigil/io.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "vigil/decompose.h"

namespace vigil {

std::string dump_document(const Json& doc) { return doc.dump(2) + "\n"; }

Json parse_document(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IOError", "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("IOError", "cannot write " + path);
  out << contents;
  if (!out) throw Error("IOError", "write failed: " + path);
}

namespace {

// Typed field access that reports the JSON path on failure.
class Reader {
 public:
  Reader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  [[noreturn]] static void fail(const std::string& path,
                                const std::string& what) {
    throw SchemaError((path.empty() ? std::string("document") : path) + ": " +
                      what);
  }

  void allow(std::initializer_list<const char*> keys) const {
    std::set<std::string> ok(keys.begin(), keys.end());
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!ok.count(it.key())) fail(sub(it.key()), "unknown field");
    }
  }
  bool has(const char* key) const { return j_.contains(key); }
  const Json& at(const char* key) const {
    if (!j_.contains(key)) fail(sub(key), "missing field");
    return j_.at(key);
  }
  std::string sub(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  int integer(const char* key) const { return as_int(at(key), sub(key)); }
  double number(const char* key) const {
    const Json& v = at(key);
    if (!v.is_number()) fail(sub(key), "expected a number");
    return v.get<double>();
  }
  bool boolean(const char* key) const {
    const Json& v = at(key);
    if (!v.is_boolean()) fail(sub(key), "expected a boolean");
    return v.get<bool>();
  }
  std::string string(const char* key) const {
    const Json& v = at(key);
    if (!v.is_string()) fail(sub(key), "expected a string");
    return v.get<std::string>();
  }

  static int as_int(const Json& v, const std::string& path) {
    if (!v.is_number_integer()) fail(path, "expected an integer");
    auto x = v.get<std::int64_t>();
    if (x < -(1ll << 31) || x > (1ll << 31) - 1) fail(path, "out of range");
    return static_cast<int>(x);
  }
  static LocationSet ints(const Json& v, const std::string& path) {
    if (!v.is_array()) fail(path, "expected an array");
    LocationSet out;
    for (std::size_t k = 0; k < v.size(); ++k) {
      out.push_back(as_int(v[k], path + "[" + std::to_string(k) + "]"));
    }
    return out;
  }
  static std::vector<std::string> strings(const Json& v,
                                          const std::string& path) {
    if (!v.is_array()) fail(path, "expected an array");
    std::vector<std::string> out;
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (!v[k].is_string()) {
        fail(path + "[" + std::to_string(k) + "]", "expected a string");
      }
      out.push_back(v[k].get<std::string>());
    }
    return out;
  }

 private:
  const Json& j_;
  std::string path_;
};

std::string connectivity_name(Connectivity c) {
  return c == Connectivity::kFour ? "four" : "eight";
}

std::string collision_name(CollisionMode c) {
  return c == CollisionMode::kBlockVisibleTarget ? "block_visible_target"
                                                 : "none";
}

std::string visibility_name(VisibilityKind k) {
  switch (k) {
    case VisibilityKind::kLineOfSight:
      return "line_of_sight";
    case VisibilityKind::kFull:
      return "full";
    case VisibilityKind::kNone:
      return "none";
  }
  return "none";
}

Json range_json(double r) {
  // Integral ranges print as integers.
  if (r == static_cast<double>(static_cast<std::int64_t>(r))) {
    return static_cast<std::int64_t>(r);
  }
  return r;
}

}  // namespace

Json set_to_json(const LocationSet& s) {
  Json a = Json::array();
  for (Location l : s) a.push_back(l);
  return a;
}

LocationSet set_from_json(const Json& j) { return Reader::ints(j, "set"); }

Json spec_to_json(const SurveillanceSpec& spec) {
  switch (spec.form()) {
    case SurveillanceSpec::Form::kSafety:
      return {{"type", "safety"}, {"b", spec.b()}};
    case SurveillanceSpec::Form::kLiveness:
      return {{"type", "liveness"}, {"b", spec.b()}};
    case SurveillanceSpec::Form::kSafetyLiveness:
      return {{"type", "safety-liveness"}, {"a", spec.a()}, {"b", spec.b()}};
  }
  return {};
}

namespace {

SurveillanceSpec spec_at(const Json& j, const std::string& path) {
  Reader r(j, path);
  const std::string type = r.string("type");
  auto positive = [&](const char* key) {
    int v = r.integer(key);
    if (v < 1) Reader::fail(r.sub(key), "must be a positive integer");
    return v;
  };
  if (type == "safety") {
    r.allow({"type", "b"});
    return SurveillanceSpec::Safety(positive("b"));
  }
  if (type == "liveness") {
    r.allow({"type", "b"});
    return SurveillanceSpec::Liveness(positive("b"));
  }
  if (type == "safety-liveness") {
    r.allow({"type", "a", "b"});
    int a = positive("a");
    int b = positive("b");
    if (a <= b) Reader::fail(path, "safety-liveness requires a > b");
    return SurveillanceSpec::SafetyLiveness(a, b);
  }
  Reader::fail(r.sub("type"), "unknown objective type '" + type + "'");
}

}  // namespace

SurveillanceSpec spec_from_json(const Json& j) { return spec_at(j, "objective"); }

Json local_spec_to_json(const LocalSpec& spec) {
  Json j = {{"subgame", spec.subgame}};
  switch (spec.form) {
    case LocalSpec::Form::kLocalSafety:
      j["type"] = "local-safety";
      j["c"] = spec.c;
      break;
    case LocalSpec::Form::kLocalLiveness:
      j["type"] = "local-liveness";
      j["b"] = spec.b;
      break;
    case LocalSpec::Form::kLocalBoth:
      j["type"] = "local-safety-liveness";
      j["c"] = spec.c;
      j["b"] = spec.b;
      break;
  }
  return j;
}

LocalSpec local_spec_from_json(const Json& j) {
  Reader r(j, "spec");
  const std::string type = r.string("type");
  LocalSpec s;
  s.subgame = r.integer("subgame");
  if (type == "local-safety") {
    r.allow({"type", "c", "subgame"});
    s.form = LocalSpec::Form::kLocalSafety;
    s.c = r.integer("c");
  } else if (type == "local-liveness") {
    r.allow({"type", "b", "subgame"});
    s.form = LocalSpec::Form::kLocalLiveness;
    s.b = r.integer("b");
  } else if (type == "local-safety-liveness") {
    r.allow({"type", "c", "b", "subgame"});
    s.form = LocalSpec::Form::kLocalBoth;
    s.c = r.integer("c");
    s.b = r.integer("b");
  } else {
    Reader::fail("spec.type", "unknown local spec type '" + type + "'");
  }
  return s;
}

Json world_to_json(const WorldDesc& d) {
  Json j;
  j["grid"] = {{"width", d.grid.width}, {"height", d.grid.height}};
  j["obstacles"] = set_to_json(d.grid.obstacles);
  j["move_rules"] = {
      {"connectivity", connectivity_name(d.move_rules.connectivity)},
      {"sensor_stay", d.move_rules.sensor_stay},
      {"target_stay", d.move_rules.target_stay},
      {"collision_mode", collision_name(d.move_rules.collision)}};
  Json sensors = Json::array();
  for (const MobileSensor& s : d.sensors) {
    sensors.push_back(
        {{"id", s.id},
         {"init", s.init},
         {"visibility",
          {{"kind", visibility_name(s.visibility.kind)},
           {"range", range_json(s.visibility.range)}}}});
  }
  j["sensors"] = sensors;
  j["target"] = {{"init", d.target_init}};
  Json statics = Json::array();
  for (const StaticSensor& s : d.static_sensors) {
    statics.push_back({{"id", s.id}, {"cells", set_to_json(s.cells)}});
  }
  j["static_sensors"] = statics;
  Json part = Json::array();
  for (const LocationSet& region : d.partition) part.push_back(set_to_json(region));
  j["partition"] = part;
  j["objective"] = spec_to_json(d.objective);
  return j;
}

WorldDesc world_desc_from_json(const Json& j) {
  Reader r(j, "");
  r.allow({"grid", "obstacles", "move_rules", "sensors", "target",
           "static_sensors", "partition", "objective"});
  WorldDesc d;
  {
    Reader g(r.at("grid"), "grid");
    g.allow({"width", "height"});
    d.grid.width = g.integer("width");
    d.grid.height = g.integer("height");
  }
  if (r.has("obstacles")) {
    d.grid.obstacles = Reader::ints(r.at("obstacles"), "obstacles");
  }
  if (r.has("move_rules")) {
    Reader m(r.at("move_rules"), "move_rules");
    m.allow({"connectivity", "sensor_stay", "target_stay", "collision_mode"});
    if (m.has("connectivity")) {
      std::string c = m.string("connectivity");
      if (c == "four") {
        d.move_rules.connectivity = Connectivity::kFour;
      } else if (c == "eight") {
        d.move_rules.connectivity = Connectivity::kEight;
      } else {
        Reader::fail("move_rules.connectivity", "expected four or eight");
      }
    }
    if (m.has("sensor_stay")) d.move_rules.sensor_stay = m.boolean("sensor_stay");
    if (m.has("target_stay")) d.move_rules.target_stay = m.boolean("target_stay");
    if (m.has("collision_mode")) {
      std::string c = m.string("collision_mode");
      if (c == "block_visible_target") {
        d.move_rules.collision = CollisionMode::kBlockVisibleTarget;
      } else if (c == "none") {
        d.move_rules.collision = CollisionMode::kNone;
      } else {
        Reader::fail("move_rules.collision_mode",
                     "expected block_visible_target or none");
      }
    }
  }
  const Json& sensors = r.at("sensors");
  if (!sensors.is_array()) Reader::fail("sensors", "expected an array");
  for (std::size_t k = 0; k < sensors.size(); ++k) {
    const std::string path = "sensors[" + std::to_string(k) + "]";
    Reader s(sensors[k], path);
    s.allow({"id", "init", "visibility"});
    MobileSensor m;
    m.id = s.string("id");
    m.init = s.integer("init");
    Reader v(s.at("visibility"), path + ".visibility");
    v.allow({"kind", "range"});
    std::string kind = v.string("kind");
    if (kind == "line_of_sight") {
      m.visibility.kind = VisibilityKind::kLineOfSight;
    } else if (kind == "full") {
      m.visibility.kind = VisibilityKind::kFull;
    } else if (kind == "none") {
      m.visibility.kind = VisibilityKind::kNone;
    } else {
      Reader::fail(path + ".visibility.kind", "unknown kind '" + kind + "'");
    }
    if (v.has("range")) m.visibility.range = v.number("range");
    d.sensors.push_back(std::move(m));
  }
  {
    Reader t(r.at("target"), "target");
    t.allow({"init"});
    d.target_init = t.integer("init");
  }
  if (r.has("static_sensors")) {
    const Json& statics = r.at("static_sensors");
    if (!statics.is_array()) Reader::fail("static_sensors", "expected an array");
    for (std::size_t k = 0; k < statics.size(); ++k) {
      const std::string path = "static_sensors[" + std::to_string(k) + "]";
      Reader s(statics[k], path);
      s.allow({"id", "cells"});
      d.static_sensors.push_back(
          {s.string("id"), Reader::ints(s.at("cells"), path + ".cells")});
    }
  }
  if (r.has("partition")) {
    const Json& part = r.at("partition");
    if (!part.is_array()) Reader::fail("partition", "expected an array");
    for (std::size_t k = 0; k < part.size(); ++k) {
      d.partition.push_back(
          Reader::ints(part[k], "partition[" + std::to_string(k) + "]"));
    }
  }
  d.objective = spec_at(r.at("objective"), "objective");
  return d;
}

SurveillanceWorld parse_world(const std::string& text) {
  return SurveillanceWorld::Create(world_desc_from_json(parse_document(text)));
}

SurveillanceWorld load_world(const std::string& path) {
  return parse_world(read_file(path));
}

std::string print_world(const WorldDesc& desc) {
  return dump_document(world_to_json(desc));
}

Json subgame_to_json(const SurveillanceWorld& world, int i) {
  Subgame sg = build_subgame(world, i);
  const WorldDesc& d = world.desc();
  Json j = world_to_json(d);
  const MobileSensor& s = d.sensors[i];
  j["sensors"] = Json::array(
      {{{"id", s.id},
        {"init", s.init},
        {"visibility",
         {{"kind", visibility_name(s.visibility.kind)},
          {"range", range_json(s.visibility.range)}}}}});
  j["target"] = {{"init", sg.target_init()}};
  Json statics = Json::array();
  for (std::size_t k = 0; k < d.static_sensors.size(); ++k) {
    if (sg.alarms() >> k & 1) {
      statics.push_back({{"id", d.static_sensors[k].id},
                         {"cells", set_to_json(d.static_sensors[k].cells)}});
    }
  }
  j["static_sensors"] = statics;
  j["partition"] = Json::array({set_to_json(sg.region())});
  j["objective"] =
      local_spec_to_json(local_spec(world.objective(), world.sensor_count(), i));
  j["subgame"] = i;
  j["region"] = set_to_json(sg.region());
  j["outside"] = kOutside;
  Json alarms = Json::array();
  for (const auto& id : world.trigger_ids(sg.alarms())) alarms.push_back(id);
  j["alarms"] = alarms;
  j["transitions"] = sg.transition_count();
  return j;
}

std::string strategy_file_name(int subgame) {
  return subgame < 0 ? "strategy-global.json"
                     : "strategy-" + std::to_string(subgame) + ".json";
}

namespace {

Json ids_json(const SurveillanceWorld& world, TriggerMask mask) {
  Json a = Json::array();
  for (const auto& id : world.trigger_ids(mask)) a.push_back(id);
  return a;
}

}  // namespace

Json strategy_to_json(const SurveillanceWorld& world,
                      const StrategyTable& table) {
  const bool local = table.subgame >= 0;
  auto loc_json = [&](const SensorLocs& s) -> Json {
    return local ? Json(s.front()) : set_to_json(s);
  };
  Json moves = Json::array();
  for (const auto& [state, choices] : table.moves) {
    Json responses = Json::array();
    for (const auto& [choice, move] : choices) {
      responses.push_back({{"belief", set_to_json(choice.belief)},
                           {"triggers", ids_json(world, choice.triggers)},
                           {"move", loc_json(move)}});
    }
    std::sort(responses.begin(), responses.end());
    moves.push_back({{"state",
                      {{"loc", loc_json(state.sensors)},
                       {"belief", set_to_json(state.belief)},
                       {"triggers", ids_json(world, state.triggers)}}},
                     {"responses", responses}});
  }
  std::sort(moves.begin(), moves.end());
  Json j;
  j["subgame"] = table.subgame;
  if (const auto* ls = std::get_if<LocalSpec>(&table.spec)) {
    j["spec"] = local_spec_to_json(*ls);
  } else {
    j["spec"] = spec_to_json(std::get<SurveillanceSpec>(table.spec));
  }
  j["realizable"] = table.realizable;
  j["trigger_mode"] = to_string(table.trigger_mode);
  j["moves"] = moves;
  return j;
}

StrategyTable strategy_from_json(const SurveillanceWorld& world, const Json& j) {
  Reader r(j, "");
  r.allow({"subgame", "spec", "realizable", "trigger_mode", "moves"});
  StrategyTable t;
  t.subgame = r.integer("subgame");
  if (t.subgame >= world.sensor_count()) {
    Reader::fail("subgame", "no such subgame in this world");
  }
  if (t.subgame >= 0) {
    t.spec = local_spec_from_json(r.at("spec"));
  } else {
    t.spec = spec_at(r.at("spec"), "spec");
  }
  t.realizable = r.boolean("realizable");
  try {
    t.trigger_mode = trigger_mode_from_string(r.string("trigger_mode"));
  } catch (const Error&) {
    Reader::fail("trigger_mode", "expected literal or exact");
  }
  const bool local = t.subgame >= 0;
  auto loc_from = [&](const Json& v, const std::string& path) -> SensorLocs {
    if (local) return {Reader::as_int(v, path)};
    return Reader::ints(v, path);
  };
  const Json& moves = r.at("moves");
  if (!moves.is_array()) Reader::fail("moves", "expected an array");
  for (std::size_t k = 0; k < moves.size(); ++k) {
    const std::string path = "moves[" + std::to_string(k) + "]";
    Reader e(moves[k], path);
    e.allow({"state", "responses"});
    Reader s(e.at("state"), path + ".state");
    s.allow({"loc", "belief", "triggers"});
    StrategyTable::StateKey key{
        loc_from(s.at("loc"), path + ".state.loc"),
        Reader::ints(s.at("belief"), path + ".state.belief"),
        world.trigger_mask(
            Reader::strings(s.at("triggers"), path + ".state.triggers"))};
    auto& row = t.moves[key];
    const Json& responses = e.at("responses");
    if (!responses.is_array()) {
      Reader::fail(path + ".responses", "expected an array");
    }
    for (std::size_t c = 0; c < responses.size(); ++c) {
      const std::string rp = path + ".responses[" + std::to_string(c) + "]";
      Reader x(responses[c], rp);
      x.allow({"belief", "triggers", "move"});
      StrategyTable::ChoiceKey ck{
          Reader::ints(x.at("belief"), rp + ".belief"),
          world.trigger_mask(Reader::strings(x.at("triggers"), rp + ".triggers"))};
      row[ck] = loc_from(x.at("move"), rp + ".move");
    }
  }
  return t;
}

Json report_to_json(const SynthesisReport& report) {
  Json rows = Json::array();
  std::size_t region = 0, states = 0, nodes = 0, edges = 0;
  bool all = true;
  for (const auto& [i, s] : report.rows) {
    rows.push_back({{"subgame", i},
                    {"region_size", s.region_size},
                    {"belief_states", s.belief_states},
                    {"arena_nodes", s.arena_nodes},
                    {"arena_edges", s.arena_edges},
                    {"realizable", s.realizable}});
    region += s.region_size;
    states += s.belief_states;
    nodes += s.arena_nodes;
    edges += s.arena_edges;
    all = all && s.realizable;
  }
  return {{"subgames", rows},
          {"totals",
           {{"region_size", region},
            {"free_cells", report.free_cells},
            {"belief_states", states},
            {"arena_nodes", nodes},
            {"arena_edges", edges},
            {"realizable", all}}}};
}

Json timings_to_json(const SynthesisReport& report) {
  Json rows = Json::array();
  double total = 0;
  for (const auto& [i, s] : report.rows) {
    rows.push_back({{"subgame", i}, {"wall_ms", s.wall_ms}});
    total += s.wall_ms;
  }
  return {{"subgames", rows}, {"total_wall_ms", total}};
}

Json state_to_json(const SurveillanceWorld& world, const SimulationState& s) {
  Json local = Json::array();
  for (const LocalBeliefState& l : s.local) local.push_back(set_to_json(l.belief));
  Json sensors = Json::array();
  for (Location l : s.sensors) sensors.push_back(l);
  return {{"step", s.step},
          {"target", s.target},
          {"sensors", sensors},
          {"local_beliefs", local},
          {"global_belief", set_to_json(s.global_belief)},
          {"triggers", world.trigger_ids(s.triggers)},
          {"predicates",
           {{"invisible", s.invisible},
            {"safe", s.safe},
            {"live", s.live},
            {"steps_since_live", s.steps_since_live}}}};
}

std::string trace_to_ndjson(const SurveillanceWorld& world, const Trace& trace) {
  std::string out;
  for (const SimulationState& s : trace.states) {
    out += state_to_json(world, s).dump();
    out += '\n';
  }
  return out;
}

Json verdict_to_json(const SurveillanceWorld& world, const Verdict& verdict) {
  Json j = {{"result", verdict.holds ? "holds" : "violated"},
            {"product_states", verdict.product_states}};
  if (verdict.holds) return j;
  Json stem = Json::array(), cycle = Json::array();
  for (const auto& s : verdict.stem) stem.push_back(state_to_json(world, s));
  for (const auto& s : verdict.cycle) cycle.push_back(state_to_json(world, s));
  j["property"] = verdict.property;
  j["witness"] = {{"stem", stem}, {"cycle", cycle}};
  return j;
}

}  // namespace vigil

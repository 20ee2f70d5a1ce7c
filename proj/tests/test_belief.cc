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

#include <deque>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "testing.h"
#include "vigil/belief.h"
#include "vigil/decompose.h"

namespace vigil {
namespace {

using testing::fixture;
using testing::fixture_desc;

std::vector<std::pair<LocationSet, TriggerMask>> pairs(
    const std::vector<TargetChoice>& choices) {
  std::vector<std::pair<LocationSet, TriggerMask>> out;
  for (const auto& c : choices) out.emplace_back(c.next_belief, c.next_triggers);
  return out;
}

WorldDesc with_alarm_on_19() {
  WorldDesc d = fixture_desc("fig3world");
  d.static_sensors.push_back({"a1", {19}});
  return d;
}

TEST_CASE("target choices in subgame 1") {
  SurveillanceWorld w = fixture("fig3world");
  Subgame sg = build_subgame(w, 0);
  for (TriggerMode mode : {TriggerMode::kLiteral, TriggerMode::kExact}) {
    auto choices = target_choices(sg, {20}, {14}, mode);
    REQUIRE(choices.size() == 1);
    CHECK(choices[0].next_belief == LocationSet{kOutside, 19});
    CHECK(choices[0].next_triggers == 0);
    CHECK(choices[0].condition == 3);
  }
}

TEST_CASE("an alarm on 19 splits the choice") {
  SurveillanceWorld w = SurveillanceWorld::Create(with_alarm_on_19());
  Subgame sg = build_subgame(w, 0);
  const TriggerMask a1 = w.trigger_mask({"a1"});
  using P = std::pair<LocationSet, TriggerMask>;
  const std::vector<P> expected{{{kOutside}, 0}, {{19}, a1}};
  CHECK(pairs(target_choices(sg, {20}, {14}, TriggerMode::kExact)) == expected);
  CHECK(pairs(target_choices(sg, {20}, {14}, TriggerMode::kLiteral)) == expected);
}

TEST_CASE("literal and exact differ on overlapping alarms") {
  // Cells 1 and 2 under alarm x, cell 2 also under y.
  WorldDesc d = testing::open_grid(4, 1, 0, 3, {VisibilityKind::kNone, 0});
  d.move_rules.target_stay = true;
  d.static_sensors = {{"x", {1, 2}}, {"y", {2}}};
  SurveillanceWorld w = SurveillanceWorld::Create(d);
  GlobalGame g(w);
  const TriggerMask x = w.trigger_mask({"x"}), y = w.trigger_mask({"y"});
  using P = std::pair<LocationSet, TriggerMask>;
  // From {2, 3}: successors 1, 2, 3.
  CHECK(pairs(target_choices(g, {0}, {2, 3}, TriggerMode::kExact)) ==
        std::vector<P>{{{1}, x}, {{2}, x | y}, {{3}, 0}});
  CHECK(pairs(target_choices(g, {0}, {2, 3}, TriggerMode::kLiteral)) ==
        std::vector<P>{{{1, 2}, x}, {{2}, y}, {{2}, x | y}, {{3}, 0}});
}

TEST_CASE("full visibility forces singletons") {
  // Without stay the sensor's only move would be onto the seen target.
  WorldDesc d = testing::open_grid(3, 1, 0, 2);
  d.move_rules.sensor_stay = true;
  SurveillanceWorld w = SurveillanceWorld::Create(d);
  GlobalGame g(w);
  auto choices = target_choices(g, {0}, {2}, TriggerMode::kLiteral);
  REQUIRE(choices.size() == 1);
  CHECK(choices[0].next_belief == LocationSet{1});
  CHECK(choices[0].condition == 1);
}

TEST_CASE("sensor choices") {
  SurveillanceWorld w = fixture("fig3world");
  Subgame one = build_subgame(w, 0);
  TargetChoice c = target_choices(one, {20}, {14}, TriggerMode::kLiteral)[0];
  CHECK(sensor_choices(one, {20}, {14}, c) == std::vector<SensorLocs>{{15}, {21}});

  Subgame two = build_subgame(w, 1);
  auto choices = target_choices(two, {4}, {kOutside}, TriggerMode::kLiteral);
  const TargetChoice* seen9 = nullptr;
  for (const auto& ch : choices) {
    if (ch.next_belief == LocationSet{9}) seen9 = &ch;
  }
  REQUIRE(seen9 != nullptr);
  CHECK(seen9->condition == 1);
  CHECK(sensor_choices(two, {4}, {kOutside}, *seen9) == std::vector<SensorLocs>{{3}});

  WorldDesc d;
  d.grid = {3, 1, {}};
  d.move_rules.sensor_stay = true;
  d.sensors = {{"a", 0, {VisibilityKind::kLineOfSight, 0}},
               {"b", 2, {VisibilityKind::kLineOfSight, 0}}};
  d.target_init = 1;
  d.partition = {{0}, {1, 2}};
  SurveillanceWorld small = SurveillanceWorld::Create(d);
  Subgame pinned = build_subgame(small, 0);
  BeliefGraph g = reachable_belief_graph(pinned, TriggerMode::kLiteral);
  for (std::size_t v = 0; v < g.size(); ++v) {
    CHECK(g.sensors(v) == SensorLocs{0});
    for (std::size_t k = 0; k < g.edges(v).size(); ++k) {
      CHECK(sensor_choices(pinned, g.sensors(v), g.state(v).belief, g.choice(v, k)) ==
            std::vector<SensorLocs>{{0}});
    }
  }
}

TEST_CASE("full-visibility belief graph is the placement graph") {
  WorldDesc d = testing::open_grid(3, 1, 0, 2);
  d.move_rules.sensor_stay = true;
  SurveillanceWorld w = SurveillanceWorld::Create(d);
  GlobalGame game(w);
  // Oracle: plain BFS over (sensor, target) placements.
  std::set<std::pair<Location, Location>> placements;
  std::deque<std::pair<Location, Location>> queue{{0, 2}};
  placements.insert({0, 2});
  while (!queue.empty()) {
    auto [s, t] = queue.front();
    queue.pop_front();
    for (Location t2 : target_moves(w, {s}, t)) {
      for (const SensorLocs& s2 : succ_s(w, {s}, t2)) {
        if (placements.insert({s2[0], t2}).second) queue.push_back({s2[0], t2});
      }
    }
  }
  BeliefGraph g = reachable_belief_graph(game, TriggerMode::kLiteral);
  std::set<std::pair<Location, Location>> nodes;
  for (std::size_t v = 0; v < g.size(); ++v) {
    BeliefState st = g.state(v);
    REQUIRE(st.belief.size() == 1);
    nodes.insert({st.sensors[0], st.belief[0]});
  }
  CHECK(nodes == placements);
}

TEST_CASE("subgame-1 belief graph") {
  SurveillanceWorld w = fixture("fig3world");
  Subgame sg = build_subgame(w, 0);
  BeliefGraph g = reachable_belief_graph(sg, TriggerMode::kLiteral);
  CHECK(g.state(0) == BeliefState{{20}, {14}, 0});
  REQUIRE(g.edges(0).size() == 1);
  CHECK(g.choice(0, 0).next_belief == LocationSet{kOutside, 19});
  std::set<Location> responses;
  for (auto r : g.edges(0)[0].responses) responses.insert(g.sensors(r)[0]);
  CHECK(responses == std::set<Location>{15, 21});
  CHECK(g.find(BeliefState{{20}, {14}, 0}) == 0);
  CHECK(g.find(BeliefState{{20}, {13}, 0}) == -1);
}

TEST_CASE("the cap aborts construction") {
  SurveillanceWorld w = fixture("fig3world");
  GlobalGame game(w);
  CHECK_THROWS_AS(reachable_belief_graph(game, TriggerMode::kLiteral, 1),
                  BeliefExplosion);
  Subgame sg = build_subgame(w, 1);
  CHECK_THROWS_AS(reachable_belief_graph(sg, TriggerMode::kExact, 1),
                  BeliefExplosion);
}

TEST_CASE("initial state carries the target's own triggers") {
  WorldDesc d = fixture_desc("fig3world");
  d.static_sensors.push_back({"home", {14}});
  SurveillanceWorld w = SurveillanceWorld::Create(d);
  BeliefGraph g = reachable_belief_graph(GlobalGame(w), TriggerMode::kLiteral);
  CHECK(g.state(0) == BeliefState{{20, 4}, {14}, w.trigger_mask({"home"})});
}

TEST_CASE("graph dump format") {
  SurveillanceWorld w = fixture("fig3world");
  Subgame sg = build_subgame(w, 0);
  BeliefGraph g = reachable_belief_graph(sg, TriggerMode::kLiteral);
  std::vector<std::string> names;
  for (const auto& s : w.static_sensors()) names.push_back(s.id);
  std::string dump = g.dump(names);
  CHECK(dump.rfind("20|14| -> -1,19| -> 15|-1,19|\n20|14| -> -1,19| -> 21|-1,19|\n", 0) == 0);
  CHECK(dump == g.dump(names));
}

// Random worlds with alarms for the structural properties below.
std::vector<SurveillanceWorld> random_worlds(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<SurveillanceWorld> out;
  while (static_cast<int>(out.size()) < count) {
    WorldDesc d;
    d.grid = {5, 4, {}};
    for (Location l = 0; l < 20; ++l) {
      if (rng() % 7 == 0) d.grid.obstacles.push_back(l);
    }
    d.move_rules.target_stay = rng() % 2;
    d.move_rules.sensor_stay = true;
    LocationSet free;
    for (Location l = 0; l < 20; ++l) {
      if (!contains(d.grid.obstacles, l)) free.push_back(l);
    }
    std::shuffle(free.begin(), free.end(), rng);
    d.sensors = {{"s", free[0], {VisibilityKind::kLineOfSight, 1.0 + rng() % 3}}};
    d.target_init = free[1];
    for (int j = 0; j < 3; ++j) {
      LocationSet cells{free[2 + j], free[3 + j + static_cast<int>(rng() % 4)]};
      canonicalize(cells);
      d.static_sensors.push_back({"z" + std::to_string(j), cells});
    }
    try {
      out.push_back(SurveillanceWorld::Create(d));
    } catch (const Error&) {
    }
  }
  return out;
}

TEST_CASE("exact choices partition the successors") {
  int states = 0;
  for (const SurveillanceWorld& w : random_worlds(15, 3)) {
    GlobalGame game(w);
    BeliefGraph g = reachable_belief_graph(game, TriggerMode::kExact, 20000);
    for (std::size_t v = 0; v < g.size(); ++v) {
      BeliefState st = g.state(v);
      LocationSet seen;
      for (const auto& c : target_choices(game, st.sensors, st.belief, TriggerMode::kExact)) {
        for (Location l : c.next_belief) {
          REQUIRE(!contains(seen, l));
          seen.push_back(l);
        }
        if (c.condition != 1) {
          for (Location l : c.next_belief) REQUIRE(w.triggers_at(l) == c.next_triggers);
        }
      }
      canonicalize(seen);
      REQUIRE(seen == succ_t(game, st.sensors, st.belief));
      ++states;
    }
  }
  CHECK(states > 200);
}

TEST_CASE("literal beliefs contain exact beliefs") {
  for (const SurveillanceWorld& w : random_worlds(15, 4)) {
    GlobalGame game(w);
    BeliefGraph g = reachable_belief_graph(game, TriggerMode::kLiteral, 20000);
    for (std::size_t v = 0; v < g.size(); ++v) {
      BeliefState st = g.state(v);
      auto literal = target_choices(game, st.sensors, st.belief, TriggerMode::kLiteral);
      for (const auto& e : target_choices(game, st.sensors, st.belief, TriggerMode::kExact)) {
        bool covered = false;
        for (const auto& l : literal) {
          covered |= l.next_triggers == e.next_triggers &&
                     std::includes(l.next_belief.begin(), l.next_belief.end(),
                                   e.next_belief.begin(), e.next_belief.end());
        }
        REQUIRE(covered);
      }
    }
  }
}

TEST_CASE("global belief transitions always have a sensor response") {
  for (const SurveillanceWorld& w : random_worlds(10, 8)) {
    for (TriggerMode mode : {TriggerMode::kLiteral, TriggerMode::kExact}) {
      BeliefGraph g = reachable_belief_graph(GlobalGame(w), mode, 20000);
      for (std::size_t v = 0; v < g.size(); ++v) {
        for (const auto& e : g.edges(v)) REQUIRE(!e.responses.empty());
      }
    }
  }
  SurveillanceWorld f = fixture("fig3world");
  for (int i = 0; i < 2; ++i) {
    BeliefGraph g = reachable_belief_graph(build_subgame(f, i), TriggerMode::kLiteral);
    for (std::size_t v = 0; v < g.size(); ++v) {
      CHECK(!g.edges(v).empty());
      // A subgame may offer none when the only way out leaves the region;
      // that happens only after the sensor saw where the target went.
      for (const auto& e : g.edges(v)) {
        if (!e.responses.empty()) continue;
        REQUIRE(g.belief(e.belief).size() == 1);
      }
    }
  }
}

TEST_CASE("observe_choice picks the choice matching the true move") {
  SurveillanceWorld w = SurveillanceWorld::Create(with_alarm_on_19());
  Subgame sg = build_subgame(w, 0);
  TargetChoice c = observe_choice(sg, {20}, {14}, 19, TriggerMode::kExact);
  CHECK(c.next_belief == LocationSet{19});
  TargetChoice out = observe_choice(sg, {20}, {14}, kOutside, TriggerMode::kLiteral);
  CHECK(out.next_belief == LocationSet{kOutside});
  CHECK_THROWS_AS(observe_choice(sg, {20}, {14}, 15, TriggerMode::kLiteral), Error);
}

}  // namespace
}  // namespace vigil

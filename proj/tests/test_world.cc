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

#include <algorithm>
#include <random>
#include <optional>
#include <set>

#include "doctest.h"
#include "testing.h"
#include "vigil/world.h"

namespace vigil {
namespace {

using testing::fixture;
using testing::fixture_desc;

// Exact segment/closed-square test in doubled coordinates; cell centres sit
// on odd integers.
struct Frac {
  long long n, d;  // d > 0
};
bool less_eq(Frac a, Frac b) { return a.n * b.d <= b.n * a.d; }

bool segment_touches_cell(const GridMap& g, Location a, Location b, int cx,
                          int cy) {
  const long long ax = 2 * g.col(a) + 1, ay = 2 * g.row(a) + 1;
  const long long dx = 2 * (g.col(b) - g.col(a)), dy = 2 * (g.row(b) - g.row(a));
  Frac lo{0, 1}, hi{1, 1};
  auto clip = [&](long long p, long long d, long long min, long long max) {
    if (d == 0) return p >= min && p <= max;
    Frac t0{min - p, d}, t1{max - p, d};
    if (d < 0) {
      t0 = {p - min, -d};
      t1 = {p - max, -d};
      std::swap(t0, t1);
    }
    if (less_eq(lo, t0)) lo = t0;
    if (less_eq(t1, hi)) hi = t1;
    return less_eq(lo, hi);
  };
  return clip(ax, dx, 2 * cx, 2 * cx + 2) && clip(ay, dy, 2 * cy, 2 * cy + 2);
}

bool oracle_visible(const GridMap& g, double range, Location a, Location b) {
  if (a == b) return true;
  const double dr = g.row(a) - g.row(b), dc = g.col(a) - g.col(b);
  if (dr * dr + dc * dc > range * range + 1e-9) return false;
  for (Location o : g.obstacles) {
    if (segment_touches_cell(g, a, b, g.col(o), g.row(o))) return false;
  }
  return true;
}

TEST_CASE("parse_world accepts the figure-3 world") {
  SurveillanceWorld w = fixture("fig3world");
  CHECK(w.sensor_count() == 2);
  CHECK(w.sensor_inits() == SensorLocs{20, 4});
  CHECK(w.target_init() == 14);
  CHECK(w.free_cells().size() == 22);
  CHECK(w.partition()[0].size() == 12);
  CHECK(w.partition()[1].size() == 10);
}

TEST_CASE("parse_world rejects a sensor on an obstacle") {
  WorldDesc d = fixture_desc("fig3world");
  d.sensors[0].init = 12;
  try {
    SurveillanceWorld::Create(d);
    FAIL("expected InvalidWorld");
  } catch (const InvalidWorld& e) {
    CHECK(e.path() == "sensors[0].init");
  }
}

TEST_CASE("parse_world rejects overlapping regions") {
  WorldDesc d = fixture_desc("fig3world");
  d.partition[1].push_back(14);
  CHECK_THROWS_AS(SurveillanceWorld::Create(d), InvalidWorld);
}

TEST_CASE("parse_world rejects a free cell with no moves") {
  WorldDesc d = testing::open_grid(3, 3, 0, 1);
  d.grid.obstacles = {5, 7};  // cell 8 is cut off
  CHECK_THROWS_AS(SurveillanceWorld::Create(d), InvalidWorld);
}

TEST_CASE("schema errors name the field") {
  Json j = world_to_json(fixture_desc("fig3world"));
  j["sensors"][1]["init"] = "four";
  CHECK_THROWS_WITH_AS(world_desc_from_json(j), doctest::Contains("sensors[1].init"),
                       SchemaError);
  Json k = world_to_json(fixture_desc("fig3world"));
  k["bogus"] = 1;
  CHECK_THROWS_AS(world_desc_from_json(k), SchemaError);
  CHECK_THROWS_AS(parse_world("{not json"), SchemaError);
}

TEST_CASE("world documents round-trip") {
  for (const char* name : {"fig3world", "example1world", "selous20x20"}) {
    WorldDesc d = fixture_desc(name);
    SurveillanceWorld w = SurveillanceWorld::Create(d);
    std::string text = print_world(w.desc());
    SurveillanceWorld again = parse_world(text);
    CHECK(again.desc() == w.desc());
    CHECK(print_world(again.desc()) == text);
  }
}

TEST_CASE("neighbors") {
  SurveillanceWorld w = fixture("fig3world");
  CHECK(neighbors(w, 14, Role::kTarget) == LocationSet{9, 19});
  CHECK(neighbors(w, 20, Role::kSensor) == LocationSet{15, 21});

  WorldDesc d = testing::open_grid(4, 4, 0, 5);
  d.move_rules.sensor_stay = true;
  SurveillanceWorld s = SurveillanceWorld::Create(d);
  CHECK(contains(neighbors(s, 15, Role::kSensor), 15));
  CHECK(!contains(neighbors(s, 15, Role::kTarget), 15));

  d.move_rules.connectivity = Connectivity::kEight;
  SurveillanceWorld e = SurveillanceWorld::Create(d);
  CHECK(neighbors(e, 0, Role::kTarget) == LocationSet{1, 4, 5});
}

TEST_CASE("line of sight matches an exact segment oracle") {
  // Oracle values first, then the implementation.
  GridMap open{5, 5, {}};
  CHECK(oracle_visible(open, 2, 20, 10));
  GridMap blocked{5, 5, {11}};
  CHECK(!oracle_visible(blocked, 2, 10, 12));

  CHECK(visible_in(open, {VisibilityKind::kLineOfSight, 2}, 20, 10));
  CHECK(!visible_in(blocked, {VisibilityKind::kLineOfSight, 2}, 10, 12));
  CHECK(visible_in(blocked, {VisibilityKind::kLineOfSight, 0}, 7, 7));
  CHECK(!visible_in(open, {VisibilityKind::kNone, 5}, 7, 7));
  CHECK(visible_in(open, {VisibilityKind::kFull, 0}, 0, 24));

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    GridMap g{7, 6, {}};
    for (Location l = 0; l < g.cell_count(); ++l) {
      if (rng() % 5 == 0) g.obstacles.push_back(l);
    }
    const double range = 1.0 + static_cast<double>(rng() % 50) / 10.0;
    for (Location a = 0; a < g.cell_count(); ++a) {
      for (Location b = 0; b < g.cell_count(); ++b) {
        if (contains(g.obstacles, a) || contains(g.obstacles, b)) continue;
        REQUIRE(visible_in(g, {VisibilityKind::kLineOfSight, range}, a, b) ==
                oracle_visible(g, range, a, b));
      }
    }
  }
}

TEST_CASE("figure-3 visibility") {
  SurveillanceWorld w = fixture("fig3world");
  // Cells hidden from both sensors at the start.
  LocationSet hidden;
  for (Location l : w.free_cells()) {
    if (!joint_visible(w, w.sensor_inits(), l)) hidden.push_back(l);
  }
  CHECK(hidden == LocationSet{0, 1, 5, 6, 18, 19, 23, 24});
  CHECK(w.visible(1, 4, 14));
  CHECK(w.visible(1, 4, 9));
}

TEST_CASE("joint_visible") {
  SurveillanceWorld e = fixture("example1world");
  CHECK(!joint_visible(e, FullState{e.sensor_inits(), 18}));

  SurveillanceWorld one =
      SurveillanceWorld::Create(testing::open_grid(3, 3, 4, 0, {VisibilityKind::kLineOfSight, 0}));
  CHECK(joint_visible(one, FullState{{4}, 4}));
  CHECK(!joint_visible(one, FullState{{4}, 5}));

  WorldDesc blind = fixture_desc("fig3world");
  for (auto& s : blind.sensors) s.visibility = {VisibilityKind::kNone, 9};
  SurveillanceWorld b = SurveillanceWorld::Create(blind);
  for (Location t : b.free_cells()) {
    CHECK(!joint_visible(b, b.sensor_inits(), t));
    CHECK(!joint_visible(b, SensorLocs{t, t == 0 ? 1 : 0}, t));
  }
}

TEST_CASE("succ_t") {
  SurveillanceWorld w = fixture("fig3world");
  CHECK(succ_t(w, w.sensor_inits(), {14}) == LocationSet{9, 19});

  SurveillanceWorld e = fixture("example1world");
  CHECK(succ_t(e, e.sensor_inits(), {18}) == LocationSet{17, 19, 23});

  WorldDesc d = fixture_desc("fig3world");
  d.move_rules.collision = CollisionMode::kNone;
  SurveillanceWorld free = SurveillanceWorld::Create(d);
  CHECK(succ_t(free, free.sensor_inits(), free.free_cells()) == free.free_cells());
  // With blocking, cells the sensors see themselves standing on drop out.
  LocationSet all = succ_t(w, w.sensor_inits(), w.free_cells());
  CHECK(!contains(all, 20));
  CHECK(!contains(all, 4));
  CHECK(all.size() == w.free_cells().size() - 2);
}

TEST_CASE("succ_s") {
  SurveillanceWorld w = fixture("fig3world");
  // Target goes to 9, which sensor 2 sees from 4: only 3 remains for it.
  std::set<Location> first, second;
  for (const SensorLocs& s : succ_s(w, w.sensor_inits(), 9)) {
    first.insert(s[0]);
    second.insert(s[1]);
  }
  CHECK(first == std::set<Location>{15, 21});
  CHECK(second == std::set<Location>{3});
  // 19 is hidden from both: every combination survives.
  CHECK(succ_s(w, w.sensor_inits(), 19) ==
        std::vector<SensorLocs>{{15, 3}, {15, 9}, {21, 3}, {21, 9}});
  CHECK(succ_s(w, w.sensor_inits(), 19) == succ_s(w, w.sensor_inits(), std::nullopt));

  WorldDesc d = testing::open_grid(2, 1, 0, 1);
  d.move_rules.sensor_stay = true;
  d.move_rules.target_stay = true;
  SurveillanceWorld tiny = SurveillanceWorld::Create(d);
  CHECK(succ_s(tiny, {0}, std::nullopt) == std::vector<SensorLocs>{{0}, {1}});
  CHECK(succ_s(tiny, {0}, 1) == std::vector<SensorLocs>{{0}});
}

TEST_CASE("sensors never stack") {
  WorldDesc d;
  d.grid = {3, 1, {}};
  d.sensors = {{"a", 0, {VisibilityKind::kNone, 0}}, {"b", 2, {VisibilityKind::kNone, 0}}};
  d.target_init = 1;
  d.partition = {{0, 1}, {2}};
  d.move_rules.sensor_stay = true;
  SurveillanceWorld w = SurveillanceWorld::Create(d);
  for (const SensorLocs& s : succ_s(w, {0, 2}, std::nullopt)) {
    CHECK(s[0] != s[1]);
  }
}

TEST_CASE("invisible destinations do not change sensor moves") {
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    WorldDesc d;
    d.grid = {6, 5, {}};
    for (Location l = 0; l < 30; ++l) {
      if (rng() % 6 == 0) d.grid.obstacles.push_back(l);
    }
    d.move_rules.sensor_stay = rng() % 2;
    d.move_rules.target_stay = true;
    LocationSet free;
    for (Location l = 0; l < 30; ++l) {
      if (!contains(d.grid.obstacles, l)) free.push_back(l);
    }
    std::shuffle(free.begin(), free.end(), rng);
    d.sensors = {{"a", free[0], {VisibilityKind::kLineOfSight, 2.5}},
                 {"b", free[1], {VisibilityKind::kLineOfSight, 1.5}}};
    d.target_init = free[2];
    LocationSet r0(free.begin(), free.begin() + free.size() / 2);
    LocationSet r1(free.begin() + free.size() / 2, free.end());
    std::swap(r1.front(), r1[1]);  // keep sensor b's init (free[1]) out of r0
    r0.erase(std::find(r0.begin(), r0.end(), free[1]));
    r1.push_back(free[1]);
    d.partition = {r0, r1};
    canonicalize(d.partition[0]);
    canonicalize(d.partition[1]);
    std::optional<SurveillanceWorld> made;
    try {
      made = SurveillanceWorld::Create(d);
    } catch (const Error&) {
      continue;  // isolated cell or unusable split
    }
    const SurveillanceWorld& w = *made;
    for (int k = 0; k < 10; ++k) {
      SensorLocs s;
      std::set<Location> used;
      for (int i = 0; i < w.sensor_count(); ++i) {
        Location l;
        do {
          l = w.free_cells()[rng() % w.free_cells().size()];
        } while (used.count(l));
        used.insert(l);
        s.push_back(l);
      }
      LocationSet hidden;
      for (Location l : w.free_cells()) {
        if (!joint_visible(w, s, l)) hidden.push_back(l);
      }
      if (hidden.size() < 2) continue;
      auto base = succ_s(w, s, hidden[0]);
      for (Location l : hidden) {
        REQUIRE(succ_s(w, s, l) == base);
        ++checked;
      }
    }
  }
  CHECK(checked > 100);
}

}  // namespace
}  // namespace vigil

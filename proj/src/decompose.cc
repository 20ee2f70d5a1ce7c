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

#include "vigil/decompose.h"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>

namespace vigil {
namespace {

// Sensor moves of a raw description, without the validation done by
// SurveillanceWorld::Create.
LocationSet raw_sensor_moves(const WorldDesc& desc, const LocationSet& obstacles,
                             Location l) {
  const GridMap& g = desc.grid;
  const bool eight = desc.move_rules.connectivity == Connectivity::kEight;
  LocationSet out;
  for (int dr = -1; dr <= 1; ++dr) {
    for (int dc = -1; dc <= 1; ++dc) {
      if (dr == 0 && dc == 0) {
        if (desc.move_rules.sensor_stay) out.push_back(l);
        continue;
      }
      if (!eight && dr != 0 && dc != 0) continue;
      const int r = g.row(l) + dr, c = g.col(l) + dc;
      if (r < 0 || r >= g.height || c < 0 || c >= g.width) continue;
      const Location n = r * g.width + c;
      if (!contains(obstacles, n)) out.push_back(n);
    }
  }
  canonicalize(out);
  return out;
}

std::string cells_text(const LocationSet& cells) {
  std::string out;
  for (std::size_t k = 0; k < cells.size() && k < 8; ++k) {
    if (k) out += ",";
    out += std::to_string(cells[k]);
  }
  if (cells.size() > 8) out += ",...";
  return "{" + out + "}";
}

// Cells of the region a sensor starting at init can reach without leaving
// the region.
LocationSet reachable_in_region(const WorldDesc& desc,
                                const LocationSet& obstacles,
                                const LocationSet& region, Location init) {
  LocationSet seen{init};
  std::deque<Location> queue{init};
  while (!queue.empty()) {
    Location l = queue.front();
    queue.pop_front();
    for (Location n : raw_sensor_moves(desc, obstacles, l)) {
      if (!contains(region, n) || contains(seen, n)) continue;
      seen.insert(std::upper_bound(seen.begin(), seen.end(), n), n);
      queue.push_back(n);
    }
  }
  return seen;
}

// Whether the other sensors admit current and next positions that make the
// move of sensor i to sensor_next and of the target to target_next part of
// a joint transition.
class OtherSensors {
 public:
  OtherSensors(const SurveillanceWorld& world, int i) : world_(world), i_(i) {
    for (int j = 0; j < world.sensor_count(); ++j) {
      if (j != i) others_.push_back(j);
    }
    block_ = world.move_rules().collision == CollisionMode::kBlockVisibleTarget;
  }

  bool feasible(Location sensor, Location sensor_next, Location target_next) {
    if (others_.empty()) return true;
    const std::int64_t n = world_.grid().cell_count();
    const std::int64_t key = (sensor * n + sensor_next) * n + target_next;
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    now_ = {sensor};
    next_ = {sensor_next};
    bool ok = place(0, target_next);
    cache_.emplace(key, ok);
    return ok;
  }

 private:
  bool place(std::size_t k, Location target_next) {
    if (k == others_.size()) return true;
    const int j = others_[k];
    for (Location l : world_.free_cells()) {
      if (std::find(now_.begin(), now_.end(), l) != now_.end()) continue;
      if (block_ && l == target_next && world_.visible(j, l, l)) continue;
      for (Location m : world_.neighbors(l, Role::kSensor)) {
        if (std::find(next_.begin(), next_.end(), m) != next_.end()) continue;
        if (block_ && m == target_next && world_.visible(j, l, target_next))
          continue;
        now_.push_back(l);
        next_.push_back(m);
        bool ok = place(k + 1, target_next);
        now_.pop_back();
        next_.pop_back();
        if (ok) return true;
      }
    }
    return false;
  }

  const SurveillanceWorld& world_;
  int i_;
  bool block_;
  std::vector<int> others_;
  std::vector<Location> now_, next_;
  std::unordered_map<std::int64_t, bool> cache_;
};

// The constraints of the joint relation that involve only sensor i and the
// target.
bool own_move_ok(const SurveillanceWorld& world, int i, Location sensor,
                 Location target, Location sensor_next, Location target_next) {
  if (!contains(world.neighbors(target, Role::kTarget), target_next))
    return false;
  if (!contains(world.neighbors(sensor, Role::kSensor), sensor_next))
    return false;
  if (world.move_rules().collision == CollisionMode::kBlockVisibleTarget) {
    if (target_next == sensor && world.visible(i, sensor, sensor)) return false;
    if (sensor_next == target_next && world.visible(i, sensor, target_next))
      return false;
  }
  return true;
}

}  // namespace

std::vector<PartitionIssue> validate_partition(const WorldDesc& desc) {
  std::vector<PartitionIssue> issues;
  const int cells = desc.grid.cell_count();
  LocationSet obstacles = desc.grid.obstacles;
  canonicalize(obstacles);
  const Partition& p = desc.partition;
  if (p.size() != desc.sensors.size()) {
    issues.push_back({"size", "expected " + std::to_string(desc.sensors.size()) +
                                  " regions, got " + std::to_string(p.size())});
    return issues;
  }
  std::vector<int> owner(std::max(cells, 0), -1);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const std::string name = "region " + std::to_string(i);
    if (p[i].empty()) issues.push_back({"non-empty", name + " is empty"});
    for (Location l : p[i]) {
      if (l < 0 || l >= cells) {
        issues.push_back({"bounds", name + " has cell " + std::to_string(l) +
                                        " out of bounds"});
        continue;
      }
      if (contains(obstacles, l)) {
        issues.push_back({"obstacle", name + " contains obstacle " +
                                          std::to_string(l)});
      }
      if (owner[l] >= 0 && owner[l] != static_cast<int>(i)) {
        issues.push_back({"disjointness",
                          "cell " + std::to_string(l) + " is in regions " +
                              std::to_string(owner[l]) + " and " +
                              std::to_string(i)});
      }
      owner[l] = static_cast<int>(i);
    }
  }
  LocationSet uncovered;
  for (Location l = 0; l < cells; ++l) {
    if (owner[l] < 0 && !contains(obstacles, l)) uncovered.push_back(l);
  }
  if (!uncovered.empty()) {
    issues.push_back({"coverage", "free cells " + cells_text(uncovered) +
                                      " belong to no region"});
  }
  for (std::size_t i = 0; i < desc.sensors.size(); ++i) {
    Location init = desc.sensors[i].init;
    if (init < 0 || init >= cells || owner[init] != static_cast<int>(i)) {
      issues.push_back({"sensor-init", "sensor " + std::to_string(i) +
                                           " starts outside its region"});
    }
  }
  for (const StaticSensor& s : desc.static_sensors) {
    std::vector<int> regions;
    for (Location l : s.cells) {
      if (l >= 0 && l < cells) regions.push_back(owner[l]);
    }
    std::sort(regions.begin(), regions.end());
    regions.erase(std::unique(regions.begin(), regions.end()), regions.end());
    if (regions.size() != 1 || regions.front() < 0) {
      issues.push_back({"alarm-containment",
                        "static sensor '" + s.id +
                            "' must lie inside exactly one region"});
    }
  }
  if (!issues.empty()) return issues;
  for (std::size_t i = 0; i < p.size(); ++i) {
    LocationSet region = p[i];
    canonicalize(region);
    for (Location l :
         reachable_in_region(desc, obstacles, region, desc.sensors[i].init)) {
      bool can_move = false;
      for (Location n : raw_sensor_moves(desc, obstacles, l)) {
        can_move |= contains(region, n);
      }
      if (!can_move) {
        issues.push_back({"sensor-moves", "sensor " + std::to_string(i) +
                                              " is stuck at cell " +
                                              std::to_string(l)});
      }
    }
  }
  return issues;
}

void require_valid_partition(const WorldDesc& desc) {
  std::vector<PartitionIssue> issues = validate_partition(desc);
  if (!issues.empty()) {
    throw InvalidPartition(issues.front().clause, issues.front().message);
  }
}

std::vector<std::string> partition_warnings(const SurveillanceWorld& world) {
  std::vector<std::string> out;
  const WorldDesc& desc = world.desc();
  for (std::size_t i = 0; i < desc.partition.size(); ++i) {
    LocationSet reach = reachable_in_region(desc, desc.grid.obstacles,
                                            desc.partition[i],
                                            desc.sensors[i].init);
    if (reach.size() != desc.partition[i].size()) {
      out.push_back("region " + std::to_string(i) + ": sensor reaches only " +
                    std::to_string(reach.size()) + " of " +
                    std::to_string(desc.partition[i].size()) + " cells");
    }
  }
  return out;
}

bool in_projection(const SurveillanceWorld& world, int i, Location sensor,
                   Location target, Location sensor_next,
                   Location target_next) {
  if (!world.is_free(sensor) || !world.is_free(target) ||
      !world.is_free(sensor_next) || !world.is_free(target_next))
    return false;
  if (!own_move_ok(world, i, sensor, target, sensor_next, target_next))
    return false;
  OtherSensors others(world, i);
  return others.feasible(sensor, sensor_next, target_next);
}

std::vector<ProjectedTransition> project_transitions(
    const SurveillanceWorld& world, int i) {
  std::vector<ProjectedTransition> out;
  OtherSensors others(world, i);
  for (Location s : world.free_cells()) {
    for (Location t : world.free_cells()) {
      for (Location t2 : world.neighbors(t, Role::kTarget)) {
        for (Location s2 : world.neighbors(s, Role::kSensor)) {
          if (own_move_ok(world, i, s, t, s2, t2) &&
              others.feasible(s, s2, t2)) {
            out.push_back({s, t, s2, t2});
          }
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Subgame build_subgame(const SurveillanceWorld& world, int i) {
  if (i < 0 || i >= world.sensor_count()) {
    throw InvalidPartition("size", "no region " + std::to_string(i));
  }
  require_valid_partition(world.desc());
  Subgame g;
  g.world_ = &world;
  g.index_ = i;
  g.region_ = world.partition()[i];
  g.slot_.assign(world.grid().cell_count(), -1);
  for (std::size_t k = 0; k < g.region_.size(); ++k) g.slot_[g.region_[k]] = k;
  for (std::size_t j = 0; j < world.static_sensors().size(); ++j) {
    if (g.in_region(world.static_sensors()[j].cells.front())) {
      g.alarms_ |= TriggerMask{1} << j;
    }
  }
  g.sensor_init_ = world.sensors()[i].init;
  g.target_init_ = g.localize(world.target_init());

  const std::size_t slots = g.region_.size() + 1;
  g.table_.assign(g.region_.size(), std::vector<std::vector<Subgame::Successor>>(slots));
  OtherSensors others(world, i);
  for (std::size_t s = 0; s < g.region_.size(); ++s) {
    const Location sensor = g.region_[s];
    std::vector<std::map<Location, LocationSet>> found(slots);
    for (Location target : world.free_cells()) {
      const int t_slot = g.target_slot(g.localize(target));
      for (Location t2 : world.neighbors(target, Role::kTarget)) {
        // A move that only leaves the sensor exits from its region is still
        // a target move; it just has no local response.
        bool legal = false;
        LocationSet inside;
        for (Location s2 : world.neighbors(sensor, Role::kSensor)) {
          if (!own_move_ok(world, i, sensor, target, s2, t2)) continue;
          if (!others.feasible(sensor, s2, t2)) continue;
          legal = true;
          if (g.in_region(s2)) inside.push_back(s2);
        }
        if (!legal) continue;
        LocationSet& next = found[t_slot][g.localize(t2)];
        next.insert(next.end(), inside.begin(), inside.end());
      }
    }
    for (std::size_t t = 0; t < slots; ++t) {
      for (auto& [t2, next] : found[t]) {
        canonicalize(next);
        g.table_[s][t].push_back({t2, std::move(next)});
      }
    }
  }
  return g;
}

const std::vector<Subgame::Successor>& Subgame::successors(
    Location sensor, Location target) const {
  static const std::vector<Successor> kNone;
  if (!in_region(sensor) || (target != kOutside && !in_region(target)))
    return kNone;
  return table_[slot_[sensor]][target_slot(target)];
}

std::vector<std::pair<Location, Location>> Subgame::fan_out(
    Location sensor, Location target) const {
  std::vector<std::pair<Location, Location>> out;
  for (const Successor& s : successors(sensor, target)) {
    for (Location l : s.sensor) out.emplace_back(l, s.target);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t Subgame::transition_count() const {
  std::size_t total = 0;
  for (const auto& row : table_) {
    for (const auto& cell : row) {
      for (const Successor& s : cell) total += s.sensor.size();
    }
  }
  return total;
}

void Subgame::target_successors(const SensorLocs& sensors, Location t,
                                LocationSet& out) const {
  for (const Successor& s : successors(sensors[0], t)) out.push_back(s.target);
}

std::vector<SensorLocs> Subgame::sensor_successors(const SensorLocs& sensors,
                                                   Location t,
                                                   Location next) const {
  std::vector<SensorLocs> out;
  for (const Successor& s : successors(sensors[0], t)) {
    if (s.target != next) continue;
    for (Location l : s.sensor) out.push_back({l});
  }
  return out;
}

LocationSet global_interpretation(const Partition& partition, int i,
                                  const LocationSet& local_belief) {
  if (!contains(local_belief, kOutside)) return local_belief;
  LocationSet out(local_belief.begin() + 1, local_belief.end());
  for (std::size_t j = 0; j < partition.size(); ++j) {
    if (static_cast<int>(j) == i) continue;
    out.insert(out.end(), partition[j].begin(), partition[j].end());
  }
  canonicalize(out);
  return out;
}

LocationSet project_belief(const Partition& partition, int i,
                           const LocationSet& belief) {
  const LocationSet& region = partition[i];
  LocationSet inside = set_intersection(belief, region);
  if (inside.size() == belief.size()) return inside;
  inside.insert(inside.begin(), kOutside);
  return inside;
}

LocalBeliefState project_full_state(const Partition& partition, int i,
                                    TriggerMask region_alarms,
                                    const BeliefState& state) {
  const Location l = state.sensors.at(i);
  if (!contains(partition[i], l)) {
    throw ProjectionUndefined("sensor " + std::to_string(i) + " at cell " +
                              std::to_string(l) + " is outside its region");
  }
  return {l, project_belief(partition, i, state.belief),
          state.triggers & region_alarms};
}

LocationSet recombine_beliefs(const Partition& partition,
                              const std::vector<LocationSet>& local_beliefs) {
  if (local_beliefs.size() != partition.size()) {
    throw SchemaError("need one local belief per region");
  }
  LocationSet out = global_interpretation(partition, 0, local_beliefs[0]);
  for (std::size_t i = 1; i < local_beliefs.size(); ++i) {
    out = set_intersection(
        out, global_interpretation(partition, static_cast<int>(i),
                                   local_beliefs[i]));
  }
  if (out.empty()) {
    throw EmptyRecombination("local beliefs have no common cell");
  }
  return out;
}

}  // namespace vigil

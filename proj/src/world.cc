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

#include "vigil/world.h"

#include <cmath>
#include <cstdlib>
#include <set>

#include "vigil/decompose.h"

namespace vigil {
namespace {

std::string at(const std::string& field, std::size_t index) {
  return field + "[" + std::to_string(index) + "]";
}

}  // namespace

std::vector<Location> supercover_line(const GridMap& grid, Location a,
                                      Location b) {
  int x = grid.col(a), y = grid.row(a);
  const int dx = grid.col(b) - x, dy = grid.row(b) - y;
  const int nx = std::abs(dx), ny = std::abs(dy);
  const int sx = dx > 0 ? 1 : -1, sy = dy > 0 ? 1 : -1;
  std::vector<Location> cells{a};
  auto cell = [&](int cx, int cy) { return cy * grid.width + cx; };
  for (int ix = 0, iy = 0; ix < nx || iy < ny;) {
    // Compare the crossings of the next vertical and horizontal grid lines,
    // in integer arithmetic.
    const long long decision =
        static_cast<long long>(1 + 2 * ix) * ny -
        static_cast<long long>(1 + 2 * iy) * nx;
    if (decision == 0) {
      cells.push_back(cell(x + sx, y));
      cells.push_back(cell(x, y + sy));
      x += sx;
      y += sy;
      ++ix;
      ++iy;
    } else if (decision < 0) {
      x += sx;
      ++ix;
    } else {
      y += sy;
      ++iy;
    }
    cells.push_back(cell(x, y));
  }
  return cells;
}

bool visible_in(const GridMap& grid, const VisibilityConfig& config,
                Location from, Location to) {
  switch (config.kind) {
    case VisibilityKind::kNone:
      return false;
    case VisibilityKind::kFull:
      return true;
    case VisibilityKind::kLineOfSight:
      break;
  }
  if (from == to) return true;
  const double dr = grid.row(from) - grid.row(to);
  const double dc = grid.col(from) - grid.col(to);
  if (std::sqrt(dr * dr + dc * dc) > config.range + 1e-9) return false;
  for (Location l : supercover_line(grid, from, to)) {
    if (contains(grid.obstacles, l)) return false;
  }
  return true;
}

SurveillanceWorld SurveillanceWorld::Create(WorldDesc desc) {
  GridMap& grid = desc.grid;
  if (grid.width <= 0) throw InvalidWorld("grid.width", "must be positive");
  if (grid.height <= 0) throw InvalidWorld("grid.height", "must be positive");
  const int cells = grid.cell_count();
  auto in_bounds = [cells](Location l) { return l >= 0 && l < cells; };
  for (std::size_t k = 0; k < grid.obstacles.size(); ++k) {
    if (!in_bounds(grid.obstacles[k])) {
      throw InvalidWorld(at("obstacles", k), "cell out of bounds");
    }
  }
  canonicalize(grid.obstacles);
  if (cells - static_cast<int>(grid.obstacles.size()) < 2) {
    throw InvalidWorld("grid", "fewer than two free cells");
  }
  auto is_free = [&](Location l) {
    return in_bounds(l) && !contains(grid.obstacles, l);
  };

  if (desc.sensors.empty()) {
    throw InvalidWorld("sensors", "at least one mobile sensor is required");
  }
  std::set<std::string> ids;
  std::set<Location> occupied;
  for (std::size_t i = 0; i < desc.sensors.size(); ++i) {
    const MobileSensor& s = desc.sensors[i];
    if (s.id.empty() || !ids.insert(s.id).second) {
      throw InvalidWorld(at("sensors", i) + ".id", "empty or duplicate id");
    }
    if (!is_free(s.init)) {
      throw InvalidWorld(at("sensors", i) + ".init",
                         "cell " + std::to_string(s.init) + " is not free");
    }
    if (!occupied.insert(s.init).second) {
      throw InvalidWorld(at("sensors", i) + ".init",
                         "two sensors share a cell");
    }
    if (!(s.visibility.range >= 0.0)) {
      throw InvalidWorld(at("sensors", i) + ".visibility.range",
                         "must be non-negative");
    }
  }
  if (!is_free(desc.target_init)) {
    throw InvalidWorld("target.init", "cell " +
                                          std::to_string(desc.target_init) +
                                          " is not free");
  }
  if (occupied.count(desc.target_init)) {
    throw InvalidWorld("target.init", "target starts on a sensor");
  }

  if (desc.static_sensors.size() > kMaxStaticSensors) {
    throw InvalidWorld("static_sensors", "at most 64 static sensors");
  }
  ids.clear();
  for (std::size_t j = 0; j < desc.static_sensors.size(); ++j) {
    StaticSensor& s = desc.static_sensors[j];
    if (s.id.empty() || !ids.insert(s.id).second) {
      throw InvalidWorld(at("static_sensors", j) + ".id",
                         "empty or duplicate id");
    }
    if (s.cells.empty()) {
      throw InvalidWorld(at("static_sensors", j) + ".cells", "empty");
    }
    for (Location l : s.cells) {
      if (!is_free(l)) {
        throw InvalidWorld(at("static_sensors", j) + ".cells",
                           "cell " + std::to_string(l) + " is not free");
      }
    }
    canonicalize(s.cells);
  }

  if (desc.partition.empty() && desc.sensors.size() == 1) {
    LocationSet all;
    for (Location l = 0; l < cells; ++l) {
      if (is_free(l)) all.push_back(l);
    }
    desc.partition.push_back(std::move(all));
  }
  for (LocationSet& region : desc.partition) canonicalize(region);

  SurveillanceWorld world;
  world.desc_ = std::move(desc);
  world.build();

  for (Location l : world.free_cells_) {
    if (world.sensor_moves_[l].empty() || world.target_moves_[l].empty()) {
      throw InvalidWorld("move_rules",
                         "cell " + std::to_string(l) + " has no legal move");
    }
  }
  std::vector<PartitionIssue> issues = validate_partition(world.desc_);
  if (!issues.empty()) {
    throw InvalidWorld("partition",
                       issues.front().clause + ": " + issues.front().message);
  }
  for (std::size_t i = 0; i < world.desc_.partition.size(); ++i) {
    for (Location l : world.desc_.partition[i]) world.region_of_[l] = i;
  }
  return world;
}

void SurveillanceWorld::build() {
  const GridMap& g = desc_.grid;
  const int cells = g.cell_count();
  free_.assign(cells, 1);
  for (Location l : g.obstacles) free_[l] = 0;
  free_cells_.clear();
  for (Location l = 0; l < cells; ++l) {
    if (free_[l]) free_cells_.push_back(l);
  }
  region_of_.assign(cells, -1);

  sensor_moves_.assign(cells, {});
  target_moves_.assign(cells, {});
  const bool eight = desc_.move_rules.connectivity == Connectivity::kEight;
  for (Location l : free_cells_) {
    LocationSet adjacent;
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        if (dr == 0 && dc == 0) continue;
        if (!eight && dr != 0 && dc != 0) continue;
        const int r = g.row(l) + dr, c = g.col(l) + dc;
        if (r < 0 || r >= g.height || c < 0 || c >= g.width) continue;
        const Location n = r * g.width + c;
        if (free_[n]) adjacent.push_back(n);
      }
    }
    sensor_moves_[l] = adjacent;
    target_moves_[l] = adjacent;
    if (desc_.move_rules.sensor_stay) sensor_moves_[l].push_back(l);
    if (desc_.move_rules.target_stay) target_moves_[l].push_back(l);
    canonicalize(sensor_moves_[l]);
    canonicalize(target_moves_[l]);
  }

  trigger_at_.assign(cells, 0);
  for (std::size_t j = 0; j < desc_.static_sensors.size(); ++j) {
    for (Location l : desc_.static_sensors[j].cells) {
      trigger_at_[l] |= TriggerMask{1} << j;
    }
  }
  alarm_cells_.clear();
  for (Location l : free_cells_) {
    if (trigger_at_[l]) alarm_cells_.push_back(l);
  }

  vis_.clear();
  vis_table_.clear();
  std::vector<VisibilityConfig> configs;
  for (const MobileSensor& s : desc_.sensors) {
    std::size_t k = 0;
    while (k < configs.size() && !(configs[k] == s.visibility)) ++k;
    if (k == configs.size()) {
      configs.push_back(s.visibility);
      std::vector<std::uint8_t> table(static_cast<std::size_t>(cells) * cells,
                                      0);
      for (Location from : free_cells_) {
        for (Location to : free_cells_) {
          table[static_cast<std::size_t>(from) * cells + to] =
              visible_in(g, s.visibility, from, to);
        }
      }
      vis_.push_back(std::move(table));
    }
    vis_table_.push_back(static_cast<int>(k));
  }
}

SensorLocs SurveillanceWorld::sensor_inits() const {
  SensorLocs out;
  for (const MobileSensor& s : desc_.sensors) out.push_back(s.init);
  return out;
}

TriggerMask SurveillanceWorld::triggers_of(const LocationSet& cells) const {
  TriggerMask mask = 0;
  for (Location l : cells) {
    if (l != kOutside) mask |= trigger_at_[l];
  }
  return mask;
}

std::vector<std::string> SurveillanceWorld::trigger_ids(
    TriggerMask mask) const {
  std::vector<std::string> out;
  for (std::size_t j = 0; j < desc_.static_sensors.size(); ++j) {
    if (mask >> j & 1) out.push_back(desc_.static_sensors[j].id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

TriggerMask SurveillanceWorld::trigger_mask(
    const std::vector<std::string>& ids) const {
  TriggerMask mask = 0;
  for (const std::string& id : ids) {
    std::size_t j = 0;
    while (j < desc_.static_sensors.size() && desc_.static_sensors[j].id != id)
      ++j;
    if (j == desc_.static_sensors.size()) {
      throw SchemaError("unknown static sensor id '" + id + "'");
    }
    mask |= TriggerMask{1} << j;
  }
  return mask;
}

const LocationSet& neighbors(const SurveillanceWorld& world, Location loc,
                             Role role) {
  return world.neighbors(loc, role);
}

bool visible(const SurveillanceWorld& world, int sensor_index,
             Location sensor_loc, Location target_loc) {
  return world.visible(sensor_index, sensor_loc, target_loc);
}

bool joint_visible(const SurveillanceWorld& world, const SensorLocs& sensors,
                   Location target_loc) {
  for (int i = 0; i < static_cast<int>(sensors.size()); ++i) {
    if (world.visible(i, sensors[i], target_loc)) return true;
  }
  return false;
}

bool joint_visible(const SurveillanceWorld& world, const FullState& state) {
  return joint_visible(world, state.sensor_locs, state.target_loc);
}

std::vector<SensorLocs> succ_s(const SurveillanceWorld& world,
                               const SensorLocs& sensors,
                               std::optional<Location> next_target) {
  const int n = static_cast<int>(sensors.size());
  const bool block =
      world.move_rules().collision == CollisionMode::kBlockVisibleTarget;
  std::vector<LocationSet> options(n);
  for (int i = 0; i < n; ++i) {
    for (Location l : world.neighbors(sensors[i], Role::kSensor)) {
      if (block && next_target && l == *next_target &&
          world.visible(i, sensors[i], *next_target)) {
        continue;
      }
      options[i].push_back(l);
    }
  }
  std::vector<SensorLocs> out;
  SensorLocs current(n);
  // Odometer over the per-sensor options; sensors never share a cell.
  auto recurse = [&](auto&& self, int i) -> void {
    if (i == n) {
      out.push_back(current);
      return;
    }
    for (Location l : options[i]) {
      bool taken = false;
      for (int k = 0; k < i; ++k) taken |= current[k] == l;
      if (taken) continue;
      current[i] = l;
      self(self, i + 1);
    }
  };
  recurse(recurse, 0);
  return out;
}

LocationSet target_moves(const SurveillanceWorld& world,
                         const SensorLocs& sensors, Location l) {
  const bool block =
      world.move_rules().collision == CollisionMode::kBlockVisibleTarget;
  LocationSet out;
  for (Location next : world.neighbors(l, Role::kTarget)) {
    bool onto_sensor = false;
    for (int i = 0; i < static_cast<int>(sensors.size()); ++i) {
      onto_sensor |= block && sensors[i] == next &&
                     world.visible(i, sensors[i], next);
    }
    if (onto_sensor) continue;
    if (succ_s(world, sensors, next).empty()) continue;
    out.push_back(next);
  }
  return out;
}

LocationSet succ_t(const SurveillanceWorld& world, const SensorLocs& sensors,
                   const LocationSet& beliefs) {
  LocationSet out;
  for (Location l : beliefs) {
    LocationSet next = target_moves(world, sensors, l);
    out.insert(out.end(), next.begin(), next.end());
  }
  canonicalize(out);
  return out;
}

}  // namespace vigil

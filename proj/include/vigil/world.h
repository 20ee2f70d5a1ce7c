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

#ifndef VIGIL_WORLD_H_
#define VIGIL_WORLD_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vigil/specs.h"
#include "vigil/types.h"

namespace vigil {

enum class Connectivity { kFour, kEight };
enum class CollisionMode { kBlockVisibleTarget, kNone };
enum class Role { kSensor, kTarget };

struct MoveRules {
  Connectivity connectivity = Connectivity::kFour;
  bool sensor_stay = false;
  bool target_stay = false;
  CollisionMode collision = CollisionMode::kBlockVisibleTarget;

  bool operator==(const MoveRules&) const = default;
};

enum class VisibilityKind { kLineOfSight, kFull, kNone };

struct VisibilityConfig {
  VisibilityKind kind = VisibilityKind::kLineOfSight;
  double range = 0.0;  // cells, Euclidean between cell centers

  bool operator==(const VisibilityConfig&) const = default;
};

struct GridMap {
  int width = 0;
  int height = 0;
  LocationSet obstacles;

  int cell_count() const { return width * height; }
  int row(Location l) const { return l / width; }
  int col(Location l) const { return l % width; }
  bool operator==(const GridMap&) const = default;
};

struct MobileSensor {
  std::string id;
  Location init = 0;
  VisibilityConfig visibility;

  bool operator==(const MobileSensor&) const = default;
};

struct StaticSensor {
  std::string id;
  LocationSet cells;

  bool operator==(const StaticSensor&) const = default;
};

// One region per mobile sensor; region i belongs to sensor i.
using Partition = std::vector<LocationSet>;

// Plain description of a world as read from a file, before validation.
struct WorldDesc {
  GridMap grid;
  MoveRules move_rules;
  std::vector<MobileSensor> sensors;
  Location target_init = 0;
  std::vector<StaticSensor> static_sensors;
  Partition partition;
  SurveillanceSpec objective = SurveillanceSpec::Liveness(1);

  bool operator==(const WorldDesc&) const = default;
};

struct FullState {
  SensorLocs sensor_locs;
  Location target_loc = 0;
};

// A validated surveillance game structure on a grid. Immutable once
// created; every query is a pure function of the world and its arguments.
class SurveillanceWorld {
 public:
  // Validates every invariant and throws InvalidWorld naming the offending
  // field.
  static SurveillanceWorld Create(WorldDesc desc);

  const WorldDesc& desc() const { return desc_; }
  const GridMap& grid() const { return desc_.grid; }
  const MoveRules& move_rules() const { return desc_.move_rules; }
  const std::vector<MobileSensor>& sensors() const { return desc_.sensors; }
  const std::vector<StaticSensor>& static_sensors() const {
    return desc_.static_sensors;
  }
  const Partition& partition() const { return desc_.partition; }
  const SurveillanceSpec& objective() const { return desc_.objective; }
  int sensor_count() const { return static_cast<int>(desc_.sensors.size()); }
  Location target_init() const { return desc_.target_init; }
  SensorLocs sensor_inits() const;

  // Free cells, ascending.
  const LocationSet& free_cells() const { return free_cells_; }
  bool is_free(Location l) const {
    return l >= 0 && l < grid().cell_count() && free_[l];
  }
  // Region index of a free cell.
  int region_of(Location l) const { return region_of_[l]; }

  const LocationSet& neighbors(Location l, Role role) const {
    return role == Role::kSensor ? sensor_moves_[l] : target_moves_[l];
  }
  bool visible(int sensor, Location from, Location to) const {
    return vis_[vis_table_[sensor]][static_cast<std::size_t>(from) *
                                        grid().cell_count() +
                                    to] != 0;
  }
  // Static sensors whose cells contain l.
  TriggerMask triggers_at(Location l) const { return trigger_at_[l]; }
  TriggerMask triggers_of(const LocationSet& cells) const;
  // Cells covered by at least one static sensor, ascending.
  const LocationSet& alarm_cells() const { return alarm_cells_; }
  std::vector<std::string> trigger_ids(TriggerMask mask) const;
  TriggerMask trigger_mask(const std::vector<std::string>& ids) const;

 private:
  SurveillanceWorld() = default;
  void build();

  WorldDesc desc_;
  std::vector<char> free_;
  LocationSet free_cells_;
  std::vector<int> region_of_;
  std::vector<LocationSet> sensor_moves_;
  std::vector<LocationSet> target_moves_;
  std::vector<TriggerMask> trigger_at_;
  LocationSet alarm_cells_;
  // Distinct visibility configurations share one table.
  std::vector<std::vector<std::uint8_t>> vis_;
  std::vector<int> vis_table_;
};

// Cells crossed by the segment between the centers of a and b (supercover:
// both cells are reported where the segment passes exactly through a
// corner). Includes both endpoints.
std::vector<Location> supercover_line(const GridMap& grid, Location a,
                                      Location b);

bool visible_in(const GridMap& grid, const VisibilityConfig& config,
                Location from, Location to);

const LocationSet& neighbors(const SurveillanceWorld& world, Location loc,
                             Role role);
bool visible(const SurveillanceWorld& world, int sensor_index,
             Location sensor_loc, Location target_loc);
bool joint_visible(const SurveillanceWorld& world, const SensorLocs& sensors,
                   Location target_loc);
bool joint_visible(const SurveillanceWorld& world, const FullState& state);

// Sensor successor tuples, ascending. next_target is the target's
// destination when it matters for collisions; nullopt (or a destination no
// sensor can see) yields the same set.
std::vector<SensorLocs> succ_s(const SurveillanceWorld& world,
                               const SensorLocs& sensors,
                               std::optional<Location> next_target);

// Legal one-step destinations of a target at l: adjacent cells that are not
// a currently occupied, visible sensor cell and that leave the sensors at
// least one joint response.
LocationSet target_moves(const SurveillanceWorld& world,
                         const SensorLocs& sensors, Location l);

LocationSet succ_t(const SurveillanceWorld& world, const SensorLocs& sensors,
                   const LocationSet& beliefs);

}  // namespace vigil

#endif  // VIGIL_WORLD_H_

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

#ifndef VIGIL_DECOMPOSE_H_
#define VIGIL_DECOMPOSE_H_

#include <string>
#include <utility>
#include <vector>

#include "vigil/belief.h"
#include "vigil/types.h"
#include "vigil/world.h"

namespace vigil {

struct PartitionIssue {
  // One of: size, non-empty, bounds, obstacle, disjointness, coverage,
  // sensor-init, alarm-containment, sensor-moves.
  std::string clause;
  std::string message;
};

// Checks every partition invariant of a world description. Empty result
// means the partition is valid.
std::vector<PartitionIssue> validate_partition(const WorldDesc& desc);
// Throws InvalidPartition for the first issue.
void require_valid_partition(const WorldDesc& desc);
// Regions the sensor cannot fully traverse with its own moves.
std::vector<std::string> partition_warnings(const SurveillanceWorld& world);

struct LocalBeliefState {
  Location sensor_loc = 0;
  LocationSet belief;  // may contain kOutside
  TriggerMask triggers = 0;

  bool operator==(const LocalBeliefState&) const = default;
};

// Sensor i's restricted game: the sensor stays inside its region and every
// target location outside the region collapses to kOutside.
class Subgame : public GameStructure {
 public:
  struct Successor {
    Location target;  // region cell or kOutside
    LocationSet sensor;
  };

  int index() const { return index_; }
  const LocationSet& region() const { return region_; }
  // Static sensors operating inside the region.
  TriggerMask alarms() const { return alarms_; }
  Location sensor_init() const { return sensor_init_; }
  Location target_init() const { return target_init_; }
  const SurveillanceWorld& world() const { return *world_; }

  bool in_region(Location l) const {
    return l != kOutside && slot_[l] >= 0;
  }
  // Maps a world cell to its subgame location (the cell, or kOutside).
  Location localize(Location l) const {
    return in_region(l) ? l : kOutside;
  }
  // Transitions from (sensor, target) as (sensor', target') pairs.
  std::vector<std::pair<Location, Location>> fan_out(Location sensor,
                                                     Location target) const;
  const std::vector<Successor>& successors(Location sensor,
                                           Location target) const;
  std::size_t transition_count() const;

  int sensor_count() const override { return 1; }
  SensorLocs initial_sensors() const override { return {sensor_init_}; }
  Location initial_target() const override { return target_init_; }
  int cell_count() const override { return world_->grid().cell_count(); }
  void target_successors(const SensorLocs& sensors, Location t,
                         LocationSet& out) const override;
  std::vector<SensorLocs> sensor_successors(const SensorLocs& sensors,
                                            Location t,
                                            Location next) const override;
  bool visible(const SensorLocs& sensors, Location t) const override {
    return t != kOutside && world_->visible(index_, sensors[0], t);
  }
  TriggerMask triggers_at(Location t) const override {
    return t == kOutside ? 0 : world_->triggers_at(t) & alarms_;
  }

 private:
  friend Subgame build_subgame(const SurveillanceWorld& world, int i);
  int target_slot(Location t) const {
    return t == kOutside ? static_cast<int>(region_.size()) : slot_[t];
  }

  const SurveillanceWorld* world_ = nullptr;
  int index_ = 0;
  LocationSet region_;
  std::vector<int> slot_;  // cell -> position in region_, or -1
  TriggerMask alarms_ = 0;
  Location sensor_init_ = 0;
  Location target_init_ = kOutside;
  // [sensor slot][target slot] -> successors sorted by target.
  std::vector<std::vector<std::vector<Successor>>> table_;
};

// Whether ((sensor, target), (sensor', target')) belongs to the projection
// of the world's transition relation onto sensor i and the target.
bool in_projection(const SurveillanceWorld& world, int i, Location sensor,
                   Location target, Location sensor_next, Location target_next);

struct ProjectedTransition {
  Location sensor, target, sensor_next, target_next;
  bool operator==(const ProjectedTransition&) const = default;
  auto operator<=>(const ProjectedTransition&) const = default;
};

// Every pair in the projection, ascending. Quadratic in the number of free
// cells; intended for small worlds.
std::vector<ProjectedTransition> project_transitions(
    const SurveillanceWorld& world, int i);

Subgame build_subgame(const SurveillanceWorld& world, int i);

// Global reading of a local belief: kOutside expands to every free cell
// outside region i.
LocationSet global_interpretation(const Partition& partition, int i,
                                  const LocationSet& local_belief);

LocationSet project_belief(const Partition& partition, int i,
                           const LocationSet& belief);

LocalBeliefState project_full_state(const Partition& partition, int i,
                                    TriggerMask region_alarms,
                                    const BeliefState& state);

// Intersection of the global interpretations; throws EmptyRecombination
// when the local beliefs contradict each other.
LocationSet recombine_beliefs(const Partition& partition,
                              const std::vector<LocationSet>& local_beliefs);

}  // namespace vigil

#endif  // VIGIL_DECOMPOSE_H_

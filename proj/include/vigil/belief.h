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

#ifndef VIGIL_BELIEF_H_
#define VIGIL_BELIEF_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "vigil/types.h"
#include "vigil/world.h"

namespace vigil {

// A surveillance game structure as seen by the belief construction: either
// the whole world or one subgame with its OUTSIDE location.
class GameStructure {
 public:
  virtual ~GameStructure() = default;

  virtual int sensor_count() const = 0;
  virtual SensorLocs initial_sensors() const = 0;
  virtual Location initial_target() const = 0;
  // Number of cells a sensor coordinate ranges over (for state packing).
  virtual int cell_count() const = 0;

  // Appends the legal destinations of a target at t (possibly unsorted,
  // possibly with duplicates).
  virtual void target_successors(const SensorLocs& sensors, Location t,
                                 LocationSet& out) const = 0;
  // Sensor responses to the target moving from t to next, ascending.
  virtual std::vector<SensorLocs> sensor_successors(const SensorLocs& sensors,
                                                    Location t,
                                                    Location next) const = 0;
  // Whether at least one sensor sees t from its current cell.
  virtual bool visible(const SensorLocs& sensors, Location t) const = 0;
  virtual TriggerMask triggers_at(Location t) const = 0;
};

// The full multi-sensor game of a world.
class GlobalGame : public GameStructure {
 public:
  explicit GlobalGame(const SurveillanceWorld& world) : world_(world) {}

  int sensor_count() const override { return world_.sensor_count(); }
  SensorLocs initial_sensors() const override { return world_.sensor_inits(); }
  Location initial_target() const override { return world_.target_init(); }
  int cell_count() const override { return world_.grid().cell_count(); }
  void target_successors(const SensorLocs& sensors, Location t,
                         LocationSet& out) const override;
  std::vector<SensorLocs> sensor_successors(const SensorLocs& sensors,
                                            Location t,
                                            Location next) const override;
  bool visible(const SensorLocs& sensors, Location t) const override {
    return joint_visible(world_, sensors, t);
  }
  TriggerMask triggers_at(Location t) const override {
    return world_.triggers_at(t);
  }

 private:
  const SurveillanceWorld& world_;
};

enum class TriggerMode {
  // Belief for triggered set J' is every invisible successor lying in all
  // regions of J'; one choice per non-empty J' that leaves it non-empty.
  kLiteral,
  // Belief for J' is every invisible successor whose trigger set is
  // exactly J'.
  kExact,
};

struct BeliefState {
  SensorLocs sensors;
  LocationSet belief;
  TriggerMask triggers = 0;

  bool operator==(const BeliefState&) const = default;
};

struct TargetChoice {
  LocationSet next_belief;
  TriggerMask next_triggers = 0;
  // Which observation justified the choice: 1 seen by a mobile sensor,
  // 2 unseen but triggering static sensors, 3 unseen and silent.
  int condition = 3;

  bool operator==(const TargetChoice& o) const {
    return next_belief == o.next_belief && next_triggers == o.next_triggers;
  }
  bool operator<(const TargetChoice& o) const {
    if (next_belief != o.next_belief) return next_belief < o.next_belief;
    return next_triggers < o.next_triggers;
  }
};

LocationSet succ_t(const GameStructure& game, const SensorLocs& sensors,
                   const LocationSet& beliefs);

std::vector<TargetChoice> target_choices(const GameStructure& game,
                                         const SensorLocs& sensors,
                                         const LocationSet& belief,
                                         TriggerMode mode);

std::vector<SensorLocs> sensor_choices(const GameStructure& game,
                                       const SensorLocs& sensors,
                                       const LocationSet& belief,
                                       const TargetChoice& choice);

// The choice realized when the target actually moves to true_next and
// triggers exactly the static sensors at that cell.
TargetChoice observe_choice(const GameStructure& game,
                            const SensorLocs& sensors,
                            const LocationSet& belief, Location true_next,
                            TriggerMode mode);

struct VecHash {
  std::size_t operator()(const std::vector<Location>& v) const;
};

// Reachable part of the belief-set game. Node 0 is the initial state; nodes
// are numbered in BFS order, choices and responses ascend.
class BeliefGraph {
 public:
  struct Node {
    std::uint64_t sensors;  // packed, see unpack_sensors
    std::uint32_t belief;   // index into beliefs()
    TriggerMask triggers;
  };
  struct Edge {
    std::uint32_t belief;
    TriggerMask triggers;
    int condition;
    std::vector<std::uint32_t> responses;
  };

  std::size_t size() const { return nodes_.size(); }
  const Node& node(std::size_t i) const { return nodes_[i]; }
  const std::vector<Edge>& edges(std::size_t i) const { return edges_[i]; }
  const LocationSet& belief(std::uint32_t id) const { return beliefs_[id]; }
  std::size_t belief_count() const { return beliefs_.size(); }
  std::size_t edge_count() const;
  SensorLocs sensors(std::size_t i) const {
    return unpack_sensors(nodes_[i].sensors);
  }
  BeliefState state(std::size_t i) const;
  TargetChoice choice(std::size_t i, std::size_t k) const;
  // Index of a state, or -1.
  long find(const BeliefState& state) const;

  std::uint64_t pack_sensors(const SensorLocs& s) const;
  SensorLocs unpack_sensors(std::uint64_t code) const;

  // One line per edge: "state -> choice -> response", states written as
  // loc|b1,b2,...|t1,t2,... with trigger ids resolved by trigger_name.
  std::string dump(const std::vector<std::string>& trigger_names) const;

 private:
  friend BeliefGraph reachable_belief_graph(const GameStructure&, TriggerMode,
                                            std::size_t);
  struct KeyHash {
    std::size_t operator()(const Node& n) const;
  };
  struct KeyEq {
    bool operator()(const Node& a, const Node& b) const {
      return a.sensors == b.sensors && a.belief == b.belief &&
             a.triggers == b.triggers;
    }
  };
  std::uint32_t intern(const LocationSet& belief);

  int sensor_count_ = 1;
  std::uint64_t base_ = 1;
  std::vector<LocationSet> beliefs_;
  std::unordered_map<LocationSet, std::uint32_t, VecHash> belief_ids_;
  std::vector<Node> nodes_;
  std::vector<std::vector<Edge>> edges_;
  std::unordered_map<Node, std::uint32_t, KeyHash, KeyEq> index_;
};

inline constexpr std::size_t kDefaultBeliefCap = 1000000;

BeliefGraph reachable_belief_graph(const GameStructure& game, TriggerMode mode,
                                   std::size_t cap = kDefaultBeliefCap);

std::string format_state(const SensorLocs& sensors, const LocationSet& belief,
                         const std::vector<std::string>& trigger_names);

std::string to_string(TriggerMode mode);
TriggerMode trigger_mode_from_string(const std::string& s);

}  // namespace vigil

#endif  // VIGIL_BELIEF_H_

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

#ifndef VIGIL_RUNTIME_H_
#define VIGIL_RUNTIME_H_

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "vigil/belief.h"
#include "vigil/decompose.h"
#include "vigil/solver.h"
#include "vigil/world.h"

namespace vigil {

enum class CompositionMode {
  // Each sensor tracks its own local belief through its subgame.
  kAutonomous,
  // Local strategies are fed projections of one pooled global belief.
  kProjection,
};

std::string to_string(CompositionMode mode);
CompositionMode composition_mode_from_string(const std::string& s);

struct SimulationState {
  int step = 0;
  Location target = 0;
  SensorLocs sensors;
  std::vector<LocalBeliefState> local;
  // Recombined local beliefs (the monitored belief).
  LocationSet global_belief;
  TriggerMask triggers = 0;  // static sensors the target currently trips
  // Belief from pooling every observation; empty when not tracked.
  LocationSet central_belief;
  int invisible = 0;  // hidden cells of global_belief, post-move
  bool safe = true;   // safety bound of the objective holds, if any
  bool live = true;   // liveness bound of the objective holds, if any
  int steps_since_live = 0;
};

class Composer {
 public:
  // tables[i] must be the strategy of subgame i. Unrealizable strategies are
  // refused unless allow_partial, in which case that sensor stays put.
  Composer(const SurveillanceWorld& world, std::vector<StrategyTable> tables,
           CompositionMode mode = CompositionMode::kAutonomous,
           bool allow_partial = false);

  const SurveillanceWorld& world() const { return *world_; }
  CompositionMode mode() const { return mode_; }
  TriggerMode trigger_mode() const { return trigger_mode_; }
  const Subgame& subgame(int i) const { return subgames_[i]; }
  const StrategyTable& table(int i) const { return tables_[i]; }
  // True when some sensor idles because its subgame is unrealizable.
  bool partial() const;
  bool idle(int i) const { return idle_[i] != 0; }

  SimulationState initial() const;
  LocationSet legal_moves(const SimulationState& s) const;
  // Throws IllegalMove or StrategyDomainError.
  SimulationState step(const SimulationState& s, Location to,
                       bool track_central = true) const;

 private:
  void evaluate(SimulationState& s) const;

  const SurveillanceWorld* world_;
  std::vector<Subgame> subgames_;
  std::vector<StrategyTable> tables_;
  std::vector<char> idle_;
  CompositionMode mode_;
  TriggerMode trigger_mode_ = TriggerMode::kLiteral;
};

SimulationState compose_step(const Composer& composer,
                             const SimulationState& sim, Location target_move);

struct AdversaryPolicy {
  enum class Kind { kInteractive, kRandom, kGreedy };
  Kind kind = Kind::kRandom;
  std::uint64_t seed = 0;
};

std::string to_string(AdversaryPolicy::Kind kind);
AdversaryPolicy::Kind adversary_kind_from_string(const std::string& s);

// Random: uniform over legal moves (rng() modulo count). Greedy: the move
// leaving the most hidden cells in the monitored belief, lowest cell on
// ties. Interactive moves come from outside; asking here throws.
Location adversary_move(const Composer& composer, const SimulationState& sim,
                        AdversaryPolicy::Kind kind, std::mt19937_64& rng);

struct Trace {
  std::vector<SimulationState> states;
  // "steps", "cornered" (target has no move) or "script" (moves ran out).
  std::string stop;
  int max_steps_since_live = 0;
};

// `script` supplies the interactive moves.
Trace simulate(const Composer& composer, const AdversaryPolicy& policy,
               int steps, const std::vector<Location>& script = {});

struct Verdict {
  bool holds = true;
  std::string property;  // "safety" or "liveness" when violated
  std::vector<SimulationState> stem;
  std::vector<SimulationState> cycle;  // empty if the play ends
  std::size_t product_states = 0;
};

// Explores every target behaviour against the composed sensors.
Verdict verify_closed_loop(const Composer& composer,
                           std::size_t cap = kDefaultBeliefCap);

}  // namespace vigil

#endif  // VIGIL_RUNTIME_H_

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

#ifndef VIGIL_SOLVER_H_
#define VIGIL_SOLVER_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "vigil/belief.h"
#include "vigil/decompose.h"
#include "vigil/specs.h"
#include "vigil/world.h"

namespace vigil {

enum class Owner : std::uint8_t { kProtagonist = 0, kAntagonist = 1 };

inline Owner opponent(Owner o) {
  return o == Owner::kProtagonist ? Owner::kAntagonist : Owner::kProtagonist;
}

// Owner-labeled graph with priorities. Protagonist wins a play iff the
// largest priority seen infinitely often is even.
class Arena {
 public:
  Arena() = default;
  // successors[v] lists v's edges; they are sorted and deduplicated.
  Arena(std::vector<Owner> owner, std::vector<std::uint8_t> priority,
        std::vector<std::vector<std::uint32_t>> successors,
        std::uint32_t initial = 0);

  std::size_t size() const { return owner_.size(); }
  std::size_t edge_count() const { return targets_.size(); }
  Owner owner(std::uint32_t v) const { return owner_[v]; }
  int priority(std::uint32_t v) const { return priority_[v]; }
  std::uint32_t initial() const { return initial_; }
  std::span<const std::uint32_t> successors(std::uint32_t v) const {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }
  std::span<const std::uint32_t> predecessors(std::uint32_t v) const {
    return {rtargets_.data() + roffsets_[v],
            rtargets_.data() + roffsets_[v + 1]};
  }

 private:
  std::vector<Owner> owner_;
  std::vector<std::uint8_t> priority_;
  std::vector<std::uint32_t> offsets_, targets_;
  std::vector<std::uint32_t> roffsets_, rtargets_;
  std::uint32_t initial_ = 0;
};

// Line format: "node <id> <protagonist|antagonist> <priority>; <succ> ..."
// plus an optional "initial <id>" line. Blank lines and '#' comments are
// ignored.
Arena parse_arena(const std::string& text);
std::string format_arena(const Arena& arena);

using NodeMask = std::vector<std::uint8_t>;

struct WinningRegions {
  // Winner of each node.
  std::vector<Owner> winner;
  // A positional winning move for every node owned by its winner, -1
  // elsewhere.
  std::vector<std::int64_t> witness;

  bool protagonist_wins(std::uint32_t v) const {
    return winner[v] == Owner::kProtagonist;
  }
  std::vector<std::uint32_t> region(Owner who) const;
};

// Least set from which `player` forces a visit to `targets`, within the
// nodes of `within` (all nodes when empty). When `strategy` is given, it
// receives for each of the player's attracted nodes the lowest-numbered
// successor that is strictly closer to the targets.
NodeMask attractor(const Arena& arena, Owner player, const NodeMask& targets,
                   const NodeMask& within = {},
                   std::vector<std::int64_t>* strategy = nullptr);

// Largest set from which the protagonist avoids `bad` forever.
NodeMask safety_region(const Arena& arena, const NodeMask& bad);

// Safety game solution with positional strategies for both players.
WinningRegions solve_safety(const Arena& arena, const NodeMask& bad);

// Recursive max-parity solving on the nodes of `within` (all nodes when
// empty), which must be a subarena.
WinningRegions zielonka(const Arena& arena, const NodeMask& within = {});

// Brute force over all positional strategies of both players. Throws
// OracleTooLarge beyond `max_profiles` strategy pairs.
WinningRegions oracle_solve(const Arena& arena,
                            std::uint64_t max_profiles = 1u << 20);

struct MemorylessStrategy {
  // move[v] for protagonist nodes won by the protagonist; -1 elsewhere.
  std::vector<std::int64_t> move;
  bool realizable = false;
};

// Restricted to nodes listed in `regions` as protagonist wins; lowest-id
// tie breaking is inherited from the solver.
MemorylessStrategy extract_strategy(const Arena& arena,
                                    const WinningRegions& regions);

// Belief-set game of a (sub)game as an arena. Nodes [0, states) are the
// belief states (antagonist), then one protagonist node per (state,
// choice), then at most two sinks.
struct BeliefArena {
  BeliefGraph graph;
  Arena arena;
  ObjectiveRule rule;
  std::vector<int> invisible;  // per belief state, post-move
  std::vector<std::pair<std::uint32_t, std::uint32_t>> intermediate;
  std::int64_t win_sink = -1;
  std::int64_t lose_sink = -1;

  std::uint32_t first_intermediate() const {
    return static_cast<std::uint32_t>(graph.size());
  }
  NodeMask bad_states() const;
};

BeliefArena build_arena(const GameStructure& game, const ObjectiveRule& rule,
                        TriggerMode mode, std::size_t cap = kDefaultBeliefCap);

// Safety restriction first when the rule has a safety part, then parity on
// the restricted arena when it has a liveness part.
WinningRegions solve_objective(const BeliefArena& arena);

using SpecVariant = std::variant<SurveillanceSpec, LocalSpec>;

// Stored positional strategy keyed by belief state and target choice, as
// written to strategy files.
struct StrategyTable {
  struct ChoiceKey {
    LocationSet belief;
    TriggerMask triggers = 0;
    auto operator<=>(const ChoiceKey&) const = default;
  };
  struct StateKey {
    SensorLocs sensors;
    LocationSet belief;
    TriggerMask triggers = 0;
    auto operator<=>(const StateKey&) const = default;
  };

  int subgame = -1;  // -1 for a strategy over the global game
  SpecVariant spec = SurveillanceSpec::Liveness(1);
  bool realizable = false;
  TriggerMode trigger_mode = TriggerMode::kLiteral;
  std::map<StateKey, std::map<ChoiceKey, SensorLocs>> moves;

  const SensorLocs* lookup(const StateKey& state,
                           const ChoiceKey& choice) const;
  bool operator==(const StrategyTable&) const = default;
};

StrategyTable to_table(const BeliefArena& arena,
                       const MemorylessStrategy& strategy);

struct SolveStats {
  std::size_t region_size = 0;
  std::size_t belief_states = 0;
  std::size_t arena_nodes = 0;
  std::size_t arena_edges = 0;
  bool realizable = false;
  double wall_ms = 0.0;
};

struct Solution {
  StrategyTable table;
  SolveStats stats;
};

Solution solve_subgame(const SurveillanceWorld& world, int i,
                       TriggerMode mode = TriggerMode::kLiteral,
                       std::size_t cap = kDefaultBeliefCap);

// Centralized solve over the global belief game; only practical for tiny
// worlds.
Solution solve_global(const SurveillanceWorld& world,
                      TriggerMode mode = TriggerMode::kLiteral,
                      std::size_t cap = kDefaultBeliefCap);

}  // namespace vigil

#endif  // VIGIL_SOLVER_H_

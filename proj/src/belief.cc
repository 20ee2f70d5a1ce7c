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

#include "vigil/belief.h"

#include <algorithm>
#include <deque>
#include <sstream>

namespace vigil {
namespace {

// Splits the target's successors into those some sensor sees and those
// nobody sees, using pre-move sensor positions.
void split_successors(const GameStructure& game, const SensorLocs& sensors,
                      const LocationSet& belief, LocationSet& seen,
                      LocationSet& unseen) {
  LocationSet next = succ_t(game, sensors, belief);
  for (Location l : next) {
    (game.visible(sensors, l) ? seen : unseen).push_back(l);
  }
}

LocationSet literal_belief(const GameStructure& game, const LocationSet& unseen,
                           TriggerMask required) {
  LocationSet out;
  for (Location l : unseen) {
    if ((game.triggers_at(l) & required) == required) out.push_back(l);
  }
  return out;
}

LocationSet exact_belief(const GameStructure& game, const LocationSet& unseen,
                         TriggerMask exact) {
  LocationSet out;
  for (Location l : unseen) {
    if (game.triggers_at(l) == exact) out.push_back(l);
  }
  return out;
}

std::string join(const std::vector<Location>& v, char sep) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) out += sep;
    out += std::to_string(v[k]);
  }
  return out;
}

std::vector<std::string> names_of(TriggerMask mask,
                                  const std::vector<std::string>& names) {
  std::vector<std::string> out;
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (mask >> j & 1) out.push_back(names[j]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string format_triple(const SensorLocs& sensors, const LocationSet& belief,
                          TriggerMask triggers,
                          const std::vector<std::string>& names) {
  std::string out = join(sensors, ',') + "|" + join(belief, ',') + "|";
  std::vector<std::string> ids = names_of(triggers, names);
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (k) out += ',';
    out += ids[k];
  }
  return out;
}

}  // namespace

void GlobalGame::target_successors(const SensorLocs& sensors, Location t,
                                   LocationSet& out) const {
  LocationSet next = target_moves(world_, sensors, t);
  out.insert(out.end(), next.begin(), next.end());
}

std::vector<SensorLocs> GlobalGame::sensor_successors(const SensorLocs& sensors,
                                                      Location,
                                                      Location next) const {
  return succ_s(world_, sensors, next);
}

LocationSet succ_t(const GameStructure& game, const SensorLocs& sensors,
                   const LocationSet& beliefs) {
  LocationSet out;
  for (Location l : beliefs) game.target_successors(sensors, l, out);
  canonicalize(out);
  return out;
}

std::vector<TargetChoice> target_choices(const GameStructure& game,
                                         const SensorLocs& sensors,
                                         const LocationSet& belief,
                                         TriggerMode mode) {
  LocationSet seen, unseen;
  split_successors(game, sensors, belief, seen, unseen);
  std::vector<TargetChoice> out;
  for (Location l : seen) {
    out.push_back({{l}, game.triggers_at(l), 1});
  }

  TriggerMask touched = 0;
  LocationSet silent;
  for (Location l : unseen) {
    TriggerMask j = game.triggers_at(l);
    touched |= j;
    if (j == 0) silent.push_back(l);
  }
  if (!silent.empty()) out.push_back({std::move(silent), 0, 3});

  if (mode == TriggerMode::kLiteral) {
    for (TriggerMask sub = touched; sub != 0; sub = (sub - 1) & touched) {
      LocationSet b = literal_belief(game, unseen, sub);
      if (!b.empty()) out.push_back({std::move(b), sub, 2});
    }
  } else {
    std::vector<TriggerMask> groups;
    for (Location l : unseen) {
      if (TriggerMask j = game.triggers_at(l)) groups.push_back(j);
    }
    std::sort(groups.begin(), groups.end());
    groups.erase(std::unique(groups.begin(), groups.end()), groups.end());
    for (TriggerMask j : groups) {
      out.push_back({exact_belief(game, unseen, j), j, 2});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<SensorLocs> sensor_choices(const GameStructure& game,
                                       const SensorLocs& sensors,
                                       const LocationSet& belief,
                                       const TargetChoice& choice) {
  // The sensors' options depend on the destination only through what they
  // can see, so one witnessing (source, destination) pair per destination
  // suffices; unseen destinations all share the same answer.
  std::vector<SensorLocs> out;
  bool unseen_done = false;
  LocationSet next;
  for (Location dest : choice.next_belief) {
    const bool seen = game.visible(sensors, dest);
    if (!seen && unseen_done) continue;
    for (Location src : belief) {
      next.clear();
      game.target_successors(sensors, src, next);
      if (std::find(next.begin(), next.end(), dest) == next.end()) continue;
      std::vector<SensorLocs> r = game.sensor_successors(sensors, src, dest);
      out.insert(out.end(), r.begin(), r.end());
      if (!seen) unseen_done = true;
      break;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

TargetChoice observe_choice(const GameStructure& game,
                            const SensorLocs& sensors,
                            const LocationSet& belief, Location true_next,
                            TriggerMode mode) {
  LocationSet seen, unseen;
  split_successors(game, sensors, belief, seen, unseen);
  TargetChoice out;
  if (contains(seen, true_next)) {
    out = {{true_next}, game.triggers_at(true_next), 1};
  } else if (!contains(unseen, true_next)) {
    throw Error("InconsistentObservation",
                "cell " + std::to_string(true_next) +
                    " is not a successor of the current belief");
  } else if (TriggerMask j = game.triggers_at(true_next)) {
    out = {mode == TriggerMode::kLiteral ? literal_belief(game, unseen, j)
                                         : exact_belief(game, unseen, j),
           j, 2};
  } else {
    LocationSet silent;
    for (Location l : unseen) {
      if (game.triggers_at(l) == 0) silent.push_back(l);
    }
    out = {std::move(silent), 0, 3};
  }
  return out;
}

std::size_t VecHash::operator()(const std::vector<Location>& v) const {
  std::size_t h = 1469598103934665603ull;
  for (Location l : v) {
    h ^= static_cast<std::size_t>(l + 2);
    h *= 1099511628211ull;
  }
  return h;
}

std::size_t BeliefGraph::KeyHash::operator()(const Node& n) const {
  std::size_t h = n.sensors * 0x9E3779B97F4A7C15ull;
  h ^= (static_cast<std::size_t>(n.belief) + 0x632BE59BD9B4E019ull) +
       (h << 6) + (h >> 2);
  h ^= (n.triggers * 0xC2B2AE3D27D4EB4Full) + (h << 6) + (h >> 2);
  return h;
}

std::uint32_t BeliefGraph::intern(const LocationSet& belief) {
  auto [it, inserted] =
      belief_ids_.try_emplace(belief, static_cast<std::uint32_t>(beliefs_.size()));
  if (inserted) beliefs_.push_back(belief);
  return it->second;
}

std::uint64_t BeliefGraph::pack_sensors(const SensorLocs& s) const {
  std::uint64_t code = 0;
  for (int i = sensor_count_ - 1; i >= 0; --i) {
    code = code * base_ + static_cast<std::uint64_t>(s[i]);
  }
  return code;
}

SensorLocs BeliefGraph::unpack_sensors(std::uint64_t code) const {
  SensorLocs s(sensor_count_);
  for (int i = 0; i < sensor_count_; ++i) {
    s[i] = static_cast<Location>(code % base_);
    code /= base_;
  }
  return s;
}

std::size_t BeliefGraph::edge_count() const {
  std::size_t total = 0;
  for (const auto& e : edges_) total += e.size();
  return total;
}

BeliefState BeliefGraph::state(std::size_t i) const {
  const Node& n = nodes_[i];
  return {unpack_sensors(n.sensors), beliefs_[n.belief], n.triggers};
}

TargetChoice BeliefGraph::choice(std::size_t i, std::size_t k) const {
  const Edge& e = edges_[i][k];
  return {beliefs_[e.belief], e.triggers, e.condition};
}

long BeliefGraph::find(const BeliefState& state) const {
  auto b = belief_ids_.find(state.belief);
  if (b == belief_ids_.end()) return -1;
  for (Location l : state.sensors) {
    if (l < 0 || static_cast<std::uint64_t>(l) >= base_) return -1;
  }
  if (static_cast<int>(state.sensors.size()) != sensor_count_) return -1;
  auto it = index_.find({pack_sensors(state.sensors), b->second, state.triggers});
  return it == index_.end() ? -1 : static_cast<long>(it->second);
}

std::string BeliefGraph::dump(const std::vector<std::string>& names) const {
  std::ostringstream out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const std::string from = format_triple(
        sensors(i), beliefs_[nodes_[i].belief], nodes_[i].triggers, names);
    for (const Edge& e : edges_[i]) {
      std::string choice = join(beliefs_[e.belief], ',') + "|";
      std::vector<std::string> ids = names_of(e.triggers, names);
      for (std::size_t k = 0; k < ids.size(); ++k) {
        if (k) choice += ',';
        choice += ids[k];
      }
      for (std::uint32_t r : e.responses) {
        out << from << " -> " << choice << " -> "
            << format_triple(sensors(r), beliefs_[nodes_[r].belief],
                             nodes_[r].triggers, names)
            << '\n';
      }
    }
  }
  return out.str();
}

BeliefGraph reachable_belief_graph(const GameStructure& game, TriggerMode mode,
                                   std::size_t cap) {
  if (cap < 1) throw SchemaError("belief cap must be positive");
  BeliefGraph g;
  g.sensor_count_ = game.sensor_count();
  g.base_ = static_cast<std::uint64_t>(game.cell_count());
  long double range = 1;
  for (int i = 0; i < g.sensor_count_; ++i) range *= g.base_;
  if (range > 9.0e18L) {
    throw SchemaError("too many sensors to pack a joint position");
  }

  auto add = [&](const SensorLocs& s, std::uint32_t belief,
                 TriggerMask triggers) -> std::uint32_t {
    BeliefGraph::Node key{g.pack_sensors(s), belief, triggers};
    auto [it, inserted] =
        g.index_.try_emplace(key, static_cast<std::uint32_t>(g.nodes_.size()));
    if (inserted) {
      if (g.nodes_.size() >= cap) {
        throw BeliefExplosion(cap, g.nodes_.size() - g.edges_.size());
      }
      g.nodes_.push_back(key);
    }
    return it->second;
  };

  const Location t0 = game.initial_target();
  add(game.initial_sensors(), g.intern({t0}), game.triggers_at(t0));
  for (std::size_t i = 0; i < g.nodes_.size(); ++i) {
    const SensorLocs sensors = g.sensors(i);
    const LocationSet belief = g.beliefs_[g.nodes_[i].belief];
    std::vector<BeliefGraph::Edge> edges;
    for (const TargetChoice& c : target_choices(game, sensors, belief, mode)) {
      BeliefGraph::Edge e{g.intern(c.next_belief), c.next_triggers,
                          c.condition, {}};
      for (const SensorLocs& r : sensor_choices(game, sensors, belief, c)) {
        e.responses.push_back(add(r, e.belief, e.triggers));
      }
      edges.push_back(std::move(e));
    }
    g.edges_.push_back(std::move(edges));
  }
  return g;
}

std::string format_state(const SensorLocs& sensors, const LocationSet& belief,
                         const std::vector<std::string>& trigger_ids) {
  std::string out = join(sensors, ',') + "|" + join(belief, ',') + "|";
  for (std::size_t k = 0; k < trigger_ids.size(); ++k) {
    if (k) out += ',';
    out += trigger_ids[k];
  }
  return out;
}

std::string to_string(TriggerMode mode) {
  return mode == TriggerMode::kLiteral ? "literal" : "exact";
}

TriggerMode trigger_mode_from_string(const std::string& s) {
  if (s == "literal") return TriggerMode::kLiteral;
  if (s == "exact") return TriggerMode::kExact;
  throw SchemaError("unknown trigger mode '" + s + "'");
}

}  // namespace vigil

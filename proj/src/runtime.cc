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

#include "vigil/runtime.h"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace vigil {

std::string to_string(CompositionMode mode) {
  return mode == CompositionMode::kAutonomous ? "autonomous" : "projection";
}

CompositionMode composition_mode_from_string(const std::string& s) {
  if (s == "autonomous") return CompositionMode::kAutonomous;
  if (s == "projection") return CompositionMode::kProjection;
  throw SchemaError("unknown composition mode '" + s + "'");
}

std::string to_string(AdversaryPolicy::Kind kind) {
  switch (kind) {
    case AdversaryPolicy::Kind::kInteractive:
      return "interactive";
    case AdversaryPolicy::Kind::kRandom:
      return "random";
    case AdversaryPolicy::Kind::kGreedy:
      return "greedy";
  }
  return "?";
}

AdversaryPolicy::Kind adversary_kind_from_string(const std::string& s) {
  if (s == "interactive") return AdversaryPolicy::Kind::kInteractive;
  if (s == "random") return AdversaryPolicy::Kind::kRandom;
  if (s == "greedy") return AdversaryPolicy::Kind::kGreedy;
  throw SchemaError("unknown adversary '" + s + "'");
}

Composer::Composer(const SurveillanceWorld& world,
                   std::vector<StrategyTable> tables, CompositionMode mode,
                   bool allow_partial)
    : world_(&world), tables_(std::move(tables)), mode_(mode) {
  const int n = world.sensor_count();
  if (static_cast<int>(tables_.size()) != n) {
    throw SchemaError("expected " + std::to_string(n) + " strategies, got " +
                      std::to_string(tables_.size()));
  }
  idle_.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    const StrategyTable& t = tables_[i];
    if (t.subgame != i) {
      throw SchemaError("strategy " + std::to_string(i) + " is for subgame " +
                        std::to_string(t.subgame));
    }
    if (t.trigger_mode != tables_[0].trigger_mode) {
      throw SchemaError("strategies disagree on the trigger mode");
    }
    if (!t.realizable) {
      if (!allow_partial) {
        throw Error("Unrealizable", "subgame " + std::to_string(i) +
                                        " has no winning strategy");
      }
      idle_[i] = 1;
    }
    subgames_.push_back(build_subgame(world, i));
  }
  trigger_mode_ = tables_[0].trigger_mode;
}

bool Composer::partial() const {
  return std::any_of(idle_.begin(), idle_.end(), [](char c) { return c; });
}

void Composer::evaluate(SimulationState& s) const {
  s.invisible = invisible_count(s.global_belief, [&](Location l) {
    return joint_visible(*world_, s.sensors, l);
  });
  const SurveillanceSpec& spec = world_->objective();
  switch (spec.form()) {
    case SurveillanceSpec::Form::kSafety:
      s.safe = s.invisible <= spec.b();
      s.live = true;
      break;
    case SurveillanceSpec::Form::kLiveness:
      s.safe = true;
      s.live = s.invisible <= spec.b();
      break;
    case SurveillanceSpec::Form::kSafetyLiveness:
      s.safe = s.invisible <= spec.a();
      s.live = s.invisible <= spec.b();
      break;
  }
}

SimulationState Composer::initial() const {
  SimulationState s;
  const Location t = world_->target_init();
  s.target = t;
  s.sensors = world_->sensor_inits();
  s.triggers = world_->triggers_at(t);
  s.central_belief = {t};
  std::vector<LocationSet> beliefs;
  for (const Subgame& sg : subgames_) {
    const Location local = sg.localize(t);
    s.local.push_back({sg.sensor_init(), {local}, sg.triggers_at(local)});
    beliefs.push_back({local});
  }
  s.global_belief = mode_ == CompositionMode::kAutonomous
                        ? recombine_beliefs(world_->partition(), beliefs)
                        : s.central_belief;
  evaluate(s);
  s.steps_since_live = 0;
  return s;
}

LocationSet Composer::legal_moves(const SimulationState& s) const {
  return target_moves(*world_, s.sensors, s.target);
}

namespace {

std::string describe(const SurveillanceWorld& world,
                     const LocalBeliefState& st) {
  return format_state({st.sensor_loc}, st.belief, world.trigger_ids(st.triggers));
}

}  // namespace

SimulationState Composer::step(const SimulationState& s, Location to,
                               bool track_central) const {
  LocationSet legal = legal_moves(s);
  if (!contains(legal, to)) throw IllegalMove(to, std::move(legal));
  const int n = world_->sensor_count();
  const bool autonomous = mode_ == CompositionMode::kAutonomous;

  SimulationState next;
  next.step = s.step + 1;
  next.target = to;
  next.triggers = world_->triggers_at(to);
  next.sensors = s.sensors;
  next.local.resize(n);

  TargetChoice central;
  if (!autonomous || track_central) {
    const LocationSet& prior = autonomous ? s.central_belief : s.global_belief;
    central = observe_choice(GlobalGame(*world_), s.sensors, prior, to,
                             trigger_mode_);
  }

  for (int i = 0; i < n; ++i) {
    const Subgame& sg = subgames_[i];
    LocalBeliefState cur;
    StrategyTable::ChoiceKey key;
    if (autonomous) {
      cur = s.local[i];
      TargetChoice ch = observe_choice(sg, {cur.sensor_loc}, cur.belief,
                                       sg.localize(to), trigger_mode_);
      key = {std::move(ch.next_belief), ch.next_triggers};
    } else {
      cur = project_full_state(world_->partition(), i, sg.alarms(),
                               {s.sensors, s.global_belief, s.triggers});
      key = {project_belief(world_->partition(), i, central.next_belief),
             central.next_triggers & sg.alarms()};
    }
    Location move = cur.sensor_loc;
    if (!idle_[i]) {
      const SensorLocs* m =
          tables_[i].lookup({{cur.sensor_loc}, cur.belief, cur.triggers}, key);
      if (m == nullptr) throw StrategyDomainError(i, describe(*world_, cur));
      move = m->front();
    }
    next.local[i] = {move, std::move(key.belief), key.triggers};
    next.sensors[i] = move;
  }

  if (autonomous) {
    std::vector<LocationSet> beliefs;
    for (const auto& l : next.local) beliefs.push_back(l.belief);
    next.global_belief = recombine_beliefs(world_->partition(), beliefs);
    if (track_central) next.central_belief = std::move(central.next_belief);
  } else {
    next.global_belief = central.next_belief;
    next.central_belief = std::move(central.next_belief);
  }
  evaluate(next);
  next.steps_since_live = next.live ? 0 : s.steps_since_live + 1;
  return next;
}

SimulationState compose_step(const Composer& composer,
                             const SimulationState& sim, Location target_move) {
  return composer.step(sim, target_move);
}

Location adversary_move(const Composer& composer, const SimulationState& sim,
                        AdversaryPolicy::Kind kind, std::mt19937_64& rng) {
  LocationSet legal = composer.legal_moves(sim);
  if (legal.empty()) throw Error("NoMove", "the target has no legal move");
  switch (kind) {
    case AdversaryPolicy::Kind::kInteractive:
      throw Error("NoMove", "interactive moves must be supplied");
    case AdversaryPolicy::Kind::kRandom:
      return legal[rng() % legal.size()];
    case AdversaryPolicy::Kind::kGreedy:
      break;
  }
  Location best = legal.front();
  int best_hidden = -1;
  for (Location l : legal) {
    const int hidden = composer.step(sim, l, false).invisible;
    if (hidden > best_hidden) {
      best = l;
      best_hidden = hidden;
    }
  }
  return best;
}

Trace simulate(const Composer& composer, const AdversaryPolicy& policy,
               int steps, const std::vector<Location>& script) {
  Trace trace;
  std::mt19937_64 rng(policy.seed);
  trace.states.push_back(composer.initial());
  trace.stop = "steps";
  for (int k = 0; k < steps; ++k) {
    const SimulationState& cur = trace.states.back();
    if (composer.legal_moves(cur).empty()) {
      trace.stop = "cornered";
      break;
    }
    Location to;
    if (policy.kind == AdversaryPolicy::Kind::kInteractive) {
      if (k >= static_cast<int>(script.size())) {
        trace.stop = "script";
        break;
      }
      to = script[k];
    } else {
      to = adversary_move(composer, cur, policy.kind, rng);
    }
    trace.states.push_back(composer.step(cur, to));
    trace.max_steps_since_live =
        std::max(trace.max_steps_since_live, trace.states.back().steps_since_live);
  }
  return trace;
}

namespace {

// Product key: everything the composed controllers and the target depend on.
std::vector<std::int32_t> product_key(const SimulationState& s,
                                      CompositionMode mode) {
  std::vector<std::int32_t> key{s.target};
  auto push_mask = [&](TriggerMask m) {
    key.push_back(static_cast<std::int32_t>(m & 0xffffffffu));
    key.push_back(static_cast<std::int32_t>(m >> 32));
  };
  if (mode == CompositionMode::kAutonomous) {
    for (const auto& l : s.local) {
      key.push_back(l.sensor_loc);
      key.push_back(static_cast<std::int32_t>(l.belief.size()));
      key.insert(key.end(), l.belief.begin(), l.belief.end());
      push_mask(l.triggers);
    }
  } else {
    key.insert(key.end(), s.sensors.begin(), s.sensors.end());
    key.insert(key.end(), s.global_belief.begin(), s.global_belief.end());
    push_mask(s.triggers);
  }
  return key;
}

struct KeyHash {
  std::size_t operator()(const std::vector<std::int32_t>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (auto x : v) {
      h ^= static_cast<std::uint32_t>(x);
      h *= 1099511628211ull;
    }
    return h;
  }
};

// Iterative Tarjan over nodes with bad[v], edges restricted to bad nodes.
// Marks nodes lying on some cycle and returns component ids.
std::vector<std::int64_t> bad_cycles(
    const std::vector<std::vector<std::uint32_t>>& succ,
    const std::vector<char>& bad, std::vector<char>& cyclic) {
  const std::size_t n = succ.size();
  std::vector<std::int64_t> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<char> on_stack(n, 0);
  std::vector<std::uint32_t> stack;
  std::vector<std::pair<std::uint32_t, std::size_t>> call;
  std::int64_t counter = 0, comps = 0;
  cyclic.assign(n, 0);
  for (std::uint32_t root = 0; root < n; ++root) {
    if (!bad[root] || index[root] >= 0) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [v, e] = call.back();
      if (e < succ[v].size()) {
        const std::uint32_t u = succ[v][e++];
        if (!bad[u]) continue;
        if (index[u] < 0) {
          index[u] = low[u] = counter++;
          stack.push_back(u);
          on_stack[u] = 1;
          call.push_back({u, 0});
        } else if (on_stack[u]) {
          low[v] = std::min(low[v], index[u]);
        }
        continue;
      }
      const std::uint32_t done = v;
      call.pop_back();
      if (!call.empty()) {
        low[call.back().first] = std::min(low[call.back().first], low[done]);
      }
      if (low[done] != index[done]) continue;
      std::vector<std::uint32_t> members;
      std::uint32_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = 0;
        comp[w] = comps;
        members.push_back(w);
      } while (w != done);
      bool cycle = members.size() > 1;
      if (!cycle) {
        for (auto u : succ[done]) cycle |= u == done;
      }
      if (cycle) {
        for (auto m : members) cyclic[m] = 1;
      }
      ++comps;
    }
  }
  return comp;
}

}  // namespace

Verdict verify_closed_loop(const Composer& composer, std::size_t cap) {
  const CompositionMode mode = composer.mode();
  std::unordered_map<std::vector<std::int32_t>, std::uint32_t, KeyHash> ids;
  std::vector<std::vector<std::uint32_t>> succ;
  std::vector<std::int64_t> parent;
  std::vector<Location> target_of;
  std::vector<char> unsafe, unlive;
  std::deque<SimulationState> frontier;

  auto add = [&](SimulationState s, std::int64_t from) -> std::uint32_t {
    auto key = product_key(s, mode);
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    if (ids.size() >= cap) throw BeliefExplosion(cap, frontier.size());
    const auto id = static_cast<std::uint32_t>(ids.size());
    ids.emplace(std::move(key), id);
    succ.emplace_back();
    parent.push_back(from);
    target_of.push_back(s.target);
    unsafe.push_back(!s.safe);
    unlive.push_back(!s.live);
    frontier.push_back(std::move(s));
    return id;
  };

  SimulationState init = composer.initial();
  init.central_belief.clear();
  add(init, -1);
  for (std::uint32_t v = 0; !frontier.empty(); ++v) {
    SimulationState cur = std::move(frontier.front());
    frontier.pop_front();
    for (Location to : composer.legal_moves(cur)) {
      const std::uint32_t u = add(composer.step(cur, to, false), v);
      succ[v].push_back(u);  // add() may grow succ
    }
    std::sort(succ[v].begin(), succ[v].end());
    succ[v].erase(std::unique(succ[v].begin(), succ[v].end()), succ[v].end());
  }

  Verdict verdict;
  verdict.product_states = ids.size();

  // Replays a node path from the initial state.
  auto replay = [&](const std::vector<std::uint32_t>& path) {
    std::vector<SimulationState> out;
    SimulationState s = composer.initial();
    out.push_back(s);
    for (std::size_t k = 1; k < path.size(); ++k) {
      s = composer.step(s, target_of[path[k]]);
      out.push_back(s);
    }
    return out;
  };
  auto stem_to = [&](std::uint32_t v) {
    std::vector<std::uint32_t> path;
    for (std::int64_t x = v; x >= 0; x = parent[x]) {
      path.push_back(static_cast<std::uint32_t>(x));
    }
    std::reverse(path.begin(), path.end());
    return path;
  };
  auto finish = [&](std::vector<std::uint32_t> stem,
                    std::vector<std::uint32_t> cycle) {
    std::vector<std::uint32_t> all = stem;
    all.insert(all.end(), cycle.begin(), cycle.end());
    std::vector<SimulationState> states = replay(all);
    verdict.stem.assign(states.begin(), states.begin() + stem.size());
    verdict.cycle.assign(states.begin() + stem.size(), states.end());
  };

  // Nodes are numbered in BFS order, so the first hit has a shortest stem.
  for (std::uint32_t v = 0; v < unsafe.size(); ++v) {
    if (!unsafe[v]) continue;
    verdict.holds = false;
    verdict.property = "safety";
    // Continue along lowest successors until the play ends or loops.
    std::vector<std::uint32_t> path = stem_to(v);
    std::vector<std::int64_t> seen(succ.size(), -1);
    for (std::size_t k = 0; k < path.size(); ++k) seen[path[k]] = k;
    std::uint32_t x = v;
    while (!succ[x].empty()) {
      x = succ[x].front();
      if (seen[x] >= 0) break;
      seen[x] = static_cast<std::int64_t>(path.size());
      path.push_back(x);
    }
    if (succ[path.back()].empty()) {
      finish(path, {});
    } else {
      const auto loop = static_cast<std::size_t>(seen[x]);
      std::vector<std::uint32_t> stem(path.begin(), path.begin() + loop);
      std::vector<std::uint32_t> cycle(path.begin() + loop, path.end());
      finish(stem, cycle);
    }
    return verdict;
  }

  std::vector<char> cyclic;
  std::vector<std::int64_t> comp = bad_cycles(succ, unlive, cyclic);
  for (std::uint32_t v = 0; v < cyclic.size(); ++v) {
    if (!cyclic[v]) continue;
    verdict.holds = false;
    verdict.property = "liveness";
    // Shortest way back to v inside its component.
    std::unordered_map<std::uint32_t, std::uint32_t> from;
    std::deque<std::uint32_t> queue{v};
    bool closed = false;
    while (!queue.empty() && !closed) {
      std::uint32_t x = queue.front();
      queue.pop_front();
      for (auto u : succ[x]) {
        if (!unlive[u] || comp[u] != comp[v]) continue;
        if (u == v) {
          from[v] = x;
          closed = true;
          break;
        }
        if (from.emplace(u, x).second) queue.push_back(u);
      }
    }
    std::vector<std::uint32_t> cycle;
    for (std::uint32_t x = from[v]; x != v; x = from[x]) cycle.push_back(x);
    cycle.push_back(v);
    std::reverse(cycle.begin(), cycle.end());
    std::vector<std::uint32_t> stem = stem_to(v);
    stem.pop_back();
    finish(stem, cycle);
    return verdict;
  }
  return verdict;
}

}  // namespace vigil

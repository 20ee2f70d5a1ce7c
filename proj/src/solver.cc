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

#include "vigil/solver.h"

#include <algorithm>
#include <chrono>
#include <deque>
#include <sstream>

#include "vigil/types.h"

namespace vigil {

Arena::Arena(std::vector<Owner> owner, std::vector<std::uint8_t> priority,
             std::vector<std::vector<std::uint32_t>> successors,
             std::uint32_t initial)
    : owner_(std::move(owner)),
      priority_(std::move(priority)),
      initial_(initial) {
  const std::size_t n = owner_.size();
  if (priority_.size() != n || successors.size() != n) {
    throw SchemaError("arena: owner, priority and edge lists differ in size");
  }
  if (n > 0 && initial_ >= n) throw SchemaError("arena: initial out of range");
  offsets_.assign(n + 1, 0);
  std::vector<std::uint32_t> indeg(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) {
    auto& s = successors[v];
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    for (auto u : s) {
      if (u >= n) throw SchemaError("arena: edge to unknown node");
      ++indeg[u + 1];
    }
    offsets_[v + 1] = offsets_[v] + static_cast<std::uint32_t>(s.size());
  }
  targets_.reserve(offsets_[n]);
  for (auto& s : successors) targets_.insert(targets_.end(), s.begin(), s.end());
  roffsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) roffsets_[v + 1] = roffsets_[v] + indeg[v + 1];
  rtargets_.resize(targets_.size());
  std::vector<std::uint32_t> fill(roffsets_.begin(), roffsets_.end() - 1);
  for (std::uint32_t v = 0; v < n; ++v) {
    for (auto u : successors[v]) rtargets_[fill[u]++] = v;
  }
}

Arena parse_arena(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::map<std::uint32_t, std::pair<Owner, int>> heads;
  std::map<std::uint32_t, std::vector<std::uint32_t>> succ;
  std::uint32_t initial = 0;
  int lineno = 0;
  auto fail = [&](const std::string& why) {
    throw SchemaError("arena line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    if (word == "initial") {
      long v;
      if (!(ls >> v) || v < 0) fail("bad initial");
      initial = static_cast<std::uint32_t>(v);
      continue;
    }
    if (word != "node") fail("expected 'node' or 'initial'");
    long id;
    std::string owner;
    if (!(ls >> id >> owner) || id < 0) fail("bad node header");
    std::string rest;
    std::getline(ls, rest);
    auto semi = rest.find(';');
    if (semi == std::string::npos) fail("missing ';'");
    std::istringstream ps(rest.substr(0, semi));
    int pr;
    if (!(ps >> pr) || pr < 0 || pr > 255) fail("bad priority");
    Owner o;
    if (owner == "protagonist" || owner == "0") {
      o = Owner::kProtagonist;
    } else if (owner == "antagonist" || owner == "1") {
      o = Owner::kAntagonist;
    } else {
      fail("unknown owner '" + owner + "'");
    }
    auto v = static_cast<std::uint32_t>(id);
    if (heads.count(v)) fail("duplicate node");
    heads[v] = {o, pr};
    std::istringstream ss(rest.substr(semi + 1));
    long u;
    auto& out = succ[v];
    while (ss >> u) {
      if (u < 0) fail("bad successor");
      out.push_back(static_cast<std::uint32_t>(u));
    }
    if (!ss.eof()) fail("bad successor");
  }
  const std::size_t n = heads.size();
  if (n == 0) throw SchemaError("arena: no nodes");
  if (heads.rbegin()->first != n - 1) {
    throw SchemaError("arena: node ids must be 0.." + std::to_string(n - 1));
  }
  std::vector<Owner> owners(n);
  std::vector<std::uint8_t> prio(n);
  std::vector<std::vector<std::uint32_t>> edges(n);
  for (auto& [v, h] : heads) {
    owners[v] = h.first;
    prio[v] = static_cast<std::uint8_t>(h.second);
    edges[v] = std::move(succ[v]);
    if (edges[v].empty()) {
      throw SchemaError("arena: node " + std::to_string(v) + " has no successor");
    }
  }
  return Arena(std::move(owners), std::move(prio), std::move(edges), initial);
}

std::string format_arena(const Arena& arena) {
  std::ostringstream out;
  out << "initial " << arena.initial() << "\n";
  for (std::uint32_t v = 0; v < arena.size(); ++v) {
    out << "node " << v << ' '
        << (arena.owner(v) == Owner::kProtagonist ? "protagonist" : "antagonist")
        << ' ' << arena.priority(v) << ';';
    for (auto u : arena.successors(v)) out << ' ' << u;
    out << '\n';
  }
  return out.str();
}

std::vector<std::uint32_t> WinningRegions::region(Owner who) const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t v = 0; v < winner.size(); ++v) {
    if (winner[v] == who) out.push_back(v);
  }
  return out;
}

namespace {

bool in(const NodeMask& mask, std::uint32_t v) {
  return mask.empty() || mask[v];
}

}  // namespace

NodeMask attractor(const Arena& arena, Owner player, const NodeMask& targets,
                   const NodeMask& within, std::vector<std::int64_t>* strategy) {
  const std::size_t n = arena.size();
  NodeMask attr(n, 0);
  std::vector<std::uint32_t> rank(n, 0);
  std::vector<std::uint32_t> remaining(n, 0);
  std::deque<std::uint32_t> queue;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (!in(within, v)) continue;
    if (targets[v]) {
      attr[v] = 1;
      queue.push_back(v);
      continue;
    }
    if (arena.owner(v) != player) {
      std::uint32_t c = 0;
      for (auto u : arena.successors(v)) c += in(within, u);
      remaining[v] = c;
    }
  }
  while (!queue.empty()) {
    auto u = queue.front();
    queue.pop_front();
    for (auto v : arena.predecessors(u)) {
      if (!in(within, v) || attr[v]) continue;
      if (arena.owner(v) == player || --remaining[v] == 0) {
        attr[v] = 1;
        rank[v] = rank[u] + 1;
        queue.push_back(v);
      }
    }
  }
  if (strategy) {
    for (std::uint32_t v = 0; v < n; ++v) {
      if (!attr[v] || targets[v] || arena.owner(v) != player) continue;
      for (auto u : arena.successors(v)) {
        if (attr[u] && rank[u] < rank[v]) {
          (*strategy)[v] = u;
          break;
        }
      }
    }
  }
  return attr;
}

NodeMask safety_region(const Arena& arena, const NodeMask& bad) {
  NodeMask attr = attractor(arena, Owner::kAntagonist, bad);
  for (auto& x : attr) x = !x;
  return attr;
}

WinningRegions solve_safety(const Arena& arena, const NodeMask& bad) {
  const std::size_t n = arena.size();
  WinningRegions r;
  r.witness.assign(n, -1);
  NodeMask attr = attractor(arena, Owner::kAntagonist, bad, {}, &r.witness);
  r.winner.resize(n);
  for (std::uint32_t v = 0; v < n; ++v) {
    r.winner[v] = attr[v] ? Owner::kAntagonist : Owner::kProtagonist;
    if (attr[v] && bad[v] && arena.owner(v) == Owner::kAntagonist) {
      r.witness[v] = arena.successors(v).front();
    }
    if (!attr[v] && arena.owner(v) == Owner::kProtagonist) {
      for (auto u : arena.successors(v)) {
        if (!attr[u]) {
          r.witness[v] = u;
          break;
        }
      }
    }
  }
  return r;
}

namespace {

// Solves the subarena `mask`, writing winners and witnesses for its nodes.
void zielonka_rec(const Arena& arena, NodeMask mask,
                  std::vector<Owner>& winner,
                  std::vector<std::int64_t>& witness) {
  const std::size_t n = arena.size();
  for (;;) {
    int d = -1;
    for (std::uint32_t v = 0; v < n; ++v) {
      if (mask[v]) d = std::max(d, arena.priority(v));
    }
    if (d < 0) return;
    const Owner p = d % 2 == 0 ? Owner::kProtagonist : Owner::kAntagonist;
    NodeMask top(n, 0);
    for (std::uint32_t v = 0; v < n; ++v) {
      top[v] = mask[v] && arena.priority(v) == d;
    }
    std::vector<std::int64_t> attr_strategy(n, -1);
    NodeMask a = attractor(arena, p, top, mask, &attr_strategy);
    NodeMask rest(n, 0);
    bool rest_nonempty = false;
    for (std::uint32_t v = 0; v < n; ++v) {
      rest[v] = mask[v] && !a[v];
      rest_nonempty |= rest[v] != 0;
    }
    if (rest_nonempty) zielonka_rec(arena, rest, winner, witness);

    NodeMask opp(n, 0);
    bool opp_nonempty = false;
    for (std::uint32_t v = 0; v < n; ++v) {
      if (rest[v] && winner[v] != p) {
        opp[v] = 1;
        opp_nonempty = true;
      }
    }
    if (!opp_nonempty) {
      // p wins everything left; witnesses from the subgame stay valid.
      for (std::uint32_t v = 0; v < n; ++v) {
        if (!a[v]) continue;
        winner[v] = p;
        witness[v] = -1;
        if (arena.owner(v) != p) continue;
        if (top[v]) {
          for (auto u : arena.successors(v)) {
            if (mask[u]) {
              witness[v] = u;
              break;
            }
          }
        } else {
          witness[v] = attr_strategy[v];
        }
      }
      return;
    }
    const Owner q = opponent(p);
    std::vector<std::int64_t> opp_strategy(n, -1);
    NodeMask b = attractor(arena, q, opp, mask, &opp_strategy);
    for (std::uint32_t v = 0; v < n; ++v) {
      if (!b[v]) continue;
      winner[v] = q;
      if (!opp[v]) {
        witness[v] = arena.owner(v) == q ? opp_strategy[v] : -1;
      }
      mask[v] = 0;
    }
  }
}

}  // namespace

WinningRegions zielonka(const Arena& arena, const NodeMask& within) {
  const std::size_t n = arena.size();
  WinningRegions r;
  r.winner.assign(n, Owner::kAntagonist);
  r.witness.assign(n, -1);
  NodeMask mask = within.empty() ? NodeMask(n, 1) : within;
  zielonka_rec(arena, std::move(mask), r.winner, r.witness);
  return r;
}

WinningRegions oracle_solve(const Arena& arena, std::uint64_t max_profiles) {
  const std::size_t n = arena.size();
  // Mixed-radix counters over the choices of each player's nodes.
  std::vector<std::uint32_t> mine, theirs;
  long double profiles = 1;
  for (std::uint32_t v = 0; v < n; ++v) {
    (arena.owner(v) == Owner::kProtagonist ? mine : theirs).push_back(v);
    profiles *= static_cast<long double>(arena.successors(v).size());
  }
  if (profiles > static_cast<long double>(max_profiles)) {
    throw OracleTooLarge("oracle: " + std::to_string(static_cast<double>(profiles)) +
                         " strategy pairs exceed " + std::to_string(max_profiles));
  }
  std::vector<std::uint32_t> pick(n, 0);
  auto advance = [&](const std::vector<std::uint32_t>& nodes) {
    for (auto v : nodes) {
      if (++pick[v] < arena.successors(v).size()) return true;
      pick[v] = 0;
    }
    return false;
  };
  // Outcome of the lasso from v under the current profile.
  std::vector<int> seen(n);
  auto protagonist_wins = [&](std::uint32_t start) {
    std::fill(seen.begin(), seen.end(), -1);
    std::vector<std::uint32_t> path;
    std::uint32_t v = start;
    while (seen[v] < 0) {
      seen[v] = static_cast<int>(path.size());
      path.push_back(v);
      v = arena.successors(v)[pick[v]];
    }
    int top = -1;
    for (std::size_t k = seen[v]; k < path.size(); ++k) {
      top = std::max(top, arena.priority(path[k]));
    }
    return top % 2 == 0;
  };

  WinningRegions r;
  r.winner.assign(n, Owner::kAntagonist);
  r.witness.assign(n, -1);
  std::vector<std::uint8_t> won(n, 0);
  std::vector<std::uint8_t> beats_all(n);
  do {
    std::fill(beats_all.begin(), beats_all.end(), 1);
    do {
      for (std::uint32_t v = 0; v < n; ++v) {
        if (beats_all[v] && !protagonist_wins(v)) beats_all[v] = 0;
      }
    } while (advance(theirs));  // wraps back to all zeros
    for (std::uint32_t v = 0; v < n; ++v) {
      if (!beats_all[v] || won[v]) continue;
      won[v] = 1;
      if (arena.owner(v) == Owner::kProtagonist) {
        r.witness[v] = arena.successors(v)[pick[v]];
      }
    }
  } while (advance(mine));
  for (std::uint32_t v = 0; v < n; ++v) {
    if (won[v]) r.winner[v] = Owner::kProtagonist;
  }
  return r;
}

MemorylessStrategy extract_strategy(const Arena& arena,
                                    const WinningRegions& regions) {
  MemorylessStrategy s;
  s.move.assign(arena.size(), -1);
  for (std::uint32_t v = 0; v < arena.size(); ++v) {
    if (regions.protagonist_wins(v) && arena.owner(v) == Owner::kProtagonist) {
      s.move[v] = regions.witness[v];
    }
  }
  s.realizable = arena.size() > 0 && regions.protagonist_wins(arena.initial());
  return s;
}

NodeMask BeliefArena::bad_states() const {
  NodeMask bad(arena.size(), 0);
  for (std::size_t v = 0; v < invisible.size(); ++v) {
    bad[v] = rule.is_bad(invisible[v]);
  }
  if (lose_sink >= 0) bad[lose_sink] = 1;
  return bad;
}

BeliefArena build_arena(const GameStructure& game, const ObjectiveRule& rule,
                        TriggerMode mode, std::size_t cap) {
  BeliefArena out;
  out.rule = rule;
  out.graph = reachable_belief_graph(game, mode, cap);
  const BeliefGraph& g = out.graph;
  const auto states = static_cast<std::uint32_t>(g.size());

  std::vector<Owner> owner(states, Owner::kAntagonist);
  std::vector<std::uint8_t> prio(states, 0);
  std::vector<std::vector<std::uint32_t>> succ(states);
  out.invisible.resize(states);
  for (std::uint32_t v = 0; v < states; ++v) {
    const SensorLocs s = g.sensors(v);
    const LocationSet& b = g.belief(g.node(v).belief);
    const int inv = invisible_count(
        b, [&](Location l) { return game.visible(s, l); });
    out.invisible[v] = inv;
    prio[v] = static_cast<std::uint8_t>(rule.priority(b, inv));
  }
  bool need_win = false, need_lose = false;
  for (std::uint32_t v = 0; v < states; ++v) {
    const auto& edges = g.edges(v);
    for (std::uint32_t k = 0; k < edges.size(); ++k) {
      const auto id = static_cast<std::uint32_t>(owner.size());
      succ[v].push_back(id);
      owner.push_back(Owner::kProtagonist);
      prio.push_back(0);
      succ.emplace_back(edges[k].responses.begin(), edges[k].responses.end());
      if (edges[k].responses.empty()) need_lose = true;
      out.intermediate.emplace_back(v, k);
    }
    if (edges.empty()) need_win = true;
  }
  auto add_sink = [&](int priority) {
    const auto id = static_cast<std::uint32_t>(owner.size());
    owner.push_back(Owner::kAntagonist);
    prio.push_back(static_cast<std::uint8_t>(priority));
    succ.push_back({id});
    return static_cast<std::int64_t>(id);
  };
  // A target with nowhere to go ends the play in the sensors' favour.
  if (need_win) out.win_sink = add_sink(2);
  if (need_lose) out.lose_sink = add_sink(1);
  for (std::uint32_t v = 0; v < states; ++v) {
    if (succ[v].empty()) succ[v].push_back(static_cast<std::uint32_t>(out.win_sink));
  }
  for (std::size_t k = 0; k < out.intermediate.size(); ++k) {
    auto& s = succ[states + k];
    if (s.empty()) s.push_back(static_cast<std::uint32_t>(out.lose_sink));
  }
  out.arena = Arena(std::move(owner), std::move(prio), std::move(succ), 0);
  return out;
}

WinningRegions solve_objective(const BeliefArena& ba) {
  const Arena& arena = ba.arena;
  const bool liveness = ba.rule.liveness_bound.has_value();
  const bool safety = ba.rule.safety_bound.has_value() || ba.lose_sink >= 0;
  if (!safety) return zielonka(arena);
  WinningRegions safe = solve_safety(arena, ba.bad_states());
  if (!liveness) return safe;
  NodeMask within(arena.size(), 0);
  bool any = false;
  for (std::uint32_t v = 0; v < arena.size(); ++v) {
    within[v] = safe.protagonist_wins(v);
    any |= within[v] != 0;
  }
  if (!any) return safe;
  WinningRegions live = zielonka(arena, within);
  for (std::uint32_t v = 0; v < arena.size(); ++v) {
    if (within[v]) {
      safe.winner[v] = live.winner[v];
      safe.witness[v] = live.witness[v];
    }
  }
  // Nodes lost inside the safe region: the antagonist's witness may need to
  // leave it, which is always fine for the antagonist.
  return safe;
}

const SensorLocs* StrategyTable::lookup(const StateKey& state,
                                        const ChoiceKey& choice) const {
  auto it = moves.find(state);
  if (it == moves.end()) return nullptr;
  auto jt = it->second.find(choice);
  return jt == it->second.end() ? nullptr : &jt->second;
}

StrategyTable to_table(const BeliefArena& ba,
                       const MemorylessStrategy& strategy) {
  StrategyTable t;
  t.realizable = strategy.realizable;
  const BeliefGraph& g = ba.graph;
  if (g.size() == 0) return t;
  const std::uint32_t base = ba.first_intermediate();
  std::vector<std::vector<std::uint32_t>> choices_of(g.size());
  for (std::size_t k = 0; k < ba.intermediate.size(); ++k) {
    choices_of[ba.intermediate[k].first].push_back(static_cast<std::uint32_t>(k));
  }
  // Only states the strategy can actually lead to; the rest of the winning
  // region is never queried and would bloat the files.
  std::vector<char> seen(g.size(), 0);
  std::vector<std::uint32_t> queue{0};
  seen[0] = 1;
  while (!queue.empty()) {
    const std::uint32_t v = queue.back();
    queue.pop_back();
    const BeliefState st = g.state(v);
    for (std::uint32_t k : choices_of[v]) {
      const std::int64_t m = strategy.move[base + k];
      if (m < 0 || static_cast<std::uint64_t>(m) >= g.size()) continue;
      const TargetChoice ch = g.choice(v, ba.intermediate[k].second);
      t.moves[{st.sensors, st.belief, st.triggers}]
             [{ch.next_belief, ch.next_triggers}] = g.sensors(m);
      if (!seen[m]) {
        seen[m] = 1;
        queue.push_back(static_cast<std::uint32_t>(m));
      }
    }
  }
  return t;
}

namespace {

Solution finish(const GameStructure& game, const ObjectiveRule& rule,
                TriggerMode mode, std::size_t cap, std::size_t region_size) {
  const auto t0 = std::chrono::steady_clock::now();
  BeliefArena ba = build_arena(game, rule, mode, cap);
  WinningRegions regions = solve_objective(ba);
  MemorylessStrategy strategy = extract_strategy(ba.arena, regions);
  Solution sol;
  sol.table = to_table(ba, strategy);
  sol.table.trigger_mode = mode;
  sol.stats.region_size = region_size;
  sol.stats.belief_states = ba.graph.size();
  sol.stats.arena_nodes = ba.arena.size();
  sol.stats.arena_edges = ba.arena.edge_count();
  sol.stats.realizable = strategy.realizable;
  sol.stats.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
  return sol;
}

}  // namespace

Solution solve_subgame(const SurveillanceWorld& world, int i, TriggerMode mode,
                       std::size_t cap) {
  const auto t0 = std::chrono::steady_clock::now();
  Subgame sg = build_subgame(world, i);
  const LocalSpec spec = local_spec(world.objective(), world.sensor_count(), i);
  Solution sol = finish(sg, priorities_for(spec), mode, cap, sg.region().size());
  sol.table.subgame = i;
  sol.table.spec = spec;
  sol.stats.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
  return sol;
}

Solution solve_global(const SurveillanceWorld& world, TriggerMode mode,
                      std::size_t cap) {
  GlobalGame game(world);
  Solution sol = finish(game, priorities_for(world.objective()), mode, cap,
                        world.free_cells().size());
  sol.table.subgame = -1;
  sol.table.spec = world.objective();
  return sol;
}

}  // namespace vigil

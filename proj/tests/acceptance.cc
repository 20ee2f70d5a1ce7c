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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// fails. Fixture directory comes from the command line or the build.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <iomanip>
#include <sstream>
#include <thread>

#include "vigil/cli.h"
#include "vigil/decompose.h"
#include "vigil/io.h"
#include "vigil/runtime.h"
#include "vigil/solver.h"
#include "vigil/specs.h"

namespace vigil {
namespace {

namespace fs = std::filesystem;

std::string g_fixtures = VIGIL_FIXTURE_DIR;

SurveillanceWorld load(const std::string& name) {
  return load_world(g_fixtures + "/" + name + ".json");
}

struct Outcome {
  bool ok = true;
  std::string detail;
};

// --- local bound ----------------------------------------------------------

Outcome local_spec_translation() {
  Outcome o;
  LocalSpec s = local_spec(SurveillanceSpec::Safety(5), 2, 0);
  if (s.form != LocalSpec::Form::kLocalSafety || s.c != 3) {
    return {false, "Safety(5), n=2 gave " + s.to_string()};
  }
  int checked = 0;
  for (int n = 2; n <= 6; ++n) {
    for (int b = 1; b <= 20; ++b) {
      // Smallest c with n * c > b, counted upwards.
      int c = 1;
      while (n * c <= b) ++c;
      LocalSpec got = local_spec(SurveillanceSpec::Safety(b), n, 0);
      if (got.c != c) {
        return {false, "n=" + std::to_string(n) + " b=" + std::to_string(b)};
      }
      ++checked;
    }
  }
  o.detail = "LocalSafety(3); " + std::to_string(checked) + " spot checks";
  return o;
}

// --- counterexample -------------------------------------------------------

Outcome counterexample() {
  SurveillanceWorld w = load("fig3world");
  const SensorLocs sensors = w.sensor_inits();
  const LocationSet b1{kOutside, 18, 19, 23}, b2{kOutside, 0, 1, 5};
  auto seen_by = [&](int i) {
    return [&, i](Location l) { return w.visible(i, sensors[i], l); };
  };
  const int h1 = invisible_count(b1, seen_by(0));
  const int h2 = invisible_count(b2, seen_by(1));
  LocationSet global = recombine_beliefs(w.partition(), {b1, b2});
  const int hidden = invisible_count(
      global, [&](Location l) { return joint_visible(w, sensors, l); });
  std::ostringstream d;
  d << "local hidden " << h1 << "," << h2 << "; global size " << global.size()
    << ", hidden " << hidden;
  const bool ok = b1.size() == 4 && b2.size() == 4 && h1 <= 4 && h2 <= 4 &&
                  global.size() == 6 && hidden == 6;
  return {ok, d.str()};
}

// --- subgame fan-outs -----------------------------------------------------

Outcome subgame_fan_outs() {
  SurveillanceWorld w = load("fig3world");
  using Pairs = std::vector<std::pair<Location, Location>>;
  const Location k = kOutside;
  Subgame one = build_subgame(w, 0), two = build_subgame(w, 1);
  Pairs want1{{21, 19}, {21, k}, {15, k}, {15, 19}};
  Pairs want2{{3, 9}, {9, k}, {3, k}, {3, 5}, {9, 5}};
  std::sort(want1.begin(), want1.end());
  std::sort(want2.begin(), want2.end());
  const bool init = one.sensor_init() == 20 && one.target_init() == 14 &&
                    two.sensor_init() == 4 && two.target_init() == k;
  const bool fan = one.fan_out(20, 14) == want1 && two.fan_out(4, k) == want2;
  return {init && fan, "initial (20,14) and (4,OUTSIDE); fan-outs 4 and 5"};
}

// --- recombination --------------------------------------------------------

Outcome recombination_identity() {
  std::mt19937_64 rng(20180521);
  int checked = 0, failures = 0;
  while (checked < 1000) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const int width = 2 + static_cast<int>(rng() % 9);
    const int height = 2 + static_cast<int>(rng() % 9);
    LocationSet cells;
    for (Location l = 0; l < width * height; ++l) {
      if (rng() % 6 != 0) cells.push_back(l);
    }
    if (static_cast<int>(cells.size()) < n) continue;
    std::shuffle(cells.begin(), cells.end(), rng);
    Partition p(n);
    for (int i = 0; i < n; ++i) p[i].push_back(cells[i]);
    for (std::size_t c = n; c < cells.size(); ++c) p[rng() % n].push_back(cells[c]);
    for (auto& r : p) canonicalize(r);
    LocationSet b(cells.begin(), cells.begin() + 1 + rng() % cells.size());
    canonicalize(b);
    std::vector<LocationSet> locals;
    for (int i = 0; i < n; ++i) locals.push_back(project_belief(p, i, b));
    LocationSet meet;
    for (int i = 0; i < n; ++i) {
      LocationSet g = global_interpretation(p, i, locals[i]);
      meet = i == 0 ? g : set_intersection(meet, g);
    }
    failures += meet != b || recombine_beliefs(p, locals) != b;
    ++checked;
  }
  return {failures == 0, std::to_string(checked) + " instances, " +
                             std::to_string(failures) + " failures"};
}

// --- solver vs oracle -----------------------------------------------------

bool strategy_wins_from(const Arena& arena, const WinningRegions& regions,
                        const MemorylessStrategy& s, std::uint32_t start) {
  std::vector<std::uint32_t> path;
  std::vector<int> pos(arena.size(), -1);
  std::function<bool(std::uint32_t)> walk = [&](std::uint32_t v) {
    if (!regions.protagonist_wins(v)) return false;
    if (pos[v] >= 0) {
      int top = 0;
      for (std::size_t j = pos[v]; j < path.size(); ++j) {
        top = std::max(top, arena.priority(path[j]));
      }
      return top % 2 == 0;
    }
    pos[v] = static_cast<int>(path.size());
    path.push_back(v);
    bool ok = true;
    if (arena.owner(v) == Owner::kProtagonist) {
      ok = s.move[v] >= 0 && walk(static_cast<std::uint32_t>(s.move[v]));
    } else {
      for (auto u : arena.successors(v)) ok = ok && walk(u);
    }
    path.pop_back();
    pos[v] = -1;
    return ok;
  };
  return walk(start);
}

Outcome solver_vs_oracle() {
  std::mt19937_64 rng(4242);
  int arenas = 0, mismatches = 0, unrolled = 0;
  for (; arenas < 250; ++arenas) {
    const std::size_t n = 1 + rng() % 8;
    std::vector<Owner> owner(n);
    std::vector<std::uint8_t> prio(n);
    std::vector<std::vector<std::uint32_t>> succ(n);
    for (std::size_t v = 0; v < n; ++v) {
      owner[v] = rng() % 2 ? Owner::kProtagonist : Owner::kAntagonist;
      prio[v] = static_cast<std::uint8_t>(rng() % 3);
      const std::size_t out = 1 + rng() % 3;
      for (std::size_t e = 0; e < out; ++e) succ[v].push_back(rng() % n);
    }
    Arena arena(owner, prio, succ, 0);
    WinningRegions got = zielonka(arena);
    if (got.winner != oracle_solve(arena).winner) {
      ++mismatches;
      continue;
    }
    MemorylessStrategy s = extract_strategy(arena, got);
    for (std::uint32_t v = 0; v < arena.size(); ++v) {
      if (!got.protagonist_wins(v)) continue;
      if (!strategy_wins_from(arena, got, s, v)) ++mismatches;
      ++unrolled;
    }
  }
  return {mismatches == 0, std::to_string(arenas) + " arenas, " +
                               std::to_string(unrolled) +
                               " strategies unrolled, " +
                               std::to_string(mismatches) + " mismatches"};
}

// --- closed loop ----------------------------------------------------------

std::vector<StrategyTable> solve_all(const SurveillanceWorld& w, bool& all) {
  std::vector<StrategyTable> tables(w.sensor_count());
  std::vector<std::thread> pool;
  for (int i = 0; i < w.sensor_count(); ++i) {
    pool.emplace_back([&, i] { tables[i] = solve_subgame(w, i).table; });
  }
  for (auto& t : pool) t.join();
  all = std::all_of(tables.begin(), tables.end(),
                    [](const StrategyTable& t) { return t.realizable; });
  return tables;
}

Outcome closed_loop_fig3() {
  std::ostringstream d;
  bool ok = true;
  WorldDesc desc = load("fig3world").desc();
  for (SurveillanceSpec spec :
       {SurveillanceSpec::Safety(2), SurveillanceSpec::Liveness(1)}) {
    desc.objective = spec;
    SurveillanceWorld w = SurveillanceWorld::Create(desc);
    bool all = false;
    std::vector<StrategyTable> tables = solve_all(w, all);
    if (!all) return {false, spec.to_string() + " has an unrealizable subgame"};
    Composer c(w, tables);
    Verdict v = verify_closed_loop(c);
    ok = ok && v.holds;
    int runs = 0, escaped = 0, unsafe = 0;
    for (std::uint64_t master : {1, 2, 3}) {
      for (std::uint64_t k = 0; k < 100; ++k) {
        Trace t = simulate(c, {AdversaryPolicy::Kind::kRandom, master * 1000 + k},
                           200);
        for (const auto& s : t.states) {
          escaped += !contains(s.global_belief, s.target);
          unsafe += !s.safe;
        }
        ++runs;
      }
    }
    ok = ok && escaped == 0 && unsafe == 0;
    d << spec.to_string() << ": " << (v.holds ? "holds" : "violated") << " ("
      << v.product_states << " states), " << runs << " runs; ";
  }
  return {ok, d.str() + "truth always in belief"};
}

Outcome selous() {
  SurveillanceWorld w = load("selous20x20");
  std::vector<std::size_t> sizes;
  for (const auto& r : w.partition()) sizes.push_back(r.size());
  if (sizes != std::vector<std::size_t>{142, 113, 145} ||
      w.static_sensors().size() != 4 ||
      w.objective() != SurveillanceSpec::Liveness(5)) {
    return {false, "fixture shape changed"};
  }
  std::vector<Solution> sols(3);
  std::vector<std::string> errors(3);
  std::vector<std::thread> pool;
  for (int i = 0; i < 3; ++i) {
    pool.emplace_back([&, i] {
      try {
        sols[i] = solve_subgame(w, i, TriggerMode::kLiteral, 1000000);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    });
  }
  for (auto& t : pool) t.join();
  std::ostringstream d;
  bool ok = true;
  std::vector<StrategyTable> tables;
  for (int i = 0; i < 3; ++i) {
    if (!errors[i].empty()) return {false, errors[i]};
    ok = ok && sols[i].stats.realizable;
    d << sols[i].stats.belief_states << (i < 2 ? "/" : " belief states; ");
    tables.push_back(sols[i].table);
  }
  if (!ok) return {false, d.str() + "unrealizable"};
  Verdict v = verify_closed_loop(Composer(w, tables));
  d << (v.holds ? "holds" : "violated") << " over " << v.product_states
    << " states";
  return {v.holds, d.str()};
}

// --- determinism ----------------------------------------------------------

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "vigil-acceptance";
  fs::remove_all(root);
  int files = 0;
  for (const char* name : {"fig3world", "example1world", "selous20x20"}) {
    const std::string world = g_fixtures + "/" + name + ".json";
    std::vector<fs::path> dirs;
    for (const char* run : {"a", "b"}) {
      dirs.push_back(root / name / run);
      const std::string out = dirs.back().string();
      const char* argv[] = {"vigil", "synthesize", world.c_str(), "-o",
                            out.c_str(), "--jobs", "3"};
      std::ostringstream sink_out, sink_err;
      std::istringstream in;
      const int code = run_cli(7, argv, sink_out, sink_err, in);
      if (code == kExitError) return {false, name + (": " + sink_err.str())};
    }
    for (const auto& entry : fs::directory_iterator(dirs[0])) {
      const std::string f = entry.path().filename().string();
      if (f == "timings.json") continue;
      if (read_file(entry.path().string()) !=
          read_file((dirs[1] / f).string())) {
        return {false, std::string(name) + "/" + f + " differs"};
      }
      ++files;
    }
  }
  fs::remove_all(root);
  return {true, std::to_string(files) + " files identical across two runs"};
}

}  // namespace
}  // namespace vigil

int main(int argc, char** argv) {
  using namespace vigil;
  if (argc > 1) g_fixtures = argv[1];
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"local-spec translation", local_spec_translation},
      {"recombined local beliefs can break the global bound", counterexample},
      {"subgame initial states and fan-outs", subgame_fan_outs},
      {"recombination identity", recombination_identity},
      {"solver matches brute force", solver_vs_oracle},
      {"composed strategies win on fig3world", closed_loop_fig3},
      {"selous20x20 synthesizes and verifies", selous},
      {"synthesis is deterministic", determinism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, e.what()};
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
    failed += !o.ok;
    std::cout << (o.ok ? "PASS " : "FAIL ") << c.name << " (" << o.detail
              << "; " << std::fixed << std::setprecision(2) << secs << " s)\n"
              << std::flush;
  }
  return failed == 0 ? 0 : 1;
}

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

#include "vigil/cli.h"

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <thread>

#include "CLI11.hpp"
#include "httplib.h"
#include "vigil/decompose.h"
#include "vigil/io.h"
#include "vigil/runtime.h"
#include "vigil/service.h"

namespace vigil {
namespace {

namespace fs = std::filesystem;

// --cap wins over VIGIL_CAP, which wins over the built-in default.
std::size_t effective_cap(std::optional<std::size_t> flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("VIGIL_CAP")) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used == std::string(env).size() && v > 0) return v;
    } catch (const std::exception&) {
    }
    throw SchemaError(std::string("VIGIL_CAP must be a positive integer, got '") +
                      env + "'");
  }
  return kDefaultBeliefCap;
}

std::vector<StrategyTable> load_strategies(const SurveillanceWorld& world,
                                           const std::string& dir) {
  std::vector<StrategyTable> tables;
  for (int i = 0; i < world.sensor_count(); ++i) {
    const fs::path path = fs::path(dir) / strategy_file_name(i);
    if (!fs::exists(path)) {
      throw Error("MissingStrategy", "no strategy file " + path.string());
    }
    tables.push_back(strategy_from_json(world, parse_document(read_file(path))));
  }
  return tables;
}

void emit(std::ostream& out, const std::string& path, const std::string& doc) {
  if (path.empty() || path == "-") {
    out << doc;
  } else {
    write_file(path, doc);
  }
}

int cmd_validate(const std::string& world_path, std::ostream& out,
                 std::ostream& err) {
  SurveillanceWorld world = load_world(world_path);
  std::vector<std::string> warnings = partition_warnings(world);
  for (const auto& w : warnings) err << "warning: " << w << "\n";
  Json regions = Json::array();
  for (const auto& r : world.partition()) regions.push_back(r.size());
  out << dump_document({{"valid", true},
                        {"free_cells", world.free_cells().size()},
                        {"region_sizes", regions},
                        {"objective", spec_to_json(world.objective())},
                        {"warnings", warnings}});
  return kExitOk;
}

int cmd_decompose(const std::string& world_path, const std::string& out_dir,
                  int belief_subgame, const std::string& trigger_mode,
                  std::optional<std::size_t> cap, std::ostream& out) {
  SurveillanceWorld world = load_world(world_path);
  if (belief_subgame >= 0) {
    // Debug listing of the reachable belief graph of one subgame.
    Subgame sg = build_subgame(world, belief_subgame);
    BeliefGraph g = reachable_belief_graph(
        sg, trigger_mode_from_string(trigger_mode), effective_cap(cap));
    std::vector<std::string> names;
    for (const auto& s : world.static_sensors()) names.push_back(s.id);
    out << g.dump(names);
    return kExitOk;
  }
  Json all = Json::array();
  for (int i = 0; i < world.sensor_count(); ++i) {
    Json doc = subgame_to_json(world, i);
    if (!out_dir.empty()) {
      fs::create_directories(out_dir);
      write_file((fs::path(out_dir) / ("subgame-" + std::to_string(i) + ".json"))
                     .string(),
                 dump_document(doc));
    }
    all.push_back(std::move(doc));
  }
  if (out_dir.empty()) out << dump_document(all);
  return kExitOk;
}

int cmd_synthesize(const std::string& world_path, std::optional<int> only,
                   bool global, const std::string& trigger_mode,
                   std::optional<std::size_t> cap_flag, int jobs,
                   const std::string& out_dir, std::ostream& out,
                   std::ostream& err) {
  SurveillanceWorld world = load_world(world_path);
  const TriggerMode mode = trigger_mode_from_string(trigger_mode);
  const std::size_t cap = effective_cap(cap_flag);
  std::vector<int> selected;
  if (global) {
    selected.push_back(-1);
  } else if (only) {
    if (*only < 0 || *only >= world.sensor_count()) {
      throw SchemaError("no subgame " + std::to_string(*only));
    }
    selected.push_back(*only);
  } else {
    for (int i = 0; i < world.sensor_count(); ++i) selected.push_back(i);
  }

  // Workers pull subgames off a counter; results land by index, so the
  // output never depends on --jobs.
  std::vector<std::optional<Solution>> results(selected.size());
  std::vector<std::string> errors(selected.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k; (k = next++) < selected.size();) {
      try {
        results[k] = selected[k] < 0 ? solve_global(world, mode, cap)
                                     : solve_subgame(world, selected[k], mode, cap);
      } catch (const std::exception& e) {
        errors[k] = e.what();
      }
    }
  };
  const int workers = std::max(1, std::min<int>(jobs, selected.size()));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (std::size_t k = 0; k < selected.size(); ++k) {
    if (!errors[k].empty()) {
      throw Error("Synthesis", (selected[k] < 0 ? std::string("global game")
                                                : "subgame " + std::to_string(selected[k])) +
                                   ": " + errors[k]);
    }
  }

  fs::create_directories(out_dir);
  SynthesisReport report;
  report.free_cells = world.free_cells().size();
  bool all = true;
  for (std::size_t k = 0; k < selected.size(); ++k) {
    const Solution& s = *results[k];
    write_file((fs::path(out_dir) / strategy_file_name(selected[k])).string(),
               dump_document(strategy_to_json(world, s.table)));
    report.rows.emplace_back(selected[k], s.stats);
    all = all && s.stats.realizable;
    err << (selected[k] < 0 ? std::string("global")
                            : "subgame " + std::to_string(selected[k]))
        << ": " << (s.stats.realizable ? "realizable" : "unrealizable") << ", "
        << s.stats.belief_states << " belief states, " << s.stats.wall_ms
        << " ms\n";
  }
  const std::string report_doc = dump_document(report_to_json(report));
  write_file((fs::path(out_dir) / "report.json").string(), report_doc);
  write_file((fs::path(out_dir) / "timings.json").string(),
             dump_document(timings_to_json(report)));
  out << report_doc;
  return all ? kExitOk : kExitUnrealizable;
}

int cmd_verify(const std::string& world_path, const std::string& dir,
               const std::string& mode, std::optional<std::size_t> cap,
               const std::string& out_path, std::ostream& out,
               std::ostream& err) {
  SurveillanceWorld world = load_world(world_path);
  Composer composer(world, load_strategies(world, dir),
                    composition_mode_from_string(mode));
  Verdict v = verify_closed_loop(composer, effective_cap(cap));
  err << (v.holds ? "holds" : "violated (" + v.property + ")") << " over "
      << v.product_states << " product states\n";
  emit(out, out_path, dump_document(verdict_to_json(world, v)));
  return v.holds ? kExitOk : kExitViolated;
}

int cmd_simulate(const std::string& world_path, const std::string& dir,
                 const std::string& mode, const std::string& adversary,
                 std::uint64_t seed, int steps, bool allow_partial,
                 bool check_liveness, const std::string& out_path,
                 std::ostream& out, std::ostream& err, std::istream& in) {
  SurveillanceWorld world = load_world(world_path);
  Composer composer(world, load_strategies(world, dir),
                    composition_mode_from_string(mode), allow_partial);
  AdversaryPolicy policy{adversary_kind_from_string(adversary), seed};
  std::vector<Location> script;
  if (policy.kind == AdversaryPolicy::Kind::kInteractive) {
    for (Location l; in >> l;) script.push_back(l);
  }
  Trace trace = simulate(composer, policy, steps, script);
  emit(out, out_path, trace_to_ndjson(world, trace));
  int unsafe = 0;
  for (const auto& s : trace.states) unsafe += !s.safe;
  err << trace.states.size() - 1 << " steps (stop: " << trace.stop << "), "
      << unsafe << " unsafe states, longest wait for liveness "
      << trace.max_steps_since_live << "\n";
  if (check_liveness && !composer.partial()) {
    // Under memoryless strategies a recurrence must show up within the
    // size of the reachable product.
    const std::size_t bound = verify_closed_loop(composer).product_states;
    if (static_cast<std::size_t>(trace.max_steps_since_live) > bound) {
      err << "warning: liveness bound not met for " << trace.max_steps_since_live
          << " steps (product has " << bound << " states)\n";
    }
  }
  return kExitOk;
}

int cmd_serve(const std::string& world_path, const std::string& dir,
              const std::string& mode, const std::string& host, int port,
              const std::string& static_dir, bool allow_partial,
              std::uint64_t seed, std::ostream& err) {
  SurveillanceWorld world = load_world(world_path);
  Service service(world, load_strategies(world, dir),
                  composition_mode_from_string(mode), allow_partial, seed);
  httplib::Server server;
  service.mount(server, static_dir);
  int bound = port;
  if (port == 0) {
    bound = server.bind_to_any_port(host);
  } else if (!server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) {
    throw Error("PortInUse", "cannot listen on " + host + ":" + std::to_string(port));
  }
  err << "listening on http://" << host << ":" << bound << "\n" << std::flush;
  server.listen_after_bind();
  return kExitOk;
}

int cmd_solve_arena(const std::string& path, bool oracle, std::ostream& out) {
  Arena arena = parse_arena(read_file(path));
  WinningRegions r = oracle ? oracle_solve(arena) : zielonka(arena);
  MemorylessStrategy s = extract_strategy(arena, r);
  Json winner = Json::array(), strategy = Json::array();
  for (std::uint32_t v = 0; v < arena.size(); ++v) {
    winner.push_back(r.protagonist_wins(v) ? "protagonist" : "antagonist");
    strategy.push_back(s.move[v]);
  }
  out << dump_document({{"winner", winner},
                        {"strategy", strategy},
                        {"initial_winner", r.protagonist_wins(arena.initial())
                                               ? "protagonist"
                                               : "antagonist"}});
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err, std::istream& in) {
  CLI::App app{"Distributed synthesis of surveillance strategies"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "vigil 0.1.0");

  std::string world, dir, out_path, out_dir, trigger_mode = "literal";
  std::string mode = "autonomous", adversary = "random", host = "127.0.0.1";
  std::string static_dir;
  std::optional<std::size_t> cap;
  std::optional<int> subgame;
  int belief_subgame = -1, jobs = 1, steps = 100, port = 8080;
  std::uint64_t seed = 0;
  bool global = false, allow_partial = false, oracle = false,
       check_liveness = false;

  auto add_cap = [&](CLI::App* c) {
    c->add_option("--cap", cap, "Belief-state cap (default: VIGIL_CAP or 1000000)")
        ->check(CLI::PositiveNumber);
  };
  auto add_mode = [&](CLI::App* c) {
    c->add_option("--mode", mode, "Composition mode")
        ->check(CLI::IsMember({"autonomous", "projection"}));
  };

  CLI::App* validate = app.add_subcommand("validate", "Check a world file");
  validate->add_option("world", world)->required()->check(CLI::ExistingFile);

  CLI::App* decompose =
      app.add_subcommand("decompose", "Write the subgame of every region");
  decompose->add_option("world", world)->required()->check(CLI::ExistingFile);
  decompose->add_option("-o,--out-dir", out_dir, "Write subgame-i.json files here");
  decompose->add_option("--belief-graph", belief_subgame,
                        "Print the reachable belief graph of one subgame");
  decompose->add_option("--trigger-mode", trigger_mode)
      ->check(CLI::IsMember({"literal", "exact"}));
  add_cap(decompose);

  CLI::App* synthesize =
      app.add_subcommand("synthesize", "Solve the subgames and write strategies");
  synthesize->add_option("world", world)->required()->check(CLI::ExistingFile);
  synthesize->add_option("--subgame", subgame, "Solve only this subgame");
  synthesize->add_flag("--global", global,
                       "Solve the centralized game instead (small worlds only)");
  synthesize->add_option("--trigger-mode", trigger_mode)
      ->check(CLI::IsMember({"literal", "exact"}));
  add_cap(synthesize);
  synthesize->add_option("--jobs", jobs, "Subgames solved in parallel")
      ->check(CLI::PositiveNumber);
  synthesize->add_option("-o,--out-dir", out_dir)->required();

  CLI::App* verify =
      app.add_subcommand("verify", "Check the composed strategies exhaustively");
  verify->add_option("world", world)->required()->check(CLI::ExistingFile);
  verify->add_option("strategies", dir)->required();
  add_mode(verify);
  add_cap(verify);
  verify->add_option("-o,--out", out_path, "Verdict file (default stdout)");

  CLI::App* sim = app.add_subcommand("simulate", "Run the composed sensors");
  sim->add_option("world", world)->required()->check(CLI::ExistingFile);
  sim->add_option("strategies", dir)->required();
  add_mode(sim);
  sim->add_option("--adversary", adversary,
                  "random, greedy, or interactive (moves read from stdin)")
      ->check(CLI::IsMember({"random", "greedy", "interactive"}));
  sim->add_option("--seed", seed);
  sim->add_option("--steps", steps)->check(CLI::NonNegativeNumber);
  sim->add_flag("--allow-partial", allow_partial,
                "Idle the sensors of unrealizable subgames");
  sim->add_flag("--check-liveness", check_liveness,
                "Warn when a liveness wait outlasts the reachable product");
  sim->add_option("-o,--out", out_path, "Trace file (default stdout)");

  CLI::App* serve = app.add_subcommand("serve", "HTTP simulation service");
  serve->add_option("world", world)->required()->check(CLI::ExistingFile);
  serve->add_option("strategies", dir)->required();
  add_mode(serve);
  serve->add_option("--host", host);
  serve->add_option("--port", port, "0 picks a free port")
      ->check(CLI::Range(0, 65535));
  serve->add_option("--static", static_dir, "Console assets to serve at /");
  serve->add_option("--seed", seed, "Seed of the random adversary");
  serve->add_flag("--allow-partial", allow_partial);

  CLI::App* arena = app.add_subcommand("solve-arena", "Solve a parity arena file");
  arena->add_option("arena", world)->required()->check(CLI::ExistingFile);
  arena->add_flag("--oracle", oracle, "Use brute-force strategy enumeration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    out << "vigil 0.1.0\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }

  try {
    if (*validate) return cmd_validate(world, out, err);
    if (*decompose) {
      return cmd_decompose(world, out_dir, belief_subgame, trigger_mode, cap, out);
    }
    if (*synthesize) {
      return cmd_synthesize(world, subgame, global, trigger_mode, cap, jobs,
                            out_dir, out, err);
    }
    if (*verify) return cmd_verify(world, dir, mode, cap, out_path, out, err);
    if (*sim) {
      return cmd_simulate(world, dir, mode, adversary, seed, steps,
                          allow_partial, check_liveness, out_path, out, err, in);
    }
    if (*serve) {
      return cmd_serve(world, dir, mode, host, port, static_dir, allow_partial,
                       seed, err);
    }
    if (*arena) return cmd_solve_arena(world, oracle, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace vigil

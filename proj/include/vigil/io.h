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

#ifndef VIGIL_IO_H_
#define VIGIL_IO_H_

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "vigil/runtime.h"
#include "vigil/solver.h"
#include "vigil/specs.h"
#include "vigil/world.h"

namespace vigil {

using Json = nlohmann::json;

// Sorted keys (nlohmann's default object ordering), two-space indent,
// trailing newline.
std::string dump_document(const Json& doc);
Json parse_document(const std::string& text);
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

Json spec_to_json(const SurveillanceSpec& spec);
SurveillanceSpec spec_from_json(const Json& j);
Json local_spec_to_json(const LocalSpec& spec);
LocalSpec local_spec_from_json(const Json& j);

Json world_to_json(const WorldDesc& desc);
// SchemaError for malformed documents.
WorldDesc world_desc_from_json(const Json& j);
// Also validates: InvalidWorld / InvalidPartition.
SurveillanceWorld parse_world(const std::string& text);
SurveillanceWorld load_world(const std::string& path);
std::string print_world(const WorldDesc& desc);

// World document restricted to region i, with "outside" and "alarms".
Json subgame_to_json(const SurveillanceWorld& world, int i);

Json strategy_to_json(const SurveillanceWorld& world,
                      const StrategyTable& table);
StrategyTable strategy_from_json(const SurveillanceWorld& world, const Json& j);
std::string strategy_file_name(int subgame);

struct SynthesisReport {
  std::vector<std::pair<int, SolveStats>> rows;  // (subgame, stats)
  std::size_t free_cells = 0;
};

// Timings are left out so reports are byte-reproducible.
Json report_to_json(const SynthesisReport& report);
Json timings_to_json(const SynthesisReport& report);

// One trace record; OUTSIDE appears as -1 in local beliefs.
Json state_to_json(const SurveillanceWorld& world, const SimulationState& s);
// Newline-delimited records, one per step.
std::string trace_to_ndjson(const SurveillanceWorld& world, const Trace& trace);
Json verdict_to_json(const SurveillanceWorld& world, const Verdict& verdict);

Json set_to_json(const LocationSet& s);
LocationSet set_from_json(const Json& j);

}  // namespace vigil

#endif  // VIGIL_IO_H_

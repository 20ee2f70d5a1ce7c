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

#ifndef VIGIL_SERVICE_H_
#define VIGIL_SERVICE_H_

#include <cstdint>
#include <random>
#include <shared_mutex>
#include <string>
#include <vector>

#include "vigil/io.h"
#include "vigil/runtime.h"

namespace httplib {
class Server;
}

namespace vigil {

struct ServiceReply {
  int status = 200;
  Json body;
};

// One simulation session. Moves are serialized; reads take a shared lock.
class Service {
 public:
  Service(const SurveillanceWorld& world, std::vector<StrategyTable> tables,
          CompositionMode mode, bool allow_partial, std::uint64_t seed);

  // Transport-free entry point; the HTTP routes forward here.
  ServiceReply handle(const std::string& method, const std::string& path,
                      const std::string& body);

  // Routes under /api plus static files from static_dir when non-empty.
  void mount(httplib::Server& server, const std::string& static_dir);

 private:
  Json state_payload() const;

  Composer composer_;
  std::uint64_t seed_;
  mutable std::shared_mutex mu_;
  SimulationState state_;
  AdversaryPolicy::Kind adversary_ = AdversaryPolicy::Kind::kInteractive;
  std::mt19937_64 rng_;
};

}  // namespace vigil

#endif  // VIGIL_SERVICE_H_

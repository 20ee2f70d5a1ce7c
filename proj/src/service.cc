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

#include "vigil/service.h"

#include <mutex>

#include "httplib.h"

namespace vigil {
namespace {

ServiceReply error_reply(int status, const std::string& code,
                         const std::string& message) {
  return {status, {{"code", code}, {"message", message}}};
}

}  // namespace

Service::Service(const SurveillanceWorld& world,
                 std::vector<StrategyTable> tables, CompositionMode mode,
                 bool allow_partial, std::uint64_t seed)
    : composer_(world, std::move(tables), mode, allow_partial),
      seed_(seed),
      state_(composer_.initial()),
      rng_(seed) {}

Json Service::state_payload() const {
  Json j = state_to_json(composer_.world(), state_);
  j["legal_moves"] = set_to_json(composer_.legal_moves(state_));
  j["mode"] = to_string(composer_.mode());
  j["adversary"] = to_string(adversary_);
  Json idle = Json::array();
  for (int i = 0; i < composer_.world().sensor_count(); ++i) {
    if (composer_.idle(i)) idle.push_back(i);
  }
  j["idle_sensors"] = idle;
  return j;
}

ServiceReply Service::handle(const std::string& method,
                             const std::string& path,
                             const std::string& body) {
  Json request;
  if (method == "POST" && !body.empty()) {
    request = Json::parse(body, nullptr, false);
    if (request.is_discarded() || !request.is_object()) {
      return error_reply(400, "SchemaError", "request body must be a JSON object");
    }
  }
  try {
    if (method == "GET" && path == "/api/world") {
      std::shared_lock lock(mu_);
      Json j = world_to_json(composer_.world().desc());
      j["free_cells"] = set_to_json(composer_.world().free_cells());
      return {200, j};
    }
    if (method == "GET" && path == "/api/state") {
      std::shared_lock lock(mu_);
      return {200, state_payload()};
    }
    if (method == "GET" && path == "/api/legal-moves") {
      std::shared_lock lock(mu_);
      return {200, {{"moves", set_to_json(composer_.legal_moves(state_))}}};
    }
    if (method == "POST" && path == "/api/move") {
      std::unique_lock lock(mu_);
      LocationSet legal = composer_.legal_moves(state_);
      if (legal.empty()) {
        return error_reply(409, "NoMove", "the target has no legal move");
      }
      Location to;
      if (request.contains("to")) {
        if (!request["to"].is_number_integer()) {
          return error_reply(400, "SchemaError", "'to' must be a cell id");
        }
        to = request["to"].get<Location>();
      } else if (adversary_ == AdversaryPolicy::Kind::kInteractive) {
        return error_reply(400, "SchemaError", "missing 'to'");
      } else {
        to = adversary_move(composer_, state_, adversary_, rng_);
      }
      if (!contains(legal, to)) {
        ServiceReply r = error_reply(
            409, "IllegalMove",
            "target cannot move to " + std::to_string(to) + "; legal moves " +
                set_to_json(legal).dump());
        r.body["legal_moves"] = set_to_json(legal);
        return r;
      }
      state_ = composer_.step(state_, to);
      return {200, state_payload()};
    }
    if (method == "POST" && path == "/api/reset") {
      std::unique_lock lock(mu_);
      state_ = composer_.initial();
      rng_.seed(seed_);
      return {200, state_payload()};
    }
    if (method == "POST" && path == "/api/mode") {
      std::unique_lock lock(mu_);
      if (!request.contains("adversary") || !request["adversary"].is_string()) {
        return error_reply(400, "SchemaError", "missing 'adversary'");
      }
      adversary_ = adversary_kind_from_string(request["adversary"]);
      return {200, state_payload()};
    }
  } catch (const SchemaError& e) {
    return error_reply(400, e.kind(), e.what());
  } catch (const Error& e) {
    return error_reply(500, e.kind(), e.what());
  }
  return error_reply(404, "NotFound", method + " " + path);
}

void Service::mount(httplib::Server& server, const std::string& static_dir) {
  auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    ServiceReply r = handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  for (const char* path : {"/api/world", "/api/state", "/api/legal-moves"}) {
    server.Get(path, forward);
  }
  for (const char* path : {"/api/move", "/api/reset", "/api/mode"}) {
    server.Post(path, forward);
  }
  if (!static_dir.empty() && !server.set_mount_point("/", static_dir)) {
    throw Error("StaticDir", "cannot serve " + static_dir);
  }
}

}  // namespace vigil

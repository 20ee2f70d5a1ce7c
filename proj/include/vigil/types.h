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

#ifndef VIGIL_TYPES_H_
#define VIGIL_TYPES_H_

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace vigil {

// Row-major cell index, counted from the top-left corner of the grid.
using Location = std::int32_t;

// The auxiliary location standing for "anywhere outside this subgame's
// region". It never appears in global beliefs.
inline constexpr Location kOutside = -1;

// Sorted, duplicate-free set of locations. kOutside sorts first.
using LocationSet = std::vector<Location>;

// Joint positions of the mobile sensors, one entry per sensor.
using SensorLocs = std::vector<Location>;

// Bit j set iff static sensor j (in world declaration order) is triggered.
using TriggerMask = std::uint64_t;
inline constexpr int kMaxStaticSensors = 64;

inline bool contains(const LocationSet& set, Location l) {
  return std::binary_search(set.begin(), set.end(), l);
}

inline void canonicalize(LocationSet& set) {
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
}

LocationSet set_union(const LocationSet& a, const LocationSet& b);
LocationSet set_intersection(const LocationSet& a, const LocationSet& b);
LocationSet set_difference(const LocationSet& a, const LocationSet& b);

// Base of every error the library raises on purpose.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& m) : Error("SchemaError", m) {}
};

class InvalidWorld : public Error {
 public:
  InvalidWorld(std::string path, const std::string& m)
      : Error("InvalidWorld", path + ": " + m), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class InvalidPartition : public Error {
 public:
  InvalidPartition(std::string clause, const std::string& m)
      : Error("InvalidPartition", clause + ": " + m),
        clause_(std::move(clause)) {}
  const std::string& clause() const { return clause_; }

 private:
  std::string clause_;
};

class BeliefExplosion : public Error {
 public:
  BeliefExplosion(std::size_t cap, std::size_t frontier)
      : Error("BeliefExplosion",
              "more than " + std::to_string(cap) +
                  " belief states (frontier " + std::to_string(frontier) +
                  "); refine the partition or the visibility"),
        cap_(cap),
        frontier_(frontier) {}
  std::size_t cap() const { return cap_; }
  std::size_t frontier() const { return frontier_; }

 private:
  std::size_t cap_;
  std::size_t frontier_;
};

class ProjectionUndefined : public Error {
 public:
  explicit ProjectionUndefined(const std::string& m)
      : Error("ProjectionUndefined", m) {}
};

class EmptyRecombination : public Error {
 public:
  explicit EmptyRecombination(const std::string& m)
      : Error("EmptyRecombination", m) {}
};

class OracleTooLarge : public Error {
 public:
  explicit OracleTooLarge(const std::string& m) : Error("OracleTooLarge", m) {}
};

class IllegalMove : public Error {
 public:
  IllegalMove(Location to, LocationSet legal)
      : Error("IllegalMove", "target cannot move to " + std::to_string(to)),
        to_(to),
        legal_(std::move(legal)) {}
  Location to() const { return to_; }
  const LocationSet& legal() const { return legal_; }

 private:
  Location to_;
  LocationSet legal_;
};

class StrategyDomainError : public Error {
 public:
  StrategyDomainError(int subgame, const std::string& state)
      : Error("StrategyDomainError",
              "subgame " + std::to_string(subgame) +
                  " has no stored move for " + state),
        subgame_(subgame),
        state_(state) {}
  int subgame() const { return subgame_; }
  const std::string& state() const { return state_; }

 private:
  int subgame_;
  std::string state_;
};

}  // namespace vigil

#endif  // VIGIL_TYPES_H_

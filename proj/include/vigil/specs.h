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

#ifndef VIGIL_SPECS_H_
#define VIGIL_SPECS_H_

#include <optional>
#include <string>
#include <vector>

#include "vigil/types.h"

namespace vigil {

// Global surveillance objectives in normal form: always p_b, always
// eventually p_b, or always p_a and always eventually p_b with a > b.
class SurveillanceSpec {
 public:
  enum class Form { kSafety, kLiveness, kSafetyLiveness };

  static SurveillanceSpec Safety(int b);
  static SurveillanceSpec Liveness(int b);
  static SurveillanceSpec SafetyLiveness(int a, int b);

  Form form() const { return form_; }
  // Safety bound (Safety, SafetyLiveness); 0 otherwise.
  int a() const { return a_; }
  // Liveness bound (Liveness, SafetyLiveness) or the safety bound for Safety.
  int b() const { return b_; }

  std::string to_string() const;
  bool operator==(const SurveillanceSpec&) const = default;

 private:
  SurveillanceSpec(Form form, int a, int b) : form_(form), a_(a), b_(b) {}
  Form form_;
  int a_;
  int b_;
};

// One conjunct of an unnormalized objective.
struct SpecAtom {
  enum class Op { kAlways, kAlwaysEventually };
  Op op;
  int bound;
};

SurveillanceSpec normalize(const std::vector<SpecAtom>& atoms);

struct LocalSpec {
  enum class Form { kLocalSafety, kLocalLiveness, kLocalBoth };
  Form form;
  int c = 0;  // local safety bound
  int b = 0;  // liveness bound, guarded by belief != {OUTSIDE}
  int subgame = 0;

  std::string to_string() const;
  bool operator==(const LocalSpec&) const = default;
};

// c = floor(b / n) + 1 for n >= 2; identity for a single region.
int local_safety_bound(int b, int n);

LocalSpec local_spec(const SurveillanceSpec& spec, int n, int i);

// Number of belief members the sensors cannot see. OUTSIDE never counts
// as visible.
template <typename VisibleFn>
int invisible_count(const LocationSet& belief, VisibleFn&& visible) {
  int count = 0;
  for (Location l : belief) {
    if (l == kOutside || !visible(l)) ++count;
  }
  return count;
}

template <typename VisibleFn>
bool eval_pb(const LocationSet& belief, int b, VisibleFn&& visible) {
  return invisible_count(belief, visible) <= b;
}

inline bool eval_not_only_outside(const LocationSet& belief) {
  return !(belief.size() == 1 && belief.front() == kOutside);
}

inline bool eval_outside_absent(const LocationSet& belief) {
  return !contains(belief, kOutside);
}

struct StatePredicate {
  enum class Kind { kP, kNotOnlyOutside, kOutsideAbsent };
  Kind kind;
  int b = 0;

  template <typename VisibleFn>
  bool eval(const LocationSet& belief, VisibleFn&& visible) const {
    switch (kind) {
      case Kind::kP:
        return eval_pb(belief, b, visible);
      case Kind::kNotOnlyOutside:
        return eval_not_only_outside(belief);
      case Kind::kOutsideAbsent:
        return eval_outside_absent(belief);
    }
    return false;
  }
};

// How a spec turns into an arena objective. The liveness part
// (always-eventually A) -> (always-eventually C) becomes a max-parity
// condition over priorities {0, 1, 2}: 2 iff C, 1 iff A and not C, 0
// otherwise. Global liveness has A = true and C = p_b; local liveness has
// A = belief != {OUTSIDE} and C = p_b and OUTSIDE not in belief.
struct ObjectiveRule {
  std::optional<int> safety_bound;
  std::optional<int> liveness_bound;
  bool local = false;

  bool is_bad(int invisible) const {
    return safety_bound && invisible > *safety_bound;
  }
  int priority(const LocationSet& belief, int invisible) const;
};

ObjectiveRule priorities_for(const SurveillanceSpec& spec);
ObjectiveRule priorities_for(const LocalSpec& spec);

}  // namespace vigil

#endif  // VIGIL_SPECS_H_

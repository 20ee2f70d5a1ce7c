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

#include "vigil/specs.h"

#include <algorithm>
#include <climits>

namespace vigil {

SurveillanceSpec SurveillanceSpec::Safety(int b) {
  if (b < 1) throw SchemaError("safety bound must be positive");
  return SurveillanceSpec(Form::kSafety, b, b);
}

SurveillanceSpec SurveillanceSpec::Liveness(int b) {
  if (b < 1) throw SchemaError("liveness bound must be positive");
  return SurveillanceSpec(Form::kLiveness, 0, b);
}

SurveillanceSpec SurveillanceSpec::SafetyLiveness(int a, int b) {
  if (b < 1) throw SchemaError("liveness bound must be positive");
  if (a <= b) {
    throw SchemaError("safety-liveness needs a > b (got a=" +
                      std::to_string(a) + ", b=" + std::to_string(b) + ")");
  }
  return SurveillanceSpec(Form::kSafetyLiveness, a, b);
}

std::string SurveillanceSpec::to_string() const {
  switch (form_) {
    case Form::kSafety:
      return "G p" + std::to_string(b_);
    case Form::kLiveness:
      return "GF p" + std::to_string(b_);
    case Form::kSafetyLiveness:
      return "G p" + std::to_string(a_) + " & GF p" + std::to_string(b_);
  }
  return "?";
}

SurveillanceSpec normalize(const std::vector<SpecAtom>& atoms) {
  if (atoms.empty()) throw SchemaError("objective has no conjuncts");
  int safety = INT_MAX;
  int liveness = INT_MAX;
  for (const SpecAtom& atom : atoms) {
    if (atom.bound < 1) throw SchemaError("bounds must be positive");
    if (atom.op == SpecAtom::Op::kAlways) {
      safety = std::min(safety, atom.bound);
    } else {
      liveness = std::min(liveness, atom.bound);
    }
  }
  if (liveness == INT_MAX) return SurveillanceSpec::Safety(safety);
  if (safety == INT_MAX) return SurveillanceSpec::Liveness(liveness);
  // G p_a already implies GF p_b when a <= b.
  if (safety <= liveness) return SurveillanceSpec::Safety(safety);
  return SurveillanceSpec::SafetyLiveness(safety, liveness);
}

std::string LocalSpec::to_string() const {
  const std::string k = "k" + std::to_string(subgame);
  const std::string live = "(GF belief!={" + k + "}) -> (GF (p" +
                           std::to_string(b) + " & " + k + "!in belief))";
  switch (form) {
    case Form::kLocalSafety:
      return "G p" + std::to_string(c);
    case Form::kLocalLiveness:
      return live;
    case Form::kLocalBoth:
      return "G p" + std::to_string(c) + " & " + live;
  }
  return "?";
}

int local_safety_bound(int b, int n) {
  if (n <= 1) return b;
  return b / n + 1;
}

LocalSpec local_spec(const SurveillanceSpec& spec, int n, int i) {
  if (n < 1) throw SchemaError("need at least one sensor");
  LocalSpec out{};
  out.subgame = i;
  switch (spec.form()) {
    case SurveillanceSpec::Form::kSafety:
      out.form = LocalSpec::Form::kLocalSafety;
      out.c = local_safety_bound(spec.b(), n);
      break;
    case SurveillanceSpec::Form::kLiveness:
      out.form = LocalSpec::Form::kLocalLiveness;
      out.b = spec.b();
      break;
    case SurveillanceSpec::Form::kSafetyLiveness:
      out.form = LocalSpec::Form::kLocalBoth;
      out.c = local_safety_bound(spec.a(), n);
      out.b = spec.b();
      break;
  }
  return out;
}

int ObjectiveRule::priority(const LocationSet& belief, int invisible) const {
  if (!liveness_bound) return 0;
  bool antecedent = !local || eval_not_only_outside(belief);
  bool consequent = invisible <= *liveness_bound &&
                    (!local || eval_outside_absent(belief));
  if (consequent) return 2;
  return antecedent ? 1 : 0;
}

ObjectiveRule priorities_for(const SurveillanceSpec& spec) {
  ObjectiveRule rule;
  switch (spec.form()) {
    case SurveillanceSpec::Form::kSafety:
      rule.safety_bound = spec.b();
      break;
    case SurveillanceSpec::Form::kLiveness:
      rule.liveness_bound = spec.b();
      break;
    case SurveillanceSpec::Form::kSafetyLiveness:
      rule.safety_bound = spec.a();
      rule.liveness_bound = spec.b();
      break;
  }
  return rule;
}

ObjectiveRule priorities_for(const LocalSpec& spec) {
  ObjectiveRule rule;
  rule.local = true;
  switch (spec.form) {
    case LocalSpec::Form::kLocalSafety:
      rule.safety_bound = spec.c;
      break;
    case LocalSpec::Form::kLocalLiveness:
      rule.liveness_bound = spec.b;
      break;
    case LocalSpec::Form::kLocalBoth:
      rule.safety_bound = spec.c;
      rule.liveness_bound = spec.b;
      break;
  }
  return rule;
}

}  // namespace vigil

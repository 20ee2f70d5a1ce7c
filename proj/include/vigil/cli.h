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

#ifndef VIGIL_CLI_H_
#define VIGIL_CLI_H_

#include <iosfwd>

namespace vigil {

// Exit codes of the vigil command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 2;
inline constexpr int kExitUnrealizable = 3;
inline constexpr int kExitViolated = 4;

// Documents go to `out`, diagnostics to `err`. `in` feeds scripted moves.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err, std::istream& in);

}  // namespace vigil

#endif  // VIGIL_CLI_H_

// Copyright 2026 The ABL Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace abl {

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitValidation = 2,
    kExitImpossible = 3,
    kExitVerification = 4,
};

inline constexpr std::uint64_t kDefaultSeed = 12345;
inline constexpr const char* kSeedEnvVar = "ABL_LAB_SEED";

/// --seed, then the file's [mc] seed, then $ABL_LAB_SEED, then kDefaultSeed.
/// Throws ValidationError when the environment value is not an integer.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, std::optional<std::uint64_t> from_file);

/// Runs `abl_lab <args...>`. The vector form takes the arguments without the
/// program name. Reports go to `out` (or to --out), diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace abl

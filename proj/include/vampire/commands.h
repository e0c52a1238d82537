// Copyright 2026 The Vampire Authors
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


#ifndef VAMPIRE_COMMANDS_H
#define VAMPIRE_COMMANDS_H

#include <filesystem>
#include <optional>
#include <ostream>

#include "vampire/scan_io.h"
#include "vampire/scenario.h"

namespace vampire {

/// Process exit codes of the command-line tool.
enum ExitStatus : int {
    kExitOk = 0,
    kExitValidation = 1,
    kExitScientific = 2,
};

struct CommandContext {
    std::filesystem::path out_dir = ".";
    int threads = 1;
    std::ostream *log = nullptr;
};

/// Analytic intensity map of the scenario: profile.csv, profile.pgm, mask.pgm.
int cmd_profile(const ScenarioConfig &cfg, const CommandContext &ctx);

/// Monte Carlo scan: scan.csv and its scan.config sidecar. The sidecar is a
/// complete config; feeding it back with --config reproduces the scan.
int cmd_scan(const ScenarioConfig &cfg, const CommandContext &ctx);

/// Verification sweep: verify.csv. Returns kExitScientific when an
/// operator-model case misses the fidelity or complement tolerance.
int cmd_verify(const VerifySettings &settings, const CommandContext &ctx);

/// Ratio map, shadow/flatness report and profile cut for a scan CSV.
/// Coincidence scans are analysed as conditional / unconditional; with a
/// reference scan the ratio is input / reference singles. `values` supplies
/// the geometry when the input has no sidecar.
int cmd_analyze(const std::filesystem::path &input, const std::optional<std::filesystem::path> &reference,
                const KeyValues &values, const CommandContext &ctx);

/// Minimum operator-model fidelity accepted by cmd_verify.
inline constexpr double kVerifyFidelityFloor = 1.0 - 1e-9;

}  // namespace vampire

#endif  // VAMPIRE_COMMANDS_H

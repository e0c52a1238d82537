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


#ifndef VAMPIRE_SCENARIO_H
#define VAMPIRE_SCENARIO_H

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vampire/montecarlo.h"
#include "vampire/scan_io.h"
#include "vampire/spatial.h"
#include "vampire/verify.h"

namespace vampire {

enum class Scenario {
    /// White mask: the bare beam.
    kInitial,
    /// Strongly reflecting mask, singles: the mask shadow is visible.
    kLossHighContrast,
    /// Weakly reflecting mask, singles.
    kLossLowContrast,
    /// Weakly reflecting mask, camera gated by the herald detector.
    kSubtraction,
};

std::string_view scenario_name(Scenario scenario);
Scenario parse_scenario(std::string_view name);

/// Environment variables named kEnvPrefix + KEY (upper case, '.' -> '_')
/// override config keys, e.g. QVAMP_SOURCE_NBAR for source.nbar.
inline constexpr std::string_view kEnvPrefix = "QVAMP_";

/// Every recognised key with its default, in canonical order.
KeyValues default_config();

/// Overwrites entries of `base` with `overrides`. Throws kParseError for keys
/// that `base` does not contain. Keys starting with "derived." are ignored.
KeyValues merge_config(KeyValues base, const KeyValues &overrides);

/// Applies environment overrides found through `getenv`.
KeyValues apply_env_overrides(KeyValues config,
                              const std::function<const char *(const char *)> &getenv = [](const char *name) {
                                  return std::getenv(name);
                              });

std::string env_var_name(std::string_view key);

struct VerifySettings {
    std::vector<NamedState> states;
    std::vector<double> c_a_values;
    std::vector<double> r_values;
    std::vector<HeraldModel> models;
};

struct ScenarioConfig {
    Scenario scenario;
    SourceConfig source;
    PixelSet region;
    /// Power fraction of the beam on region pixels.
    double region_fraction;
    double contrast;
    /// Target mean herald photon number per time mode, r_eff^2 * nbar.
    double herald_rate;
    ScanConfig scan;
    bool seed_given;
    double max_relative_error;
    std::optional<std::pair<int, int>> band;
    /// The configuration as parsed, with a generated seed filled in.
    KeyValues values;
};

/// Builds a typed scenario from a full key set. Throws kParseError for
/// malformed values and kInvalidArgument for out-of-range ones. Without a
/// scan.seed one is drawn from std::random_device and recorded in `values`.
ScenarioConfig build_scenario(const KeyValues &values);

/// Parses the verify.* keys lazily; state construction can be slow.
VerifySettings build_verify_settings(const KeyValues &values);

/// "thermal:<nbar>", "coherent:<alpha>" or "fock:<n>".
DensityMatrix parse_state(std::string_view spec, int nmax);

/// Mask contrast giving the requested mean herald photon number.
double contrast_for_rate(double herald_rate, double region_fraction, double nbar);

}  // namespace vampire

#endif  // VAMPIRE_SCENARIO_H

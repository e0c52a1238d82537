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


#ifndef VAMPIRE_VERIFY_H
#define VAMPIRE_VERIFY_H

#include <string>
#include <string_view>
#include <vector>

#include "vampire/fock.h"

namespace vampire {

/// Default per-mode truncation for the three-mode verification.
inline constexpr int kVerifyNmax = 30;
/// Largest population allowed outside the original beam mode (operator model).
inline constexpr double kComplementTolerance = 1e-10;
/// Herald weights below this are treated as "never heralds".
inline constexpr double kHeraldWeightFloor = 1e-14;

enum class HeraldModel {
    kOperator,
    kClick,
};

/// "operator" or "click_povm".
std::string_view herald_model_name(HeraldModel model);
/// Inverse of herald_model_name. Throws Error(kInvalidArgument).
HeraldModel parse_herald_model(std::string_view name);

/// Sub-region A carries amplitude c_a of the beam mode; R is tapped off A with
/// reflectivity r.
struct SplitConfig {
    double c_a = 1.0;
    double r = 0.1;
    HeraldModel herald_model = HeraldModel::kOperator;

    double c_b() const;
};

/// |n> -> sum_k sqrt(C(n,k)) c_a^k c_b^(n-k) |k>_A |n-k>_B for a ket with
/// levels 0..nmax. Output layout is [k * (nmax+1) + m] over (A, B).
ComplexVector split_ket(const ComplexVector &ket, double c_a);

/// Splits a single-mode state into modes "A" and "B" with the isometry above.
MultiModeState mode_split(const DensityMatrix &rho, double c_a);

struct RegionalResult {
    /// State of the original beam mode after heralding and tracing out the
    /// orthogonal complement.
    DensityMatrix state;
    double herald_prob;
    /// Probability found outside the original beam mode.
    double complement_population;
};

/// Heralded subtraction in sub-region A, read back in the whole-beam mode.
///
/// The operator model lowers R in the interaction frame of the tap (tap, lower
/// R, untap). That leaves R in vacuum and amounts to r a_A on the input. The
/// click model is the physical detector: tap, project R onto "at least one
/// photon", trace R.
///
/// Throws HeraldImpossible for a vanishing herald weight, and
/// ResidualOrthogonalPopulation when the operator model leaves more than
/// kComplementTolerance outside the beam mode.
RegionalResult regional_subtraction(const DensityMatrix &rho, const SplitConfig &cfg,
                                    double tail_tolerance = kDefaultTailTolerance);

struct GapPoint {
    double r;
    /// Fidelity of the click-heralded state with the ideal subtracted state.
    double fidelity;
    /// sqrt(1 - fidelity).
    double deviation;
};

std::vector<GapPoint> herald_model_gap(const DensityMatrix &rho, double c_a, const std::vector<double> &r_values);

/// Least-squares slope of log(deviation) against log(r).
double log_log_slope(const std::vector<GapPoint> &points);

struct NamedState {
    std::string name;
    DensityMatrix rho;
};

/// thermal 0.5, thermal 1, coherent 1, Fock 1..3.
std::vector<NamedState> default_verify_states(int nmax = kVerifyNmax);

struct VerifyRow {
    std::string state;
    double c_a;
    double r;
    HeraldModel herald_model;
    double fidelity;
    double herald_prob;
    double complement_population;
};

struct VerifySweep {
    std::vector<NamedState> states;
    std::vector<double> c_a_values{0.1, 0.5, 0.9};
    std::vector<double> r_values{0.05, 0.1, 0.2};
    std::vector<HeraldModel> models{HeraldModel::kOperator, HeraldModel::kClick};
};

/// Runs every (state, c_a, r, model) case and compares with subtract_photon.
/// Rows come back in nested order state, c_a, r, model regardless of threads.
/// Complement population is recorded rather than thrown on.
std::vector<VerifyRow> run_verify_sweep(const VerifySweep &sweep, int threads = 1);

}  // namespace vampire

#endif  // VAMPIRE_VERIFY_H

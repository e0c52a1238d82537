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

#ifndef VAMPIRE_ERROR_H
#define VAMPIRE_ERROR_H

#include <stdexcept>
#include <string>
#include <string_view>

namespace vampire {

enum class ErrorCode {
    // fock_core
    kTailMassExceeded,
    kOutOfTruncation,
    kVacuumSubtraction,
    kTruncationDegraded,
    kUndefinedG2,
    kNonUnitaryParams,
    kDimensionMismatch,
    kInvalidState,
    // spatial_modes
    kDegenerateShape,
    kWeakCouplingViolated,
    // vampire_verify
    kHeraldImpossible,
    kResidualOrthogonalPopulation,
    // montecarlo_experiment
    kConfigMismatch,
    kNoHeralds,
    // statistics_analysis
    kInsufficientCounts,
    kInsufficientData,
    kGridMismatch,
    kEmptyRegion,
    kBandOutOfRange,
    // plumbing
    kInvalidArgument,
    kParseError,
    kIoError,
};

std::string_view error_code_name(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so that
/// callers (and the CLI exit-code mapping) can branch on the kind.
class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, const std::string &message);

    ErrorCode code() const noexcept {
        return code_;
    }

   private:
    ErrorCode code_;
};

}  // namespace vampire

#endif  // VAMPIRE_ERROR_H

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

#include "vampire/error.h"

namespace vampire {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::kTailMassExceeded:
            return "TailMassExceeded";
        case ErrorCode::kOutOfTruncation:
            return "OutOfTruncation";
        case ErrorCode::kVacuumSubtraction:
            return "VacuumSubtraction";
        case ErrorCode::kTruncationDegraded:
            return "TruncationDegraded";
        case ErrorCode::kUndefinedG2:
            return "UndefinedG2";
        case ErrorCode::kNonUnitaryParams:
            return "NonUnitaryParams";
        case ErrorCode::kDimensionMismatch:
            return "DimensionMismatch";
        case ErrorCode::kInvalidState:
            return "InvalidState";
        case ErrorCode::kDegenerateShape:
            return "DegenerateShape";
        case ErrorCode::kWeakCouplingViolated:
            return "WeakCouplingViolated";
        case ErrorCode::kHeraldImpossible:
            return "HeraldImpossible";
        case ErrorCode::kResidualOrthogonalPopulation:
            return "ResidualOrthogonalPopulation";
        case ErrorCode::kConfigMismatch:
            return "ConfigMismatch";
        case ErrorCode::kNoHeralds:
            return "NoHeralds";
        case ErrorCode::kInsufficientCounts:
            return "InsufficientCounts";
        case ErrorCode::kInsufficientData:
            return "InsufficientData";
        case ErrorCode::kGridMismatch:
            return "GridMismatch";
        case ErrorCode::kEmptyRegion:
            return "EmptyRegion";
        case ErrorCode::kBandOutOfRange:
            return "BandOutOfRange";
        case ErrorCode::kInvalidArgument:
            return "InvalidArgument";
        case ErrorCode::kParseError:
            return "ParseError";
        case ErrorCode::kIoError:
            return "IoError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string &message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {
}

}  // namespace vampire

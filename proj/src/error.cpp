// Copyright 2026 The qistate Authors
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

#include "qistate/error.hpp"

namespace qistate {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NotHermitian: return "NotHermitian";
        case ErrorKind::NegativeEigenvalue: return "NegativeEigenvalue";
        case ErrorKind::DimensionOverflow: return "DimensionOverflow";
        case ErrorKind::NonSquare: return "NonSquare";
        case ErrorKind::Singular: return "Singular";
        case ErrorKind::SiteOutOfRange: return "SiteOutOfRange";
        case ErrorKind::WrongBlockDim: return "WrongBlockDim";
        case ErrorKind::AlgebraMismatch: return "AlgebraMismatch";
        case ErrorKind::InvalidDensity: return "InvalidDensity";
        case ErrorKind::NonCommutingDensities: return "NonCommutingDensities";
        case ErrorKind::StateSingular: return "StateSingular";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::BudgetExceeded: return "BudgetExceeded";
        case ErrorKind::InvalidRange: return "InvalidRange";
        case ErrorKind::NotQuasiInvariant: return "NotQuasiInvariant";
        case ErrorKind::MissingDerivative: return "MissingDerivative";
        case ErrorKind::DenseCapExceeded: return "DenseCapExceeded";
        case ErrorKind::ConsistencyFailure: return "ConsistencyFailure";
        case ErrorKind::HypothesisHViolated: return "HypothesisHViolated";
        case ErrorKind::NonCommutingCocycle: return "NonCommutingCocycle";
        case ErrorKind::ModeMismatch: return "ModeMismatch";
        case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    }
    return "Unknown";
}

}  // namespace qistate

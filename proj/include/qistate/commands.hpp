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

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "qistate/error.hpp"
#include "qistate/io.hpp"

namespace qistate {

struct RunConfig {
    double exact = 1e-10;
    double convergence = 1e-8;
    std::uint64_t seed = 42;
    std::size_t max_enumeration = FiniteAutomorphismGroup::kDefaultMaxOrder;
    std::size_t umegaki_samples = 100;
};

/// Exit codes: 0 all checks pass, 1 a verification failed, 2 config/budget.
struct CommandResult {
    int exit_code = 0;
    Json report;
    std::string csv;
};

int exit_code_for(ErrorKind kind);

/// Runs body, turning a library Error into a report with the mapped exit code.
CommandResult run_guarded(const std::function<CommandResult()>& body);

/// Rotation example closed forms.
ComplexMatrix rotation_x_closed_form(double beta, int quarter_turns);
ComplexMatrix rotation_k_closed_form(double beta);
ComplexMatrix rotation_p_closed_form(double beta, const ComplexMatrix& a);

CommandResult cmd_example2(double beta, const RunConfig& cfg = {});
CommandResult cmd_verify(const ModelConfig& model, const RunConfig& cfg = {});
CommandResult cmd_martingale(const ModelConfig& model, const LocalProduct& x, int nmax, const RunConfig& cfg = {});

struct McOptions {
    std::size_t samples = 0;
    std::uint64_t seed = 42;
};

/// Exact records for every N whose N! fits the enumeration cap; with mc, a
/// Monte Carlo record for each N as well. BudgetExceeded when some N is
/// neither enumerable nor sampled.
CommandResult cmd_convergence(const ModelConfig& model, const LocalProduct& a, const LocalProduct& b, int n_lo,
                              int n_hi, const std::optional<McOptions>& mc, const RunConfig& cfg = {});

}  // namespace qistate

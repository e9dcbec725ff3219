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

#include "qistate/commands.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_util.hpp"

namespace qistate {
namespace {

ModelConfig Model(const std::string& name) {
    return model_config_from_json(read_json_file(std::string(QISTATE_CONFIG_DIR) + "/" + name));
}

LocalProduct Observable(const std::string& name) {
    return observable_from_json(read_json_file(std::string(QISTATE_CONFIG_DIR) + "/" + name), 2);
}

TEST(ExitCodeTest, Mapping) {
    EXPECT_EQ(exit_code_for(ErrorKind::NotQuasiInvariant), 1);
    EXPECT_EQ(exit_code_for(ErrorKind::ConsistencyFailure), 1);
    EXPECT_EQ(exit_code_for(ErrorKind::HypothesisHViolated), 1);
    EXPECT_EQ(exit_code_for(ErrorKind::NonCommutingCocycle), 1);
    EXPECT_EQ(exit_code_for(ErrorKind::ConfigInvalid), 2);
    EXPECT_EQ(exit_code_for(ErrorKind::BudgetExceeded), 2);
    EXPECT_EQ(exit_code_for(ErrorKind::DenseCapExceeded), 2);
    const CommandResult r = run_guarded([]() -> CommandResult { throw Error(ErrorKind::InvalidRange, "x"); });
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_EQ(r.report["error"], "InvalidRange");
}

TEST(RotationClosedFormTest, MatchesHandValues) {
    EXPECT_MATRIX_NEAR(rotation_x_closed_form(std::log(4.0), 1), diag({0.25, 4.0}), 1e-15);
    EXPECT_MATRIX_NEAR(rotation_x_closed_form(std::log(4.0), 2), identity(2), 0.0);
    EXPECT_MATRIX_NEAR(rotation_k_closed_form(std::log(4.0)), diag({0.75, 1.5}), 1e-15);
    EXPECT_MATRIX_NEAR(rotation_k_closed_form(0.0), identity(2), 0.0);
    // At β = 0 the projection onto rotation-invariant matrices is the
    // average of a and J a J^T.
    std::mt19937_64 rng(6);
    const ComplexMatrix a = testing::RandomMatrix(2, rng);
    ComplexMatrix j(2, 2);
    j << 0, -1, 1, 0;
    EXPECT_MATRIX_NEAR(rotation_p_closed_form(0.0, a), 0.5 * (a + j * a * j.transpose()), 1e-15);
}

TEST(Example2Test, PassesForCriterionTemperatures) {
    for (double beta : {0.0, 1.0, std::log(4.0)}) {
        const CommandResult r = cmd_example2(beta);
        EXPECT_EQ(r.exit_code, 0) << beta;
        EXPECT_LE(r.report["x_dev"].get<double>(), 1e-12);
        EXPECT_LE(r.report["k_dev"].get<double>(), 1e-12);
    }
    EXPECT_NEAR(cmd_example2(std::log(4.0)).report["p_minus_k_norm"].get<double>(), 1.25, 1e-12);
    EXPECT_EQ(run_guarded([] { return cmd_example2(NAN); }).exit_code, 2);
}

TEST(VerifyTest, ShippedModels) {
    EXPECT_EQ(cmd_verify(Model("rotation_ln4.json")).exit_code, 0);
    const CommandResult r = cmd_verify(Model("tracial_L4.json"));
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_TRUE(r.report["umegaki"]["pass"].get<bool>());
}

TEST(MartingaleCommandTest, CsvIsDeterministic) {
    const ModelConfig m = Model("default_L4.json");
    const CommandResult a = cmd_martingale(m, Observable("obs_j0_e11.json"), 3);
    const CommandResult b = cmd_martingale(m, Observable("obs_j0_e11.json"), 3);
    EXPECT_EQ(a.exit_code, 0);
    EXPECT_EQ(a.csv, b.csv);
    EXPECT_EQ(a.csv.substr(0, a.csv.find('\n')),
              "N,group_order,increment_norm,martingale_max_dev,psi_invariance_dev,fixed_dim");
    EXPECT_EQ(a.report.dump(), b.report.dump());
}

TEST(ConvergenceCommandTest, ExactAndMonteCarloRecords) {
    RunConfig cfg;
    cfg.max_enumeration = 24;
    const ModelConfig m = Model("default_L6.json");
    const LocalProduct one = Observable("obs_identity.json");
    EXPECT_EQ(run_guarded([&] { return cmd_convergence(m, one, one, 3, 5, std::nullopt, cfg); }).exit_code, 2);
    const CommandResult r = cmd_convergence(m, one, one, 3, 5, McOptions{2000, 7}, cfg);
    EXPECT_EQ(r.exit_code, 0);
    ASSERT_EQ(r.report["records"].size(), 5u);  // N = 3, 4 exact; N = 3, 4, 5 sampled
    EXPECT_EQ(r.report["records"][0]["method"], "exact");
    EXPECT_EQ(r.report["records"][2]["method"], "mc");
    EXPECT_EQ(r.csv, cmd_convergence(m, one, one, 3, 5, McOptions{2000, 7}, cfg).csv);
    EXPECT_EQ(run_guarded([&] { return cmd_convergence(m, one, one, 4, 9, std::nullopt, cfg); }).exit_code, 2);
    EXPECT_EQ(run_guarded([&] { return cmd_convergence(Model("rotation_ln4.json"), one, one, 1, 1, std::nullopt, cfg); })
                  .exit_code,
              2);
}

}  // namespace
}  // namespace qistate

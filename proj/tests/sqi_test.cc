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

#include "qistate/sqi.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qistate/error.hpp"
#include "test_util.hpp"

namespace qistate {
namespace {

ProductState TwoSiteState() {
    return ProductState(TensorAlgebra(2, 2), diag({0.5, 0.5}), {{0, diag({0.75, 0.25})}}, 2.0);
}

// φ(g(e_kl)) = φ(x e_kl) over every matrix unit, evaluated from scratch.
double UnitOracle(const ProductState& phi, const Automorphism& g, const ComplexMatrix& x) {
    const ComplexMatrix rho = total_density(phi);
    const Eigen::Index d = rho.rows();
    double worst = 0.0;
    for (Eigen::Index k = 0; k < d; ++k) {
        for (Eigen::Index l = 0; l < d; ++l) {
            const ComplexMatrix e = matrix_unit(d, k, l);
            const Complex lhs = (rho * apply(g, e, phi.algebra())).trace();
            const Complex rhs = (rho * x * e).trace();
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    }
    return worst;
}

TEST(SolveRnDerivativeTest, IdentityGivesOne) {
    const ProductState phi = TwoSiteState();
    const auto x = solve_rn_derivative(phi, Automorphism::permutation(Permutation::identity(2)));
    EXPECT_MATRIX_NEAR(x.matrix, identity(4), 1e-15);
}

TEST(SolveRnDerivativeTest, RotationQuarterTurn) {
    const ProductState phi = rotation_example_state(std::log(4.0));
    const FiniteAutomorphismGroup g = rotation_group();
    EXPECT_MATRIX_NEAR(solve_rn_derivative(phi, g.element(1)).matrix, diag({0.25, 4.0}), 1e-14);
    EXPECT_MATRIX_NEAR(solve_rn_derivative(phi, g.element(3)).matrix, diag({0.25, 4.0}), 1e-14);
    EXPECT_MATRIX_NEAR(solve_rn_derivative(phi, g.element(2)).matrix, identity(2), 1e-15);
}

TEST(SolveRnDerivativeTest, RandomDiagonalStatesPassUnitOracle) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        std::map<int, ComplexMatrix> special;
        for (int n = 0; n < 3; ++n) {
            const double p = u(rng), q = u(rng);
            special.emplace(n, diag({p / (p + q), q / (p + q)}));
        }
        const ProductState phi(TensorAlgebra(2, 3), diag({0.5, 0.5}), special, 20.0);
        const auto perms = sample_permutation(3, 3, 100 + trial, 4);
        for (const auto& p : perms) {
            const auto g = Automorphism::permutation(p);
            const auto x = solve_rn_derivative(phi, g);
            EXPECT_LE(UnitOracle(phi, g, x.matrix), 1e-12);
        }
    }
}

TEST(SolveRnDerivativeTest, NonInvariantStateIsRejected) {
    // A rotation by an irrational-looking unitary moves a non-commuting density.
    const ProductState phi = rotation_example_state(1.0);
    ComplexMatrix u(2, 2);
    const double c = std::cos(0.3), s = std::sin(0.3);
    u << c, -s, s, c;
    try {
        solve_rn_derivative(phi, Automorphism::inner(u, "r"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotQuasiInvariant);
    }
}

TEST(PermModelRnTest, ClosedFormExamples) {
    const ProductState phi = TwoSiteState();
    EXPECT_MATRIX_NEAR(perm_model_rn(phi, Permutation::identity(2)).matrix, identity(4), 0.0);
    const auto x = perm_model_rn(phi, Permutation::transposition(2, 0, 1));
    EXPECT_MATRIX_NEAR(x.matrix, testing::NaiveKron(diag({2.0 / 3.0, 2.0}), diag({1.5, 0.5})), 1e-15);
    EXPECT_MATRIX_NEAR(x.matrix, solve_rn_derivative(phi, Automorphism::permutation(Permutation::transposition(2, 0, 1))).matrix,
                       1e-12);
}

TEST(PermModelRnTest, TailOnlyPermutationIsTrivial) {
    const ProductState phi(TensorAlgebra(2, 4), diag({0.5, 0.5}), {{0, diag({0.75, 0.25})}}, 2.0);
    EXPECT_MATRIX_NEAR(perm_model_rn(phi, Permutation({0, 3, 1, 2})).matrix, identity(16), 1e-15);
    EXPECT_THROW(perm_model_rn(phi, Permutation::identity(3)), Error);
}

TEST(PermModelRnTest, AgreesWithSolverOnS4) {
    const ProductState phi(TensorAlgebra(2, 4), diag({0.6, 0.4}), {{0, diag({0.75, 0.25})}, {2, diag({0.2, 0.8})}},
                           8.0);
    const FiniteAutomorphismGroup s4 = symmetric_group(4, 4);
    for (const auto& g : s4.elements()) {
        EXPECT_MATRIX_NEAR(perm_model_rn(phi, g.perm()).matrix, solve_rn_derivative(phi, g).matrix, 1e-10);
    }
}

TEST(RnCocycleTest, RoutesAgreeAndChecksPass) {
    const ProductState phi(TensorAlgebra(2, 4), diag({0.5, 0.5}), {{0, diag({0.75, 0.25})}}, 2.0);
    const FiniteAutomorphismGroup s4 = symmetric_group(4, 4);
    const RnCocycle a = RnCocycle::build(phi, s4);
    const RnCocycle b = RnCocycle::build(phi, s4, RnCocycle::Route::PermutationClosedForm);
    for (std::size_t g = 0; g < s4.order(); ++g) {
        EXPECT_MATRIX_NEAR(a.x(g), b.x(g), 1e-12);
        EXPECT_MATRIX_NEAR(a.sqrt_x(g) * a.sqrt_x(g), a.x(g), 1e-12);
        EXPECT_GT(a.checks(g).min_eigenvalue, 0.0);
    }
    EXPECT_MATRIX_NEAR(a.x(0), identity(16), 0.0);
    EXPECT_THROW(a.x(99), Error);
}

TEST(RnCocycleTest, ChainRuleOnMatrixUnits) {
    // φ(g(h(a))) = φ(x_{gh} a)
    const ProductState phi(TensorAlgebra(2, 3), diag({0.6, 0.4}), {{1, diag({0.75, 0.25})}}, 4.0);
    const FiniteAutomorphismGroup s3 = symmetric_group(3, 3);
    const RnCocycle c = RnCocycle::build(phi, s3);
    const ComplexMatrix rho = total_density(phi);
    for (std::size_t g = 0; g < s3.order(); ++g) {
        for (std::size_t h = 0; h < s3.order(); ++h) {
            const std::size_t gh = s3.compose(g, h);
            for (Eigen::Index k = 0; k < 8; ++k) {
                for (Eigen::Index l = 0; l < 8; ++l) {
                    const ComplexMatrix e = matrix_unit(8, k, l);
                    const ComplexMatrix ghe = apply(s3.element(g), apply(s3.element(h), e, phi.algebra()), phi.algebra());
                    EXPECT_NEAR(std::abs((rho * ghe).trace() - (rho * c.x(gh) * e).trace()), 0.0, 1e-10);
                }
            }
        }
    }
}

TEST(CocycleReportTest, TrivialGroup) {
    const ProductState phi = TwoSiteState();
    const FiniteAutomorphismGroup trivial = symmetric_group(1, 2);
    const RnCocycle c = RnCocycle::build(phi, trivial);
    EXPECT_EQ(verify_cocycle_identity(c, trivial), 0.0);
}

TEST(CocycleReportTest, RotationExample) {
    const ProductState phi = rotation_example_state(std::log(4.0));
    const FiniteAutomorphismGroup g = rotation_group();
    const RnCocycle c = RnCocycle::build(phi, g);
    // x_g^{-1} = g^{-1}(x_{g^{-1}}) evaluated by hand for g = g_{π/2}:
    // g^{-1} = g_{3π/2} swaps the diagonal, so diag(1/4, 4) ↦ diag(4, 1/4).
    EXPECT_MATRIX_NEAR(inverse(c.x(1)), apply(g.element(3), c.x(3), phi.algebra()), 1e-14);
    const CocycleReport r = verify_cocycle(phi, g, c);
    EXPECT_TRUE(r.pass);
    EXPECT_LE(r.cocycle, 1e-9);
    EXPECT_LE(r.centralizer, 1e-10);
    EXPECT_LE(r.commutator, 1e-10);
    EXPECT_NEAR(r.positivity, 0.25, 1e-14);
}

TEST(CocycleReportTest, S3DistinctDiagonalDensities) {
    const ProductState phi(TensorAlgebra(2, 3), diag({0.5, 0.5}),
                           {{0, diag({0.75, 0.25})}, {1, diag({0.6, 0.4})}, {2, diag({0.2, 0.8})}}, 8.0);
    const FiniteAutomorphismGroup s3 = symmetric_group(3, 3);
    const RnCocycle c = RnCocycle::build(phi, s3);
    const CocycleReport r = verify_cocycle(phi, s3, c);
    EXPECT_TRUE(r.pass);
    EXPECT_LE(r.defining_identity, 1e-10);
    EXPECT_LE(max_pairwise_commutator(c), 1e-10);
}

TEST(CocycleReportTest, TracialCentralizerIsExact) {
    const ProductState phi = ProductState::tracial(TensorAlgebra(2, 3));
    const FiniteAutomorphismGroup s3 = symmetric_group(3, 3);
    const RnCocycle c = RnCocycle::build(phi, s3);
    EXPECT_EQ(verify_centralizer(phi, c), 0.0);
}

}  // namespace
}  // namespace qistate

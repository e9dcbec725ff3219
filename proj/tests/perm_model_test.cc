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

#include "qistate/perm_model.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qistate/error.hpp"
#include "qistate/sqi.hpp"
#include "test_util.hpp"

namespace qistate {
namespace {

using testing::RandomMatrix;

const double kScalar = (std::sqrt(3.0) + 1.0) / (2.0 * std::sqrt(2.0));

PermutationModel EmptyF(int sites) {
    return PermutationModel(ProductState(TensorAlgebra(2, sites), diag({0.7, 0.3}), {}, 4.0));
}

LocalProduct Site(int n, const ComplexMatrix& b) {
    LocalProduct p;
    p.factors.emplace(n, b);
    return p;
}

TEST(PermutationModelTest, Validation) {
    const ProductState s(TensorAlgebra(2, 4), diag({0.5, 0.5}), {{1, diag({0.75, 0.25})}}, 2.0);
    EXPECT_EQ(PermutationModel(s).m0(), 1);
    EXPECT_EQ(PermutationModel(s, 3).m0(), 3);
    for (int bad : {0, 4}) {
        try {
            PermutationModel m(s, bad);
            FAIL() << bad;
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::InvalidRange);
        }
    }
    EXPECT_EQ(EmptyF(3).m0(), 0);
    EXPECT_TRUE(EmptyF(3).special_sites().empty());
    EXPECT_EQ(default_model().special_sites(), std::vector<int>{0});
}

TEST(PermutationModelTest, SiteRootsMatchRnDerivative) {
    const PermutationModel m = default_model(4);
    for (const auto& p : enumerate_symmetric(4, 4)) {
        const ComplexMatrix r = sqrt_rn_dense(m, p);
        EXPECT_MATRIX_NEAR(r * r, perm_model_rn(m.state(), p).matrix, 1e-14);
    }
    EXPECT_MATRIX_NEAR(m.site_root(1, 0), diag({std::sqrt(2.0 / 3.0), std::sqrt(2.0)}), 1e-15);
    EXPECT_MATRIX_NEAR(m.site_root(2, 3), identity(2), 0.0);
}

TEST(KLimitTest, DefaultModelClosedForm) {
    const PermutationModel m = default_model();
    EXPECT_NEAR(k_limit_scalar(m), kScalar, 1e-15);
    EXPECT_NEAR(k_limit_scalar(m), 0.965926, 5e-7);
    const AlgebraElement k = k_limit_closed_form(m);
    const ComplexMatrix expect0 = embed_site(diag({0.788675, 1.366025}), 0, m.algebra()).matrix;
    EXPECT_MATRIX_NEAR(k.matrix, expect0, 1e-6);
    EXPECT_MATRIX_NEAR(k.matrix, kScalar * embed_site(diag({std::sqrt(2.0 / 3.0), std::sqrt(2.0)}), 0, m.algebra()).matrix,
                       1e-14);
    EXPECT_GT(min_singular_value(k.matrix), 0.7);
}

TEST(KLimitTest, EmptySpecialSetGivesIdentity) {
    const PermutationModel m = EmptyF(3);
    EXPECT_EQ(k_limit_scalar(m), 1.0);
    EXPECT_MATRIX_NEAR(k_limit_closed_form(m).matrix, identity(8), 0.0);
    EXPECT_MATRIX_NEAR(exact_k(m, 3), identity(8), 1e-15);
}

TEST(KLimitTest, ExactKTrendsTowardLimitInVacuumElement) {
    // ⟨Φ, K_N Φ⟩ = 1/N + (1 - 1/N) s² should approach s² from above.
    const PermutationModel m = default_model(7);
    const ComplexMatrix rho = total_density(m.state());
    double prev = 2.0;
    for (int n = 1; n <= 5; ++n) {
        const double v = (rho * exact_k(m, n)).trace().real();
        EXPECT_NEAR(v, 1.0 / n + (1.0 - 1.0 / n) * kScalar * kScalar, 1e-13) << n;
        EXPECT_LT(v, prev);
        prev = v;
    }
}

TEST(EnumerationTest, BudgetExceeded) {
    EXPECT_EQ(enumerate_symmetric(4, 5).size(), 24u);
    try {
        enumerate_symmetric(5, 5, 100);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::BudgetExceeded);
    }
}

TEST(MatrixElementTest, FactorizedMatchesDense) {
    const PermutationModel m(ProductState(TensorAlgebra(2, 4), diag({0.6, 0.4}),
                                          {{0, diag({0.75, 0.25})}, {1, diag({0.2, 0.8})}}, 8.0));
    std::mt19937_64 rng(4);
    LocalProduct a, b;
    a.factors.emplace(0, RandomMatrix(2, rng));
    a.factors.emplace(2, RandomMatrix(2, rng));
    b.factors.emplace(1, RandomMatrix(2, rng));
    const ComplexMatrix rho = total_density(m.state());
    const ComplexMatrix ad = a.to_element(m.algebra()).matrix, bd = b.to_element(m.algebra()).matrix;
    for (int n = 1; n <= 4; ++n) {
        const Complex dense = (rho * ad.adjoint() * exact_k(m, n) * bd).trace();
        EXPECT_NEAR(std::abs(k_matrix_element(m, enumerate_symmetric(n, 4), a, b) - dense), 0.0, 1e-13) << n;
    }
    const Complex lim = (rho * ad.adjoint() * k_limit_closed_form(m).matrix * bd).trace();
    EXPECT_NEAR(std::abs(k_limit_matrix_element(m, a, b) - lim), 0.0, 1e-13);
}

TEST(OuterPairsTest, LowerBoundOnOuterPairs) {
    // φ((x_σ x_τ)^{1/2}) ≥ C^{-2|F|} for all outer σ, τ.
    const PermutationModel m(ProductState(TensorAlgebra(2, 5), diag({0.5, 0.5}),
                                          {{0, diag({0.75, 0.25})}, {1, diag({0.9, 0.1})}}, 10.0));
    const double floor = std::pow(10.0, -4.0);
    const ComplexMatrix rho = total_density(m.state());
    std::vector<ComplexMatrix> outer;
    for (const auto& p : enumerate_symmetric(5, 5)) {
        if (is_outer(p, m.m0())) outer.push_back(sqrt_rn_dense(m, p));
    }
    ASSERT_EQ(outer.size(), static_cast<std::size_t>(std::lround(outer_fraction(5, 1) * 120)));
    for (const auto& s : outer) {
        for (const auto& t : outer) EXPECT_GE((rho * s * t).trace().real(), floor);
    }
}

TEST(ConvergenceTest, DefaultModelIdentityObservables) {
    const PermutationModel m = default_model();
    const ConvergenceResult r = convergence_experiment(m, LocalProduct{}, LocalProduct{}, 3, 6);
    ASSERT_EQ(r.records.size(), 4u);
    EXPECT_EQ(r.params.m0, 0);
    EXPECT_EQ(r.params.k0, 0);
    EXPECT_EQ(r.params.scale, 16.0);
    const double s2 = kScalar * kScalar;
    for (const auto& rec : r.records) {
        EXPECT_NEAR(rec.abs_err, (1.0 - s2) / rec.n, 1e-13) << rec.n;
        EXPECT_NEAR(rec.f_outer, (rec.n - 1.0) / rec.n, 1e-15);
        EXPECT_NEAR(rec.bound, 16.0 / rec.n, 1e-13);
        EXPECT_NEAR(rec.target.real(), s2, 1e-14);
    }
    EXPECT_TRUE(r.within_bound);
    EXPECT_TRUE(r.decreasing);
}

TEST(ConvergenceTest, BoundUsesOuterFractionAtN4) {
    const BoundParams p{0, 0, 1.0, 16.0};
    EXPECT_DOUBLE_EQ(outer_fraction_or_zero(4, 0), 0.75);
    EXPECT_DOUBLE_EQ(convergence_bound(p, 4), 4.0);
    EXPECT_EQ(outer_fraction_or_zero(2, 3), 0.0);
}

TEST(ConvergenceTest, BoundParamsFromSupport) {
    const PermutationModel m = default_model();
    const BoundParams p = bound_params(m, Site(2, 3.0 * identity(2)), Site(1, matrix_unit(2, 0, 0)));
    EXPECT_EQ(p.m0, 2);
    EXPECT_EQ(p.k0, 3);
    EXPECT_DOUBLE_EQ(p.m_norm, 3.0);
    EXPECT_DOUBLE_EQ(p.scale, 16.0 * std::pow(3.0, 6));
}

TEST(ConvergenceTest, EmptySpecialSetHasZeroError) {
    const ConvergenceResult r = convergence_experiment(EmptyF(5), Site(0, matrix_unit(2, 0, 1)),
                                                       Site(0, matrix_unit(2, 0, 1)), 2, 5);
    for (const auto& rec : r.records) EXPECT_LE(rec.abs_err, 1e-15);
    EXPECT_TRUE(r.decreasing);
    EXPECT_TRUE(r.within_bound);
}

TEST(MonteCarloTest, EnumeratedMeanIsExact) {
    const PermutationModel m = default_model(5);
    const McEstimate est = welford_estimate(m, enumerate_symmetric(5, 5));
    EXPECT_EQ(est.samples, 120u);
    EXPECT_MATRIX_NEAR(est.mean, exact_k(m, 5), 1e-14);
}

TEST(MonteCarloTest, DeterministicPerSeed) {
    const PermutationModel m = default_model(5);
    const McEstimate a = mc_k_estimate(m, 5, 500, 17);
    const McEstimate b = mc_k_estimate(m, 5, 500, 17);
    EXPECT_TRUE(a.mean == b.mean);
    EXPECT_TRUE(a.ci95_re == b.ci95_re);
    EXPECT_FALSE(a.mean == mc_k_estimate(m, 5, 500, 18).mean);
    EXPECT_NEAR((a.ci95_re - 1.96 * a.std_err_re).cwiseAbs().maxCoeff(), 0.0, 1e-15);
}

TEST(MonteCarloTest, EmptySpecialSetHasZeroWidth) {
    const McEstimate e = mc_k_estimate(EmptyF(4), 4, 100, 1);
    EXPECT_MATRIX_NEAR(e.mean, identity(16), 1e-15);
    EXPECT_EQ(e.ci95_re.maxCoeff(), 0.0);
    EXPECT_EQ(e.ci95_im.maxCoeff(), 0.0);
}

TEST(MonteCarloTest, N6WithinThreeStandardErrors) {
    const PermutationModel m = default_model(6);
    const ComplexMatrix exact = exact_k(m, 6);
    const McEstimate est = mc_k_estimate(m, 6, 20000, 42);
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * exact.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < exact.rows(); ++i) {
        for (Eigen::Index j = 0; j < exact.cols(); ++j) {
            EXPECT_LE(std::abs(est.mean(i, j).real() - exact(i, j).real()), 3.0 * est.std_err_re(i, j) + floor);
            EXPECT_LE(std::abs(est.mean(i, j).imag() - exact(i, j).imag()), 3.0 * est.std_err_im(i, j) + floor);
        }
    }
}

TEST(MonteCarloTest, ScalarMatchesMatrixEstimate) {
    const PermutationModel m = default_model(5);
    const McEstimate est = mc_k_estimate(m, 5, 300, 9);
    const McScalar s = mc_matrix_element(m, 5, LocalProduct{}, LocalProduct{}, 300, 9);
    EXPECT_NEAR(std::abs(s.mean - (total_density(m.state()) * est.mean).trace()), 0.0, 1e-13);
}

TEST(PhiGTest, ProductLimit) {
    const PermutationModel m = default_model(4);
    const PhiGCheck one = phi_g_product_check(m, LocalProduct{});
    EXPECT_NEAR(std::abs(one.value - 1.0), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(one.target - 1.0), 0.0, 0.0);
    EXPECT_NEAR(one.norm_sq, 0.933013, 5e-7);
    EXPECT_NEAR(one.norm_sq_target, kScalar * kScalar, 1e-15);
    EXPECT_LE(one.norm_dev, 1e-14);

    const PhiGCheck e11 = phi_g_product_check(m, Site(0, matrix_unit(2, 0, 0)));
    EXPECT_NEAR(std::abs(e11.target - 0.5), 0.0, 1e-15);
    EXPECT_LE(e11.value_dev, 1e-14);

    std::mt19937_64 rng(21);
    LocalProduct a;
    a.factors.emplace(0, RandomMatrix(2, rng));
    a.factors.emplace(1, RandomMatrix(2, rng));
    const PhiGCheck r = phi_g_product_check(m, a);
    const Complex oracle = 0.5 * a.factors.at(0).trace() * 0.5 * a.factors.at(1).trace();
    EXPECT_NEAR(std::abs(r.target - oracle), 0.0, 1e-14);
    EXPECT_LE(r.value_dev, 1e-12);
}

}  // namespace
}  // namespace qistate

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

#include "qistate/linalg.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qistate/error.hpp"
#include "test_util.hpp"

namespace qistate {
namespace {

using testing::NaiveKron;
using testing::RandomMatrix;

TEST(PsdSqrtTest, IdentityIsFixed) { EXPECT_MATRIX_NEAR(psd_sqrt(identity(2)), identity(2), 1e-15); }

TEST(PsdSqrtTest, RotationDerivativeRoot) {
    EXPECT_MATRIX_NEAR(psd_sqrt(diag({0.25, 4.0})), diag({0.5, 2.0}), 1e-15);
}

TEST(PsdSqrtTest, SquaresBackOnRandomGram) {
    std::mt19937_64 rng(7);
    for (Eigen::Index n : {1, 4, 16, 64, 128}) {
        const ComplexMatrix a = RandomMatrix(n, rng);
        const ComplexMatrix m = a.adjoint() * a;
        const ComplexMatrix s = psd_sqrt(m);
        EXPECT_LE((s * s - m).norm() / m.norm(), 1e-10) << "n = " << n;
        EXPECT_LE(hermitian_deviation(s), 1e-12);
        EXPECT_GE(min_eigenvalue(s), -1e-10);
    }
}

TEST(PsdSqrtTest, ClampsRoundoffNegatives) {
    const ComplexMatrix s = psd_sqrt(diag({1.0, -1e-14}));
    EXPECT_EQ(s(1, 1), Complex(0.0, 0.0));
}

TEST(PsdSqrtTest, RejectsNegativeEigenvalue) {
    try {
        psd_sqrt(diag({1.0, -0.5}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NegativeEigenvalue);
    }
}

TEST(PsdSqrtTest, RejectsNonHermitian) {
    ComplexMatrix m = identity(2);
    m(0, 1) = 0.5;
    try {
        psd_sqrt(m);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotHermitian);
    }
}

TEST(KronTest, IdentityTimesIdentity) { EXPECT_MATRIX_NEAR(kron(identity(2), identity(2)), identity(4), 0.0); }

TEST(KronTest, DiagonalIndexFormula) {
    EXPECT_MATRIX_NEAR(kron(diag({2.0 / 3.0, 2.0}), diag({1.5, 0.5})), diag({1.0, 1.0 / 3.0, 3.0, 1.0}), 1e-15);
}

TEST(KronTest, ProjectorEmbedding) {
    EXPECT_MATRIX_NEAR(kron(matrix_unit(2, 0, 0), identity(2)), diag({1.0, 1.0, 0.0, 0.0}), 0.0);
}

TEST(KronTest, MatchesIndexFormulaOnRectangles) {
    std::mt19937_64 rng(11);
    const ComplexMatrix a = RandomMatrix(3, rng).leftCols(2);
    const ComplexMatrix b = RandomMatrix(2, rng);
    EXPECT_MATRIX_NEAR(kron(a, b), NaiveKron(a, b), 0.0);
}

TEST(KronTest, MixedProductAndAssociativity) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix a = RandomMatrix(2, rng), b = RandomMatrix(2, rng);
        const ComplexMatrix c = RandomMatrix(2, rng), d = RandomMatrix(2, rng);
        EXPECT_MATRIX_NEAR(kron(a, b) * kron(c, d), kron(a * c, b * d), 1e-12);
        EXPECT_MATRIX_NEAR(kron(kron(a, b), c), kron(a, kron(b, c)), 1e-12);
        EXPECT_MATRIX_NEAR(kron(a + c, b), kron(a, b) + kron(c, b), 1e-12);
    }
}

TEST(KronTest, OverflowIsReported) {
    try {
        kron(identity(64), identity(128), 4096);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DimensionOverflow);
    }
}

TEST(MinSingularValueTest, Examples) {
    EXPECT_DOUBLE_EQ(min_singular_value(identity(3)), 1.0);
    EXPECT_NEAR(min_singular_value(diag({0.75, 1.5})), 0.75, 1e-15);
    EXPECT_EQ(min_singular_value(zero(2)), 0.0);
}

TEST(MinSingularValueTest, NonSquareRejected) {
    try {
        min_singular_value(ComplexMatrix::Zero(2, 3));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NonSquare);
    }
}

TEST(InverseTest, Diagonal) {
    EXPECT_MATRIX_NEAR(inverse(diag({2.0, 4.0})), diag({0.5, 0.25}), 1e-15);
    const ComplexMatrix k = diag({0.75, 1.5});
    const ComplexMatrix ki = inverse(k);
    EXPECT_MATRIX_NEAR(ki, diag({4.0 / 3.0, 2.0 / 3.0}), 1e-15);
    EXPECT_MATRIX_NEAR(k * ki, identity(2), 1e-15);
}

TEST(InverseTest, RankDeficientIsSingular) {
    ComplexMatrix m(2, 2);
    m << 1.0, 2.0, 2.0, 4.0;
    try {
        inverse(m);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Singular);
    }
}

TEST(InverseTest, BothSidedOnRandomInputs) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix m = RandomMatrix(6, rng) + 6.0 * identity(6);
        const ComplexMatrix mi = inverse(m);
        EXPECT_MATRIX_NEAR(m * mi, identity(6), 1e-10);
        EXPECT_MATRIX_NEAR(mi * m, identity(6), 1e-10);
        const ComplexMatrix h = m.adjoint() * m;
        EXPECT_MATRIX_NEAR(h * inverse(h), identity(6), 1e-10);
    }
}

TEST(CommutatorProbeTest, DiagonalPairsAreExactlyZero) {
    const ComplexMatrix a = diag({1.0, 2.0, 3.0});
    const ComplexMatrix b = diag({4.0, 5.0, 6.0});
    const CommutatorProbe pa(a), pb(b);
    EXPECT_EQ(commutator_norm(pa, pb, 1e-10), 0.0);
}

TEST(CommutatorProbeTest, FallsBackToExactNorm) {
    ComplexMatrix a = identity(2);
    a(0, 1) = a(1, 0) = 1.0;
    const ComplexMatrix b = diag({1.0, -1.0});
    const CommutatorProbe pa(a), pb(b);
    EXPECT_NEAR(commutator_norm(pa, pb, 1e-10), (a * b - b * a).norm(), 1e-15);
}

}  // namespace
}  // namespace qistate

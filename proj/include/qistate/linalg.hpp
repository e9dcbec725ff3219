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

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace qistate {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Largest Kronecker product (rows or cols) that kron() will materialize.
inline constexpr Eigen::Index kDefaultMaxKronDim = 4096;
/// Eigenvalues above -kDefaultClampTol are treated as round-off and clamped.
inline constexpr double kDefaultClampTol = 1e-12;

ComplexMatrix identity(Eigen::Index n);
ComplexMatrix zero(Eigen::Index n);
ComplexMatrix diag(const std::vector<Complex>& entries);
ComplexMatrix diag(std::initializer_list<double> entries);
/// e_{ij}: 1 at (i, j), 0 elsewhere.
ComplexMatrix matrix_unit(Eigen::Index n, Eigen::Index i, Eigen::Index j);

double max_abs(const ComplexMatrix& m);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
/// max |M[i,j] - conj(M[j,i])|; throws NonSquare for rectangular input.
double hermitian_deviation(const ComplexMatrix& m);
double commutator_norm(const ComplexMatrix& a, const ComplexMatrix& b);

/// Frobenius data of a matrix split into diagonal and off-diagonal parts,
/// used to bound commutators of (nearly) diagonal matrices without forming
/// the products.
struct CommutatorProbe {
    const ComplexMatrix* m = nullptr;
    double frobenius = 0.0;
    double off_diagonal = 0.0;

    explicit CommutatorProbe(const ComplexMatrix& matrix);
};

/// Returns an upper bound on ‖[a, b]‖_F that is exact whenever the cheap
/// bound 2(‖a‖‖E_b‖ + ‖E_a‖‖b‖ + ‖E_a‖‖E_b‖) (E = off-diagonal part)
/// exceeds `cheap_below`.
double commutator_norm(const CommutatorProbe& a, const CommutatorProbe& b, double cheap_below);

/// Spectral decomposition of a Hermitian matrix (input symmetrized first).
struct HermitianEigen {
    RealVector values;        // ascending
    ComplexMatrix vectors;    // columns are eigenvectors
};
HermitianEigen hermitian_eigen(const ComplexMatrix& m, double herm_tol);

/// Square root of a positive semidefinite Hermitian matrix. Eigenvalues in
/// [-tol, 0) are clamped to zero; anything below -tol is NegativeEigenvalue.
ComplexMatrix psd_sqrt(const ComplexMatrix& m, double tol = kDefaultClampTol);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b,
                   Eigen::Index max_dim = kDefaultMaxKronDim);

double min_singular_value(const ComplexMatrix& m);
/// Largest singular value.
double operator_norm(const ComplexMatrix& m);
double min_eigenvalue(const ComplexMatrix& hermitian);

/// Inverse with an invertibility certificate: Singular unless
/// min_singular_value(m) > tol. Hermitian inputs go through the spectrum.
ComplexMatrix inverse(const ComplexMatrix& m, double tol = kDefaultClampTol);

}  // namespace qistate

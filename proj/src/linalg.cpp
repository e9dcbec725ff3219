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

#include <algorithm>
#include <cmath>
#include <string>

#include "qistate/error.hpp"

namespace qistate {

namespace {

void require_square(const ComplexMatrix& m, const char* what) {
    if (m.rows() != m.cols()) {
        throw Error(ErrorKind::NonSquare, std::string(what) + ": " + std::to_string(m.rows()) + "x" +
                                              std::to_string(m.cols()));
    }
}

}  // namespace

ComplexMatrix identity(Eigen::Index n) { return ComplexMatrix::Identity(n, n); }

ComplexMatrix zero(Eigen::Index n) { return ComplexMatrix::Zero(n, n); }

ComplexMatrix diag(const std::vector<Complex>& entries) {
    const auto n = static_cast<Eigen::Index>(entries.size());
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) m(i, i) = entries[static_cast<std::size_t>(i)];
    return m;
}

ComplexMatrix diag(std::initializer_list<double> entries) {
    std::vector<Complex> c(entries.begin(), entries.end());
    return diag(c);
}

ComplexMatrix matrix_unit(Eigen::Index n, Eigen::Index i, Eigen::Index j) {
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    m(i, j) = 1.0;
    return m;
}

double max_abs(const ComplexMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "max_abs_diff");
    }
    return max_abs(a - b);
}

double hermitian_deviation(const ComplexMatrix& m) {
    require_square(m, "hermitian_deviation");
    return max_abs(m - m.adjoint());
}

double commutator_norm(const ComplexMatrix& a, const ComplexMatrix& b) {
    return (a * b - b * a).norm();
}

CommutatorProbe::CommutatorProbe(const ComplexMatrix& matrix)
    : m(&matrix), frobenius(matrix.norm()) {
    double off = 0.0;
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
        for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
            if (i != j) off += std::norm(matrix(i, j));
        }
    }
    off_diagonal = std::sqrt(off);
}

double commutator_norm(const CommutatorProbe& a, const CommutatorProbe& b, double cheap_below) {
    const double bound = 2.0 * (a.frobenius * b.off_diagonal + a.off_diagonal * b.frobenius +
                                a.off_diagonal * b.off_diagonal);
    if (bound <= cheap_below) return bound;
    return commutator_norm(*a.m, *b.m);
}

HermitianEigen hermitian_eigen(const ComplexMatrix& m, double herm_tol) {
    require_square(m, "hermitian_eigen");
    const double dev = hermitian_deviation(m);
    if (dev > herm_tol * std::max(1.0, max_abs(m))) {
        throw Error(ErrorKind::NotHermitian, "deviation " + std::to_string(dev));
    }
    const ComplexMatrix sym = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
    return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m, double tol) {
    auto [values, vectors] = hermitian_eigen(m, tol);
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (values(i) < -tol) {
            throw Error(ErrorKind::NegativeEigenvalue, "eigenvalue " + std::to_string(values(i)));
        }
        values(i) = values(i) > 0.0 ? std::sqrt(values(i)) : 0.0;
    }
    ComplexMatrix s = vectors * values.cast<Complex>().asDiagonal() * vectors.adjoint();
    return 0.5 * (s + s.adjoint());
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b, Eigen::Index max_dim) {
    const Eigen::Index rows = a.rows() * b.rows();
    const Eigen::Index cols = a.cols() * b.cols();
    if (rows > max_dim || cols > max_dim) {
        throw Error(ErrorKind::DimensionOverflow,
                    "kron result " + std::to_string(rows) + "x" + std::to_string(cols) +
                        " exceeds " + std::to_string(max_dim));
    }
    ComplexMatrix out(rows, cols);
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

double min_singular_value(const ComplexMatrix& m) {
    require_square(m, "min_singular_value");
    if (m.size() == 0) return 0.0;
    Eigen::BDCSVD<ComplexMatrix> svd(m);
    return svd.singularValues().minCoeff();
}

double operator_norm(const ComplexMatrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::BDCSVD<ComplexMatrix> svd(m);
    return svd.singularValues().maxCoeff();
}

double min_eigenvalue(const ComplexMatrix& hermitian) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (hermitian + hermitian.adjoint()),
                                                        Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(0);
}

ComplexMatrix inverse(const ComplexMatrix& m, double tol) {
    const double smin = min_singular_value(m);
    if (!(smin > tol)) {
        throw Error(ErrorKind::Singular, "min singular value " + std::to_string(smin));
    }
    if (hermitian_deviation(m) <= tol * std::max(1.0, max_abs(m))) {
        auto [values, vectors] = hermitian_eigen(m, tol);
        RealVector inv = values.cwiseInverse();
        ComplexMatrix r = vectors * inv.cast<Complex>().asDiagonal() * vectors.adjoint();
        return 0.5 * (r + r.adjoint());
    }
    return m.partialPivLu().inverse();
}

}  // namespace qistate

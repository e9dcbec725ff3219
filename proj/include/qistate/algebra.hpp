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
#include <map>
#include <vector>

#include "qistate/linalg.hpp"

namespace qistate {

/// B(C^d)^{⊗L}: the first L sites of the infinite tensor product. Every
/// observable handed to the library must be supported on sites < L.
class TensorAlgebra {
public:
    static constexpr Eigen::Index kDefaultMaxDim = 256;

    TensorAlgebra(int site_dim, int num_sites, Eigen::Index max_dim = kDefaultMaxDim);

    int site_dim() const { return site_dim_; }
    int num_sites() const { return num_sites_; }
    Eigen::Index total_dim() const { return total_dim_; }

    friend bool operator==(const TensorAlgebra& a, const TensorAlgebra& b) {
        return a.site_dim_ == b.site_dim_ && a.num_sites_ == b.num_sites_;
    }

private:
    int site_dim_;
    int num_sites_;
    Eigen::Index total_dim_;
};

/// An element of a TensorAlgebra, stored densely.
struct AlgebraElement {
    TensorAlgebra algebra;
    ComplexMatrix matrix;

    AlgebraElement(TensorAlgebra alg, ComplexMatrix m);

    static AlgebraElement identity(const TensorAlgebra& alg);

    AlgebraElement adjoint() const { return {algebra, matrix.adjoint()}; }
    AlgebraElement operator*(const AlgebraElement& o) const;
    AlgebraElement operator+(const AlgebraElement& o) const;
    AlgebraElement operator-(const AlgebraElement& o) const;
    AlgebraElement operator*(Complex s) const { return {algebra, s * matrix}; }
};

/// j_n(b): b placed on site n, identity elsewhere.
AlgebraElement embed_site(const ComplexMatrix& b, int site, const TensorAlgebra& alg);

/// Elementary tensor ∏_n j_n(b_n); sites absent from the map carry 1.
struct LocalProduct {
    std::map<int, ComplexMatrix> factors;

    const ComplexMatrix* factor(int site) const;
    /// Largest site carrying a factor, or -1 when the product is the identity.
    int max_site() const;
    AlgebraElement to_element(const TensorAlgebra& alg) const;
};

/// φ = ⊗_n tr(W_n ·) restricted to L sites, with W_n = W off the special set F.
///
/// Construction enforces: every W_n Hermitian, trace one, strictly positive;
/// pairwise commuting within kCommuteTol; 1/C ≤ ‖W_n‖ ≤ C with C > 1.
class ProductState {
public:
    static constexpr double kCommuteTol = 1e-12;

    ProductState(TensorAlgebra alg, ComplexMatrix tail_density,
                 std::map<int, ComplexMatrix> special_sites, double bound_c);

    /// Tracial product state 1/d on every site.
    static ProductState tracial(const TensorAlgebra& alg);

    const TensorAlgebra& algebra() const { return algebra_; }
    const ComplexMatrix& tail_density() const { return tail_; }
    const std::map<int, ComplexMatrix>& special_sites() const { return special_; }
    double bound_c() const { return bound_c_; }
    /// W_n for 0 ≤ n < L.
    const ComplexMatrix& density(int site) const;
    const std::vector<ComplexMatrix>& densities() const { return densities_; }
    /// ρ = W_0 ⊗ ... ⊗ W_{L-1}, cached at construction.
    const ComplexMatrix& total_density() const { return total_; }

private:
    TensorAlgebra algebra_;
    ComplexMatrix tail_;
    std::map<int, ComplexMatrix> special_;
    double bound_c_;
    std::vector<ComplexMatrix> densities_;
    ComplexMatrix total_;
};

ComplexMatrix total_density(const ProductState& phi);

/// tr(ρ a).
Complex state_eval(const ProductState& phi, const AlgebraElement& a);
/// ∏_n tr(W_n b_n), the product formula on elementary tensors.
Complex state_eval(const ProductState& phi, const LocalProduct& a);

}  // namespace qistate

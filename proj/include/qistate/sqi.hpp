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
#include <optional>
#include <string>
#include <vector>

#include "qistate/algebra.hpp"
#include "qistate/group.hpp"

namespace qistate {

struct SqiTolerances {
    double exact = 1e-10;       // defining identity, self-adjointness, centralizer
    double positivity = 1e-12;  // x_g must have min eigenvalue above this
    double cocycle = 1e-9;
};

/// Largest algebra dimension for which the defining identity is checked on
/// every matrix unit; above it a fixed pseudo-random subset is used.
inline constexpr Eigen::Index kExhaustiveUnitCheckDim = 32;

/// Per-element verification record for one x_g.
struct DerivativeChecks {
    double self_adjoint = 0.0;       // max |x - x*|
    double min_eigenvalue = 0.0;
    double defining_identity = 0.0;  // max |φ(g(e_kl)) - φ(x e_kl)|
};

/// x_g = ρ^{-1} g^{-1}(ρ), returned only when it is self-adjoint, strictly
/// positive and satisfies φ(g(a)) = φ(x_g a) on matrix units.
AlgebraElement solve_rn_derivative(const ProductState& phi, const Automorphism& g,
                                   const SqiTolerances& tol = {}, DerivativeChecks* checks = nullptr);

/// Closed form x_σ = ∏_{n∈Λ_σ} j_n(W_{σ(n)} W_n^{-1}) as an elementary tensor.
LocalProduct perm_model_rn_factors(const ProductState& phi, const Permutation& sigma);
AlgebraElement perm_model_rn(const ProductState& phi, const Permutation& sigma);

/// ρ = diag(e^β, 1) / (1 + e^β) on a single 2x2 site (bound C = 2), the
/// state of the rotation example.
ProductState rotation_example_state(double beta);

/// g ↦ x_g over a finite group, with cached square roots x_g^{1/2}.
class RnCocycle {
public:
    enum class Route { Solve, PermutationClosedForm };

    /// Route::Solve runs solve_rn_derivative per element. The closed-form
    /// route is for permutation groups only; its derivatives still pass the
    /// self-adjoint/positivity/defining-identity checks.
    static RnCocycle build(const ProductState& phi, const FiniteAutomorphismGroup& group,
                           Route route = Route::Solve, const SqiTolerances& tol = {});

    /// Restriction to a subgroup given by its indices in this cocycle's group.
    RnCocycle restrict_to(const FiniteAutomorphismGroup& subgroup, const std::vector<std::size_t>& indices) const;

    const std::string& group_label() const { return group_label_; }
    std::size_t size() const { return x_.size(); }
    const TensorAlgebra& algebra() const { return algebra_; }
    bool has(std::size_t g) const { return g < x_.size(); }
    /// Throws MissingDerivative for unknown indices.
    const ComplexMatrix& x(std::size_t g) const;
    const ComplexMatrix& sqrt_x(std::size_t g) const;
    const DerivativeChecks& checks(std::size_t g) const { return checks_.at(g); }

private:
    RnCocycle(TensorAlgebra alg) : algebra_(alg) {}

    TensorAlgebra algebra_;
    std::string group_label_;
    std::vector<ComplexMatrix> x_;
    std::vector<ComplexMatrix> sqrt_x_;
    std::vector<DerivativeChecks> checks_;
};

struct CocycleReport {
    std::string group;
    double defining_identity = 0.0;
    double self_adjoint = 0.0;
    double positivity = 0.0;  // min eigenvalue over all x_g
    double cocycle = 0.0;     // max ‖x_g^{-1} - g^{-1}(x_{g^{-1}})‖_F
    double centralizer = 0.0; // max |φ(x_g a) - φ(a x_g)| over matrix units a
    double commutator = 0.0;  // max ‖[x_g, x_h]‖_F
    bool pass = false;
};

/// max_g ‖x_g^{-1} - g^{-1}(x_{g^{-1}})‖_F.
double verify_cocycle_identity(const RnCocycle& c, const FiniteAutomorphismGroup& group);
/// max over g and matrix units e_kl of |φ(x_g e_kl) - φ(e_kl x_g)|.
double verify_centralizer(const ProductState& phi, const RnCocycle& c);
/// max over pairs ‖[x_g, x_h]‖_F.
double max_pairwise_commutator(const RnCocycle& c);

CocycleReport verify_cocycle(const ProductState& phi, const FiniteAutomorphismGroup& group, const RnCocycle& c,
                             const SqiTolerances& tol = {});

}  // namespace qistate

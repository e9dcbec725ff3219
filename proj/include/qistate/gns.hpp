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
#include <functional>
#include <variant>
#include <vector>

#include "qistate/algebra.hpp"
#include "qistate/group.hpp"
#include "qistate/sqi.hpp"

namespace qistate {

/// Dense operators on H are only materialized up to this Hilbert dimension.
/// The QISTATE_MAX_DENSE environment variable overrides it.
inline constexpr Eigen::Index kDefaultMaxDenseDim = 4096;
Eigen::Index max_dense_dim();

/// A vector of the GNS space, stored as the algebra element a whose class it
/// is (Φ is the identity).
struct GnsVector {
    ComplexMatrix element;

    GnsVector operator+(const GnsVector& o) const { return {element + o.element}; }
    GnsVector operator-(const GnsVector& o) const { return {element - o.element}; }
    GnsVector operator*(Complex s) const { return {s * element}; }
    GnsVector& operator+=(const GnsVector& o) {
        element += o.element;
        return *this;
    }
};

/// H = A with ⟨a, b⟩ = tr(ρ a* b). Coordinates a ↦ a ρ^{1/2} (row-major
/// flattened) turn H into C^{D²} with the Euclidean inner product.
class GnsSpace {
public:
    explicit GnsSpace(const ProductState& phi);

    const TensorAlgebra& algebra() const { return algebra_; }
    const ComplexMatrix& rho() const { return rho_; }
    const ComplexMatrix& rho_sqrt() const { return rho_sqrt_; }
    const ComplexMatrix& rho_sqrt_inv() const { return rho_sqrt_inv_; }
    Eigen::Index hilbert_dim() const { return algebra_.total_dim() * algebra_.total_dim(); }

    GnsVector cyclic_vector() const;
    Complex inner(const GnsVector& a, const GnsVector& b) const;
    double norm(const GnsVector& a) const;
    ComplexVector coordinates(const GnsVector& a) const;
    GnsVector from_coordinates(const ComplexVector& y) const;

private:
    TensorAlgebra algebra_;
    ComplexMatrix rho_;
    ComplexMatrix rho_sqrt_;
    ComplexMatrix rho_sqrt_inv_;
};

/// π(a): b ↦ a b.
struct LeftMult {
    ComplexMatrix a;
};
/// U_g: b ↦ g(b) x_{g^{-1}}^{1/2}.
struct UnitaryU {
    Automorphism g;
    ComplexMatrix sqrt_x_ginv;
};
/// A materialized operator in GNS coordinates.
struct DenseOperator {
    ComplexMatrix m;
};
/// Matrix-free uniform average of unitaries (P_G when too large to densify).
struct UnitaryAverage {
    std::vector<UnitaryU> terms;
};

class GnsOperator {
public:
    using Kind = std::variant<LeftMult, UnitaryU, DenseOperator, UnitaryAverage>;

    GnsOperator(Kind kind) : kind_(std::move(kind)) {}

    const Kind& kind() const { return kind_; }
    GnsVector apply(const GnsSpace& space, const GnsVector& v) const;

private:
    Kind kind_;
};

/// Materializes op in GNS coordinates; DenseCapExceeded above max_dense_dim().
ComplexMatrix to_dense(const GnsSpace& space, const GnsOperator& op);
/// π(a) in GNS coordinates: kron(a, 1).
ComplexMatrix left_mult_dense(const GnsSpace& space, const ComplexMatrix& a);

GnsOperator unitary_u(const GnsSpace& space, const FiniteAutomorphismGroup& group, const RnCocycle& cocycle,
                      std::size_t g);
std::vector<ComplexMatrix> dense_unitaries(const GnsSpace& space, const FiniteAutomorphismGroup& group,
                                           const RnCocycle& cocycle);

/// P_G = Σ_g U_g / |G|: dense when the space fits, a matrix-free average
/// otherwise (or when dense is false).
GnsOperator projection_p(const GnsSpace& space, const FiniteAutomorphismGroup& group, const RnCocycle& cocycle,
                         bool dense = true);

struct KOperator {
    ComplexMatrix k;          // Σ_g x_g^{1/2} / |G|
    double min_singular = 0;  // certifies a bounded inverse when > tolerance
    bool invertible = false;

    GnsOperator op() const { return GnsOperator(LeftMult{k}); }
};
KOperator k_operator(const GnsSpace& space, const FiniteAutomorphismGroup& group, const RnCocycle& cocycle,
                     double tol = 1e-10);

/// Φ_G = K_G Φ, cross-checked against P_G Φ and against U_g Φ_G = Φ_G.
/// ConsistencyFailure when either check exceeds tol.
GnsVector phi_g_vector(const GnsSpace& space, const FiniteAutomorphismGroup& group, const RnCocycle& cocycle,
                       double tol = 1e-10);

/// ψ_G(x) = ⟨Φ_G, x Φ_G⟩ / ‖Φ_G‖²; HypothesisHViolated when ‖Φ_G‖ ≤ tol.
Complex psi_state(const GnsSpace& space, const GnsVector& phi_g, const GnsOperator& x, double tol = 1e-10);
Complex psi_state(const GnsSpace& space, const GnsVector& phi_g, const ComplexMatrix& a, double tol = 1e-10);

/// P_G(H) versus Fix_G(H), computed independently as the kernel of
/// Σ_g (U_g - 1)*(U_g - 1).
struct RangeCheck {
    Eigen::Index fixed_dim = 0;
    Eigen::Index projection_rank = 0;
    double range_fixed = 0.0;       // max_g,ξ ‖U_g P ξ - P ξ‖
    double fixed_reproduced = 0.0;  // max over a fixed-space basis ‖P v - v‖
};
RangeCheck check_projection_range(const std::vector<ComplexMatrix>& unitaries, const ComplexMatrix& p);

/// U_g U_h = U_{gh} on the matrix-unit basis (GNS norm) and unitarity of
/// each dense U_g.
struct RepresentationCheck {
    double homomorphism = 0.0;
    double unitarity = 0.0;  // max_g max|U_g* U_g - 1|
};
RepresentationCheck check_representation(const GnsSpace& space, const FiniteAutomorphismGroup& group,
                                         const RnCocycle& cocycle);

/// max over chain levels M ≤ N of max|P_N P_M - P_N| and max|P_M P_N - P_N|.
/// top is the cocycle of the chain's top group.
double projection_chain_deviation(const GnsSpace& space, const GroupChain& chain, const RnCocycle& top);

struct HypothesisLevel {
    int n = 0;
    std::size_t group_order = 0;
    double phi_norm_sq = 0.0;  // avg_{g,h} φ((x_g x_h)^{1/2})
    double eps0 = 0.0;         // min over witness pairs
    double delta0 = 0.0;       // witness measure
    double lower_bound = 0.0;  // eps0 * delta0²
    double k_min_sv = 0.0;
    double cauchy_increment = 0.0;  // ‖Φ_N - Φ_{N-1}‖, Φ_0 = Φ
};

struct HypothesisReport {
    std::vector<HypothesisLevel> levels;
    bool holds = false;
};

/// Selects the witness set A_N inside each level; the whole group if empty.
using WitnessPredicate = std::function<bool(const Automorphism&)>;

/// Per-level (H) diagnostics along a chain. top is the cocycle of the
/// chain's top group. NonCommutingCocycle if some ‖[x_g, x_h]‖_F > tol.
HypothesisReport hypothesis_h_report(const GnsSpace& space, const GroupChain& chain, const RnCocycle& top,
                                     const WitnessPredicate& witness = {}, double tol = 1e-10);

}  // namespace qistate

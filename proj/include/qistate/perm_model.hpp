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
#include <vector>

#include "qistate/algebra.hpp"
#include "qistate/group.hpp"

namespace qistate {

/// Product state on L sites with special sites F ⊆ {0..m0} and tail W.
class PermutationModel {
public:
    /// m0 < 0 selects max(F), or 0 when F is empty. InvalidRange if F is not
    /// inside {0..m0} or m0 ≥ L.
    explicit PermutationModel(ProductState state, int m0 = -1);

    const ProductState& state() const { return state_; }
    const TensorAlgebra& algebra() const { return state_.algebra(); }
    int num_sites() const { return state_.algebra().num_sites(); }
    int m0() const { return m0_; }
    std::vector<int> special_sites() const;

    /// (W_m W_n^{-1})^{1/2}: the factor of x_σ^{1/2} at site n when σ(n) = m.
    const ComplexMatrix& site_root(int m, int n) const;

private:
    ProductState state_;
    int m0_;
    std::vector<ComplexMatrix> roots_;  // roots_[m * L + n]
};

/// d = 2, F = {0}, W₀ = diag(3/4, 1/4), W = 1/2, C = 2.
PermutationModel default_model(int num_sites = 7);

/// ∏_{n∈F} tr(W_n^{1/2} W^{1/2}).
double k_limit_scalar(const PermutationModel& model);
/// The weak limit K_G = scalar · ∏_{n∈F} j_n((W W_n^{-1})^{1/2}).
AlgebraElement k_limit_closed_form(const PermutationModel& model);

/// All permutations of sites 0..n-1 (identity on the rest), lexicographic.
std::vector<Permutation> enumerate_symmetric(int n, int num_sites,
                                             std::size_t max_enumeration = FiniteAutomorphismGroup::kDefaultMaxOrder);

/// x_σ^{1/2} as a dense matrix, from per-site roots.
ComplexMatrix sqrt_rn_dense(const PermutationModel& model, const Permutation& sigma);

/// K_N = Σ_{σ∈S_N} x_σ^{1/2} / N! by exact enumeration.
ComplexMatrix exact_k(const PermutationModel& model, int n,
                      std::size_t max_enumeration = FiniteAutomorphismGroup::kDefaultMaxOrder);

/// tr(ρ a* K b) for K = K_N (averaged over perms) on product observables,
/// evaluated site by site: avg_σ ∏_n tr(W_n a_n* s_{σ(n),n} b_n).
Complex k_matrix_element(const PermutationModel& model, const std::vector<Permutation>& perms,
                         const LocalProduct& a, const LocalProduct& b);
/// The same with K = K_G.
Complex k_limit_matrix_element(const PermutationModel& model, const LocalProduct& a, const LocalProduct& b);

/// Constants of the weak-limit error bound for observables a, b:
/// m0 = max(F ∪ supp a ∪ supp b), k0 = max support site + 1,
/// M = max site operator norm (at least 1), scale = C^{4|F|} M^{2 k0}.
struct BoundParams {
    int m0 = 0;
    int k0 = 0;
    double m_norm = 1.0;
    double scale = 1.0;
};
BoundParams bound_params(const PermutationModel& model, const LocalProduct& a, const LocalProduct& b);
/// f_N = outer_fraction(N, m0), or 0 when N ≤ m0.
double outer_fraction_or_zero(int n, int m0);
/// (1 - f_N) · scale.
double convergence_bound(const BoundParams& p, int n);

struct ConvergenceRecord {
    int n = 0;
    double f_outer = 0.0;
    Complex matrix_element;
    Complex target;
    double abs_err = 0.0;
    double bound = 0.0;
};

struct ConvergenceResult {
    std::vector<ConvergenceRecord> records;
    BoundParams params;
    bool within_bound = false;  // abs_err ≤ bound + 1e-9 everywhere
    bool decreasing = false;    // last error below the first (or both at rounding level)
};

/// ⟨π(a)Φ, K_N π(b)Φ⟩ against ⟨π(a)Φ, K_G π(b)Φ⟩ for N in [n_lo, n_hi],
/// with bound (1 - f_N) C^{4|F|} M^{2 k0}, m0 = max(F ∪ supp a ∪ supp b).
ConvergenceResult convergence_experiment(const PermutationModel& model, const LocalProduct& a,
                                         const LocalProduct& b, int n_lo, int n_hi,
                                         std::size_t max_enumeration = FiniteAutomorphismGroup::kDefaultMaxOrder);

struct McEstimate {
    std::size_t samples = 0;
    ComplexMatrix mean;
    Eigen::MatrixXd std_err_re;  // sqrt(sample variance / samples)
    Eigen::MatrixXd std_err_im;
    Eigen::MatrixXd ci95_re;  // half widths, 1.96 standard errors
    Eigen::MatrixXd ci95_im;
};

/// Entrywise Welford mean and variance of x_σ^{1/2} over the given perms.
McEstimate welford_estimate(const PermutationModel& model, const std::vector<Permutation>& perms);
/// Welford estimate over `samples` uniform draws from S_n (seeded).
McEstimate mc_k_estimate(const PermutationModel& model, int n, std::size_t samples, std::uint64_t seed);

struct McScalar {
    std::size_t samples = 0;
    Complex mean;
    double ci95_re = 0.0;
    double ci95_im = 0.0;
};

/// Seeded Monte Carlo estimate of ⟨π(a)Φ, K_n π(b)Φ⟩; the draws match
/// mc_k_estimate for the same (n, samples, seed).
McScalar mc_matrix_element(const PermutationModel& model, int n, const LocalProduct& a, const LocalProduct& b,
                           std::size_t samples, std::uint64_t seed);

struct PhiGCheck {
    Complex value;          // ψ_G(π(a)) with Φ_G = K_G Φ
    Complex target;         // ∏_n tr(W a_n)
    double norm_sq = 0.0;   // ‖K_G Φ‖²
    double norm_sq_target = 0.0;
    double value_dev = 0.0;
    double norm_dev = 0.0;
};

/// φ_G = ⊗ tr(W ·) on elementary tensors, via the closed-form Φ_G.
PhiGCheck phi_g_product_check(const PermutationModel& model, const LocalProduct& a);

}  // namespace qistate

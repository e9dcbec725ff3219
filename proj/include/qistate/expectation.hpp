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
#include "qistate/gns.hpp"
#include "qistate/group.hpp"
#include "qistate/sqi.hpp"

namespace qistate {

enum class ExpectationMode {
    AlgebraLevel,  // a ↦ Σ_g g(a) / |G|
    GnsLevel,      // X ↦ Σ_g U_g X U_g* / |G| on dense GNS operators
};

/// E = Σ_g u_g / |G| onto the fixed-point algebra of a finite group.
class ConditionalExpectation {
public:
    /// Algebra-level expectation.
    ConditionalExpectation(const FiniteAutomorphismGroup& group, const TensorAlgebra& alg);
    /// GNS-level expectation; materializes every U_g (DenseCapExceeded if too big).
    ConditionalExpectation(const GnsSpace& space, const FiniteAutomorphismGroup& group, const RnCocycle& cocycle);

    ExpectationMode mode() const { return mode_; }
    const TensorAlgebra& algebra() const { return algebra_; }
    std::size_t group_order() const { return elements_.size(); }

    AlgebraElement operator()(const AlgebraElement& a) const;
    ComplexMatrix operator()(const ComplexMatrix& a) const;
    GnsOperator operator()(const GnsOperator& x, const GnsSpace& space) const;

    /// max_g ‖u_g(a) - a‖ (operator norm): how far a is from the fixed algebra.
    double fixed_deviation(const ComplexMatrix& a) const;

private:
    ExpectationMode mode_;
    TensorAlgebra algebra_;
    std::vector<Automorphism> elements_;
    std::vector<ComplexMatrix> unitaries_;  // GNS level only
};

AlgebraElement expect(const ConditionalExpectation& e, const AlgebraElement& a);
GnsOperator expect(const ConditionalExpectation& e, const GnsOperator& x, const GnsSpace& space);

struct UmegakiReport {
    double module_property = 0.0;  // ‖E(y x y') - y E(x) y'‖
    double psi_invariance = 0.0;   // |ψ(E(x)) - ψ(x)|
    double idempotence = 0.0;      // ‖E(E(x)) - E(x)‖
    double contractivity = 0.0;    // max(‖E(x)‖ - ‖x‖, 0)
    double positivity = 0.0;       // max(-λ_min(E(x* x)), 0)
    std::size_t samples = 0;
    bool pass = false;
};

/// Random-sample check of the Umegaki properties. y, y' are E-images of
/// random elements. HypothesisHViolated when ‖Φ_G‖ ≤ tol.
UmegakiReport verify_umegaki(const ConditionalExpectation& e, const GnsSpace& space, const GnsVector& phi_g,
                             std::size_t samples, std::uint64_t seed, double pass_tol = 1e-9);

/// dim Fix(u_G) at algebra level: the trace (= rank) of the averaging
/// superoperator, Σ_g |tr V_g|² / |G| with V_g implementing g.
long fixed_subalgebra_dim(const FiniteAutomorphismGroup& group, const TensorAlgebra& alg);

/// Over the given elements and all chain levels M ≤ N: max of
/// ‖E_N(E_M(x)) - E_N(x)‖ and ‖E_M(E_N(x)) - E_N(x)‖.
double martingale_identity_deviation(const GroupChain& chain, const TensorAlgebra& alg,
                                     const std::vector<ComplexMatrix>& elements);

/// All matrix units of the algebra (a spanning basis).
std::vector<ComplexMatrix> matrix_unit_basis(const TensorAlgebra& alg);

struct MartingaleLevel {
    int n = 0;
    std::size_t group_order = 0;
    ComplexMatrix value;             // x_N = E_N(x)
    double increment = 0.0;          // ‖x_N - x_{N-1}‖, x_0 = x
    double martingale_max_dev = 0.0; // max_{M≤N} ‖E_N(x_M) - x_N‖, ‖E_M(x_N) - x_N‖
    double psi_invariance_dev = 0.0; // |ψ_G(x_N) - ψ_G(x)|
    long fixed_dim = 0;
};

struct MartingaleOptions {
    double exact = 1e-10;
    double convergence = 1e-8;
};

struct MartingaleRun {
    std::vector<MartingaleLevel> levels;
    ComplexMatrix seed;
    ComplexMatrix limit;
    bool converged = false;  // last increment ≤ options.convergence
    bool certified = false;  // K of the top group has a bounded inverse
    bool identity_holds = false;
    double limit_fixed_dev = 0.0;  // max over the top group ‖u_g(x_∞) - x_∞‖
};

/// x_N = E_N(x) along the chain, with ψ_G taken from the top level.
/// HypothesisHViolated if Φ_G vanishes; an uncertified run is still
/// computed and returned with certified = false.
MartingaleRun martingale_run(const GnsSpace& space, const GroupChain& chain, const RnCocycle& top,
                             const ComplexMatrix& x, const MartingaleOptions& options = {});

struct EInfinity {
    ComplexMatrix value;
    bool converged = false;
    double fixed_dev = 0.0;
};

/// The final-level average of a martingale run.
EInfinity e_infinity(const MartingaleRun& run);

}  // namespace qistate

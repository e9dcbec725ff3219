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

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "qistate/error.hpp"
#include "qistate/parallel.hpp"

namespace qistate {

namespace {

// Checks a candidate x_g against every requirement and records deviations.
DerivativeChecks check_derivative(const ProductState& phi, const Automorphism& g, const ComplexMatrix& x,
                                  const SqiTolerances& tol) {
    const TensorAlgebra& alg = phi.algebra();
    const ComplexMatrix& rho = phi.total_density();
    const Eigen::Index dim = alg.total_dim();
    DerivativeChecks c;
    c.self_adjoint = hermitian_deviation(x);
    if (c.self_adjoint > tol.exact) {
        throw Error(ErrorKind::NotQuasiInvariant,
                    "x_g is not self-adjoint (deviation " + std::to_string(c.self_adjoint) + ")");
    }
    c.min_eigenvalue = min_eigenvalue(x);
    if (!(c.min_eigenvalue > tol.positivity)) {
        throw Error(ErrorKind::NotQuasiInvariant,
                    "x_g is not strictly positive (min eigenvalue " + std::to_string(c.min_eigenvalue) + ")");
    }
    // φ(x e_kl) = (ρ x)_{lk}; φ(g(e_kl)) goes through apply().
    const ComplexMatrix rho_x = rho * x;
    auto check_unit = [&](Eigen::Index k, Eigen::Index l) {
        const ComplexMatrix moved = apply(g, matrix_unit(dim, k, l), alg);
        const Complex lhs = (rho.cwiseProduct(moved.transpose())).sum();
        c.defining_identity = std::max(c.defining_identity, std::abs(lhs - rho_x(l, k)));
    };
    if (dim <= kExhaustiveUnitCheckDim) {
        for (Eigen::Index k = 0; k < dim; ++k) {
            for (Eigen::Index l = 0; l < dim; ++l) check_unit(k, l);
        }
    } else {
        std::mt19937_64 rng(0x5eedULL);
        std::uniform_int_distribution<Eigen::Index> pick(0, dim - 1);
        for (Eigen::Index k = 0; k < dim; ++k) check_unit(k, k);
        for (int s = 0; s < 256; ++s) {
            const Eigen::Index k = pick(rng);
            check_unit(k, pick(rng));
        }
    }
    if (c.defining_identity > tol.exact) {
        throw Error(ErrorKind::NotQuasiInvariant,
                    "phi(g(a)) != phi(x_g a), deviation " + std::to_string(c.defining_identity));
    }
    return c;
}

ComplexMatrix inverse_density(const ProductState& phi) {
    try {
        return inverse(phi.total_density(), 0.0);
    } catch (const Error& e) {
        throw Error(ErrorKind::StateSingular, e.what());
    }
}

}  // namespace

AlgebraElement solve_rn_derivative(const ProductState& phi, const Automorphism& g, const SqiTolerances& tol,
                                   DerivativeChecks* checks) {
    const TensorAlgebra& alg = phi.algebra();
    const ComplexMatrix rho_inv = inverse_density(phi);
    ComplexMatrix x = rho_inv * apply(g.inverse(), phi.total_density(), alg);
    DerivativeChecks c = check_derivative(phi, g, x, tol);
    if (checks != nullptr) *checks = c;
    return {alg, std::move(x)};
}

ProductState rotation_example_state(double beta) {
    if (!std::isfinite(beta)) throw Error(ErrorKind::InvalidDensity, "beta must be finite");
    const double e = std::exp(beta);
    const TensorAlgebra alg(2, 1);
    return ProductState(alg, diag({e / (1.0 + e), 1.0 / (1.0 + e)}), {}, 2.0);
}

LocalProduct perm_model_rn_factors(const ProductState& phi, const Permutation& sigma) {
    if (sigma.size() != phi.algebra().num_sites()) {
        throw Error(ErrorKind::SiteOutOfRange, "permutation does not act on the truncation");
    }
    LocalProduct out;
    for (int n : sigma.support()) {
        out.factors.emplace(n, phi.density(sigma(n)) * inverse(phi.density(n)));
    }
    return out;
}

AlgebraElement perm_model_rn(const ProductState& phi, const Permutation& sigma) {
    return perm_model_rn_factors(phi, sigma).to_element(phi.algebra());
}

RnCocycle RnCocycle::build(const ProductState& phi, const FiniteAutomorphismGroup& group, Route route,
                           const SqiTolerances& tol) {
    RnCocycle c(phi.algebra());
    c.group_label_ = group.label();
    const std::size_t n = group.order();
    c.x_.resize(n);
    c.sqrt_x_.resize(n);
    c.checks_.resize(n);
    if (route == Route::PermutationClosedForm && !group.element(0).is_permutation()) {
        throw Error(ErrorKind::InvalidRange, "closed-form cocycle needs a permutation group");
    }
    const ComplexMatrix rho_inv = route == Route::Solve ? inverse_density(phi) : ComplexMatrix();
    parallel_for(n, [&](std::size_t i) {
        const Automorphism& g = group.element(i);
        ComplexMatrix x = route == Route::Solve
                              ? ComplexMatrix(rho_inv * apply(g.inverse(), phi.total_density(), phi.algebra()))
                              : perm_model_rn(phi, g.perm()).matrix;
        c.checks_[i] = check_derivative(phi, g, x, tol);
        c.sqrt_x_[i] = psd_sqrt(0.5 * (x + x.adjoint()), tol.positivity);
        c.x_[i] = std::move(x);
    });
    return c;
}

RnCocycle RnCocycle::restrict_to(const FiniteAutomorphismGroup& subgroup,
                                 const std::vector<std::size_t>& indices) const {
    if (indices.size() != subgroup.order()) throw Error(ErrorKind::DimensionMismatch, "restriction indices");
    RnCocycle c(algebra_);
    c.group_label_ = subgroup.label();
    for (std::size_t i : indices) {
        c.x_.push_back(x(i));
        c.sqrt_x_.push_back(sqrt_x_[i]);
        c.checks_.push_back(checks_[i]);
    }
    return c;
}

const ComplexMatrix& RnCocycle::x(std::size_t g) const {
    if (!has(g)) throw Error(ErrorKind::MissingDerivative, "no derivative for element " + std::to_string(g));
    return x_[g];
}

const ComplexMatrix& RnCocycle::sqrt_x(std::size_t g) const {
    if (!has(g)) throw Error(ErrorKind::MissingDerivative, "no derivative for element " + std::to_string(g));
    return sqrt_x_[g];
}

double verify_cocycle_identity(const RnCocycle& c, const FiniteAutomorphismGroup& group) {
    if (c.size() != group.order()) throw Error(ErrorKind::MissingDerivative, "cocycle does not cover the group");
    std::vector<double> dev(group.order(), 0.0);
    parallel_for(group.order(), [&](std::size_t g) {
        const std::size_t ginv = group.inverse(g);
        const ComplexMatrix lhs = inverse(c.x(g), 0.0);
        const ComplexMatrix rhs = apply(group.element(ginv), c.x(ginv), c.algebra());
        dev[g] = (lhs - rhs).norm();
    });
    return *std::max_element(dev.begin(), dev.end());
}

double verify_centralizer(const ProductState& phi, const RnCocycle& c) {
    const ComplexMatrix& rho = phi.total_density();
    double worst = 0.0;
    for (std::size_t g = 0; g < c.size(); ++g) {
        worst = std::max(worst, max_abs(rho * c.x(g) - c.x(g) * rho));
    }
    return worst;
}

double max_pairwise_commutator(const RnCocycle& c) {
    std::vector<CommutatorProbe> probes;
    probes.reserve(c.size());
    for (std::size_t g = 0; g < c.size(); ++g) probes.emplace_back(c.x(g));
    std::vector<double> row(c.size(), 0.0);
    parallel_for(c.size(), [&](std::size_t g) {
        for (std::size_t h = g + 1; h < c.size(); ++h) {
            row[g] = std::max(row[g], commutator_norm(probes[g], probes[h], 1e-13));
        }
    });
    return row.empty() ? 0.0 : *std::max_element(row.begin(), row.end());
}

CocycleReport verify_cocycle(const ProductState& phi, const FiniteAutomorphismGroup& group, const RnCocycle& c,
                             const SqiTolerances& tol) {
    CocycleReport r;
    r.group = group.label();
    r.positivity = std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < c.size(); ++g) {
        const auto& k = c.checks(g);
        r.defining_identity = std::max(r.defining_identity, k.defining_identity);
        r.self_adjoint = std::max(r.self_adjoint, k.self_adjoint);
        r.positivity = std::min(r.positivity, k.min_eigenvalue);
    }
    r.cocycle = verify_cocycle_identity(c, group);
    r.centralizer = verify_centralizer(phi, c);
    r.commutator = max_pairwise_commutator(c);
    r.pass = r.defining_identity <= tol.exact && r.self_adjoint <= tol.exact && r.positivity > tol.positivity &&
             r.cocycle <= tol.cocycle && r.centralizer <= tol.exact && r.commutator <= tol.exact;
    return r;
}

}  // namespace qistate

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

#include "qistate/expectation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "qistate/error.hpp"
#include "qistate/parallel.hpp"

namespace qistate {

ConditionalExpectation::ConditionalExpectation(const FiniteAutomorphismGroup& group, const TensorAlgebra& alg)
    : mode_(ExpectationMode::AlgebraLevel), algebra_(alg), elements_(group.elements()) {}

ConditionalExpectation::ConditionalExpectation(const GnsSpace& space, const FiniteAutomorphismGroup& group,
                                               const RnCocycle& cocycle)
    : mode_(ExpectationMode::GnsLevel),
      algebra_(space.algebra()),
      elements_(group.elements()),
      unitaries_(dense_unitaries(space, group, cocycle)) {}

AlgebraElement ConditionalExpectation::operator()(const AlgebraElement& a) const {
    if (mode_ != ExpectationMode::AlgebraLevel) {
        throw Error(ErrorKind::ModeMismatch, "algebra element passed to a GNS-level expectation");
    }
    if (!(a.algebra == algebra_)) throw Error(ErrorKind::AlgebraMismatch, "expectation on a different algebra");
    return {algebra_, (*this)(a.matrix)};
}

ComplexMatrix ConditionalExpectation::operator()(const ComplexMatrix& a) const {
    const double w = 1.0 / static_cast<double>(elements_.size());
    if (mode_ == ExpectationMode::AlgebraLevel) {
        const ComplexMatrix zero_m = ComplexMatrix::Zero(a.rows(), a.cols());
        return w * tree_sum(elements_.size(), zero_m,
                            [&](std::size_t g) { return ComplexMatrix(apply(elements_[g], a, algebra_)); });
    }
    if (a.rows() != unitaries_.front().rows() || a.cols() != a.rows()) {
        throw Error(ErrorKind::DimensionMismatch, "operator does not act on the GNS space");
    }
    const ComplexMatrix zero_m = ComplexMatrix::Zero(a.rows(), a.cols());
    return w * tree_sum(unitaries_.size(), zero_m, [&](std::size_t g) {
               return ComplexMatrix(unitaries_[g] * a * unitaries_[g].adjoint());
           });
}

GnsOperator ConditionalExpectation::operator()(const GnsOperator& x, const GnsSpace& space) const {
    if (mode_ == ExpectationMode::AlgebraLevel) {
        const auto* lm = std::get_if<LeftMult>(&x.kind());
        if (lm == nullptr) {
            throw Error(ErrorKind::ModeMismatch, "algebra-level expectation needs an operator of the form π(a)");
        }
        return GnsOperator(LeftMult{(*this)(lm->a)});
    }
    return GnsOperator(DenseOperator{(*this)(to_dense(space, x))});
}

double ConditionalExpectation::fixed_deviation(const ComplexMatrix& a) const {
    double dev = 0.0;
    for (std::size_t g = 0; g < elements_.size(); ++g) {
        const ComplexMatrix image = mode_ == ExpectationMode::AlgebraLevel
                                        ? apply(elements_[g], a, algebra_)
                                        : ComplexMatrix(unitaries_[g] * a * unitaries_[g].adjoint());
        dev = std::max(dev, operator_norm(image - a));
    }
    return dev;
}

AlgebraElement expect(const ConditionalExpectation& e, const AlgebraElement& a) { return e(a); }

GnsOperator expect(const ConditionalExpectation& e, const GnsOperator& x, const GnsSpace& space) {
    return e(x, space);
}

namespace {

ComplexMatrix random_matrix(Eigen::Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double re = normal(rng);
            const double im = normal(rng);
            m(i, j) = Complex(re, im);
        }
    }
    return m / operator_norm(m);
}

}  // namespace

UmegakiReport verify_umegaki(const ConditionalExpectation& e, const GnsSpace& space, const GnsVector& phi_g,
                             std::size_t samples, std::uint64_t seed, double pass_tol) {
    if (space.norm(phi_g) <= 1e-10) {
        throw Error(ErrorKind::HypothesisHViolated, "Φ_G vanishes; ψ_G is undefined");
    }
    const bool gns = e.mode() == ExpectationMode::GnsLevel;
    auto lift = [&](const ComplexMatrix& a) { return gns ? left_mult_dense(space, a) : a; };
    auto psi = [&](const ComplexMatrix& m) {
        return gns ? psi_state(space, phi_g, GnsOperator(DenseOperator{m})) : psi_state(space, phi_g, m);
    };

    std::mt19937_64 rng(seed);
    const Eigen::Index d = space.algebra().total_dim();
    UmegakiReport r;
    r.samples = samples;
    for (std::size_t s = 0; s < samples; ++s) {
        const ComplexMatrix x = lift(random_matrix(d, rng));
        const ComplexMatrix y = e(lift(random_matrix(d, rng)));
        const ComplexMatrix y2 = e(lift(random_matrix(d, rng)));
        const ComplexMatrix ex = e(x);

        r.module_property = std::max(r.module_property, operator_norm(e(ComplexMatrix(y * x * y2)) - y * ex * y2));
        r.psi_invariance = std::max(r.psi_invariance, std::abs(psi(ex) - psi(x)));
        r.idempotence = std::max(r.idempotence, operator_norm(e(ex) - ex));
        r.contractivity = std::max(r.contractivity, operator_norm(ex) - operator_norm(x));
        ComplexMatrix exx = e(ComplexMatrix(x.adjoint() * x));
        exx = 0.5 * (exx + exx.adjoint()).eval();
        r.positivity = std::max(r.positivity, -min_eigenvalue(exx));
    }
    r.pass = r.module_property <= pass_tol && r.psi_invariance <= pass_tol && r.idempotence <= pass_tol &&
             r.contractivity <= pass_tol && r.positivity <= pass_tol;
    return r;
}

namespace {

int cycle_count(const Permutation& p) {
    std::vector<bool> seen(static_cast<std::size_t>(p.size()), false);
    int cycles = 0;
    for (int i = 0; i < p.size(); ++i) {
        if (seen[static_cast<std::size_t>(i)]) continue;
        ++cycles;
        for (int j = i; !seen[static_cast<std::size_t>(j)]; j = p(j)) seen[static_cast<std::size_t>(j)] = true;
    }
    return cycles;
}

}  // namespace

long fixed_subalgebra_dim(const FiniteAutomorphismGroup& group, const TensorAlgebra& alg) {
    double total = 0.0;
    for (const auto& g : group.elements()) {
        if (g.is_permutation()) {
            // The permutation operator fixes d^{#cycles} basis strings.
            total += std::pow(static_cast<double>(alg.site_dim()), 2.0 * cycle_count(g.perm()));
        } else {
            total += std::norm(g.implementing_unitary(alg).trace());
        }
    }
    return std::lround(total / static_cast<double>(group.order()));
}

std::vector<ComplexMatrix> matrix_unit_basis(const TensorAlgebra& alg) {
    const Eigen::Index d = alg.total_dim();
    std::vector<ComplexMatrix> basis;
    basis.reserve(static_cast<std::size_t>(d * d));
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) basis.push_back(matrix_unit(d, i, j));
    }
    return basis;
}

double martingale_identity_deviation(const GroupChain& chain, const TensorAlgebra& alg,
                                     const std::vector<ComplexMatrix>& elements) {
    std::vector<ConditionalExpectation> es;
    es.reserve(chain.levels());
    for (const auto& g : chain.groups) es.emplace_back(g, alg);

    double dev = 0.0;
    for (const auto& x : elements) {
        std::vector<ComplexMatrix> xs;
        xs.reserve(es.size());
        for (const auto& e : es) xs.push_back(e(x));
        for (std::size_t n = 0; n < es.size(); ++n) {
            for (std::size_t m = 0; m <= n; ++m) {
                dev = std::max(dev, operator_norm(es[n](xs[m]) - xs[n]));
                dev = std::max(dev, operator_norm(es[m](xs[n]) - xs[n]));
            }
        }
    }
    return dev;
}

MartingaleRun martingale_run(const GnsSpace& space, const GroupChain& chain, const RnCocycle& top,
                             const ComplexMatrix& x, const MartingaleOptions& options) {
    const TensorAlgebra& alg = space.algebra();
    if (x.rows() != alg.total_dim() || x.cols() != alg.total_dim()) {
        throw Error(ErrorKind::DimensionMismatch, "observable does not match the algebra");
    }
    const GnsVector phi_g = phi_g_vector(space, chain.top(), top, options.exact);
    if (space.norm(phi_g) <= options.exact) {
        throw Error(ErrorKind::HypothesisHViolated, "Φ_G vanishes for the top group");
    }
    const KOperator k = k_operator(space, chain.top(), top, options.exact);

    MartingaleRun run;
    run.seed = x;
    run.certified = k.invertible;
    const Complex psi_x = psi_state(space, phi_g, x);
    const double scale = std::max(1.0, operator_norm(x));

    std::vector<ConditionalExpectation> es;
    es.reserve(chain.levels());
    bool identity = true;
    for (std::size_t lvl = 0; lvl < chain.levels(); ++lvl) {
        es.emplace_back(chain.groups[lvl], alg);
        MartingaleLevel level;
        level.n = chain.level_n[lvl];
        level.group_order = chain.groups[lvl].order();
        level.value = es.back()(x);
        const ComplexMatrix& prev = lvl == 0 ? x : run.levels.back().value;
        level.increment = operator_norm(level.value - prev);
        for (std::size_t m = 0; m <= lvl; ++m) {
            const ComplexMatrix& xm = m == lvl ? level.value : run.levels[m].value;
            level.martingale_max_dev = std::max(level.martingale_max_dev, operator_norm(es[lvl](xm) - level.value));
            level.martingale_max_dev = std::max(level.martingale_max_dev, operator_norm(es[m](level.value) - level.value));
        }
        level.psi_invariance_dev = std::abs(psi_state(space, phi_g, level.value) - psi_x);
        level.fixed_dim = fixed_subalgebra_dim(chain.groups[lvl], alg);
        identity = identity && level.martingale_max_dev <= options.exact * scale &&
                   level.psi_invariance_dev <= options.exact * scale;
        run.levels.push_back(std::move(level));
    }
    run.identity_holds = identity;
    run.limit = run.levels.back().value;
    run.converged = run.levels.back().increment <= options.convergence;
    run.limit_fixed_dev = es.back().fixed_deviation(run.limit);
    return run;
}

EInfinity e_infinity(const MartingaleRun& run) {
    return {run.limit, run.converged, run.limit_fixed_dev};
}

}  // namespace qistate

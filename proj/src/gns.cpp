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

#include "qistate/gns.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <string>

#include "qistate/error.hpp"
#include "qistate/parallel.hpp"

namespace qistate {

namespace {

ComplexMatrix dense_from_map(const GnsSpace& space, const std::function<GnsVector(const GnsVector&)>& f) {
    const Eigen::Index n = space.hilbert_dim();
    if (n > max_dense_dim()) {
        throw Error(ErrorKind::DenseCapExceeded,
                    "hilbert dimension " + std::to_string(n) + " exceeds " + std::to_string(max_dense_dim()));
    }
    ComplexMatrix out(n, n);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t c) {
        ComplexVector e = ComplexVector::Zero(n);
        e(static_cast<Eigen::Index>(c)) = 1.0;
        out.col(static_cast<Eigen::Index>(c)) = space.coordinates(f(space.from_coordinates(e)));
    });
    return out;
}

GnsVector apply_unitary(const GnsSpace& space, const UnitaryU& u, const GnsVector& v) {
    return {apply(u.g, v.element, space.algebra()) * u.sqrt_x_ginv};
}

}  // namespace

Eigen::Index max_dense_dim() {
    if (const char* env = std::getenv("QISTATE_MAX_DENSE")) {
        try {
            const long long v = std::stoll(env);
            if (v > 0) return static_cast<Eigen::Index>(v);
        } catch (const std::exception&) {
        }
    }
    return kDefaultMaxDenseDim;
}

GnsSpace::GnsSpace(const ProductState& phi) : algebra_(phi.algebra()), rho_(phi.total_density()) {
    const double lo = min_eigenvalue(rho_);
    if (!(lo > 0.0)) throw Error(ErrorKind::StateSingular, "density has min eigenvalue " + std::to_string(lo));
    rho_sqrt_ = psd_sqrt(rho_);
    try {
        rho_sqrt_inv_ = inverse(rho_sqrt_, 0.0);
    } catch (const Error& e) {
        throw Error(ErrorKind::StateSingular, e.what());
    }
}

GnsVector GnsSpace::cyclic_vector() const { return {qistate::identity(algebra_.total_dim())}; }

Complex GnsSpace::inner(const GnsVector& a, const GnsVector& b) const {
    return (a.element.conjugate().cwiseProduct(b.element * rho_)).sum();
}

double GnsSpace::norm(const GnsVector& a) const { return std::sqrt(std::max(0.0, inner(a, a).real())); }

ComplexVector GnsSpace::coordinates(const GnsVector& a) const {
    const ComplexMatrix y = a.element * rho_sqrt_;
    const Eigen::Index d = y.rows();
    ComplexVector v(d * d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) v(i * d + j) = y(i, j);
    }
    return v;
}

GnsVector GnsSpace::from_coordinates(const ComplexVector& v) const {
    const Eigen::Index d = algebra_.total_dim();
    if (v.size() != d * d) throw Error(ErrorKind::DimensionMismatch, "coordinate vector size");
    ComplexMatrix y(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) y(i, j) = v(i * d + j);
    }
    return {y * rho_sqrt_inv_};
}

GnsVector GnsOperator::apply(const GnsSpace& space, const GnsVector& v) const {
    return std::visit(
        [&](const auto& op) -> GnsVector {
            using T = std::decay_t<decltype(op)>;
            if constexpr (std::is_same_v<T, LeftMult>) {
                return {op.a * v.element};
            } else if constexpr (std::is_same_v<T, UnitaryU>) {
                return apply_unitary(space, op, v);
            } else if constexpr (std::is_same_v<T, DenseOperator>) {
                return space.from_coordinates(op.m * space.coordinates(v));
            } else {
                const auto n = op.terms.size();
                GnsVector sum = tree_sum(n, GnsVector{ComplexMatrix::Zero(v.element.rows(), v.element.cols())},
                                         [&](std::size_t i) { return apply_unitary(space, op.terms[i], v); });
                return sum * Complex(1.0 / static_cast<double>(n));
            }
        },
        kind_);
}

ComplexMatrix left_mult_dense(const GnsSpace& space, const ComplexMatrix& a) {
    if (space.hilbert_dim() > max_dense_dim()) {
        throw Error(ErrorKind::DenseCapExceeded, "left multiplication operator too large");
    }
    return kron(a, qistate::identity(space.algebra().total_dim()), max_dense_dim());
}

ComplexMatrix to_dense(const GnsSpace& space, const GnsOperator& op) {
    if (const auto* lm = std::get_if<LeftMult>(&op.kind())) return left_mult_dense(space, lm->a);
    if (const auto* dense = std::get_if<DenseOperator>(&op.kind())) return dense->m;
    return dense_from_map(space, [&](const GnsVector& v) { return op.apply(space, v); });
}

GnsOperator unitary_u(const GnsSpace& space, const FiniteAutomorphismGroup& group, const RnCocycle& cocycle,
                      std::size_t g) {
    if (!(cocycle.algebra() == space.algebra())) throw Error(ErrorKind::AlgebraMismatch, "cocycle algebra");
    if (g >= group.order()) throw Error(ErrorKind::MissingDerivative, "element outside group");
    return GnsOperator(UnitaryU{group.element(g), cocycle.sqrt_x(group.inverse(g))});
}

std::vector<ComplexMatrix> dense_unitaries(const GnsSpace& space, const FiniteAutomorphismGroup& group,
                                           const RnCocycle& cocycle) {
    std::vector<ComplexMatrix> out(group.order());
    for (std::size_t g = 0; g < group.order(); ++g) out[g] = to_dense(space, unitary_u(space, group, cocycle, g));
    return out;
}

GnsOperator projection_p(const GnsSpace& space, const FiniteAutomorphismGroup& group, const RnCocycle& cocycle,
                         bool dense) {
    if (dense && space.hilbert_dim() <= max_dense_dim()) {
        const Eigen::Index n = space.hilbert_dim();
        ComplexMatrix sum = tree_sum(group.order(), ComplexMatrix(ComplexMatrix::Zero(n, n)), [&](std::size_t g) {
            return to_dense(space, unitary_u(space, group, cocycle, g));
        });
        return GnsOperator(DenseOperator{sum * Complex(group.weight())});
    }
    UnitaryAverage avg;
    for (std::size_t g = 0; g < group.order(); ++g) {
        avg.terms.push_back(std::get<UnitaryU>(unitary_u(space, group, cocycle, g).kind()));
    }
    return GnsOperator(std::move(avg));
}

KOperator k_operator(const GnsSpace& space, const FiniteAutomorphismGroup& group, const RnCocycle& cocycle,
                     double tol) {
    if (cocycle.size() != group.order()) throw Error(ErrorKind::MissingDerivative, "cocycle incomplete");
    const Eigen::Index d = space.algebra().total_dim();
    KOperator k;
    k.k = tree_sum(group.order(), ComplexMatrix(ComplexMatrix::Zero(d, d)),
                   [&](std::size_t g) { return cocycle.sqrt_x(g); }) *
          Complex(group.weight());
    k.min_singular = min_singular_value(k.k);
    k.invertible = k.min_singular > tol;
    return k;
}

GnsVector phi_g_vector(const GnsSpace& space, const FiniteAutomorphismGroup& group, const RnCocycle& cocycle,
                       double tol) {
    const KOperator k = k_operator(space, group, cocycle, tol);
    const GnsVector phi = space.cyclic_vector();
    const GnsVector via_k = k.op().apply(space, phi);
    const GnsVector via_p = projection_p(space, group, cocycle, false).apply(space, phi);
    const double gap = space.norm(via_p - via_k);
    if (gap > tol) throw Error(ErrorKind::ConsistencyFailure, "P_G Phi != K_G Phi, gap " + std::to_string(gap));
    for (std::size_t g = 0; g < group.order(); ++g) {
        const double moved = space.norm(unitary_u(space, group, cocycle, g).apply(space, via_k) - via_k);
        if (moved > tol) {
            throw Error(ErrorKind::ConsistencyFailure, "Phi_G not fixed by U_g, deviation " + std::to_string(moved));
        }
    }
    return via_k;
}

Complex psi_state(const GnsSpace& space, const GnsVector& phi_g, const GnsOperator& x, double tol) {
    const double n = space.norm(phi_g);
    if (!(n > tol)) throw Error(ErrorKind::HypothesisHViolated, "Phi_G vanishes");
    return space.inner(phi_g, x.apply(space, phi_g)) / (n * n);
}

Complex psi_state(const GnsSpace& space, const GnsVector& phi_g, const ComplexMatrix& a, double tol) {
    return psi_state(space, phi_g, GnsOperator(LeftMult{a}), tol);
}

RepresentationCheck check_representation(const GnsSpace& space, const FiniteAutomorphismGroup& group,
                                         const RnCocycle& cocycle) {
    const std::size_t n = group.order();
    std::vector<UnitaryU> us;
    us.reserve(n);
    for (std::size_t g = 0; g < n; ++g) us.push_back(std::get<UnitaryU>(unitary_u(space, group, cocycle, g).kind()));

    const Eigen::Index d = space.algebra().total_dim();
    std::vector<GnsVector> basis;
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) basis.push_back({matrix_unit(d, i, j)});
    }
    // images[h][k] = U_h e_k
    std::vector<std::vector<GnsVector>> images(n);
    parallel_for(n, [&](std::size_t h) {
        images[h].reserve(basis.size());
        for (const auto& e : basis) images[h].push_back(apply_unitary(space, us[h], e));
    });

    RepresentationCheck out;
    std::vector<double> hom(n, 0.0), uni(n, 0.0);
    const bool dense = space.hilbert_dim() <= max_dense_dim();
    parallel_for(n, [&](std::size_t g) {
        for (std::size_t h = 0; h < n; ++h) {
            const auto& target = images[group.compose(g, h)];
            for (std::size_t k = 0; k < basis.size(); ++k) {
                hom[g] = std::max(hom[g], space.norm(apply_unitary(space, us[g], images[h][k]) - target[k]));
            }
        }
        if (dense) {
            const ComplexMatrix u = dense_from_map(space, [&](const GnsVector& v) { return apply_unitary(space, us[g], v); });
            uni[g] = max_abs(u.adjoint() * u - qistate::identity(u.rows()));
        }
    });
    out.homomorphism = *std::max_element(hom.begin(), hom.end());
    out.unitarity = *std::max_element(uni.begin(), uni.end());
    return out;
}

double projection_chain_deviation(const GnsSpace& space, const GroupChain& chain, const RnCocycle& top) {
    const std::vector<ComplexMatrix> us = dense_unitaries(space, chain.top(), top);
    const Eigen::Index dim = space.hilbert_dim();
    std::vector<ComplexMatrix> ps;
    for (std::size_t lvl = 0; lvl < chain.levels(); ++lvl) {
        const auto idx = chain.indices_in_top(lvl);
        const ComplexMatrix sum = tree_sum(idx.size(), ComplexMatrix(ComplexMatrix::Zero(dim, dim)),
                                           [&](std::size_t i) { return us[idx[i]]; });
        ps.push_back(sum / static_cast<double>(idx.size()));
    }
    double dev = 0.0;
    for (std::size_t n = 0; n < ps.size(); ++n) {
        for (std::size_t m = 0; m <= n; ++m) {
            dev = std::max(dev, max_abs(ps[n] * ps[m] - ps[n]));
            dev = std::max(dev, max_abs(ps[m] * ps[n] - ps[n]));
        }
    }
    return dev;
}

RangeCheck check_projection_range(const std::vector<ComplexMatrix>& unitaries, const ComplexMatrix& p) {
    const Eigen::Index n = p.rows();
    ComplexMatrix gram = ComplexMatrix::Zero(n, n);
    const ComplexMatrix one = qistate::identity(n);
    RangeCheck r;
    for (const auto& u : unitaries) {
        const ComplexMatrix delta = u - one;
        gram += delta.adjoint() * delta;
        r.range_fixed = std::max(r.range_fixed, ((u - one) * p).colwise().norm().maxCoeff());
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> fixed(0.5 * (gram + gram.adjoint()));
    std::vector<Eigen::Index> kernel;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (fixed.eigenvalues()(i) <= 1e-8) kernel.push_back(i);
    }
    r.fixed_dim = static_cast<Eigen::Index>(kernel.size());
    for (Eigen::Index i : kernel) {
        const ComplexVector v = fixed.eigenvectors().col(i);
        r.fixed_reproduced = std::max(r.fixed_reproduced, (p * v - v).norm());
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> proj(0.5 * (p + p.adjoint()), Eigen::EigenvaluesOnly);
    r.projection_rank = (proj.eigenvalues().array() > 0.5).count();
    return r;
}

HypothesisReport hypothesis_h_report(const GnsSpace& space, const GroupChain& chain, const RnCocycle& top,
                                     const WitnessPredicate& witness, double tol) {
    const FiniteAutomorphismGroup& group = chain.top();
    if (top.size() != group.order()) throw Error(ErrorKind::MissingDerivative, "cocycle does not cover the chain");
    const std::size_t n = group.order();

    // (x_g x_h)^{1/2} = x_g^{1/2} x_h^{1/2} needs commuting derivatives.
    std::vector<CommutatorProbe> probes;
    probes.reserve(n);
    for (std::size_t g = 0; g < n; ++g) probes.emplace_back(top.x(g));
    std::vector<double> worst(n, 0.0);
    parallel_for(n, [&](std::size_t g) {
        for (std::size_t h = g + 1; h < n; ++h) worst[g] = std::max(worst[g], commutator_norm(probes[g], probes[h], tol));
    });
    const double max_comm = n > 0 ? *std::max_element(worst.begin(), worst.end()) : 0.0;
    if (max_comm > tol) {
        throw Error(ErrorKind::NonCommutingCocycle, "max ||[x_g, x_h]|| = " + std::to_string(max_comm));
    }

    // φ(s_g s_h) = Σ_ij (ρ s_g)_ij (s_h)_ji.
    std::vector<ComplexMatrix> rho_s(n);
    std::vector<ComplexMatrix> s_t(n);
    parallel_for(n, [&](std::size_t g) {
        rho_s[g] = space.rho() * top.sqrt_x(g);
        s_t[g] = top.sqrt_x(g).transpose();
    });
    std::vector<bool> in_witness(n, true);
    if (witness) {
        for (std::size_t g = 0; g < n; ++g) in_witness[g] = witness(group.element(g));
    }

    HypothesisReport report;
    GnsVector previous = space.cyclic_vector();
    const Eigen::Index d = space.algebra().total_dim();
    for (std::size_t level = 0; level < chain.levels(); ++level) {
        const std::vector<std::size_t> idx = chain.indices_in_top(level);
        const std::size_t m = idx.size();
        std::vector<double> row_min(m, std::numeric_limits<double>::infinity());
        const double pair_sum = tree_sum(m, 0.0, [&](std::size_t a) {
            double row = 0.0;
            for (std::size_t b = 0; b < m; ++b) {
                const double v = rho_s[idx[a]].cwiseProduct(s_t[idx[b]]).sum().real();
                row += v;
                if (in_witness[idx[a]] && in_witness[idx[b]]) row_min[a] = std::min(row_min[a], v);
            }
            return row;
        });
        HypothesisLevel lv;
        lv.n = chain.level_n[level];
        lv.group_order = m;
        lv.phi_norm_sq = pair_sum / static_cast<double>(m * m);
        std::size_t members = 0;
        for (std::size_t g : idx) members += in_witness[g] ? 1 : 0;
        lv.delta0 = static_cast<double>(members) / static_cast<double>(m);
        lv.eps0 = members > 0 ? *std::min_element(row_min.begin(), row_min.end()) : 0.0;
        lv.lower_bound = lv.eps0 * lv.delta0 * lv.delta0;
        const ComplexMatrix k = tree_sum(m, ComplexMatrix(ComplexMatrix::Zero(d, d)),
                                         [&](std::size_t a) { return top.sqrt_x(idx[a]); }) *
                                Complex(1.0 / static_cast<double>(m));
        lv.k_min_sv = min_singular_value(k);
        const GnsVector current{k};
        lv.cauchy_increment = space.norm(current - previous);
        previous = current;
        report.levels.push_back(lv);
    }

    bool positive_seen = false;
    bool bounds_ok = true;
    for (const auto& lv : report.levels) {
        if (lv.lower_bound > 0.0) positive_seen = true;
        else if (positive_seen) bounds_ok = false;
        if (lv.phi_norm_sq < lv.lower_bound - tol) bounds_ok = false;
    }
    const auto& last = report.levels.back();
    report.holds = bounds_ok && last.lower_bound > 0.0 && std::sqrt(std::max(0.0, last.phi_norm_sq)) > tol;
    return report;
}

}  // namespace qistate

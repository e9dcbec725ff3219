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

#include "qistate/algebra.hpp"

#include <cmath>
#include <string>

#include "qistate/error.hpp"

namespace qistate {

namespace {

void require_same(const TensorAlgebra& a, const TensorAlgebra& b) {
    if (!(a == b)) throw Error(ErrorKind::AlgebraMismatch, "elements live in different algebras");
}

void validate_density(const ComplexMatrix& w, int d, const std::string& where) {
    if (w.rows() != d || w.cols() != d) {
        throw Error(ErrorKind::WrongBlockDim, where + " is not " + std::to_string(d) + "x" + std::to_string(d));
    }
    if (hermitian_deviation(w) > 1e-12) throw Error(ErrorKind::InvalidDensity, where + " is not Hermitian");
    if (std::abs(w.trace() - Complex(1.0)) > 1e-12) {
        throw Error(ErrorKind::InvalidDensity, where + " does not have unit trace");
    }
    const double lo = min_eigenvalue(w);
    if (!(lo > 0.0)) {
        throw Error(ErrorKind::StateSingular, where + " has min eigenvalue " + std::to_string(lo));
    }
}

}  // namespace

TensorAlgebra::TensorAlgebra(int site_dim, int num_sites, Eigen::Index max_dim)
    : site_dim_(site_dim), num_sites_(num_sites), total_dim_(1) {
    if (site_dim < 1 || num_sites < 1) {
        throw Error(ErrorKind::InvalidRange, "site_dim and num_sites must be positive");
    }
    for (int n = 0; n < num_sites; ++n) {
        total_dim_ *= site_dim;
        if (total_dim_ > max_dim) {
            throw Error(ErrorKind::DimensionOverflow,
                        std::to_string(site_dim) + "^" + std::to_string(num_sites) + " exceeds " +
                            std::to_string(max_dim));
        }
    }
}

AlgebraElement::AlgebraElement(TensorAlgebra alg, ComplexMatrix m) : algebra(alg), matrix(std::move(m)) {
    if (matrix.rows() != algebra.total_dim() || matrix.cols() != algebra.total_dim()) {
        throw Error(ErrorKind::DimensionMismatch, "element matrix does not match algebra dimension");
    }
}

AlgebraElement AlgebraElement::identity(const TensorAlgebra& alg) {
    return {alg, qistate::identity(alg.total_dim())};
}

AlgebraElement AlgebraElement::operator*(const AlgebraElement& o) const {
    require_same(algebra, o.algebra);
    return {algebra, matrix * o.matrix};
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& o) const {
    require_same(algebra, o.algebra);
    return {algebra, matrix + o.matrix};
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& o) const {
    require_same(algebra, o.algebra);
    return {algebra, matrix - o.matrix};
}

AlgebraElement embed_site(const ComplexMatrix& b, int site, const TensorAlgebra& alg) {
    if (site < 0 || site >= alg.num_sites()) {
        throw Error(ErrorKind::SiteOutOfRange, "site " + std::to_string(site));
    }
    const int d = alg.site_dim();
    if (b.rows() != d || b.cols() != d) throw Error(ErrorKind::WrongBlockDim, "embed_site block");
    Eigen::Index left = 1;
    for (int n = 0; n < site; ++n) left *= d;
    Eigen::Index right = alg.total_dim() / (left * d);
    return {alg, kron(kron(qistate::identity(left), b, alg.total_dim()), qistate::identity(right),
                      alg.total_dim())};
}

const ComplexMatrix* LocalProduct::factor(int site) const {
    auto it = factors.find(site);
    return it == factors.end() ? nullptr : &it->second;
}

int LocalProduct::max_site() const { return factors.empty() ? -1 : factors.rbegin()->first; }

AlgebraElement LocalProduct::to_element(const TensorAlgebra& alg) const {
    const int d = alg.site_dim();
    ComplexMatrix acc = ComplexMatrix::Identity(1, 1);
    for (int n = 0; n < alg.num_sites(); ++n) {
        const ComplexMatrix* f = factor(n);
        if (f != nullptr && (f->rows() != d || f->cols() != d)) {
            throw Error(ErrorKind::WrongBlockDim, "factor on site " + std::to_string(n));
        }
        acc = kron(acc, f ? *f : qistate::identity(d), alg.total_dim());
    }
    if (!factors.empty() && (factors.begin()->first < 0 || max_site() >= alg.num_sites())) {
        throw Error(ErrorKind::SiteOutOfRange, "local product outside the truncation");
    }
    return {alg, std::move(acc)};
}

ProductState::ProductState(TensorAlgebra alg, ComplexMatrix tail_density,
                           std::map<int, ComplexMatrix> special_sites, double bound_c)
    : algebra_(alg), tail_(std::move(tail_density)), special_(std::move(special_sites)), bound_c_(bound_c) {
    const int d = algebra_.site_dim();
    if (!(bound_c_ > 1.0)) throw Error(ErrorKind::InvalidDensity, "bound C must exceed 1");
    validate_density(tail_, d, "tail density");
    for (const auto& [site, w] : special_) {
        if (site < 0 || site >= algebra_.num_sites()) {
            throw Error(ErrorKind::SiteOutOfRange, "special site " + std::to_string(site));
        }
        validate_density(w, d, "density on site " + std::to_string(site));
    }
    densities_.reserve(static_cast<std::size_t>(algebra_.num_sites()));
    for (int n = 0; n < algebra_.num_sites(); ++n) {
        auto it = special_.find(n);
        densities_.push_back(it == special_.end() ? tail_ : it->second);
    }
    // The tail also stands for every site beyond the truncation.
    std::vector<const ComplexMatrix*> all{&tail_};
    for (const auto& [site, w] : special_) all.push_back(&w);
    for (std::size_t i = 0; i < all.size(); ++i) {
        const double norm = operator_norm(*all[i]);
        if (norm < 1.0 / bound_c_ || norm > bound_c_) {
            throw Error(ErrorKind::InvalidDensity, "density norm " + std::to_string(norm) + " outside [1/C, C]");
        }
        for (std::size_t j = i + 1; j < all.size(); ++j) {
            const double c = commutator_norm(*all[i], *all[j]);
            if (c > kCommuteTol) {
                throw Error(ErrorKind::NonCommutingDensities, "commutator norm " + std::to_string(c));
            }
        }
    }
    total_ = ComplexMatrix::Identity(1, 1);
    for (const auto& w : densities_) total_ = kron(total_, w, algebra_.total_dim());
}

ProductState ProductState::tracial(const TensorAlgebra& alg) {
    const int d = alg.site_dim();
    return {alg, qistate::identity(d) / static_cast<double>(d), {}, std::max(2.0, 2.0 * d)};
}

const ComplexMatrix& ProductState::density(int site) const {
    if (site < 0 || site >= algebra_.num_sites()) {
        throw Error(ErrorKind::SiteOutOfRange, "site " + std::to_string(site));
    }
    return densities_[static_cast<std::size_t>(site)];
}

ComplexMatrix total_density(const ProductState& phi) { return phi.total_density(); }

Complex state_eval(const ProductState& phi, const AlgebraElement& a) {
    require_same(phi.algebra(), a.algebra);
    return (phi.total_density() * a.matrix).trace();
}

Complex state_eval(const ProductState& phi, const LocalProduct& a) {
    Complex value = 1.0;
    for (const auto& [site, b] : a.factors) {
        const ComplexMatrix& w = phi.density(site);
        if (b.rows() != w.rows() || b.cols() != w.cols()) {
            throw Error(ErrorKind::WrongBlockDim, "factor on site " + std::to_string(site));
        }
        value *= (w * b).trace();
    }
    return value;
}

}  // namespace qistate

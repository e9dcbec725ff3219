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

#include "qistate/group.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "qistate/error.hpp"

namespace qistate {

namespace {

constexpr double kSameTol = 1e-12;

// Packs a permutation of at most 16 points into 4-bit nibbles.
std::uint64_t pack(const std::vector<int>& image) {
    std::uint64_t key = 0;
    for (std::size_t k = 0; k < image.size(); ++k) key |= static_cast<std::uint64_t>(image[k]) << (4 * k);
    return key;
}

// Basis index i (site 0 most significant) → index of the permuted string,
// whose digit at site σ(n) is the digit of i at site n.
std::vector<Eigen::Index> permuted_indices(const Permutation& perm, int d) {
    const int sites = perm.size();
    Eigen::Index dim = 1;
    for (int n = 0; n < sites; ++n) dim *= d;
    std::vector<Eigen::Index> place(static_cast<std::size_t>(sites));
    for (int n = 0; n < sites; ++n) {
        Eigen::Index p = 1;
        for (int m = perm(n) + 1; m < sites; ++m) p *= d;
        place[static_cast<std::size_t>(n)] = p;
    }
    std::vector<Eigen::Index> out(static_cast<std::size_t>(dim));
    std::vector<int> digits(static_cast<std::size_t>(sites), 0);
    for (Eigen::Index i = 0; i < dim; ++i) {
        Eigen::Index target = 0;
        for (int n = 0; n < sites; ++n) target += digits[static_cast<std::size_t>(n)] * place[static_cast<std::size_t>(n)];
        out[static_cast<std::size_t>(i)] = target;
        for (int n = sites - 1; n >= 0; --n) {
            if (++digits[static_cast<std::size_t>(n)] < d) break;
            digits[static_cast<std::size_t>(n)] = 0;
        }
    }
    return out;
}

}  // namespace

Permutation::Permutation(std::vector<int> image) : image_(std::move(image)) {
    std::vector<bool> seen(image_.size(), false);
    for (int v : image_) {
        if (v < 0 || v >= size() || seen[static_cast<std::size_t>(v)]) {
            throw Error(ErrorKind::InvalidRange, "not a bijection");
        }
        seen[static_cast<std::size_t>(v)] = true;
    }
}

Permutation Permutation::identity(int n) {
    std::vector<int> image(static_cast<std::size_t>(n));
    std::iota(image.begin(), image.end(), 0);
    return Permutation(std::move(image));
}

Permutation Permutation::transposition(int n, int a, int b) {
    auto p = identity(n).image_;
    std::swap(p.at(static_cast<std::size_t>(a)), p.at(static_cast<std::size_t>(b)));
    return Permutation(std::move(p));
}

Permutation Permutation::compose(const Permutation& other) const {
    if (other.size() != size()) throw Error(ErrorKind::DimensionMismatch, "permutation sizes differ");
    std::vector<int> out(image_.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = image_[static_cast<std::size_t>(other.image_[k])];
    Permutation p;
    p.image_ = std::move(out);
    return p;
}

Permutation Permutation::inverse() const {
    std::vector<int> out(image_.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[static_cast<std::size_t>(image_[k])] = static_cast<int>(k);
    Permutation p;
    p.image_ = std::move(out);
    return p;
}

std::vector<int> Permutation::support() const {
    std::vector<int> s;
    for (int k = 0; k < size(); ++k) {
        if ((*this)(k) != k) s.push_back(k);
    }
    return s;
}

bool Permutation::is_identity() const { return support().empty(); }

Automorphism::Automorphism(Kind kind, std::string label) : kind_(std::move(kind)), label_(std::move(label)) {
    if (const auto* inner = std::get_if<InnerUnitary>(&kind_)) {
        const auto& u = inner->u;
        if (u.rows() != u.cols()) throw Error(ErrorKind::NonSquare, "implementing unitary");
        if (max_abs_diff(u.adjoint() * u, qistate::identity(u.rows())) > kSameTol) {
            throw Error(ErrorKind::InvalidRange, "implementing matrix is not unitary");
        }
    }
}

Automorphism Automorphism::inner(ComplexMatrix u, std::string label) {
    return Automorphism(InnerUnitary{std::move(u)}, std::move(label));
}

Automorphism Automorphism::permutation(Permutation perm, std::string label) {
    return Automorphism(SitePermutation{std::move(perm)}, std::move(label));
}

const Permutation& Automorphism::perm() const { return std::get<SitePermutation>(kind_).perm; }

Automorphism Automorphism::compose(const Automorphism& other) const {
    const auto* a = std::get_if<InnerUnitary>(&kind_);
    const auto* b = std::get_if<InnerUnitary>(&other.kind_);
    if (a != nullptr && b != nullptr) {
        if (a->u.rows() != b->u.rows()) throw Error(ErrorKind::DimensionMismatch, "compose");
        return inner(a->u * b->u, {});
    }
    if (a == nullptr && b == nullptr) return permutation(perm().compose(other.perm()));
    throw Error(ErrorKind::DimensionMismatch, "cannot compose inner and permutation automorphisms");
}

Automorphism Automorphism::inverse() const {
    if (const auto* a = std::get_if<InnerUnitary>(&kind_)) return inner(a->u.adjoint(), {});
    return permutation(perm().inverse());
}

bool Automorphism::same_as(const Automorphism& other) const {
    const auto* a = std::get_if<InnerUnitary>(&kind_);
    const auto* b = std::get_if<InnerUnitary>(&other.kind_);
    if (a != nullptr && b != nullptr) {
        return a->u.rows() == b->u.rows() && max_abs_diff(a->u, b->u) <= kSameTol;
    }
    if (a == nullptr && b == nullptr) return perm() == other.perm();
    return false;
}

ComplexMatrix Automorphism::implementing_unitary(const TensorAlgebra& alg) const {
    if (const auto* a = std::get_if<InnerUnitary>(&kind_)) {
        if (a->u.rows() != alg.total_dim()) throw Error(ErrorKind::DimensionMismatch, "implementing unitary");
        return a->u;
    }
    if (perm().size() != alg.num_sites()) throw Error(ErrorKind::DimensionMismatch, "permutation size");
    return permutation_operator(perm(), alg.site_dim());
}

ComplexMatrix permutation_operator(const Permutation& perm, int site_dim) {
    const auto map = permuted_indices(perm, site_dim);
    const auto dim = static_cast<Eigen::Index>(map.size());
    ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) p(map[static_cast<std::size_t>(i)], i) = 1.0;
    return p;
}

ComplexMatrix apply(const Automorphism& g, const ComplexMatrix& a, const TensorAlgebra& alg) {
    if (a.rows() != alg.total_dim() || a.cols() != alg.total_dim()) {
        throw Error(ErrorKind::DimensionMismatch, "apply: element size");
    }
    if (const auto* inner = std::get_if<InnerUnitary>(&g.kind())) {
        if (inner->u.rows() != a.rows()) throw Error(ErrorKind::DimensionMismatch, "apply: unitary size");
        return inner->u * a * inner->u.adjoint();
    }
    if (g.perm().size() != alg.num_sites()) throw Error(ErrorKind::DimensionMismatch, "apply: permutation size");
    // P a P* with P the permutation operator, evaluated as an index remap.
    const auto map = permuted_indices(g.perm(), alg.site_dim());
    ComplexMatrix out(a.rows(), a.cols());
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        const Eigen::Index pj = map[static_cast<std::size_t>(j)];
        for (Eigen::Index i = 0; i < a.rows(); ++i) out(map[static_cast<std::size_t>(i)], pj) = a(i, j);
    }
    return out;
}

AlgebraElement apply(const Automorphism& g, const AlgebraElement& a) {
    return {a.algebra, apply(g, a.matrix, a.algebra)};
}

FiniteAutomorphismGroup::FiniteAutomorphismGroup(std::vector<Automorphism> elements, std::string label)
    : elements_(std::move(elements)), label_(std::move(label)) {
    const std::size_t n = elements_.size();
    if (n == 0) throw Error(ErrorKind::InvalidRange, "empty group");
    const bool perms = elements_[0].is_permutation();
    for (const auto& g : elements_) {
        if (g.is_permutation() != perms) throw Error(ErrorKind::InvalidRange, "mixed automorphism kinds");
    }
    if (perms) {
        if (elements_[0].perm().size() > 16) throw Error(ErrorKind::InvalidRange, "at most 16 sites");
        if (!elements_[0].perm().is_identity()) throw Error(ErrorKind::InvalidRange, "element 0 must be the identity");
        for (std::size_t i = 0; i < n; ++i) {
            if (!perm_index_.emplace(pack(elements_[i].perm().image()), static_cast<std::uint32_t>(i)).second) {
                throw Error(ErrorKind::InvalidRange, "duplicate group element");
            }
        }
    } else {
        const auto& u = std::get<InnerUnitary>(elements_[0].kind()).u;
        if (max_abs_diff(u, qistate::identity(u.rows())) > kSameTol) {
            throw Error(ErrorKind::InvalidRange, "element 0 must be the identity");
        }
    }
    table_.assign(n * n, 0);
    std::vector<int> scratch;
    for (std::size_t g = 0; g < n; ++g) {
        for (std::size_t h = 0; h < n; ++h) {
            std::size_t idx = n;
            if (perms) {
                const auto& pg = elements_[g].perm().image();
                const auto& ph = elements_[h].perm().image();
                scratch.resize(ph.size());
                for (std::size_t k = 0; k < ph.size(); ++k) scratch[k] = pg[static_cast<std::size_t>(ph[k])];
                auto it = perm_index_.find(pack(scratch));
                if (it != perm_index_.end()) idx = it->second;
            } else {
                idx = find(elements_[g].compose(elements_[h]));
            }
            if (idx == n) throw Error(ErrorKind::InvalidRange, "group '" + label_ + "' is not closed");
            table_[g * n + h] = static_cast<std::uint32_t>(idx);
        }
    }
    // Latin square: every row and column is a permutation of the elements.
    std::vector<int> row_seen(n), col_seen(n);
    for (std::size_t g = 0; g < n; ++g) {
        for (std::size_t h = 0; h < n; ++h) {
            if (row_seen[table_[g * n + h]] == static_cast<int>(g) + 1 ||
                col_seen[table_[h * n + g]] == static_cast<int>(g) + 1) {
                throw Error(ErrorKind::InvalidRange, "composition table is not a Latin square");
            }
            row_seen[table_[g * n + h]] = static_cast<int>(g) + 1;
            col_seen[table_[h * n + g]] = static_cast<int>(g) + 1;
        }
    }
    inverse_.assign(n, n);
    for (std::size_t g = 0; g < n; ++g) {
        for (std::size_t h = 0; h < n; ++h) {
            if (table_[g * n + h] == 0) {
                inverse_[g] = h;
                break;
            }
        }
    }
}

std::size_t FiniteAutomorphismGroup::find(const Automorphism& g) const {
    if (!perm_index_.empty()) {
        if (!g.is_permutation()) return order();
        auto it = perm_index_.find(pack(g.perm().image()));
        return it == perm_index_.end() ? order() : it->second;
    }
    for (std::size_t i = 0; i < order(); ++i) {
        if (elements_[i].same_as(g)) return i;
    }
    return order();
}

std::vector<std::size_t> GroupChain::indices_in_top(std::size_t level) const {
    std::vector<std::size_t> idx(groups.at(level).order());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t k = level; k + 1 < groups.size(); ++k) {
        for (auto& i : idx) i = inclusions[k][i];
    }
    return idx;
}

ComplexMatrix rotation_matrix(int quarter_turns) {
    static constexpr int kCos[4] = {1, 0, -1, 0};
    static constexpr int kSin[4] = {0, 1, 0, -1};
    const int q = ((quarter_turns % 4) + 4) % 4;
    ComplexMatrix r(2, 2);
    r << double(kCos[q]), double(-kSin[q]), double(kSin[q]), double(kCos[q]);
    return r;
}

FiniteAutomorphismGroup rotation_group() {
    static const char* kLabels[4] = {"g_0", "g_pi/2", "g_pi", "g_3pi/2"};
    std::vector<Automorphism> elements;
    for (int q = 0; q < 4; ++q) elements.push_back(Automorphism::inner(rotation_matrix(-q), kLabels[q]));
    return FiniteAutomorphismGroup(std::move(elements), "rotation_example");
}

std::size_t factorial(int n) {
    std::size_t f = 1;
    for (int k = 2; k <= n; ++k) f *= static_cast<std::size_t>(k);
    return f;
}

FiniteAutomorphismGroup symmetric_group(int n, int num_sites) {
    if (n < 1 || n > num_sites) throw Error(ErrorKind::InvalidRange, "need 1 <= N <= L");
    std::vector<int> head(static_cast<std::size_t>(n));
    std::iota(head.begin(), head.end(), 0);
    std::vector<Automorphism> elements;
    elements.reserve(factorial(n));
    do {
        std::vector<int> image = head;
        for (int k = n; k < num_sites; ++k) image.push_back(k);
        elements.push_back(Automorphism::permutation(Permutation(std::move(image))));
    } while (std::next_permutation(head.begin(), head.end()));
    return FiniteAutomorphismGroup(std::move(elements), "S_" + std::to_string(n));
}

GroupChain symmetric_group_chain(int num_sites, int max_n, std::size_t max_enumeration) {
    if (max_n < 1 || max_n > num_sites) throw Error(ErrorKind::InvalidRange, "need 1 <= Nmax <= L");
    if (max_n > 20 || factorial(max_n) > max_enumeration) {
        throw Error(ErrorKind::BudgetExceeded, std::to_string(max_n) + "! exceeds the enumeration budget");
    }
    GroupChain chain;
    for (int n = 1; n <= max_n; ++n) {
        chain.groups.push_back(symmetric_group(n, num_sites));
        chain.level_n.push_back(n);
    }
    for (std::size_t k = 0; k + 1 < chain.groups.size(); ++k) {
        const auto& small = chain.groups[k];
        const auto& big = chain.groups[k + 1];
        std::vector<std::size_t> map(small.order());
        for (std::size_t i = 0; i < small.order(); ++i) {
            map[i] = big.find(small.element(i));
            if (map[i] == big.order()) throw Error(ErrorKind::InvalidRange, "inclusion failed");
        }
        chain.inclusions.push_back(std::move(map));
    }
    return chain;
}

GroupChain single_level_chain(FiniteAutomorphismGroup group) {
    GroupChain chain;
    chain.groups.push_back(std::move(group));
    chain.level_n.push_back(1);
    return chain;
}

std::vector<Permutation> sample_permutation(int n, int num_sites, std::uint64_t seed, std::size_t count) {
    if (n < 1 || n > num_sites) throw Error(ErrorKind::InvalidRange, "need 1 <= N <= L");
    std::mt19937_64 rng(seed);
    std::vector<Permutation> out;
    out.reserve(count);
    for (std::size_t s = 0; s < count; ++s) {
        std::vector<int> image(static_cast<std::size_t>(num_sites));
        std::iota(image.begin(), image.end(), 0);
        for (int i = n - 1; i > 0; --i) {
            std::uniform_int_distribution<int> pick(0, i);
            std::swap(image[static_cast<std::size_t>(i)], image[static_cast<std::size_t>(pick(rng))]);
        }
        out.emplace_back(std::move(image));
    }
    return out;
}

bool is_outer(const Permutation& sigma, int m0) {
    const Permutation inv = sigma.inverse();
    for (int k = 0; k <= m0 && k < sigma.size(); ++k) {
        if (sigma(k) <= m0 || inv(k) <= m0) return false;
    }
    return true;
}

double outer_fraction(int n, int m0) {
    if (m0 < 0 || m0 >= n) throw Error(ErrorKind::InvalidRange, "outer_fraction needs 0 <= m0 < N");
    if (n <= 8) {
        std::vector<int> image(static_cast<std::size_t>(n));
        std::iota(image.begin(), image.end(), 0);
        std::size_t hits = 0, total = 0;
        do {
            ++total;
            if (is_outer(Permutation(image), m0)) ++hits;
        } while (std::next_permutation(image.begin(), image.end()));
        return static_cast<double>(hits) / static_cast<double>(total);
    }
    // Injections of B into its complement, then any bijection of the rest:
    // (N-b)!^2 / ((N-2b)! N!) = ∏_{i<b} (N-b-i)/(N-i).
    const int b = m0 + 1;
    if (2 * b > n) return 0.0;
    long double f = 1.0L;
    for (int i = 0; i < b; ++i) f *= static_cast<long double>(n - b - i) / static_cast<long double>(n - i);
    return static_cast<double>(f);
}

}  // namespace qistate

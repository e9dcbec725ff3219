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
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "qistate/algebra.hpp"

namespace qistate {

/// Bijection of {0..n-1} in one-line notation: image[k] = σ(k).
class Permutation {
public:
    Permutation() = default;
    explicit Permutation(std::vector<int> image);

    static Permutation identity(int n);
    static Permutation transposition(int n, int a, int b);

    int size() const { return static_cast<int>(image_.size()); }
    int operator()(int k) const { return image_[static_cast<std::size_t>(k)]; }
    const std::vector<int>& image() const { return image_; }

    /// (this ∘ other)(k) = this(other(k)).
    Permutation compose(const Permutation& other) const;
    Permutation inverse() const;
    /// Λ_σ = {k : σ(k) ≠ k}.
    std::vector<int> support() const;
    bool is_identity() const;

    friend bool operator==(const Permutation&, const Permutation&) = default;

private:
    std::vector<int> image_;
};

/// Conjugation a ↦ u a u* by a unitary on the full algebra.
struct InnerUnitary {
    ComplexMatrix u;
};

/// σ(∏ j_n(b_n)) = ∏ j_{σ(n)}(b_n).
struct SitePermutation {
    Permutation perm;
};

/// A *-automorphism of a TensorAlgebra. Two automorphisms with the same
/// action but different implementing data (R_π = -1 versus 1) stay distinct.
class Automorphism {
public:
    using Kind = std::variant<InnerUnitary, SitePermutation>;

    Automorphism(Kind kind, std::string label);
    static Automorphism inner(ComplexMatrix u, std::string label);
    static Automorphism permutation(Permutation perm, std::string label = {});

    const Kind& kind() const { return kind_; }
    const std::string& label() const { return label_; }
    bool is_permutation() const { return std::holds_alternative<SitePermutation>(kind_); }
    const Permutation& perm() const;

    /// (this ∘ other)(a) = this(other(a)).
    Automorphism compose(const Automorphism& other) const;
    Automorphism inverse() const;
    /// Same implementing data (unitary entrywise within 1e-12, or same image).
    bool same_as(const Automorphism& other) const;

    /// The unitary V with g(a) = V a V*, materialized on the given algebra.
    ComplexMatrix implementing_unitary(const TensorAlgebra& alg) const;

private:
    Kind kind_;
    std::string label_;
};

/// Permutation operator on (C^d)^{⊗L}: moves the content of site n to σ(n).
ComplexMatrix permutation_operator(const Permutation& perm, int site_dim);

AlgebraElement apply(const Automorphism& g, const AlgebraElement& a);
ComplexMatrix apply(const Automorphism& g, const ComplexMatrix& a, const TensorAlgebra& alg);

/// A finite group of automorphisms with uniform (Haar) weights 1/|G|.
class FiniteAutomorphismGroup {
public:
    static constexpr std::size_t kDefaultMaxOrder = 5040;

    /// Builds the composition table; throws InvalidRange unless elements are
    /// closed under composition and element 0 is the identity.
    FiniteAutomorphismGroup(std::vector<Automorphism> elements, std::string label);

    std::size_t order() const { return elements_.size(); }
    const Automorphism& element(std::size_t i) const { return elements_[i]; }
    const std::vector<Automorphism>& elements() const { return elements_; }
    const std::string& label() const { return label_; }
    std::size_t compose(std::size_t g, std::size_t h) const { return table_[g * order() + h]; }
    std::size_t inverse(std::size_t g) const { return inverse_[g]; }
    double weight() const { return 1.0 / static_cast<double>(order()); }
    /// Index of an element with the same implementing data, or order().
    std::size_t find(const Automorphism& g) const;

private:
    std::vector<Automorphism> elements_;
    std::string label_;
    std::vector<std::uint32_t> table_;
    std::vector<std::size_t> inverse_;
    std::unordered_map<std::uint64_t, std::uint32_t> perm_index_;
};

/// G_1 ⊂ G_2 ⊂ ... with explicit inclusion maps between consecutive levels.
struct GroupChain {
    std::vector<FiniteAutomorphismGroup> groups;
    /// inclusions[k][i] = index in groups[k + 1] of element i of groups[k].
    std::vector<std::vector<std::size_t>> inclusions;
    /// Level label N for each group (|S_N| = N! for symmetric chains).
    std::vector<int> level_n;

    std::size_t levels() const { return groups.size(); }
    const FiniteAutomorphismGroup& top() const { return groups.back(); }
    /// Indices in the top group of the elements of level k.
    std::vector<std::size_t> indices_in_top(std::size_t level) const;
};

/// The 4-element group g_θ(a) = R_{-θ} a R_θ, θ ∈ {0, π/2, π, 3π/2}, on M_2.
/// g_π acts trivially but is kept as its own labeled element.
FiniteAutomorphismGroup rotation_group();
/// R_θ for θ = quarter_turns·π/2, built from exact 0/±1 entries.
ComplexMatrix rotation_matrix(int quarter_turns);

/// S_N permuting sites 0..N-1 of an L-site algebra, in lexicographic order.
FiniteAutomorphismGroup symmetric_group(int n, int num_sites);
/// S_1 ⊂ ... ⊂ S_Nmax on L sites. BudgetExceeded if Nmax! > max_enumeration.
GroupChain symmetric_group_chain(int num_sites, int max_n,
                                 std::size_t max_enumeration = FiniteAutomorphismGroup::kDefaultMaxOrder);
/// A chain with a single level.
GroupChain single_level_chain(FiniteAutomorphismGroup group);

/// count uniform draws from S_N (extended by the identity to L sites) by
/// Fisher-Yates shuffling; deterministic for a given seed.
std::vector<Permutation> sample_permutation(int n, int num_sites, std::uint64_t seed, std::size_t count);

/// |S_N^{(m0)}| / N!: the fraction of σ ∈ S_N with σ(B) ∩ B = ∅, B = {0..m0}.
/// Exact enumeration for N ≤ 8, closed-form counting beyond.
double outer_fraction(int n, int m0);
/// True when σ(k) > m0 and σ^{-1}(k) > m0 for every k ≤ m0.
bool is_outer(const Permutation& sigma, int m0);

std::size_t factorial(int n);

}  // namespace qistate

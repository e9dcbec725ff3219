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

#include "qistate/perm_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qistate/error.hpp"
#include "qistate/gns.hpp"
#include "qistate/parallel.hpp"

namespace qistate {

PermutationModel::PermutationModel(ProductState state, int m0) : state_(std::move(state)), m0_(m0) {
    const int sites = num_sites();
    const auto& special = state_.special_sites();
    const int max_f = special.empty() ? 0 : special.rbegin()->first;
    if (m0_ < 0) m0_ = max_f;
    if (m0_ < max_f) throw Error(ErrorKind::InvalidRange, "special sites must lie in {0..m0}");
    if (m0_ >= sites) throw Error(ErrorKind::InvalidRange, "m0 must be below the number of sites");

    roots_.resize(static_cast<std::size_t>(sites * sites));
    for (int n = 0; n < sites; ++n) {
        const ComplexMatrix w_inv = inverse(state_.density(n));
        for (int m = 0; m < sites; ++m) {
            const ComplexMatrix r = state_.density(m) * w_inv;
            roots_[static_cast<std::size_t>(m * sites + n)] =
                m == n ? identity(r.rows()) : psd_sqrt(0.5 * (r + r.adjoint()));
        }
    }
}

std::vector<int> PermutationModel::special_sites() const {
    std::vector<int> f;
    for (const auto& [n, w] : state_.special_sites()) f.push_back(n);
    return f;
}

const ComplexMatrix& PermutationModel::site_root(int m, int n) const {
    const int sites = num_sites();
    if (m < 0 || n < 0 || m >= sites || n >= sites) throw Error(ErrorKind::SiteOutOfRange, "site_root");
    return roots_[static_cast<std::size_t>(m * sites + n)];
}

PermutationModel default_model(int num_sites) {
    TensorAlgebra alg(2, num_sites);
    ProductState state(alg, diag({0.5, 0.5}), {{0, diag({0.75, 0.25})}}, 2.0);
    return PermutationModel(std::move(state), 0);
}

double k_limit_scalar(const PermutationModel& model) {
    const ComplexMatrix w_sqrt = psd_sqrt(model.state().tail_density());
    double s = 1.0;
    for (const auto& [n, wn] : model.state().special_sites()) s *= (psd_sqrt(wn) * w_sqrt).trace().real();
    return s;
}

AlgebraElement k_limit_closed_form(const PermutationModel& model) {
    const ComplexMatrix& w = model.state().tail_density();
    LocalProduct k;
    for (const auto& [n, wn] : model.state().special_sites()) {
        const ComplexMatrix r = w * inverse(wn);
        k.factors.emplace(n, psd_sqrt(0.5 * (r + r.adjoint())));
    }
    return k.to_element(model.algebra()) * Complex(k_limit_scalar(model), 0.0);
}

std::vector<Permutation> enumerate_symmetric(int n, int num_sites, std::size_t max_enumeration) {
    if (n < 1 || n > num_sites) throw Error(ErrorKind::InvalidRange, "need 1 <= N <= L");
    if (factorial(n) > max_enumeration) throw Error(ErrorKind::BudgetExceeded, "N! exceeds the enumeration cap");
    std::vector<int> image(static_cast<std::size_t>(num_sites));
    std::iota(image.begin(), image.end(), 0);
    std::vector<Permutation> perms;
    perms.reserve(factorial(n));
    do {
        perms.emplace_back(image);
    } while (std::next_permutation(image.begin(), image.begin() + n));
    return perms;
}

ComplexMatrix sqrt_rn_dense(const PermutationModel& model, const Permutation& sigma) {
    const int sites = model.num_sites();
    if (sigma.size() != sites) throw Error(ErrorKind::SiteOutOfRange, "permutation does not act on the truncation");
    ComplexMatrix out = model.site_root(sigma(0), 0);
    for (int n = 1; n < sites; ++n) out = kron(out, model.site_root(sigma(n), n));
    return out;
}

ComplexMatrix exact_k(const PermutationModel& model, int n, std::size_t max_enumeration) {
    const auto perms = enumerate_symmetric(n, model.num_sites(), max_enumeration);
    const Eigen::Index d = model.algebra().total_dim();
    const ComplexMatrix sum = tree_sum(perms.size(), ComplexMatrix(ComplexMatrix::Zero(d, d)),
                                       [&](std::size_t i) { return sqrt_rn_dense(model, perms[i]); });
    return sum / static_cast<double>(perms.size());
}

namespace {

void check_support(const PermutationModel& model, const LocalProduct& a) {
    for (const auto& [n, m] : a.factors) {
        if (n < 0 || n >= model.num_sites()) throw Error(ErrorKind::SiteOutOfRange, "observable site outside L");
        if (m.rows() != model.algebra().site_dim() || m.cols() != m.rows()) {
            throw Error(ErrorKind::WrongBlockDim, "observable factor has the wrong size");
        }
    }
}

ComplexMatrix factor_or_identity(const LocalProduct& a, int n, int d) {
    const ComplexMatrix* f = a.factor(n);
    return f != nullptr ? *f : identity(d);
}

}  // namespace

namespace {

// t[m * L + n] = tr(W_n a_n* s_{m,n} b_n): the site-n factor of
// tr(ρ a* x_σ^{1/2} b) when σ(n) = m.
std::vector<Complex> site_table(const PermutationModel& model, const LocalProduct& a, const LocalProduct& b) {
    check_support(model, a);
    check_support(model, b);
    const int sites = model.num_sites();
    const int d = model.algebra().site_dim();
    std::vector<Complex> t(static_cast<std::size_t>(sites * sites));
    for (int n = 0; n < sites; ++n) {
        const ComplexMatrix left = model.state().density(n) * factor_or_identity(a, n, d).adjoint();
        const ComplexMatrix right = factor_or_identity(b, n, d);
        for (int m = 0; m < sites; ++m) {
            t[static_cast<std::size_t>(m * sites + n)] = (left * model.site_root(m, n) * right).trace();
        }
    }
    return t;
}

Complex table_product(const std::vector<Complex>& t, const Permutation& sigma) {
    const int sites = sigma.size();
    Complex p(1.0, 0.0);
    for (int n = 0; n < sites; ++n) p *= t[static_cast<std::size_t>(sigma(n) * sites + n)];
    return p;
}

}  // namespace

Complex k_matrix_element(const PermutationModel& model, const std::vector<Permutation>& perms,
                         const LocalProduct& a, const LocalProduct& b) {
    const auto t = site_table(model, a, b);
    const Complex sum =
        tree_sum(perms.size(), Complex(0.0, 0.0), [&](std::size_t i) { return table_product(t, perms[i]); });
    return sum / static_cast<double>(perms.size());
}

McScalar mc_matrix_element(const PermutationModel& model, int n, const LocalProduct& a, const LocalProduct& b,
                           std::size_t samples, std::uint64_t seed) {
    const auto t = site_table(model, a, b);
    double mean_re = 0.0, mean_im = 0.0, m2_re = 0.0, m2_im = 0.0, count = 0.0;
    for (const auto& sigma : sample_permutation(n, model.num_sites(), seed, samples)) {
        const Complex v = table_product(t, sigma);
        count += 1.0;
        const double dre = v.real() - mean_re;
        const double dim = v.imag() - mean_im;
        mean_re += dre / count;
        mean_im += dim / count;
        m2_re += dre * (v.real() - mean_re);
        m2_im += dim * (v.imag() - mean_im);
    }
    const double denom = count > 1.0 ? (count - 1.0) * count : 1.0;
    McScalar out;
    out.samples = samples;
    out.mean = Complex(mean_re, mean_im);
    out.ci95_re = 1.96 * std::sqrt(m2_re / denom);
    out.ci95_im = 1.96 * std::sqrt(m2_im / denom);
    return out;
}

Complex k_limit_matrix_element(const PermutationModel& model, const LocalProduct& a, const LocalProduct& b) {
    check_support(model, a);
    check_support(model, b);
    const int d = model.algebra().site_dim();
    const ComplexMatrix& w = model.state().tail_density();
    Complex out(k_limit_scalar(model), 0.0);
    for (int n = 0; n < model.num_sites(); ++n) {
        const ComplexMatrix& wn = model.state().density(n);
        ComplexMatrix k = identity(d);
        if (model.state().special_sites().count(n) != 0) {
            const ComplexMatrix r = w * inverse(wn);
            k = psd_sqrt(0.5 * (r + r.adjoint()));
        }
        out *= (wn * factor_or_identity(a, n, d).adjoint() * k * factor_or_identity(b, n, d)).trace();
    }
    return out;
}

BoundParams bound_params(const PermutationModel& model, const LocalProduct& a, const LocalProduct& b) {
    check_support(model, a);
    check_support(model, b);
    BoundParams p;
    int max_site = -1;
    for (const auto* obs : {&a, &b}) {
        for (const auto& [n, m] : obs->factors) {
            max_site = std::max(max_site, n);
            p.m_norm = std::max(p.m_norm, operator_norm(m));
        }
    }
    p.m0 = std::max(model.m0(), max_site);
    p.k0 = max_site + 1;
    const double f_count = static_cast<double>(model.state().special_sites().size());
    p.scale = std::pow(model.state().bound_c(), 4.0 * f_count) * std::pow(p.m_norm, 2.0 * p.k0);
    return p;
}

double outer_fraction_or_zero(int n, int m0) { return n > m0 ? outer_fraction(n, m0) : 0.0; }

double convergence_bound(const BoundParams& p, int n) { return (1.0 - outer_fraction_or_zero(n, p.m0)) * p.scale; }

ConvergenceResult convergence_experiment(const PermutationModel& model, const LocalProduct& a,
                                         const LocalProduct& b, int n_lo, int n_hi, std::size_t max_enumeration) {
    if (n_lo < 1 || n_hi < n_lo || n_hi > model.num_sites()) {
        throw Error(ErrorKind::InvalidRange, "N range must satisfy 1 <= lo <= hi <= L");
    }
    if (factorial(n_hi) > max_enumeration) throw Error(ErrorKind::BudgetExceeded, "N! exceeds the enumeration cap");

    ConvergenceResult res;
    res.params = bound_params(model, a, b);
    const Complex target = k_limit_matrix_element(model, a, b);
    res.within_bound = true;
    for (int n = n_lo; n <= n_hi; ++n) {
        ConvergenceRecord rec;
        rec.n = n;
        rec.f_outer = outer_fraction_or_zero(n, res.params.m0);
        rec.matrix_element = k_matrix_element(model, enumerate_symmetric(n, model.num_sites(), max_enumeration), a, b);
        rec.target = target;
        rec.abs_err = std::abs(rec.matrix_element - target);
        rec.bound = convergence_bound(res.params, n);
        res.within_bound = res.within_bound && rec.abs_err <= rec.bound + 1e-9;
        res.records.push_back(rec);
    }
    const double first = res.records.front().abs_err;
    const double last = res.records.back().abs_err;
    res.decreasing = last < first || std::max(first, last) <= 1e-14;
    return res;
}

McEstimate welford_estimate(const PermutationModel& model, const std::vector<Permutation>& perms) {
    const Eigen::Index d = model.algebra().total_dim();
    McEstimate est;
    est.samples = perms.size();
    Eigen::MatrixXd mean_re = Eigen::MatrixXd::Zero(d, d), mean_im = Eigen::MatrixXd::Zero(d, d);
    Eigen::MatrixXd m2_re = Eigen::MatrixXd::Zero(d, d), m2_im = Eigen::MatrixXd::Zero(d, d);
    double count = 0.0;
    for (const auto& sigma : perms) {
        const ComplexMatrix s = sqrt_rn_dense(model, sigma);
        count += 1.0;
        const Eigen::MatrixXd dre = s.real() - mean_re;
        const Eigen::MatrixXd dim = s.imag() - mean_im;
        mean_re += dre / count;
        mean_im += dim / count;
        m2_re += dre.cwiseProduct(s.real() - mean_re);
        m2_im += dim.cwiseProduct(s.imag() - mean_im);
    }
    est.mean = ComplexMatrix(d, d);
    est.mean.real() = mean_re;
    est.mean.imag() = mean_im;
    const double denom = count > 1.0 ? (count - 1.0) * count : 1.0;
    est.std_err_re = (m2_re / denom).cwiseSqrt();
    est.std_err_im = (m2_im / denom).cwiseSqrt();
    est.ci95_re = 1.96 * est.std_err_re;
    est.ci95_im = 1.96 * est.std_err_im;
    return est;
}

McEstimate mc_k_estimate(const PermutationModel& model, int n, std::size_t samples, std::uint64_t seed) {
    return welford_estimate(model, sample_permutation(n, model.num_sites(), seed, samples));
}

PhiGCheck phi_g_product_check(const PermutationModel& model, const LocalProduct& a) {
    check_support(model, a);
    const GnsSpace space(model.state());
    const GnsVector phi_g{k_limit_closed_form(model).matrix};
    PhiGCheck out;
    out.value = psi_state(space, phi_g, a.to_element(model.algebra()).matrix);
    out.target = Complex(1.0, 0.0);
    const ComplexMatrix& w = model.state().tail_density();
    for (const auto& [n, m] : a.factors) out.target *= (w * m).trace();
    const double nrm = space.norm(phi_g);
    out.norm_sq = nrm * nrm;
    out.norm_sq_target = std::pow(k_limit_scalar(model), 2.0);
    out.value_dev = std::abs(out.value - out.target);
    out.norm_dev = std::abs(out.norm_sq - out.norm_sq_target);
    return out;
}

}  // namespace qistate

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

#include "qistate/commands.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qistate/error.hpp"

namespace qistate {

namespace {

struct Setup {
    ProductState state;
    GroupChain chain;
    int m0 = 0;
    bool symmetric = true;
};

Setup make_setup(const ModelConfig& model, int nmax, const RunConfig& cfg) {
    if (model.chain == ChainType::RotationExample) {
        if (nmax != 1) throw Error(ErrorKind::ConfigInvalid, "the rotation example has a single level");
        return {rotation_example_state(model.beta), single_level_chain(rotation_group()), 0, false};
    }
    if (!model.state) throw Error(ErrorKind::ConfigInvalid, "symmetric chain needs a state");
    const PermutationModel pm(*model.state, model.m0);
    return {*model.state, symmetric_group_chain(pm.num_sites(), nmax, cfg.max_enumeration), pm.m0(), true};
}

RnCocycle build_cocycle(const Setup& s) {
    const bool small = s.chain.top().order() <= 120 && s.state.algebra().total_dim() <= 64;
    const auto route = s.symmetric && !small ? RnCocycle::Route::PermutationClosedForm : RnCocycle::Route::Solve;
    return RnCocycle::build(s.state, s.chain.top(), route);
}

WitnessPredicate witness_for(const Setup& s) {
    if (!s.symmetric) return {};
    const int m0 = s.m0;
    return [m0](const Automorphism& g) { return is_outer(g.perm(), m0); };
}

std::vector<ComplexMatrix> spanning_sample(const TensorAlgebra& alg, std::uint64_t seed) {
    const Eigen::Index d = alg.total_dim();
    if (d <= kExhaustiveUnitCheckDim) return matrix_unit_basis(alg);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Eigen::Index> pick(0, d - 1);
    std::vector<ComplexMatrix> out;
    for (Eigen::Index i = 0; i < d; ++i) out.push_back(matrix_unit(d, i, i));
    for (int k = 0; k < 256; ++k) out.push_back(matrix_unit(d, pick(rng), pick(rng)));
    return out;
}

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
    return m;
}

}  // namespace

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NotQuasiInvariant:
        case ErrorKind::ConsistencyFailure:
        case ErrorKind::HypothesisHViolated:
        case ErrorKind::NonCommutingCocycle:
            return 1;
        default:
            return 2;
    }
}

CommandResult run_guarded(const std::function<CommandResult()>& body) {
    try {
        return body();
    } catch (const Error& e) {
        CommandResult r;
        r.exit_code = exit_code_for(e.kind());
        r.report = {{"error", std::string(to_string(e.kind()))}, {"message", e.what()}, {"pass", false}};
        return r;
    }
}

ComplexMatrix rotation_x_closed_form(double beta, int quarter_turns) {
    if (quarter_turns % 2 == 0) return identity(2);
    return diag({std::exp(-beta), std::exp(beta)});
}

ComplexMatrix rotation_k_closed_form(double beta) {
    return diag({0.5 * (1.0 + std::exp(-beta / 2.0)), 0.5 * (1.0 + std::exp(beta / 2.0))});
}

ComplexMatrix rotation_p_closed_form(double beta, const ComplexMatrix& a) {
    const double em = std::exp(-beta / 2.0);
    const double ep = std::exp(beta / 2.0);
    ComplexMatrix p(2, 2);
    p(0, 0) = a(0, 0) + em * a(1, 1);
    p(0, 1) = a(0, 1) - ep * a(1, 0);
    p(1, 0) = a(1, 0) - em * a(0, 1);
    p(1, 1) = a(1, 1) + ep * a(0, 0);
    return 0.5 * p;
}

CommandResult cmd_example2(double beta, const RunConfig& cfg) {
    const ProductState state = rotation_example_state(beta);
    const FiniteAutomorphismGroup group = rotation_group();
    const RnCocycle c = RnCocycle::build(state, group);
    const GnsSpace space(state);

    double x_dev = 0.0;
    for (std::size_t g = 0; g < group.order(); ++g) {
        x_dev = std::max(x_dev, max_abs_diff(c.x(g), rotation_x_closed_form(beta, static_cast<int>(g))));
    }
    const KOperator k = k_operator(space, group, c, cfg.exact);
    const double k_dev = max_abs_diff(k.k, rotation_k_closed_form(beta));

    const GnsOperator p = projection_p(space, group, c);
    std::mt19937_64 rng(cfg.seed);
    double p_dev = 0.0;
    double psi_dev = 0.0;
    const GnsVector phi_g = phi_g_vector(space, group, c, cfg.exact);
    for (int i = 0; i < 10; ++i) {
        const ComplexMatrix a = random_matrix(2, rng);
        p_dev = std::max(p_dev, max_abs_diff(p.apply(space, GnsVector{a}).element, rotation_p_closed_form(beta, a)));
        // ψ_G is the normalized trace for every β.
        psi_dev = std::max(psi_dev, std::abs(psi_state(space, phi_g, a) - 0.5 * a.trace()));
    }
    const double phi_dev = max_abs_diff(phi_g.element, rotation_k_closed_form(beta));
    const double separation = operator_norm(to_dense(space, p) - left_mult_dense(space, k.k));
    const CocycleReport cr = verify_cocycle(state, group, c);

    CommandResult r;
    const bool pass = x_dev <= 1e-12 && k_dev <= 1e-12 && p_dev <= cfg.exact && phi_dev <= cfg.exact &&
                      psi_dev <= cfg.exact && cr.pass;
    r.report = {{"beta", beta},
                {"x_dev", x_dev},
                {"k_dev", k_dev},
                {"p_dev", p_dev},
                {"phi_g_dev", phi_dev},
                {"psi_dev", psi_dev},
                {"p_minus_k_norm", separation},
                {"cocycle", to_json(cr)},
                {"pass", pass}};
    r.exit_code = pass ? 0 : 1;
    return r;
}

CommandResult cmd_verify(const ModelConfig& model, const RunConfig& cfg) {
    const Setup s = make_setup(model, model.chain == ChainType::RotationExample ? 1 : model.max_n, cfg);
    const RnCocycle c = build_cocycle(s);
    const CocycleReport cr = verify_cocycle(s.state, s.chain.top(), c);
    const GnsSpace space(s.state);

    const RepresentationCheck rep = check_representation(space, s.chain.top(), c);
    const double chain_dev = projection_chain_deviation(space, s.chain, c);
    const GnsVector phi_g = phi_g_vector(space, s.chain.top(), c, cfg.exact);
    const ConditionalExpectation e(s.chain.top(), space.algebra());
    const UmegakiReport um = verify_umegaki(e, space, phi_g, cfg.umegaki_samples, cfg.seed);
    const double mart_dev = martingale_identity_deviation(s.chain, space.algebra(), spanning_sample(space.algebra(), cfg.seed));
    const HypothesisReport h = hypothesis_h_report(space, s.chain, c, witness_for(s), cfg.exact);

    const bool rep_ok = rep.homomorphism <= cfg.exact && rep.unitarity <= cfg.exact;
    const bool pass = cr.pass && rep_ok && chain_dev <= cfg.exact && um.pass && mart_dev <= cfg.exact && h.holds;
    CommandResult r;
    r.report = {{"cocycle", to_json(cr)},
                {"representation", {{"homomorphism", rep.homomorphism}, {"unitarity", rep.unitarity}, {"pass", rep_ok}}},
                {"projection_chain", {{"max_dev", chain_dev}, {"pass", chain_dev <= cfg.exact}}},
                {"umegaki", to_json(um)},
                {"martingale_identity", {{"max_dev", mart_dev}, {"pass", mart_dev <= cfg.exact}}},
                {"hypothesis_h", to_json(h)},
                {"pass", pass}};
    r.exit_code = pass ? 0 : 1;
    return r;
}

CommandResult cmd_martingale(const ModelConfig& model, const LocalProduct& x, int nmax, const RunConfig& cfg) {
    const Setup s = make_setup(model, nmax, cfg);
    const RnCocycle c = build_cocycle(s);
    const GnsSpace space(s.state);
    const AlgebraElement xa = x.to_element(space.algebra());
    const MartingaleRun run = martingale_run(space, s.chain, c, xa.matrix, {cfg.exact, cfg.convergence});
    const HypothesisReport h = hypothesis_h_report(space, s.chain, c, witness_for(s), cfg.exact);

    CommandResult r;
    const bool pass = run.identity_holds && h.holds;
    r.report = {{"martingale", to_json(run)}, {"hypothesis_h", to_json(h)}, {"pass", pass}};
    r.csv = martingale_csv(run);
    r.exit_code = pass ? 0 : 1;
    return r;
}

CommandResult cmd_convergence(const ModelConfig& model, const LocalProduct& a, const LocalProduct& b, int n_lo,
                              int n_hi, const std::optional<McOptions>& mc, const RunConfig& cfg) {
    if (model.chain != ChainType::Symmetric || !model.state) {
        throw Error(ErrorKind::ConfigInvalid, "convergence needs a symmetric-chain model");
    }
    const PermutationModel pm(*model.state, model.m0);
    if (n_lo < 1 || n_hi < n_lo || n_hi > pm.num_sites()) {
        throw Error(ErrorKind::InvalidRange, "N range must satisfy 1 <= lo <= hi <= L");
    }
    int exact_hi = n_lo - 1;
    while (exact_hi < n_hi && factorial(exact_hi + 1) <= cfg.max_enumeration) ++exact_hi;
    if (exact_hi < n_hi && (!mc || mc->samples == 0)) {
        throw Error(ErrorKind::BudgetExceeded, "N! above the enumeration cap; pass Monte Carlo samples");
    }

    CommandResult r;
    r.csv = convergence_csv_header();
    Json records = Json::array();
    bool pass = true;
    const BoundParams params = bound_params(pm, a, b);
    if (exact_hi >= n_lo) {
        const ConvergenceResult res = convergence_experiment(pm, a, b, n_lo, exact_hi, cfg.max_enumeration);
        for (const auto& rec : res.records) {
            r.csv += convergence_csv_row(rec, "exact", 0.0, 0.0);
            records.push_back({{"N", rec.n}, {"method", "exact"}, {"abs_err", rec.abs_err}, {"bound", rec.bound}});
        }
        pass = res.within_bound && res.decreasing;
        r.report["within_bound"] = res.within_bound;
        r.report["decreasing"] = res.decreasing;
    }
    if (mc && mc->samples > 0) {
        const Complex target = k_limit_matrix_element(pm, a, b);
        for (int n = n_lo; n <= n_hi; ++n) {
            const McScalar est = mc_matrix_element(pm, n, a, b, mc->samples, mc->seed);
            ConvergenceRecord rec;
            rec.n = n;
            rec.f_outer = outer_fraction_or_zero(n, params.m0);
            rec.matrix_element = est.mean;
            rec.target = target;
            rec.abs_err = std::abs(est.mean - target);
            rec.bound = convergence_bound(params, n);
            r.csv += convergence_csv_row(rec, "mc", est.ci95_re, est.ci95_im);
            records.push_back({{"N", n},
                               {"method", "mc"},
                               {"abs_err", rec.abs_err},
                               {"bound", rec.bound},
                               {"ci95_re", est.ci95_re},
                               {"ci95_im", est.ci95_im}});
        }
    }
    r.report["m0"] = params.m0;
    r.report["k0"] = params.k0;
    r.report["records"] = std::move(records);
    r.report["pass"] = pass;
    r.exit_code = pass ? 0 : 1;
    return r;
}

}  // namespace qistate

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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qistate/commands.hpp"
#include "qistate/perm_model.hpp"

namespace py = pybind11;

namespace {

using qistate::ComplexMatrix;
using qistate::Json;

// Reports cross the boundary as JSON text; the Python wrapper decodes them.
std::string finish(const qistate::CommandResult& r) {
    Json out = r.report;
    out["exit_code"] = r.exit_code;
    if (!r.csv.empty()) out["csv"] = r.csv;
    return out.dump();
}

qistate::ModelConfig model_from(const std::string& text) {
    return qistate::model_config_from_json(Json::parse(text));
}

qistate::LocalProduct observable_from(const std::string& text, const qistate::ModelConfig& model) {
    return qistate::observable_from_json(Json::parse(text), model.state ? model.state->algebra().site_dim() : 2);
}

qistate::RunConfig run_config(std::uint64_t seed) {
    qistate::RunConfig cfg;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Strongly quasi-invariant states: group averages, martingales and the permutation model";

    static py::exception<qistate::Error> error(m, "QiStateError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const qistate::Error& e) {
            py::set_error(error, e.what());
        } catch (const Json::exception& e) {
            py::set_error(PyExc_ValueError, e.what());
        }
    });

    m.def(
        "example2", [](double beta, std::uint64_t seed) { return finish(qistate::cmd_example2(beta, run_config(seed))); },
        py::arg("beta"), py::arg("seed") = 42);
    m.def(
        "verify",
        [](const std::string& model, std::uint64_t seed) {
            return finish(qistate::run_guarded([&] { return qistate::cmd_verify(model_from(model), run_config(seed)); }));
        },
        py::arg("model"), py::arg("seed") = 42);
    m.def(
        "martingale",
        [](const std::string& model, const std::string& observable, int nmax) {
            const auto cfg = model_from(model);
            return finish(qistate::cmd_martingale(cfg, observable_from(observable, cfg), nmax));
        },
        py::arg("model"), py::arg("observable"), py::arg("nmax"));
    m.def(
        "convergence",
        [](const std::string& model, const std::string& a, const std::string& b, int lo, int hi,
           std::size_t mc_samples, std::uint64_t seed) {
            const auto cfg = model_from(model);
            std::optional<qistate::McOptions> mc;
            if (mc_samples > 0) mc = qistate::McOptions{mc_samples, seed};
            return finish(qistate::cmd_convergence(cfg, observable_from(a, cfg), observable_from(b, cfg), lo, hi, mc));
        },
        py::arg("model"), py::arg("a"), py::arg("b"), py::arg("n_lo"), py::arg("n_hi"), py::arg("mc_samples") = 0,
        py::arg("seed") = 42);

    py::class_<qistate::PermutationModel>(m, "PermutationModel")
        .def_static(
            "from_json",
            [](const std::string& state, int m0) {
                return qistate::PermutationModel(qistate::product_state_from_json(Json::parse(state)), m0);
            },
            py::arg("state"), py::arg("m0") = -1)
        .def_property_readonly("num_sites", &qistate::PermutationModel::num_sites)
        .def_property_readonly("m0", &qistate::PermutationModel::m0)
        .def_property_readonly("special_sites", &qistate::PermutationModel::special_sites)
        .def("total_density", [](const qistate::PermutationModel& pm) { return pm.state().total_density(); });

    m.def("default_model", &qistate::default_model, py::arg("num_sites") = 7);
    m.def("k_limit_scalar", &qistate::k_limit_scalar);
    m.def("k_limit_closed_form", [](const qistate::PermutationModel& pm) {
        return qistate::k_limit_closed_form(pm).matrix;
    });
    m.def(
        "exact_k", [](const qistate::PermutationModel& pm, int n) { return qistate::exact_k(pm, n); }, py::arg("model"),
        py::arg("n"));
    m.def(
        "mc_k_estimate",
        [](const qistate::PermutationModel& pm, int n, std::size_t samples, std::uint64_t seed) {
            const auto est = qistate::mc_k_estimate(pm, n, samples, seed);
            py::dict d;
            d["mean"] = est.mean;
            d["std_err_re"] = est.std_err_re;
            d["std_err_im"] = est.std_err_im;
            d["ci95_re"] = est.ci95_re;
            d["ci95_im"] = est.ci95_im;
            return d;
        },
        py::arg("model"), py::arg("n"), py::arg("samples"), py::arg("seed"));
    m.def(
        "rn_derivative",
        [](const qistate::PermutationModel& pm, std::vector<int> image) {
            return qistate::perm_model_rn(pm.state(), qistate::Permutation(std::move(image))).matrix;
        },
        py::arg("model"), py::arg("image"));
    m.def(
        "symmetric_average",
        [](const qistate::PermutationModel& pm, int n, const ComplexMatrix& a) {
            const qistate::ConditionalExpectation e(qistate::symmetric_group(n, pm.num_sites()), pm.algebra());
            return e(a);
        },
        py::arg("model"), py::arg("n"), py::arg("a"));
    m.def(
        "phi_g_norm_sq",
        [](const qistate::PermutationModel& pm) {
            return qistate::phi_g_product_check(pm, qistate::LocalProduct{}).norm_sq;
        },
        py::arg("model"));

    m.def("outer_fraction", &qistate::outer_fraction, py::arg("n"), py::arg("m0"));
    m.def(
        "is_outer", [](std::vector<int> image, int m0) { return qistate::is_outer(qistate::Permutation(std::move(image)), m0); },
        py::arg("image"), py::arg("m0"));
    m.def(
        "psd_sqrt", [](const ComplexMatrix& a) { return qistate::psd_sqrt(a); }, py::arg("a"));
    m.def(
        "rotation_x", [](double beta, int quarter_turns) {
            const auto state = qistate::rotation_example_state(beta);
            const auto group = qistate::rotation_group();
            return qistate::RnCocycle::build(state, group).x(static_cast<std::size_t>(quarter_turns % 4));
        },
        py::arg("beta"), py::arg("quarter_turns"));
}

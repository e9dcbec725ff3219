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

#include "qistate/io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qistate/error.hpp"

namespace qistate {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::ConfigInvalid, what); }

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) invalid(std::string("missing field '") + key + "'");
    return j.at(key);
}

int int_field(const Json& j, const char* key) {
    const Json& v = field(j, key);
    if (!v.is_number_integer()) invalid(std::string("field '") + key + "' must be an integer");
    return v.get<int>();
}

double number_field(const Json& j, const char* key) {
    const Json& v = field(j, key);
    if (!v.is_number()) invalid(std::string("field '") + key + "' must be a number");
    return v.get<double>();
}

}  // namespace

Json matrix_to_json(const ComplexMatrix& m) {
    Json entries = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index k = 0; k < m.cols(); ++k) entries.push_back({m(i, k).real(), m(i, k).imag()});
    }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

ComplexMatrix matrix_from_json(const Json& j) {
    const int rows = int_field(j, "rows");
    const int cols = int_field(j, "cols");
    const Json& entries = field(j, "entries");
    if (rows < 0 || cols < 0) invalid("negative matrix shape");
    if (!entries.is_array() || entries.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
        invalid("matrix entries do not match rows * cols");
    }
    ComplexMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int k = 0; k < cols; ++k) {
            const Json& e = entries[static_cast<std::size_t>(i * cols + k)];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
                invalid("matrix entry must be [re, im]");
            }
            m(i, k) = Complex(e[0].get<double>(), e[1].get<double>());
        }
    }
    return m;
}

Json permutation_to_json(const Permutation& p) { return Json(p.image()); }

Json product_state_to_json(const ProductState& phi) {
    Json special = Json::object();
    for (const auto& [n, w] : phi.special_sites()) special[std::to_string(n)] = matrix_to_json(w);
    return {{"site_dim", phi.algebra().site_dim()},
            {"num_sites", phi.algebra().num_sites()},
            {"tail_density", matrix_to_json(phi.tail_density())},
            {"special_sites", std::move(special)},
            {"bound_C", phi.bound_c()}};
}

ProductState product_state_from_json(const Json& j) {
    const int d = int_field(j, "site_dim");
    const int sites = int_field(j, "num_sites");
    if (d < 1 || sites < 1) invalid("site_dim and num_sites must be positive");
    std::map<int, ComplexMatrix> special;
    if (j.contains("special_sites")) {
        const Json& s = j.at("special_sites");
        if (!s.is_object()) invalid("special_sites must be an object");
        for (const auto& [key, value] : s.items()) {
            int n = 0;
            const auto res = std::from_chars(key.data(), key.data() + key.size(), n);
            if (res.ec != std::errc() || res.ptr != key.data() + key.size()) invalid("bad site key '" + key + "'");
            special.emplace(n, matrix_from_json(value));
        }
    }
    return ProductState(TensorAlgebra(d, sites), matrix_from_json(field(j, "tail_density")), std::move(special),
                        number_field(j, "bound_C"));
}

ModelConfig model_config_from_json(const Json& j) {
    ModelConfig c;
    const Json& chain = field(j, "chain");
    const Json& type = field(chain, "type");
    if (!type.is_string()) invalid("chain type must be a string");
    if (type == "rotation_example") {
        c.chain = ChainType::RotationExample;
        c.beta = number_field(chain, "beta");
        if (j.contains("state")) invalid("the rotation example builds its own state");
        return c;
    }
    if (type != "symmetric") invalid("unknown chain type '" + type.get<std::string>() + "'");
    c.chain = ChainType::Symmetric;
    c.state = product_state_from_json(field(j, "state"));
    c.max_n = int_field(chain, "max_N");
    if (chain.contains("num_sites") && int_field(chain, "num_sites") != c.state->algebra().num_sites()) {
        invalid("chain num_sites differs from the state");
    }
    if (c.max_n < 1 || c.max_n > c.state->algebra().num_sites()) invalid("max_N must lie in [1, num_sites]");
    if (j.contains("m0")) c.m0 = int_field(j, "m0");
    return c;
}

Json model_config_to_json(const ModelConfig& c) {
    if (c.chain == ChainType::RotationExample) return {{"chain", {{"type", "rotation_example"}, {"beta", c.beta}}}};
    Json j = {{"state", product_state_to_json(*c.state)},
              {"chain", {{"type", "symmetric"}, {"num_sites", c.state->algebra().num_sites()}, {"max_N", c.max_n}}}};
    if (c.m0 >= 0) j["m0"] = c.m0;
    return j;
}

LocalProduct observable_from_json(const Json& j, int site_dim) {
    if (!j.is_array()) invalid("observable must be a list of {site, matrix}");
    LocalProduct a;
    for (const Json& item : j) {
        const int site = int_field(item, "site");
        if (site < 0) invalid("observable site must be nonnegative");
        ComplexMatrix m = matrix_from_json(field(item, "matrix"));
        if (m.rows() != site_dim || m.cols() != site_dim) invalid("observable factor must be d x d");
        if (!a.factors.emplace(site, std::move(m)).second) invalid("site listed twice in observable");
    }
    return a;
}

Json observable_to_json(const LocalProduct& a) {
    Json out = Json::array();
    for (const auto& [n, m] : a.factors) out.push_back({{"site", n}, {"matrix", matrix_to_json(m)}});
    return out;
}

Json to_json(const CocycleReport& r) {
    return {{"group", r.group},
            {"checks",
             {{"defining_identity", r.defining_identity},
              {"self_adjoint", r.self_adjoint},
              {"positivity", r.positivity},
              {"cocycle", r.cocycle},
              {"centralizer", r.centralizer},
              {"commutator", r.commutator}}},
            {"pass", r.pass}};
}

Json to_json(const HypothesisReport& r) {
    Json levels = Json::array();
    for (const auto& l : r.levels) {
        levels.push_back({{"N", l.n},
                          {"group_order", l.group_order},
                          {"phi_norm_sq", l.phi_norm_sq},
                          {"eps0", l.eps0},
                          {"delta0", l.delta0},
                          {"lower_bound", l.lower_bound},
                          {"k_min_sv", l.k_min_sv},
                          {"cauchy_increment", l.cauchy_increment}});
    }
    return {{"levels", std::move(levels)}, {"holds", r.holds}};
}

Json to_json(const UmegakiReport& r) {
    return {{"module_property", r.module_property},
            {"psi_invariance", r.psi_invariance},
            {"idempotence", r.idempotence},
            {"contractivity", r.contractivity},
            {"positivity", r.positivity},
            {"samples", r.samples},
            {"pass", r.pass}};
}

Json to_json(const MartingaleRun& r) {
    Json levels = Json::array();
    for (const auto& l : r.levels) {
        levels.push_back({{"N", l.n},
                          {"group_order", l.group_order},
                          {"increment_norm", l.increment},
                          {"martingale_max_dev", l.martingale_max_dev},
                          {"psi_invariance_dev", l.psi_invariance_dev},
                          {"fixed_dim", l.fixed_dim}});
    }
    return {{"levels", std::move(levels)},
            {"limit", matrix_to_json(r.limit)},
            {"converged", r.converged},
            {"certified", r.certified},
            {"identity_holds", r.identity_holds},
            {"limit_fixed_dev", r.limit_fixed_dev}};
}

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::string martingale_csv(const MartingaleRun& run) {
    std::string out = "N,group_order,increment_norm,martingale_max_dev,psi_invariance_dev,fixed_dim\n";
    for (const auto& l : run.levels) {
        out += std::to_string(l.n) + ',' + std::to_string(l.group_order) + ',' + format_double(l.increment) + ',' +
               format_double(l.martingale_max_dev) + ',' + format_double(l.psi_invariance_dev) + ',' +
               std::to_string(l.fixed_dim) + '\n';
    }
    return out;
}

std::string convergence_csv_header() {
    return "N,f_outer,matel_re,matel_im,target_re,target_im,abs_err,bound,method,ci95_re,ci95_im\n";
}

std::string convergence_csv_row(const ConvergenceRecord& r, const std::string& method, double ci95_re,
                                double ci95_im) {
    return std::to_string(r.n) + ',' + format_double(r.f_outer) + ',' + format_double(r.matrix_element.real()) + ',' +
           format_double(r.matrix_element.imag()) + ',' + format_double(r.target.real()) + ',' +
           format_double(r.target.imag()) + ',' + format_double(r.abs_err) + ',' + format_double(r.bound) + ',' +
           method + ',' + format_double(ci95_re) + ',' + format_double(ci95_im) + '\n';
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) invalid("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        invalid("'" + path + "' is not valid JSON: " + e.what());
    }
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) invalid("cannot write '" + tmp.string() + "'");
        out << content;
        if (!out.flush()) invalid("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) invalid("cannot rename onto '" + path + "': " + ec.message());
}

}  // namespace qistate

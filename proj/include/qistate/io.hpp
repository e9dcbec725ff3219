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

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qistate/algebra.hpp"
#include "qistate/expectation.hpp"
#include "qistate/gns.hpp"
#include "qistate/perm_model.hpp"
#include "qistate/sqi.hpp"

namespace qistate {

using Json = nlohmann::json;

/// {"rows": r, "cols": c, "entries": [[re, im], ...]} in row-major order.
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

Json permutation_to_json(const Permutation& p);

/// {"site_dim", "num_sites", "tail_density", "special_sites": {"n": m}, "bound_C"}.
Json product_state_to_json(const ProductState& phi);
ProductState product_state_from_json(const Json& j);

enum class ChainType { Symmetric, RotationExample };

/// A model file: {"state": <product state>, "chain": <chain>, "m0": int}.
/// The chain is {"type": "symmetric", "num_sites": L, "max_N": n} or
/// {"type": "rotation_example", "beta": b}; the rotation chain needs no state.
struct ModelConfig {
    ChainType chain = ChainType::Symmetric;
    std::optional<ProductState> state;
    int max_n = 1;
    double beta = 0.0;
    int m0 = -1;
};

ModelConfig model_config_from_json(const Json& j);
Json model_config_to_json(const ModelConfig& c);

/// [{"site": n, "matrix": m}, ...] as an elementary tensor.
LocalProduct observable_from_json(const Json& j, int site_dim);
Json observable_to_json(const LocalProduct& a);

Json to_json(const CocycleReport& r);
Json to_json(const HypothesisReport& r);
Json to_json(const UmegakiReport& r);
Json to_json(const MartingaleRun& r);

/// Column header plus rows, numbers in shortest round-trip form.
std::string martingale_csv(const MartingaleRun& run);
std::string convergence_csv_header();
std::string convergence_csv_row(const ConvergenceRecord& r, const std::string& method, double ci95_re,
                                double ci95_im);

/// Shortest decimal that parses back to exactly x.
std::string format_double(double x);

/// ConfigInvalid if the file is missing or not valid JSON.
Json read_json_file(const std::string& path);
/// Writes to a sibling temporary file, then renames over path.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace qistate

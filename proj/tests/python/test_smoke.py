# Copyright 2026 The qistate Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Smoke tests for the Python bindings."""

import json
import math
import os
import pathlib

import numpy as np
import pytest

import qistate

CONFIGS = pathlib.Path(os.environ.get("QISTATE_CONFIG_DIR", pathlib.Path(__file__).parents[2] / "configs"))
S = (math.sqrt(3.0) + 1.0) / (2.0 * math.sqrt(2.0))


def load(name):
    return json.loads((CONFIGS / name).read_text())


def test_example2_passes():
    r = qistate.example2(math.log(4.0))
    assert r["exit_code"] == 0
    assert r["pass"]
    assert abs(r["p_minus_k_norm"] - 1.25) < 1e-12


def test_rotation_derivative():
    x = qistate.rotation_x(math.log(4.0), 1)
    np.testing.assert_allclose(x, np.diag([0.25, 4.0]), atol=1e-14)


def test_default_model_closed_form():
    m = qistate.default_model()
    assert m.num_sites == 7
    assert m.special_sites == [0]
    assert abs(qistate.k_limit_scalar(m) - S) < 1e-15
    k = qistate.k_limit_closed_form(m)
    assert k.shape == (128, 128)
    assert abs(k[0, 0] - S * math.sqrt(2.0 / 3.0)) < 1e-14
    assert abs(qistate.phi_g_norm_sq(m) - S * S) < 1e-12


def test_exact_k_and_monte_carlo():
    m = qistate.default_model(4)
    k = qistate.exact_k(m, 4)
    rho = m.total_density()
    assert abs(np.trace(rho @ k).real - (0.25 + 0.75 * S * S)) < 1e-13
    a = qistate.mc_k_estimate(m, 4, 500, 3)
    b = qistate.mc_k_estimate(m, 4, 500, 3)
    assert np.array_equal(a["mean"], b["mean"])
    assert np.all(a["ci95_re"] >= 0.0)


def test_rn_derivative_and_average():
    m = qistate.default_model(2)
    x = qistate.rn_derivative(m, [1, 0])
    np.testing.assert_allclose(x, np.kron(np.diag([2 / 3, 2.0]), np.diag([1.5, 0.5])), atol=1e-14)
    a = np.kron(np.diag([1.0, 0.0]), np.eye(2)).astype(complex)
    avg = qistate.symmetric_average(m, 2, a)
    np.testing.assert_allclose(avg, 0.5 * (a + np.kron(np.eye(2), np.diag([1.0, 0.0]))), atol=1e-15)


def test_combinatorics():
    assert abs(qistate.outer_fraction(4, 0) - 0.75) < 1e-15
    assert qistate.is_outer([1, 0, 2], 0)
    assert not qistate.is_outer([0, 2, 1], 0)
    r = qistate.psd_sqrt(np.diag([4.0, 9.0]).astype(complex))
    np.testing.assert_allclose(r, np.diag([2.0, 3.0]), atol=1e-15)


def test_commands_from_configs():
    assert qistate.verify(load("rotation_ln4.json"))["exit_code"] == 0
    r = qistate.martingale(load("default_L4.json"), load("obs_j0_e11.json"), 3)
    assert r["exit_code"] == 0
    assert r["csv"].startswith("N,group_order,")
    c = qistate.convergence(load("default_L7.json"), load("obs_identity.json"), load("obs_identity.json"), 3, 5)
    assert c["exit_code"] == 0
    errs = [rec["abs_err"] for rec in c["records"]]
    for n, e in zip(range(3, 6), errs):
        assert abs(e - (1.0 - S * S) / n) < 1e-13


def test_errors():
    assert qistate.verify(load("bad_singular.json"))["exit_code"] == 2
    with pytest.raises(ValueError):
        qistate.verify("{not json")
    with pytest.raises(qistate.QiStateError):
        qistate.PermutationModel.from_json(json.dumps(load("default_L4.json")["state"]), 9)

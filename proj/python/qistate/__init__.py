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
"""Python bindings for qistate."""

import json as _json

from ._core import (
    PermutationModel,
    QiStateError,
    default_model,
    exact_k,
    is_outer,
    k_limit_closed_form,
    k_limit_scalar,
    mc_k_estimate,
    outer_fraction,
    phi_g_norm_sq,
    psd_sqrt,
    rn_derivative,
    rotation_x,
    symmetric_average,
)
from . import _core

__all__ = [
    "PermutationModel",
    "QiStateError",
    "convergence",
    "default_model",
    "exact_k",
    "example2",
    "is_outer",
    "k_limit_closed_form",
    "k_limit_scalar",
    "martingale",
    "mc_k_estimate",
    "outer_fraction",
    "phi_g_norm_sq",
    "psd_sqrt",
    "rn_derivative",
    "rotation_x",
    "symmetric_average",
    "verify",
]


def _text(obj):
    return obj if isinstance(obj, str) else _json.dumps(obj)


def example2(beta, seed=42):
    """Rotation example against its closed forms; returns the report dict."""
    return _json.loads(_core.example2(beta, seed))


def verify(model, seed=42):
    """All verification suites on a model config (dict or JSON text)."""
    return _json.loads(_core.verify(_text(model), seed))


def martingale(model, observable, nmax):
    return _json.loads(_core.martingale(_text(model), _text(observable), nmax))


def convergence(model, a, b, n_lo, n_hi, mc_samples=0, seed=42):
    return _json.loads(_core.convergence(_text(model), _text(a), _text(b), n_lo, n_hi, mc_samples, seed))

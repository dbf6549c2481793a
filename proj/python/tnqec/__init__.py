# Copyright 2026 The tnqec Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Tensor-network decoding of the surface code."""

import json

from ._tnqec import (
    ConfigError,
    DecodeResult,
    DecoderConfig,
    Error,
    IsingParams,
    Lattice,
    NoiseNetworkFactor,
    Norm,
    ZeroProbabilityError,
    amplitude_damping_factors,
    cbf_factors,
    cbf_mcmc_sample,
    decode,
    diamond_distance_from_identity,
    mwpm_decode,
    pauli_factors,
    trace_distance_from_identity,
)
from . import _tnqec


def decode_request(request, seed=None):
    """Decodes a request given as a dict; returns the result as a dict."""
    args = (json.dumps(request),) if seed is None else (json.dumps(request), seed)
    return json.loads(_tnqec.decode_request(*args))


def run_benchmark(config):
    """Runs a benchmark config given as a dict; returns {"metadata", "columns", "rows"}."""
    return json.loads(_tnqec.run_benchmark(json.dumps(config)))


__all__ = [
    "ConfigError",
    "DecodeResult",
    "DecoderConfig",
    "Error",
    "IsingParams",
    "Lattice",
    "NoiseNetworkFactor",
    "Norm",
    "ZeroProbabilityError",
    "amplitude_damping_factors",
    "cbf_factors",
    "cbf_mcmc_sample",
    "decode",
    "decode_request",
    "diamond_distance_from_identity",
    "mwpm_decode",
    "pauli_factors",
    "run_benchmark",
    "trace_distance_from_identity",
]

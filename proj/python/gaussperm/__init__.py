# Copyright 2026 The gaussperm Authors
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
"""Additive-error permanent estimation with Gaussian fields."""

from ._gaussperm import (
    ConsistencyError,
    GausspermError,
    NumericalError,
    SampleOverflowError,
    build_embedding,
    chebyshev_failure_bound,
    error_scale,
    estimate,
    exact_single_sample_variance,
    isserlis_expectation,
    parse_matrix,
    permanent,
    required_samples,
    variance_bound,
)

__all__ = [
    "ConsistencyError",
    "GausspermError",
    "NumericalError",
    "SampleOverflowError",
    "build_embedding",
    "chebyshev_failure_bound",
    "error_scale",
    "estimate",
    "exact_single_sample_variance",
    "isserlis_expectation",
    "parse_matrix",
    "permanent",
    "required_samples",
    "variance_bound",
]

// Copyright 2026 The gaussperm Authors
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

#ifndef GAUSSPERM_EXACT_HPP
#define GAUSSPERM_EXACT_HPP

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "gaussperm/matrix.hpp"

namespace gaussperm {

enum class ExactMethod { kNaive, kRyser, kGlynnEnumeration };

std::string_view to_string(ExactMethod method);

struct PermanentValue {
    double value = 0.0;
    ExactMethod method = ExactMethod::kNaive;
    /// Floating-point multiplications and additions in the main loop.
    std::uint64_t ops_performed = 0;
};

/// Largest M each exact algorithm accepts.
struct OracleLimits {
    std::size_t naive_max_m = 12;
    std::size_t ryser_max_m = 30;
    std::size_t glynn_max_m = 20;
};

/// Sum over all M! permutations of the products of selected entries.
PermanentValue permanent_naive(const DenseMatrix &a, const OracleLimits &limits = {});

/// Ryser inclusion-exclusion over Gray-code ordered column subsets, O(2^M M).
PermanentValue permanent_ryser(const DenseMatrix &a, const OracleLimits &limits = {});

/// Average of prod_i x_i * prod_j (sum_i a_ij x_i) over all x in {-1, 1}^M.
PermanentValue glynn_full_enumeration(const DenseMatrix &a, const OracleLimits &limits = {});

}  // namespace gaussperm

#endif

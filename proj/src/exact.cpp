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

#include "gaussperm/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <vector>

#include "gaussperm/errors.hpp"

namespace gaussperm {

std::string_view to_string(ExactMethod method) {
    switch (method) {
        case ExactMethod::kNaive:
            return "naive";
        case ExactMethod::kRyser:
            return "ryser";
        case ExactMethod::kGlynnEnumeration:
            return "glynn-enum";
    }
    return "unknown";
}

namespace {

void check_input(const DenseMatrix &a, std::size_t max_m, std::string_view name) {
    if (!a.is_square()) {
        throw InvalidInput(std::string(name) + ": matrix must be square, got " + std::to_string(a.rows()) + "x" +
                           std::to_string(a.cols()));
    }
    a.require_finite();
    if (a.rows() > max_m) {
        throw SizeLimitError(std::string(name) + ": M = " + std::to_string(a.rows()) + " exceeds the limit of " +
                             std::to_string(max_m));
    }
}

}  // namespace

PermanentValue permanent_naive(const DenseMatrix &a, const OracleLimits &limits) {
    check_input(a, limits.naive_max_m, "permanent_naive");
    const std::size_t m = a.rows();
    PermanentValue out{1.0, ExactMethod::kNaive, 0};
    if (m == 0) {
        return out;
    }
    std::vector<std::size_t> sigma(m);
    std::iota(sigma.begin(), sigma.end(), 0);
    double sum = 0.0;
    std::uint64_t ops = 0;
    do {
        double term = a(0, sigma[0]);
        for (std::size_t i = 1; i < m; ++i) {
            term *= a(i, sigma[i]);
        }
        sum += term;
        ops += m;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    out.value = sum;
    out.ops_performed = ops;
    return out;
}

PermanentValue permanent_ryser(const DenseMatrix &a, const OracleLimits &limits) {
    check_input(a, limits.ryser_max_m, "permanent_ryser");
    const std::size_t m = a.rows();
    PermanentValue out{1.0, ExactMethod::kRyser, 0};
    if (m == 0) {
        return out;
    }
    // perm(A) = (-1)^M sum_S (-1)^|S| prod_i sum_{j in S} a_ij, with subsets
    // visited in Gray-code order so each step adds or removes one column.
    std::vector<double> row_sums(m, 0.0);
    std::uint64_t in_subset = 0;
    double total = 0.0;
    std::uint64_t ops = 0;
    const std::uint64_t subsets = std::uint64_t{1} << m;
    for (std::uint64_t k = 1; k < subsets; ++k) {
        const int col = std::countr_zero(k);
        const std::uint64_t bit = std::uint64_t{1} << col;
        in_subset ^= bit;
        const double sign = (in_subset & bit) ? 1.0 : -1.0;
        double prod = 1.0;
        for (std::size_t i = 0; i < m; ++i) {
            row_sums[i] += sign * a(i, static_cast<std::size_t>(col));
            prod *= row_sums[i];
        }
        ops += 2 * m;
        total += (std::popcount(in_subset) % 2 == 0) ? prod : -prod;
    }
    out.value = (m % 2 == 0) ? total : -total;
    out.ops_performed = ops;
    return out;
}

PermanentValue glynn_full_enumeration(const DenseMatrix &a, const OracleLimits &limits) {
    check_input(a, limits.glynn_max_m, "glynn_full_enumeration");
    const std::size_t m = a.rows();
    PermanentValue out{1.0, ExactMethod::kGlynnEnumeration, 0};
    if (m == 0) {
        return out;
    }
    // Start from x = (1, ..., 1) and walk the Gray code; flipping x_g moves
    // every column sum by -2 x_g a_gj (before the flip).
    std::vector<double> x(m, 1.0);
    std::vector<double> col_sums(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            col_sums[j] += a(i, j);
        }
    }
    double prefactor = 1.0;
    auto term = [&] {
        double prod = prefactor;
        for (std::size_t j = 0; j < m; ++j) {
            prod *= col_sums[j];
        }
        return prod;
    };
    double sum = term();
    std::uint64_t ops = m;
    const std::uint64_t vectors = std::uint64_t{1} << m;
    for (std::uint64_t k = 1; k < vectors; ++k) {
        const auto g = static_cast<std::size_t>(std::countr_zero(k));
        const double step = -2.0 * x[g];
        for (std::size_t j = 0; j < m; ++j) {
            col_sums[j] += step * a(g, j);
        }
        x[g] = -x[g];
        prefactor = -prefactor;
        sum += term();
        ops += 3 * m;
    }
    out.value = std::ldexp(sum, -static_cast<int>(m));
    out.ops_performed = ops;
    return out;
}

}  // namespace gaussperm

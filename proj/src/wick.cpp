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

#include "gaussperm/wick.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "gaussperm/errors.hpp"
#include "gaussperm/exact.hpp"

namespace gaussperm {

CovarianceModel::CovarianceModel(DenseMatrix cov) : cov_(std::move(cov)) {
    if (!cov_.is_square()) {
        throw InvalidInput("covariance must be square");
    }
    cov_.require_finite();
    double scale = 0.0;
    for (double x : cov_.entries()) {
        scale = std::max(scale, std::abs(x));
    }
    for (std::size_t i = 0; i < cov_.rows(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (std::abs(cov_(i, j) - cov_(j, i)) > 1e-12 * scale) {
                throw InvalidInput("covariance is not symmetric at (" + std::to_string(i) + ", " + std::to_string(j) +
                                   ")");
            }
        }
    }
}

namespace {

struct Leg {
    std::size_t variable;
    std::size_t group;
};

// Pairs the lowest unpaired leg with every admissible partner, recursively.
class PairingEnumerator {
   public:
    PairingEnumerator(const CovarianceModel &model, std::vector<Leg> legs, bool cross_only)
        : model_(model), legs_(std::move(legs)), cross_only_(cross_only) {}

    PairingSum run() {
        if (legs_.size() % 2 != 0) {
            return {0.0, 0};
        }
        const std::uint32_t all = legs_.empty() ? 0u : (std::uint32_t{1} << legs_.size()) - 1;
        return visit(all);
    }

   private:
    PairingSum visit(std::uint32_t open) const {
        if (open == 0) {
            return {1.0, 1};
        }
        const int first = std::countr_zero(open);
        const std::uint32_t rest = open & ~(std::uint32_t{1} << first);
        PairingSum acc;
        for (std::uint32_t candidates = rest; candidates != 0; candidates &= candidates - 1) {
            const int partner = std::countr_zero(candidates);
            const Leg &a = legs_[static_cast<std::size_t>(first)];
            const Leg &b = legs_[static_cast<std::size_t>(partner)];
            if (cross_only_ && a.group == b.group) {
                continue;
            }
            PairingSum sub = visit(rest & ~(std::uint32_t{1} << partner));
            if (sub.pairings_counted == 0) {
                continue;
            }
            acc.value += model_(a.variable, b.variable) * sub.value;
            acc.pairings_counted += sub.pairings_counted;
        }
        return acc;
    }

    const CovarianceModel &model_;
    std::vector<Leg> legs_;
    bool cross_only_;
};

void check_index(const CovarianceModel &model, std::size_t index) {
    if (index >= model.size()) {
        throw InvalidInput("variable index " + std::to_string(index) + " out of range for a field of " +
                           std::to_string(model.size()) + " variables");
    }
}

void check_budget(std::size_t legs, std::size_t leg_budget) {
    if (legs > leg_budget || legs > 31) {
        throw SizeLimitError(std::to_string(legs) + " legs exceed the pairing budget of " +
                             std::to_string(std::min<std::size_t>(leg_budget, 31)));
    }
}

}  // namespace

PairingSum isserlis_expectation(const CovarianceModel &model, std::span<const std::size_t> indices,
                                std::size_t leg_budget) {
    check_budget(indices.size(), leg_budget);
    std::vector<Leg> legs;
    legs.reserve(indices.size());
    for (std::size_t k = 0; k < indices.size(); ++k) {
        check_index(model, indices[k]);
        legs.push_back({indices[k], k});
    }
    return PairingEnumerator(model, std::move(legs), false).run();
}

PairingSum feynman_cross_expectation(const CovarianceModel &model, const VertexPartition &partition,
                                     std::size_t leg_budget) {
    std::vector<Leg> legs;
    std::set<std::size_t> seen;
    for (std::size_t g = 0; g < partition.groups.size(); ++g) {
        for (std::size_t index : partition.groups[g]) {
            check_index(model, index);
            if (!seen.insert(index).second) {
                throw InvalidInput("variable " + std::to_string(index) + " appears in more than one leg");
            }
            legs.push_back({index, g});
        }
    }
    check_budget(legs.size(), leg_budget);
    return PairingEnumerator(model, std::move(legs), true).run();
}

double perm_via_subfields(const CovarianceModel &model, std::span<const std::size_t> s,
                          std::span<const std::size_t> t) {
    if (s.size() != t.size()) {
        throw InvalidInput("subfields must have the same size");
    }
    VertexPartition partition{{std::vector<std::size_t>(s.begin(), s.end()),
                               std::vector<std::size_t>(t.begin(), t.end())}};
    const PairingSum cross = feynman_cross_expectation(model, partition);

    const std::size_t m = s.size();
    DenseMatrix sub(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            sub(i, j) = model(s[i], t[j]);
        }
    }
    const double direct = permanent_naive(sub).value;
    if (std::abs(direct - cross.value) > 1e-9 * std::max(1.0, std::abs(direct))) {
        throw ConsistencyError("perm_via_subfields: permanent " + std::to_string(direct) +
                               " disagrees with the cross-pairing sum " + std::to_string(cross.value));
    }
    return cross.value;
}

}  // namespace gaussperm

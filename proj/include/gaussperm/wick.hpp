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

#ifndef GAUSSPERM_WICK_HPP
#define GAUSSPERM_WICK_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gaussperm/matrix.hpp"

namespace gaussperm {

/// Covariance of a centered Gaussian field X_0, ..., X_{n-1}.
class CovarianceModel {
   public:
    /// Throws InvalidInput unless `cov` is square, finite and symmetric to 1e-12.
    explicit CovarianceModel(DenseMatrix cov);
    explicit CovarianceModel(const GaussianEmbedding &embedding) : CovarianceModel(embedding.cov) {}

    std::size_t size() const { return cov_.rows(); }
    double operator()(std::size_t i, std::size_t j) const { return cov_(i, j); }
    const DenseMatrix &cov() const { return cov_; }

   private:
    DenseMatrix cov_;
};

/// Groups of variable indices; each group is one vertex whose legs may not pair
/// among themselves. Indices must be distinct across groups.
struct VertexPartition {
    std::vector<std::vector<std::size_t>> groups;
};

struct PairingSum {
    double value = 0.0;
    std::uint64_t pairings_counted = 0;
};

/// Maximum number of legs the pairing enumerations accept.
inline constexpr std::size_t kDefaultLegBudget = 16;

/// E[X_{i_1} ... X_{i_p}] by summing over all (p-1)!! perfect pairings of the
/// legs. Indices may repeat. Odd p gives value 0 with no pairings; p = 0 gives
/// the single empty pairing with value 1.
PairingSum isserlis_expectation(const CovarianceModel &model, std::span<const std::size_t> indices,
                                std::size_t leg_budget = kDefaultLegBudget);

/// Sum over complete Feynman diagrams: perfect pairings of all legs in which no
/// pair joins two legs of the same group. Returns value 0 with no pairings when
/// none exists.
PairingSum feynman_cross_expectation(const CovarianceModel &model, const VertexPartition &partition,
                                     std::size_t leg_budget = kDefaultLegBudget);

/// Permanent of the submatrix (C_{s_i, t_j}), computed both directly and as the
/// two-vertex cross-pairing sum. Throws ConsistencyError if the two differ by
/// more than 1e-9 relative.
double perm_via_subfields(const CovarianceModel &model, std::span<const std::size_t> s,
                          std::span<const std::size_t> t);

}  // namespace gaussperm

#endif

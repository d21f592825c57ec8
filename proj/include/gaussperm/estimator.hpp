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

#ifndef GAUSSPERM_ESTIMATOR_HPP
#define GAUSSPERM_ESTIMATOR_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "gaussperm/matrix.hpp"
#include "gaussperm/sampler.hpp"

namespace gaussperm {

enum class EstimatorMethod { kGaussianField, kGlynnRandom };

std::string_view to_string(EstimatorMethod method);

struct EstimateOptions {
    std::optional<double> alpha;
    bool unsafe_alpha = false;
    /// When set, the report carries the Chebyshev failure bound at this error.
    std::optional<double> t;
};

struct ChebyshevAt {
    double t = 0.0;
    double bound = 0.0;
};

struct EstimateReport {
    double estimate = 0.0;
    std::uint64_t n_samples = 0;
    /// Variance of each field variable (requested alpha plus any jitter).
    double alpha = 0.0;
    double jitter_applied = 0.0;
    std::size_t m = 0;
    /// A-priori bound on the variance of one sample.
    double variance_bound = 0.0;
    std::optional<ChebyshevAt> chebyshev;
    /// Unbiased sample variance of the per-sample values; 0 when n_samples < 2.
    double empirical_variance = 0.0;
    std::uint64_t seed = 0;
    std::int64_t wall_ns_setup = 0;
    std::int64_t wall_ns_sampling = 0;
    EstimatorMethod method = EstimatorMethod::kGaussianField;
    /// Multiplications spent forming the per-sample products.
    std::uint64_t product_multiplications = 0;
};

/// Monte Carlo estimate of perm(A) as the mean over `n` draws of the product
/// of all 2M coordinates of the Gaussian embedding field.
///
/// The estimate is bitwise independent of `config.threads`. An empty matrix
/// returns exactly 1 without sampling. Throws OverflowError naming the first
/// sample whose product is not finite.
EstimateReport estimate_permanent(const DenseMatrix &a, std::uint64_t n, const SamplerConfig &config,
                                  const EstimateOptions &options = {});

/// Randomized Glynn estimator: mean of Gly_x(A) over `n` uniform sign vectors.
/// `variance_bound` reports ||A||_F^(2M), which dominates the per-sample
/// variance because |Gly_x(A)| <= ||A||^M.
EstimateReport glynn_estimate(const DenseMatrix &a, std::uint64_t n, const SamplerConfig &config,
                              const EstimateOptions &options = {});

/// The Glynn mean over all 2^M sign vectors, reported like a sampled run.
EstimateReport glynn_estimate_enumerated(const DenseMatrix &a);

/// log|v| and sign of a value that may not fit in a double.
struct LogValue {
    double log_abs = 0.0;
    int sign = 1;
};

/// 3^m * alpha^(2m), the per-sample variance bound.
double variance_bound(std::size_t m, double alpha);
LogValue variance_bound_log(std::size_t m, double alpha);

/// c * (sqrt(3) * alpha)^m.
double error_scale(std::size_t m, double alpha, double c);

struct BoundQuery {
    std::size_t m = 0;
    double alpha = 0.0;
    double t = 0.0;
    std::uint64_t n = 1;
    std::optional<double> c;

    /// Throws InvalidInput unless t > 0, n >= 1 and alpha > 0.
    void validate() const;
};

/// min(1, 3^m alpha^(2m) / (t^2 n)).
double chebyshev_failure_bound(const BoundQuery &q);
/// The same quantity before clamping at 1.
double chebyshev_failure_bound_unclamped(const BoundQuery &q);

/// ceil(1 / (c^2 delta)): samples that keep the error within
/// c * (sqrt(3) alpha)^m with probability at least 1 - delta.
std::uint64_t required_samples(std::size_t m, double alpha, double c, double delta);

/// Exact Var(prod_j X_j) = E[(prod_j X_j)^2] - perm(A)^2, from the pairing sum
/// over 4M legs. M is limited to 3. Throws ConsistencyError if the result
/// exceeds variance_bound(M, alpha) + 1e-9.
double exact_single_sample_variance(const DenseMatrix &a, double alpha, bool unsafe_alpha = false);

/// Magnitude statistics of the per-sample products, accumulated as log|mu_k|
/// and sign so that they survive products that overflow a double. No mean of
/// the products can be formed this way.
struct MagnitudeReport {
    std::uint64_t n_samples = 0;
    std::size_t m = 0;
    double alpha = 0.0;
    double mean_log_abs = 0.0;
    double max_log_abs = 0.0;
    double negative_fraction = 0.0;
};

MagnitudeReport product_magnitude_stats(const DenseMatrix &a, std::uint64_t n, const SamplerConfig &config,
                                        const EstimateOptions &options = {});

}  // namespace gaussperm

#endif

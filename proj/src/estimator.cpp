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

#include "gaussperm/estimator.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <vector>

#include "gaussperm/errors.hpp"
#include "gaussperm/exact.hpp"
#include "gaussperm/wick.hpp"

namespace gaussperm {

std::string_view to_string(EstimatorMethod method) {
    switch (method) {
        case EstimatorMethod::kGaussianField:
            return "gaussian-field";
        case EstimatorMethod::kGlynnRandom:
            return "glynn-random";
    }
    return "unknown";
}

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t elapsed_ns(Clock::time_point since) {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - since).count();
}

// Running mean and sum of squared deviations of one chunk.
struct ChunkMoments {
    std::uint64_t count = 0;
    double sum = 0.0;
    double mean = 0.0;
    double m2 = 0.0;
    std::uint64_t multiplications = 0;

    void add(double x) {
        ++count;
        sum += x;
        const double delta = x - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (x - mean);
    }

    void merge(const ChunkMoments &other) {
        if (other.count == 0) {
            return;
        }
        const double n_a = static_cast<double>(count);
        const double n_b = static_cast<double>(other.count);
        const double delta = other.mean - mean;
        const double n = n_a + n_b;
        mean += delta * n_b / n;
        m2 += other.m2 + delta * delta * n_a * n_b / n;
        count += other.count;
        sum += other.sum;
        multiplications += other.multiplications;
    }
};

void require_square(const DenseMatrix &a, std::string_view who) {
    if (!a.is_square()) {
        throw InvalidInput(std::string(who) + ": matrix must be square, got " + std::to_string(a.rows()) + "x" +
                           std::to_string(a.cols()));
    }
    a.require_finite();
}

void require_samples(std::uint64_t n) {
    if (n == 0) {
        throw InvalidInput("sample count must be at least 1");
    }
}

// Runs `draw(stream_state, global_index) -> double` over all n samples and
// merges per-chunk moments in chunk order, so the result does not depend on
// the thread count.
template <typename MakeState, typename Draw>
ChunkMoments accumulate(const SamplerConfig &config, std::uint64_t n, MakeState make_state, Draw draw) {
    config.validate();
    const std::uint64_t chunks = n / config.chunk_size + (n % config.chunk_size != 0 ? 1 : 0);
    std::vector<ChunkMoments> per_chunk(chunks);
    for_each_chunk(config, n, [&](std::uint64_t chunk, std::uint64_t first, std::uint64_t count) {
        auto state = make_state(chunk);
        ChunkMoments &moments = per_chunk[chunk];
        for (std::uint64_t k = 0; k < count; ++k) {
            moments.add(draw(state, first + k, moments.multiplications));
        }
    });
    ChunkMoments total;
    for (const auto &moments : per_chunk) {
        total.merge(moments);
    }
    return total;
}

void fill_statistics(EstimateReport &report, const ChunkMoments &moments) {
    report.n_samples = moments.count;
    report.estimate = moments.sum / static_cast<double>(moments.count);
    report.empirical_variance = moments.count > 1 ? moments.m2 / static_cast<double>(moments.count - 1) : 0.0;
    report.product_multiplications = moments.multiplications;
}

std::optional<ChebyshevAt> chebyshev_for(std::size_t m, double alpha, std::uint64_t n, std::optional<double> t) {
    if (!t) {
        return std::nullopt;
    }
    if (alpha == 0.0 && m > 0) {
        // Every sample is exactly zero.
        return ChebyshevAt{*t, 0.0};
    }
    return ChebyshevAt{*t, chebyshev_failure_bound({m, alpha, *t, n, std::nullopt})};
}

}  // namespace

EstimateReport estimate_permanent(const DenseMatrix &a, std::uint64_t n, const SamplerConfig &config,
                                  const EstimateOptions &options) {
    require_square(a, "estimate_permanent");
    config.validate();
    EstimateReport report;
    report.method = EstimatorMethod::kGaussianField;
    report.seed = config.seed;
    report.m = a.rows();
    if (a.rows() == 0) {
        report.estimate = 1.0;
        report.variance_bound = 1.0;
        return report;
    }
    require_samples(n);

    const auto setup_start = Clock::now();
    GaussianEmbedding embedding = build_embedding(a, {options.alpha, options.unsafe_alpha});
    report.alpha = embedding.effective_alpha();
    report.jitter_applied = embedding.jitter_applied;
    const MvnSampler sampler(std::move(embedding), config);
    report.wall_ns_setup = elapsed_ns(setup_start);

    const std::size_t dim = sampler.dimension();
    struct State {
        MvnSampler::ChunkStream stream;
        std::vector<double> x;
    };
    const auto sampling_start = Clock::now();
    const ChunkMoments moments = accumulate(
        config, n, [&](std::uint64_t chunk) { return State{sampler.chunk_stream(chunk), std::vector<double>(dim)}; },
        [&](State &state, std::uint64_t index, std::uint64_t &multiplications) {
            state.stream.next(state.x);
            double mu = state.x[0];
            for (std::size_t j = 1; j < dim; ++j) {
                mu *= state.x[j];
                ++multiplications;
            }
            if (!std::isfinite(mu)) {
                throw OverflowError("product of sample " + std::to_string(index) +
                                        " is not finite; reduce M or alpha",
                                    index);
            }
            return mu;
        });
    report.wall_ns_sampling = elapsed_ns(sampling_start);

    fill_statistics(report, moments);
    report.variance_bound = variance_bound(report.m, report.alpha);
    report.chebyshev = chebyshev_for(report.m, report.alpha, report.n_samples, options.t);
    return report;
}

EstimateReport glynn_estimate(const DenseMatrix &a, std::uint64_t n, const SamplerConfig &config,
                              const EstimateOptions &options) {
    require_square(a, "glynn_estimate");
    config.validate();
    EstimateReport report;
    report.method = EstimatorMethod::kGlynnRandom;
    report.seed = config.seed;
    report.m = a.rows();
    if (a.rows() == 0) {
        report.estimate = 1.0;
        report.variance_bound = 1.0;
        return report;
    }
    require_samples(n);

    const std::size_t m = a.rows();
    const auto setup_start = Clock::now();
    report.alpha = frobenius_norm(a);
    report.wall_ns_setup = elapsed_ns(setup_start);

    struct State {
        NormalStream bits;
        std::vector<double> x;
    };
    const auto sampling_start = Clock::now();
    const ChunkMoments moments = accumulate(
        config, n,
        [&](std::uint64_t chunk) { return State{NormalStream(chunk_seed(config.seed, chunk)), std::vector<double>(m)}; },
        [&](State &state, std::uint64_t, std::uint64_t &multiplications) {
            double prefactor = 1.0;
            std::uint64_t word = 0;
            for (std::size_t i = 0; i < m; ++i) {
                if (i % 64 == 0) {
                    word = state.bits.bits();
                }
                state.x[i] = (word >> (i % 64)) & 1 ? -1.0 : 1.0;
                prefactor *= state.x[i];
            }
            double value = prefactor;
            for (std::size_t j = 0; j < m; ++j) {
                double column = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    column += a(i, j) * state.x[i];
                }
                value *= column;
                ++multiplications;
            }
            return value;
        });
    report.wall_ns_sampling = elapsed_ns(sampling_start);

    fill_statistics(report, moments);
    report.variance_bound = std::pow(report.alpha, 2.0 * static_cast<double>(m));
    report.chebyshev = options.t ? std::optional<ChebyshevAt>(ChebyshevAt{
                                       *options.t, std::min(1.0, report.variance_bound /
                                                                     (*options.t * *options.t *
                                                                      static_cast<double>(report.n_samples)))})
                                 : std::nullopt;
    return report;
}

EstimateReport glynn_estimate_enumerated(const DenseMatrix &a) {
    require_square(a, "glynn_estimate_enumerated");
    EstimateReport report;
    report.method = EstimatorMethod::kGlynnRandom;
    report.m = a.rows();
    const PermanentValue exact = glynn_full_enumeration(a);
    report.estimate = exact.value;
    report.n_samples = std::uint64_t{1} << a.rows();
    report.alpha = frobenius_norm(a);
    report.variance_bound = std::pow(report.alpha, 2.0 * static_cast<double>(a.rows()));
    return report;
}

LogValue variance_bound_log(std::size_t m, double alpha) {
    if (m == 0) {
        return {0.0, 1};
    }
    const double dm = static_cast<double>(m);
    return {dm * std::log(3.0) + 2.0 * dm * std::log(alpha), 1};
}

double variance_bound(std::size_t m, double alpha) {
    if (!(alpha >= 0.0)) {
        throw InvalidInput("alpha must be nonnegative");
    }
    const double dm = static_cast<double>(m);
    const double direct = std::pow(3.0, dm) * std::pow(alpha, 2.0 * dm);
    if (std::isfinite(direct) && (direct > 0.0 || alpha == 0.0)) {
        return direct;
    }
    return std::exp(variance_bound_log(m, alpha).log_abs);
}

double error_scale(std::size_t m, double alpha, double c) {
    return c * std::pow(std::sqrt(3.0) * alpha, static_cast<double>(m));
}

void BoundQuery::validate() const {
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw InvalidInput("t must be positive and finite");
    }
    if (n < 1) {
        throw InvalidInput("n must be at least 1");
    }
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw InvalidInput("alpha must be positive and finite");
    }
    if (c && !(*c > 0.0)) {
        throw InvalidInput("c must be positive");
    }
}

double chebyshev_failure_bound_unclamped(const BoundQuery &q) {
    q.validate();
    const double vb = variance_bound(q.m, q.alpha);
    const double denom = q.t * q.t * static_cast<double>(q.n);
    if (std::isfinite(vb) && vb > 0.0 && std::isfinite(denom) && denom > 0.0) {
        return vb / denom;
    }
    return std::exp(variance_bound_log(q.m, q.alpha).log_abs - 2.0 * std::log(q.t) -
                    std::log(static_cast<double>(q.n)));
}

double chebyshev_failure_bound(const BoundQuery &q) { return std::min(1.0, chebyshev_failure_bound_unclamped(q)); }

std::uint64_t required_samples(std::size_t, double, double c, double delta) {
    if (!(c > 0.0) || !std::isfinite(c)) {
        throw InvalidInput("c must be positive and finite");
    }
    if (!(delta > 0.0 && delta < 1.0)) {
        throw InvalidInput("delta must lie in (0, 1)");
    }
    const double q = 1.0 / (c * c * delta);
    if (!(q < 1.8e19)) {
        throw InvalidInput("required sample count does not fit in 64 bits");
    }
    // 1 / 0.05 must give 20, not 21, when the quotient lands an ulp high.
    const double nearest = std::round(q);
    const double count = std::abs(q - nearest) <= 1e-9 * nearest ? nearest : std::ceil(q);
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(count));
}

double exact_single_sample_variance(const DenseMatrix &a, double alpha, bool unsafe_alpha) {
    require_square(a, "exact_single_sample_variance");
    const std::size_t m = a.rows();
    if (m > 3) {
        throw SizeLimitError("exact_single_sample_variance needs 4M <= 12 legs; M = " + std::to_string(m));
    }
    const GaussianEmbedding embedding = build_embedding(a, {alpha, unsafe_alpha});
    const CovarianceModel model(embedding);
    std::vector<std::size_t> legs;
    for (std::size_t j = 0; j < 2 * m; ++j) {
        legs.push_back(j);
        legs.push_back(j);
    }
    const double second_moment = isserlis_expectation(model, legs).value;
    const double perm = permanent_naive(a).value;
    const double variance = second_moment - perm * perm;
    const double bound = variance_bound(m, embedding.effective_alpha());
    if (variance > bound + 1e-9) {
        throw ConsistencyError("single-sample variance " + std::to_string(variance) + " exceeds the bound " +
                               std::to_string(bound));
    }
    return variance;
}

MagnitudeReport product_magnitude_stats(const DenseMatrix &a, std::uint64_t n, const SamplerConfig &config,
                                        const EstimateOptions &options) {
    require_square(a, "product_magnitude_stats");
    require_samples(n);
    MagnitudeReport report;
    report.m = a.rows();
    report.n_samples = n;
    if (a.rows() == 0) {
        return report;
    }
    GaussianEmbedding embedding = build_embedding(a, {options.alpha, options.unsafe_alpha});
    report.alpha = embedding.effective_alpha();
    const MvnSampler sampler(std::move(embedding), config);
    const std::size_t dim = sampler.dimension();

    struct Partial {
        double log_sum = 0.0;
        double log_max = -std::numeric_limits<double>::infinity();
        std::uint64_t negatives = 0;
    };
    const std::uint64_t chunks = n / config.chunk_size + (n % config.chunk_size != 0 ? 1 : 0);
    std::vector<Partial> partials(chunks);
    for_each_chunk(config, n, [&](std::uint64_t chunk, std::uint64_t, std::uint64_t count) {
        auto stream = sampler.chunk_stream(chunk);
        std::vector<double> x(dim);
        Partial &p = partials[chunk];
        for (std::uint64_t k = 0; k < count; ++k) {
            stream.next(x);
            double log_abs = 0.0;
            bool negative = false;
            for (double v : x) {
                log_abs += std::log(std::abs(v));
                negative ^= v < 0.0;
            }
            p.log_sum += log_abs;
            p.log_max = std::max(p.log_max, log_abs);
            p.negatives += negative ? 1 : 0;
        }
    });
    Partial total;
    for (const auto &p : partials) {
        total.log_sum += p.log_sum;
        total.log_max = std::max(total.log_max, p.log_max);
        total.negatives += p.negatives;
    }
    report.mean_log_abs = total.log_sum / static_cast<double>(n);
    report.max_log_abs = total.log_max;
    report.negative_fraction = static_cast<double>(total.negatives) / static_cast<double>(n);
    return report;
}

}  // namespace gaussperm

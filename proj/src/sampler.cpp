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

#include "gaussperm/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "gaussperm/errors.hpp"

namespace gaussperm {

void SamplerConfig::validate() const {
    if (chunk_size == 0) {
        throw InvalidInput("chunk_size must be at least 1");
    }
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t chunk_seed(std::uint64_t seed, std::uint64_t chunk) { return splitmix64(seed ^ splitmix64(chunk)); }

double NormalStream::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    has_spare_ = true;
    return u * factor;
}

void for_each_chunk(const SamplerConfig &config, std::uint64_t total,
                    const std::function<void(std::uint64_t, std::uint64_t, std::uint64_t)> &body) {
    config.validate();
    const std::uint64_t chunk_size = config.chunk_size;
    const std::uint64_t chunks = total / chunk_size + (total % chunk_size != 0 ? 1 : 0);
    auto run_chunk = [&](std::uint64_t chunk) {
        const std::uint64_t first = chunk * chunk_size;
        body(chunk, first, std::min(chunk_size, total - first));
    };

    std::size_t threads = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.threads;
    threads = static_cast<std::size_t>(std::min<std::uint64_t>(threads, chunks));
    if (threads <= 1) {
        for (std::uint64_t chunk = 0; chunk < chunks; ++chunk) {
            run_chunk(chunk);
        }
        return;
    }

    std::atomic<std::uint64_t> next{0};
    std::atomic<std::uint64_t> lowest_failure{std::numeric_limits<std::uint64_t>::max()};
    std::mutex failure_mutex;
    std::exception_ptr failure;
    auto worker = [&] {
        for (;;) {
            const std::uint64_t chunk = next.fetch_add(1);
            if (chunk >= chunks || chunk > lowest_failure.load()) {
                return;
            }
            try {
                run_chunk(chunk);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (chunk < lowest_failure.load()) {
                    lowest_failure.store(chunk);
                    failure = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    for (auto &t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

std::vector<double> standard_normals(const SamplerConfig &config, std::size_t count) {
    std::vector<double> out(count);
    for_each_chunk(config, count, [&](std::uint64_t chunk, std::uint64_t first, std::uint64_t n) {
        NormalStream normals(chunk_seed(config.seed, chunk));
        for (std::uint64_t k = 0; k < n; ++k) {
            out[first + k] = normals.normal();
        }
    });
    return out;
}

MvnSampler::MvnSampler(GaussianEmbedding embedding, SamplerConfig config)
    : embedding_(std::move(embedding)), config_(config) {
    config_.validate();
    const DenseMatrix &l = embedding_.chol;
    const std::size_t n = l.rows();
    std::size_t nonzeros = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k <= i; ++k) {
            nonzeros += l(i, k) != 0.0 ? 1 : 0;
        }
    }
    sparse_ = n > 0 && 4 * nonzeros <= n * (n + 1) / 2;
    if (sparse_) {
        row_start_.reserve(n + 1);
        row_start_.push_back(0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k <= i; ++k) {
                if (l(i, k) != 0.0) {
                    col_index_.push_back(k);
                    value_.push_back(l(i, k));
                }
            }
            row_start_.push_back(col_index_.size());
        }
    }
}

MvnSampler::ChunkStream::ChunkStream(const MvnSampler &sampler, std::uint64_t chunk)
    : sampler_(&sampler), normals_(chunk_seed(sampler.config_.seed, chunk)), z_(sampler.dimension()) {}

void MvnSampler::ChunkStream::next(std::span<double> out) {
    const std::size_t n = z_.size();
    for (std::size_t k = 0; k < n; ++k) {
        z_[k] = normals_.normal();
    }
    const MvnSampler &s = *sampler_;
    if (s.sparse_) {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t p = s.row_start_[i]; p < s.row_start_[i + 1]; ++p) {
                acc += s.value_[p] * z_[s.col_index_[p]];
            }
            out[i] = acc;
        }
        return;
    }
    const DenseMatrix &l = s.embedding_.chol;
    for (std::size_t i = 0; i < n; ++i) {
        std::span<const double> row = l.row(i);
        double acc = 0.0;
        for (std::size_t k = 0; k <= i; ++k) {
            acc += row[k] * z_[k];
        }
        out[i] = acc;
    }
}

SampleBatch sample_field(const MvnSampler &sampler, std::size_t count) {
    SampleBatch batch;
    batch.dimension = sampler.dimension();
    batch.count = count;
    batch.values.assign(count * batch.dimension, 0.0);
    if (batch.dimension == 0) {
        return batch;
    }
    for_each_chunk(sampler.config(), count, [&](std::uint64_t chunk, std::uint64_t first, std::uint64_t n) {
        auto stream = sampler.chunk_stream(chunk);
        for (std::uint64_t k = 0; k < n; ++k) {
            stream.next({batch.values.data() + (first + k) * batch.dimension, batch.dimension});
        }
    });
    return batch;
}

}  // namespace gaussperm

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

#ifndef GAUSSPERM_SAMPLER_HPP
#define GAUSSPERM_SAMPLER_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "gaussperm/matrix.hpp"

namespace gaussperm {

/// Sample streams are cut into chunks of `chunk_size` draws. Chunk k is a pure
/// function of (seed, k), so the thread count only changes wall-clock time.
struct SamplerConfig {
    std::uint64_t seed = 0;
    std::size_t chunk_size = 4096;
    /// Worker threads; 0 means one per hardware thread.
    std::size_t threads = 1;

    /// Throws InvalidInput when chunk_size is 0.
    void validate() const;
};

/// Seed of the generator that owns chunk `chunk`.
std::uint64_t chunk_seed(std::uint64_t seed, std::uint64_t chunk);

/// Uniform bits and standard normal variates from one chunk generator.
/// Normals use the Marsaglia polar method.
class NormalStream {
   public:
    explicit NormalStream(std::uint64_t stream_seed) : engine_(stream_seed) {}

    std::uint64_t bits() { return engine_(); }
    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double normal();

   private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Runs `body(chunk, first, count)` for every chunk covering [0, total). Chunks
/// are handed out to `config.threads` workers. If bodies throw, the exception of
/// the lowest failing chunk is rethrown after all workers have stopped.
void for_each_chunk(const SamplerConfig &config, std::uint64_t total,
                    const std::function<void(std::uint64_t chunk, std::uint64_t first, std::uint64_t count)> &body);

std::vector<double> standard_normals(const SamplerConfig &config, std::size_t count);

/// `count` draws of a `dimension`-vector, row-major.
struct SampleBatch {
    std::size_t dimension = 0;
    std::size_t count = 0;
    std::vector<double> values;

    std::span<const double> sample(std::size_t k) const { return {values.data() + k * dimension, dimension}; }
};

/// Draws X = L z from N(0, C) for a Gaussian embedding with factor L.
///
/// Each sample costs one triangular multiply. When the factor is mostly zeros
/// (for instance a diagonal input matrix, where L couples only variable pairs
/// (i, M + i)) the multiply walks stored nonzeros only; the values are the
/// same either way.
class MvnSampler {
   public:
    MvnSampler(GaussianEmbedding embedding, SamplerConfig config);

    std::size_t dimension() const { return embedding_.cov.rows(); }
    const GaussianEmbedding &embedding() const { return embedding_; }
    const SamplerConfig &config() const { return config_; }
    bool uses_sparse_factor() const { return sparse_; }

    /// Sequential draws belonging to one chunk.
    class ChunkStream {
       public:
        /// Writes the next sample into `out` (size == dimension()).
        void next(std::span<double> out);

       private:
        friend class MvnSampler;
        ChunkStream(const MvnSampler &sampler, std::uint64_t chunk);

        const MvnSampler *sampler_;
        NormalStream normals_;
        std::vector<double> z_;
    };

    ChunkStream chunk_stream(std::uint64_t chunk) const { return ChunkStream(*this, chunk); }

   private:
    GaussianEmbedding embedding_;
    SamplerConfig config_;
    bool sparse_ = false;
    // Compressed rows of the factor, used when sparse_.
    std::vector<std::size_t> row_start_;
    std::vector<std::size_t> col_index_;
    std::vector<double> value_;
};

SampleBatch sample_field(const MvnSampler &sampler, std::size_t count);

}  // namespace gaussperm

#endif

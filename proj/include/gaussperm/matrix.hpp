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

#ifndef GAUSSPERM_MATRIX_HPP
#define GAUSSPERM_MATRIX_HPP

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gaussperm {

/// Dense real matrix stored row-major in double precision.
class DenseMatrix {
   public:
    DenseMatrix() = default;
    /// Zero-filled rows x cols matrix.
    DenseMatrix(std::size_t rows, std::size_t cols);
    /// Takes ownership of row-major `entries`; throws InvalidInput on a size
    /// mismatch or a non-finite entry.
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
    DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return entries_.size(); }
    bool is_square() const { return rows_ == cols_; }
    bool empty() const { return entries_.empty(); }

    double &operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {entries_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {entries_.data() + i * cols_, cols_}; }
    std::span<const double> entries() const { return entries_; }

    DenseMatrix transpose() const;
    DenseMatrix operator*(const DenseMatrix &other) const;
    DenseMatrix operator-(const DenseMatrix &other) const;

    /// Throws InvalidInput if any entry is NaN or infinite.
    void require_finite() const;

    bool operator==(const DenseMatrix &other) const = default;

   private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> entries_;
};

double frobenius_norm(const DenseMatrix &a);

/// Certified upper bound on the operator (largest singular value) norm.
/// This is the Frobenius norm; no spectral iteration is performed.
double operator_norm_upper(const DenseMatrix &a);

/// Lower-triangular L with L * L^T == c for a symmetric positive semidefinite c.
///
/// Pivots in [-zero_pivot_tolerance, zero_pivot_tolerance] are treated as
/// exact zeros, which lets rank-deficient matrices factor; the column below a
/// zero pivot must then vanish as well. The default tolerance is 1e-12 times
/// the largest diagonal entry. Throws NotPositiveSemidefinite otherwise and
/// InvalidInput when c is not square and symmetric to 1e-12 relative.
DenseMatrix cholesky(const DenseMatrix &c, std::optional<double> zero_pivot_tolerance = std::nullopt);

struct EmbeddingOptions {
    /// Diagonal shift. Defaults to the Frobenius norm of the input.
    std::optional<double> alpha;
    /// Accept alpha below the Frobenius norm, e.g. when the operator norm is
    /// known from elsewhere. The covariance then only has to factor.
    bool unsafe_alpha = false;
};

/// The 2M x 2M covariance C = [[0, A], [A^T, 0]] + alpha * I together with its
/// Cholesky factor. Variables 0..M-1 carry the rows of A and M..2M-1 its columns.
struct GaussianEmbedding {
    std::size_t m = 0;
    double alpha = 0.0;
    double jitter_applied = 0.0;
    DenseMatrix cov;
    DenseMatrix chol;

    /// Variance of every field variable.
    double effective_alpha() const { return alpha + jitter_applied; }
};

/// Builds the Gaussian embedding of a square matrix.
///
/// If the factorization fails, the diagonal is retried with jitter
/// alpha * 1e-10, doubled at most three times, and the jitter that worked is
/// recorded. Throws InvalidInput for a non-square input, ValidationError for an
/// alpha below the Frobenius norm without `unsafe_alpha`, and
/// NotPositiveSemidefinite when every retry fails.
GaussianEmbedding build_embedding(const DenseMatrix &a, const EmbeddingOptions &options = {});

/// Parses the matrix text format: one row per line, entries separated by
/// commas and/or whitespace, blank lines and lines starting with '#' ignored.
/// Throws ParseError carrying the offending line number.
DenseMatrix parse_matrix(std::string_view text);
DenseMatrix read_matrix_file(const std::string &path);

/// Writes shortest round-trip representations, comma separated.
std::string format_matrix(const DenseMatrix &a);

}  // namespace gaussperm

#endif

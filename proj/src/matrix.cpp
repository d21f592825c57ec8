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

#include "gaussperm/matrix.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gaussperm/errors.hpp"

namespace gaussperm {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_) {
        throw InvalidInput("matrix of shape " + std::to_string(rows_) + "x" + std::to_string(cols_) + " given " +
                           std::to_string(entries_.size()) + " entries");
    }
    require_finite();
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    entries_.reserve(rows_ * cols_);
    for (const auto &r : rows) {
        if (r.size() != cols_) {
            throw InvalidInput("ragged matrix initializer");
        }
        entries_.insert(entries_.end(), r.begin(), r.end());
    }
    require_finite();
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix result(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        result(i, i) = 1.0;
    }
    return result;
}

DenseMatrix DenseMatrix::transpose() const {
    DenseMatrix result(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            result(j, i) = (*this)(i, j);
        }
    }
    return result;
}

DenseMatrix DenseMatrix::operator*(const DenseMatrix &other) const {
    if (cols_ != other.rows_) {
        throw InvalidInput("matrix product shape mismatch");
    }
    DenseMatrix result(rows_, other.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            double aik = (*this)(i, k);
            if (aik == 0.0) {
                continue;
            }
            for (std::size_t j = 0; j < other.cols_; ++j) {
                result(i, j) += aik * other(k, j);
            }
        }
    }
    return result;
}

DenseMatrix DenseMatrix::operator-(const DenseMatrix &other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw InvalidInput("matrix difference shape mismatch");
    }
    DenseMatrix result = *this;
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        result.entries_[k] -= other.entries_[k];
    }
    return result;
}

void DenseMatrix::require_finite() const {
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        if (!std::isfinite(entries_[k])) {
            throw InvalidInput("non-finite matrix entry at (" + std::to_string(k / std::max<std::size_t>(cols_, 1)) +
                               ", " + std::to_string(k % std::max<std::size_t>(cols_, 1)) + ")");
        }
    }
}

double frobenius_norm(const DenseMatrix &a) {
    a.require_finite();
    double sum = 0.0;
    double largest = 0.0;
    for (double x : a.entries()) {
        sum += x * x;
        largest = std::max(largest, std::abs(x));
    }
    if (std::isfinite(sum) && (sum > 0.0 || largest == 0.0)) {
        return std::sqrt(sum);
    }
    // Squares overflowed or underflowed: rescale by the largest entry.
    double scaled = 0.0;
    for (double x : a.entries()) {
        scaled += (x / largest) * (x / largest);
    }
    return largest * std::sqrt(scaled);
}

double operator_norm_upper(const DenseMatrix &a) { return frobenius_norm(a); }

namespace {

void require_symmetric(const DenseMatrix &c) {
    if (!c.is_square()) {
        throw InvalidInput("cholesky: matrix is not square");
    }
    c.require_finite();
    double scale = 0.0;
    for (double x : c.entries()) {
        scale = std::max(scale, std::abs(x));
    }
    for (std::size_t i = 0; i < c.rows(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (std::abs(c(i, j) - c(j, i)) > 1e-12 * scale) {
                throw InvalidInput("cholesky: matrix is not symmetric at (" + std::to_string(i) + ", " +
                                   std::to_string(j) + ")");
            }
        }
    }
}

}  // namespace

DenseMatrix cholesky(const DenseMatrix &c, std::optional<double> zero_pivot_tolerance) {
    require_symmetric(c);
    const std::size_t n = c.rows();
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        max_diag = std::max(max_diag, std::abs(c(i, i)));
    }
    const double tol = zero_pivot_tolerance.value_or(1e-12 * max_diag);

    DenseMatrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double pivot = c(j, j);
        for (std::size_t k = 0; k < j; ++k) {
            pivot -= l(j, k) * l(j, k);
        }
        if (pivot < -tol) {
            throw NotPositiveSemidefinite("cholesky: negative pivot " + std::to_string(pivot) + " at column " +
                                          std::to_string(j));
        }
        if (pivot <= tol) {
            // Rank deficient direction: the rest of the column has to vanish too.
            for (std::size_t i = j + 1; i < n; ++i) {
                double residual = c(i, j);
                for (std::size_t k = 0; k < j; ++k) {
                    residual -= l(i, k) * l(j, k);
                }
                if (std::abs(residual) > 1e-11 * max_diag) {
                    throw NotPositiveSemidefinite("cholesky: zero pivot with nonzero column at " + std::to_string(j));
                }
            }
            continue;
        }
        const double d = std::sqrt(pivot);
        l(j, j) = d;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = c(i, j);
            for (std::size_t k = 0; k < j; ++k) {
                s -= l(i, k) * l(j, k);
            }
            l(i, j) = s / d;
        }
    }
    return l;
}

namespace {

constexpr double kRelativeJitter = 1e-10;
constexpr int kJitterDoublings = 3;

DenseMatrix embedding_covariance(const DenseMatrix &a, double diagonal) {
    const std::size_t m = a.rows();
    DenseMatrix cov(2 * m, 2 * m);
    for (std::size_t i = 0; i < 2 * m; ++i) {
        cov(i, i) = diagonal;
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            cov(i, m + j) = a(i, j);
            cov(m + j, i) = a(i, j);
        }
    }
    return cov;
}

}  // namespace

GaussianEmbedding build_embedding(const DenseMatrix &a, const EmbeddingOptions &options) {
    if (!a.is_square()) {
        throw InvalidInput("embedding needs a square matrix, got " + std::to_string(a.rows()) + "x" +
                           std::to_string(a.cols()));
    }
    const double fro = frobenius_norm(a);
    double alpha = fro;
    if (options.alpha) {
        alpha = *options.alpha;
        if (!std::isfinite(alpha) || alpha < 0.0) {
            throw ValidationError("alpha must be finite and nonnegative");
        }
        // Tolerate the last-bit difference of a user-typed sqrt.
        if (!options.unsafe_alpha && alpha < fro * (1.0 - 1e-12)) {
            throw ValidationError("alpha " + std::to_string(alpha) + " is below the Frobenius norm " +
                                  std::to_string(fro) + "; pass the unsafe override to allow it");
        }
    }

    GaussianEmbedding out;
    out.m = a.rows();
    out.alpha = alpha;
    const double jitter_unit = kRelativeJitter * std::max(alpha, fro);
    for (int attempt = 0; attempt <= kJitterDoublings + 1; ++attempt) {
        const double jitter = attempt == 0 ? 0.0 : jitter_unit * static_cast<double>(1 << (attempt - 1));
        DenseMatrix cov = embedding_covariance(a, alpha + jitter);
        try {
            DenseMatrix chol = cholesky(cov, 1e-12 * (alpha + jitter));
            out.jitter_applied = jitter;
            out.cov = std::move(cov);
            out.chol = std::move(chol);
            return out;
        } catch (const NotPositiveSemidefinite &) {
            if (attempt == kJitterDoublings + 1) {
                throw NotPositiveSemidefinite("embedding covariance with alpha " + std::to_string(alpha) +
                                              " is not positive semidefinite, even with jitter " +
                                              std::to_string(jitter));
            }
        }
    }
    return out;  // unreachable
}

DenseMatrix parse_matrix(std::string_view text) {
    std::vector<double> entries;
    std::size_t cols = 0;
    std::size_t rows = 0;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        std::size_t eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);

        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string_view::npos || line[first] == '#') {
            continue;
        }
        std::size_t count = 0;
        std::size_t pos = 0;
        auto is_sep = [](char ch) { return ch == ',' || ch == ' ' || ch == '\t' || ch == '\r'; };
        while (pos < line.size()) {
            while (pos < line.size() && is_sep(line[pos])) {
                ++pos;
            }
            if (pos == line.size()) {
                break;
            }
            std::size_t end = pos;
            while (end < line.size() && !is_sep(line[end])) {
                ++end;
            }
            std::string_view token = line.substr(pos, end - pos);
            // from_chars rejects a leading '+', which plain text files do use.
            std::string_view digits = token.front() == '+' ? token.substr(1) : token;
            double value = 0.0;
            auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
            if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty()) {
                throw ParseError("cannot parse entry '" + std::string(token) + "'", line_no);
            }
            if (!std::isfinite(value)) {
                throw ParseError("non-finite entry '" + std::string(token) + "'", line_no);
            }
            entries.push_back(value);
            ++count;
            pos = end;
        }
        if (rows == 0) {
            cols = count;
        } else if (count != cols) {
            throw ParseError("row has " + std::to_string(count) + " entries, expected " + std::to_string(cols),
                             line_no);
        }
        ++rows;
    }
    return DenseMatrix(rows, cols, std::move(entries));
}

DenseMatrix read_matrix_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open matrix file '" + path + "'", 0);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_matrix(buffer.str());
}

std::string format_matrix(const DenseMatrix &a) {
    std::string out;
    char buf[64];
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (j > 0) {
                out += ',';
            }
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), a(i, j));
            out.append(buf, ptr);
        }
        out += '\n';
    }
    return out;
}

}  // namespace gaussperm

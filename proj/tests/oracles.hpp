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

// Brute-force reference computations for tests. Nothing here calls into the
// library's algorithms, so agreement is an independent check.

#ifndef GAUSSPERM_TESTS_ORACLES_HPP
#define GAUSSPERM_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "gaussperm/matrix.hpp"

namespace gaussperm::testing {

/// Permanent by Laplace expansion along the first row.
inline double laplace_permanent(const DenseMatrix &a) {
    const std::size_t m = a.rows();
    if (m == 0) {
        return 1.0;
    }
    std::vector<bool> used(m, false);
    auto expand = [&](auto &&self, std::size_t row) -> double {
        if (row == m) {
            return 1.0;
        }
        double total = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            if (!used[j]) {
                used[j] = true;
                total += a(row, j) * self(self, row + 1);
                used[j] = false;
            }
        }
        return total;
    };
    return expand(expand, 0);
}

/// Glynn average evaluated term by term from the defining product.
inline double glynn_direct(const DenseMatrix &a) {
    const std::size_t m = a.rows();
    double sum = 0.0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        std::vector<double> x(m);
        double prefactor = 1.0;
        for (std::size_t i = 0; i < m; ++i) {
            x[i] = (mask >> i) & 1 ? -1.0 : 1.0;
            prefactor *= x[i];
        }
        double prod = prefactor;
        for (std::size_t j = 0; j < m; ++j) {
            double col = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                col += a(i, j) * x[i];
            }
            prod *= col;
        }
        sum += prod;
    }
    return sum / std::pow(2.0, static_cast<double>(m));
}

/// E[X_{i_1} ... X_{i_2k}] as the hafnian of the leg covariance,
/// haf = 1/(2^k k!) * sum over all (2k)! orderings of prod C(s_{2l}, s_{2l+1}).
inline double hafnian_by_permutations(const DenseMatrix &cov, const std::vector<std::size_t> &legs) {
    const std::size_t p = legs.size();
    if (p % 2 != 0) {
        return 0.0;
    }
    std::vector<std::size_t> order(p);
    std::iota(order.begin(), order.end(), 0);
    double sum = 0.0;
    do {
        double prod = 1.0;
        for (std::size_t l = 0; l < p; l += 2) {
            prod *= cov(legs[order[l]], legs[order[l + 1]]);
        }
        sum += prod;
    } while (std::next_permutation(order.begin(), order.end()));
    const double k = static_cast<double>(p / 2);
    return sum / (std::pow(2.0, k) * std::tgamma(k + 1.0));
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
inline std::vector<double> jacobi_eigenvalues(DenseMatrix s) {
    const std::size_t n = s.rows();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                off += s(i, j) * s(i, j);
            }
        }
        if (off < 1e-30) {
            break;
        }
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(s(p, q)) < 1e-300) {
                    continue;
                }
                const double theta = (s(q, q) - s(p, p)) / (2.0 * s(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double skp = s(k, p), skq = s(k, q);
                    s(k, p) = c * skp - sn * skq;
                    s(k, q) = sn * skp + c * skq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double spk = s(p, k), sqk = s(q, k);
                    s(p, k) = c * spk - sn * sqk;
                    s(q, k) = sn * spk + c * sqk;
                }
            }
        }
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = s(i, i);
    }
    return out;
}

inline DenseMatrix uniform_matrix(std::size_t rows, std::size_t cols, double lo, double hi, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(rows * cols);
    for (double &x : v) {
        x = dist(rng);
    }
    return DenseMatrix(rows, cols, std::move(v));
}

inline DenseMatrix integer_matrix(std::size_t m, int lo, int hi, std::mt19937_64 &rng) {
    std::uniform_int_distribution<int> dist(lo, hi);
    std::vector<double> v(m * m);
    for (double &x : v) {
        x = dist(rng);
    }
    return DenseMatrix(m, m, std::move(v));
}

/// G G^T + shift I for a random G: symmetric positive definite.
inline DenseMatrix random_spd(std::size_t m, std::mt19937_64 &rng, double shift = 0.5) {
    const DenseMatrix g = uniform_matrix(m, m, -1.0, 1.0, rng);
    DenseMatrix s = g * g.transpose();
    for (std::size_t i = 0; i < m; ++i) {
        s(i, i) += shift;
    }
    // Symmetrize exactly.
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            s(j, i) = s(i, j);
        }
    }
    return s;
}

inline double relative_gap(double value, double reference) {
    return std::abs(value - reference) / std::max(1.0, std::abs(reference));
}

/// Variance of the Glynn sign estimator by enumerating all 2^M sign vectors.
inline double glynn_variance_by_enumeration(const DenseMatrix &a) {
    const std::size_t m = a.rows();
    double first = 0.0, second = 0.0;
    const double count = std::pow(2.0, static_cast<double>(m));
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        double value = 1.0;
        std::vector<double> x(m);
        for (std::size_t i = 0; i < m; ++i) {
            x[i] = (mask >> i) & 1 ? -1.0 : 1.0;
            value *= x[i];
        }
        for (std::size_t j = 0; j < m; ++j) {
            double col = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                col += a(i, j) * x[i];
            }
            value *= col;
        }
        first += value / count;
        second += value * value / count;
    }
    return second - first * first;
}

}  // namespace gaussperm::testing

#endif

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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "gaussperm/cli.hpp"
#include "gaussperm/errors.hpp"
#include "gaussperm/estimator.hpp"
#include "gaussperm/exact.hpp"
#include "gaussperm/matrix.hpp"
#include "gaussperm/wick.hpp"
#include "../oracles.hpp"

using namespace gaussperm;
using gaussperm::testing::relative_gap;
using gaussperm::testing::uniform_matrix;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
    bool ok = true;
    std::string detail;
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char *format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

std::vector<std::size_t> range(std::size_t lo, std::size_t hi) {
    std::vector<std::size_t> v(hi - lo);
    std::iota(v.begin(), v.end(), lo);
    return v;
}

const DenseMatrix kTwoByTwo{{1, 2}, {3, 4}};

// Matrices with M <= 3 used by the variance and unbiasedness criteria.
std::vector<DenseMatrix> small_suite() {
    std::mt19937_64 rng(4242);
    std::vector<DenseMatrix> suite{kTwoByTwo, DenseMatrix{{-0.7}}};
    for (std::size_t m = 1; m <= 3; ++m) {
        for (int k = 0; k < 4; ++k) {
            suite.push_back(uniform_matrix(m, m, -2.0, 2.0, rng));
        }
    }
    return suite;
}

Verdict oracle_triangle() {
    const auto start = Clock::now();
    std::mt19937_64 rng(1);
    double worst = 0.0;
    for (int k = 0; k < 500; ++k) {
        const std::size_t m = 1 + static_cast<std::size_t>(k % 7);
        const DenseMatrix a = uniform_matrix(m, m, -2.0, 2.0, rng);
        const double naive = permanent_naive(a).value;
        worst = std::max({worst, relative_gap(permanent_ryser(a).value, naive),
                          relative_gap(glynn_full_enumeration(a).value, naive)});
    }
    const double elapsed = seconds_since(start);
    return {worst <= 1e-9 && elapsed < 30.0, fmt("max relative gap %.3g, %.2f s", worst, elapsed)};
}

Verdict isserlis_embedding() {
    const auto start = Clock::now();
    std::mt19937_64 rng(2);
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
        const std::size_t m = 1 + static_cast<std::size_t>(k % 4);
        const DenseMatrix a = uniform_matrix(m, m, -2.0, 2.0, rng);
        const CovarianceModel model(build_embedding(a, {frobenius_norm(a) + 0.5, false}));
        const std::vector<std::size_t> legs = range(0, 2 * m);
        worst = std::max(worst, relative_gap(isserlis_expectation(model, legs).value, permanent_naive(a).value));
    }
    const double elapsed = seconds_since(start);
    return {worst <= 1e-9 && elapsed < 10.0, fmt("max relative gap %.3g, %.2f s", worst, elapsed)};
}

Verdict coupled_copies() {
    std::mt19937_64 rng(3);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
        const std::size_t m = 1 + static_cast<std::size_t>(k % 4);
        const DenseMatrix a = gaussperm::testing::random_spd(m, rng);
        DenseMatrix doubled(2 * m, 2 * m);
        for (std::size_t i = 0; i < 2 * m; ++i) {
            for (std::size_t j = 0; j < 2 * m; ++j) {
                doubled(i, j) = a(i % m, j % m);
            }
        }
        const PairingSum s = feynman_cross_expectation(CovarianceModel(doubled), {{range(0, m), range(m, 2 * m)}});
        worst = std::max(worst, relative_gap(s.value, permanent_naive(a).value));
    }
    return {worst <= 1e-9, fmt("max relative gap %.3g over 50 SPD matrices", worst)};
}

Verdict variance_dominance() {
    Verdict v;
    double worst_exact = -INFINITY;
    for (const DenseMatrix &a : small_suite()) {
        const double alpha = frobenius_norm(a);
        const double exact = exact_single_sample_variance(a, alpha);
        const double bound = variance_bound(a.rows(), alpha);
        worst_exact = std::max(worst_exact, exact - bound);
        if (exact > bound + 1e-9) {
            v.ok = false;
        }
    }
    const std::uint64_t n = 100'000;
    const double slack = 1.0 + 5.0 / std::sqrt(static_cast<double>(n));
    double worst_ratio = 0.0;
    std::uint64_t seed = 0;
    for (const DenseMatrix &a : small_suite()) {
        const EstimateReport r = estimate_permanent(a, n, {seed++, 4096, 1});
        const double ratio = r.empirical_variance / r.variance_bound;
        worst_ratio = std::max(worst_ratio, ratio);
        if (ratio > slack) {
            v.ok = false;
        }
    }
    v.detail = fmt("max(V_exact - bound) %.3g, max empirical/bound %.3f (limit %.3f)", worst_exact, worst_ratio,
                   slack);
    return v;
}

std::size_t count_exceedances(std::size_t seeds, std::uint64_t n, double t, std::uint64_t seed_base) {
    std::size_t hits = 0;
    for (std::size_t s = 0; s < seeds; ++s) {
        const EstimateReport r = estimate_permanent(kTwoByTwo, n, {seed_base + s, 4096, 1});
        if (std::abs(r.estimate - 10.0) >= t) {
            ++hits;
        }
    }
    return hits;
}

Verdict chebyshev_calibration() {
    const auto start = Clock::now();
    const std::uint64_t n = 10'000;
    const double alpha = std::sqrt(30.0);
    const double t = std::sqrt(variance_bound(2, alpha) / (0.2 * static_cast<double>(n)));
    const double bound = chebyshev_failure_bound({2, alpha, t, n, std::nullopt});
    const std::size_t hits = count_exceedances(1000, n, t, 100'000);
    const double freq = static_cast<double>(hits) / 1000.0;
    const double elapsed = seconds_since(start);
    return {std::abs(bound - 0.2) < 1e-12 && freq <= 0.2 + 0.038 && elapsed < 120.0,
            fmt("t %.4f, bound %.3f, exceedance %.3f (limit 0.238), %.2f s", t, bound, freq, elapsed)};
}

Verdict sample_count_rule() {
    const double alpha = std::sqrt(30.0);
    const std::uint64_t n = required_samples(2, alpha, 1.0, 0.05);
    const double t = error_scale(2, alpha, 1.0);
    const std::size_t hits = count_exceedances(1000, n, t, 200'000);
    const double freq = static_cast<double>(hits) / 1000.0;
    return {n == 20 && std::abs(t - 90.0) < 1e-9 && freq <= 0.05 + 0.021,
            fmt("N %llu, t %.6g, exceedance %.3f (limit 0.071)", static_cast<unsigned long long>(n), t, freq)};
}

Verdict unbiasedness() {
    const std::size_t seeds = 200;
    const std::uint64_t n = 10'000;
    const double total = static_cast<double>(seeds * n);
    Verdict v;
    double worst_z = 0.0, worst_z_glynn = 0.0;
    std::uint64_t matrix_index = 0;
    for (const DenseMatrix &a : small_suite()) {
        const double exact = permanent_naive(a).value;
        const double v_exact = exact_single_sample_variance(a, frobenius_norm(a));
        const double v_glynn = gaussperm::testing::glynn_variance_by_enumeration(a);
        double grand = 0.0, grand_glynn = 0.0;
        for (std::size_t s = 0; s < seeds; ++s) {
            const std::uint64_t seed = 1'000'000 * (matrix_index + 1) + s;
            grand += estimate_permanent(a, n, {seed, 4096, 1}).estimate / seeds;
            grand_glynn += glynn_estimate(a, n, {seed, 4096, 1}).estimate / seeds;
        }
        ++matrix_index;
        const double se = std::sqrt(v_exact / total);
        const double se_glynn = std::sqrt(v_glynn / total);
        const double gap = std::abs(grand - exact);
        const double gap_glynn = std::abs(grand_glynn - exact);
        worst_z = std::max(worst_z, se > 0 ? gap / se : (gap > 1e-12 ? INFINITY : 0.0));
        worst_z_glynn = std::max(worst_z_glynn, se_glynn > 0 ? gap_glynn / se_glynn : (gap_glynn > 1e-12 ? INFINITY : 0.0));
    }
    v.ok = worst_z <= 4.0 && worst_z_glynn <= 4.0;
    v.detail = fmt("max |grand - perm| / SE: gaussian-field %.2f, glynn-random %.2f (limit 4)", worst_z,
                   worst_z_glynn);
    return v;
}

Verdict scaling() {
    cli::BenchOptions options;
    options.m_list = {4};
    options.n_list = {100'000, 200'000, 400'000, 800'000};
    options.seed = 8;
    options.repeats = 7;
    const cli::BenchGrid grid = cli::run_bench(options);
    Verdict v;
    for (const cli::BenchCell &cell : grid.cells) {
        if (cell.product_multiplications != cell.n * (2 * cell.m - 1)) {
            v.ok = false;
        }
    }
    const std::vector<double> &ratios = grid.scaling.at(0).time_ratios;
    if (ratios.size() != 3) {
        v.ok = false;
    }
    for (double r : ratios) {
        if (r < 1.5 || r > 2.5) {
            v.ok = false;
        }
    }
    v.detail = "time ratios";
    for (double r : ratios) {
        v.detail += fmt(" %.3f", r);
    }
    v.detail += fmt(", multiplications per sample %llu",
                    static_cast<unsigned long long>(grid.cells.front().product_multiplications /
                                                    grid.cells.front().n));
    return v;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

Verdict determinism() {
    std::mt19937_64 rng(9);
    Verdict v;
    std::size_t checks = 0;
    for (std::size_t m : {1, 2, 4, 6}) {
        const DenseMatrix a = uniform_matrix(m, m, -1.0, 1.0, rng);
        for (std::size_t chunk : {1000, 4096}) {
            const EstimateReport base = estimate_permanent(a, 50'000, {77, chunk, 1});
            const EstimateReport glynn_base = glynn_estimate(a, 50'000, {77, chunk, 1});
            for (std::size_t threads : {2, 8}) {
                const EstimateReport r = estimate_permanent(a, 50'000, {77, chunk, threads});
                const EstimateReport g = glynn_estimate(a, 50'000, {77, chunk, threads});
                v.ok = v.ok && same_bits(base.estimate, r.estimate) &&
                       same_bits(base.empirical_variance, r.empirical_variance) &&
                       same_bits(glynn_base.estimate, g.estimate);
                checks += 3;
            }
        }
    }
    v.detail = fmt("%zu bitwise comparisons across threads {1, 2, 8}", checks);
    return v;
}

Verdict embedding_validity() {
    std::mt19937_64 rng(10);
    Verdict v;
    double worst_rel = 0.0, worst_jitter = 0.0;
    std::size_t jittered = 0;
    for (int k = 0; k < 1000; ++k) {
        const std::size_t m = 1 + static_cast<std::size_t>(k % 16);
        DenseMatrix a = uniform_matrix(m, m, -2.0, 2.0, rng);
        if (k % 10 == 9) {
            // Rank one: alpha = ||A||_F = ||A|| makes C exactly singular.
            const DenseMatrix u = uniform_matrix(m, 1, -1.0, 1.0, rng);
            const DenseMatrix w = uniform_matrix(1, m, -1.0, 1.0, rng);
            a = u * w;
        }
        const double fro = frobenius_norm(a);
        try {
            const GaussianEmbedding e = build_embedding(a);
            const DenseMatrix diff = e.chol * e.chol.transpose() - e.cov;
            const double rel = frobenius_norm(diff) / frobenius_norm(e.cov);
            worst_rel = std::max(worst_rel, rel);
            worst_jitter = std::max(worst_jitter, e.jitter_applied / fro);
            if (e.jitter_applied > 0.0) {
                ++jittered;
            }
            if (rel > 1e-10 || e.jitter_applied > 8e-10 * fro * (1.0 + 1e-12)) {
                v.ok = false;
            }
        } catch (const Error &) {
            v.ok = false;
        }
    }
    v.detail = fmt("max reconstruction error %.3g, max jitter/alpha %.3g, %zu of 1000 jittered", worst_rel,
                   worst_jitter, jittered);
    return v;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char *, std::function<Verdict()>>> criteria{
        {"01 oracle triangle", oracle_triangle},
        {"02 isserlis sum over embedding", isserlis_embedding},
        {"03 cross pairings of coupled copies", coupled_copies},
        {"04 variance bound dominance", variance_dominance},
        {"05 chebyshev calibration", chebyshev_calibration},
        {"06 sample count rule", sample_count_rule},
        {"07 unbiasedness of both estimators", unbiasedness},
        {"08 linear scaling in N", scaling},
        {"09 thread-count determinism", determinism},
        {"10 embedding validity", embedding_validity},
    };
    int failures = 0;
    for (const auto &[name, check] : criteria) {
        Verdict v;
        try {
            v = check();
        } catch (const std::exception &e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s  %-38s %s\n", v.ok ? "PASS" : "FAIL", name, v.detail.c_str());
        std::fflush(stdout);
        failures += v.ok ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}

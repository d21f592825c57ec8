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

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "gaussperm/cli.hpp"
#include "gaussperm/errors.hpp"

namespace gaussperm::cli {

using nlohmann::json;

DenseMatrix random_matrix(std::size_t m, std::uint64_t seed, double lo, double hi) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> entries(m * m);
    for (double &x : entries) {
        x = dist(rng);
    }
    return DenseMatrix(m, m, std::move(entries));
}

namespace {

BenchScaling fit(std::size_t m, std::vector<const BenchCell *> cells) {
    std::sort(cells.begin(), cells.end(), [](const BenchCell *a, const BenchCell *b) { return a->n < b->n; });
    BenchScaling s;
    s.m = m;
    for (std::size_t k = 1; k < cells.size(); ++k) {
        s.time_ratios.push_back(static_cast<double>(cells[k]->sampling_ns) /
                                static_cast<double>(std::max<std::int64_t>(1, cells[k - 1]->sampling_ns)));
    }
    const double count = static_cast<double>(cells.size());
    double sx = 0, sy = 0;
    for (const auto *c : cells) {
        sx += static_cast<double>(c->n);
        sy += static_cast<double>(c->sampling_ns);
    }
    const double mx = sx / count, my = sy / count;
    double sxx = 0, sxy = 0, syy = 0;
    for (const auto *c : cells) {
        const double dx = static_cast<double>(c->n) - mx;
        const double dy = static_cast<double>(c->sampling_ns) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx > 0) {
        s.slope_ns_per_sample = sxy / sxx;
        s.intercept_ns = my - s.slope_ns_per_sample * mx;
        s.r_squared = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    } else {
        s.slope_ns_per_sample = mx > 0 ? my / mx : 0.0;
        s.r_squared = 1.0;
    }
    return s;
}

}  // namespace

BenchGrid run_bench(const BenchOptions &options) {
    if (options.m_list.empty() || options.n_list.empty()) {
        throw UsageError("bench needs a nonempty --m-list and --n-list");
    }
    for (std::uint64_t n : options.n_list) {
        if (n == 0) {
            throw UsageError("bench sample counts must be positive");
        }
    }
    BenchGrid grid;
    for (std::size_t m : options.m_list) {
        const DenseMatrix a = random_matrix(m, options.seed + m);
        std::optional<double> exact;
        if (m <= options.exact_max_m) {
            exact = permanent_naive(a).value;
        }
        SamplerConfig config;
        config.seed = options.seed;
        config.threads = options.threads;
        std::vector<BenchCell> cells;
        for (std::uint64_t n : options.n_list) {
            BenchCell cell;
            cell.m = m;
            cell.n = n;
            cells.push_back(cell);
        }
        // Repeats sweep the whole N list so slow periods hit every N alike.
        for (std::size_t r = 0; r < std::max<std::size_t>(1, options.repeats); ++r) {
            for (BenchCell &cell : cells) {
                const EstimateReport report = estimate_permanent(a, cell.n, config);
                if (r == 0 || report.wall_ns_sampling < cell.sampling_ns) {
                    cell.sampling_ns = report.wall_ns_sampling;
                }
                if (r == 0 || report.wall_ns_setup < cell.setup_ns) {
                    cell.setup_ns = report.wall_ns_setup;
                }
                cell.estimate = report.estimate;
                cell.variance_bound = report.variance_bound;
                cell.product_multiplications = report.product_multiplications;
            }
        }
        for (BenchCell &cell : cells) {
            if (exact) {
                cell.exact = exact;
                cell.abs_error = std::abs(cell.estimate - *exact);
            }
            grid.cells.push_back(cell);
        }
    }
    std::map<std::size_t, std::vector<const BenchCell *>> by_m;
    for (const auto &cell : grid.cells) {
        by_m[cell.m].push_back(&cell);
    }
    for (auto &[m, cells] : by_m) {
        grid.scaling.push_back(fit(m, cells));
    }
    return grid;
}

std::string bench_csv(const BenchGrid &grid) {
    std::ostringstream out;
    out.precision(17);
    out << "m,n,setup_ns,sampling_ns,estimate,exact,abs_error,variance_bound\n";
    for (const auto &c : grid.cells) {
        out << c.m << ',' << c.n << ',' << c.setup_ns << ',' << c.sampling_ns << ',' << c.estimate << ',';
        if (c.exact) {
            out << *c.exact;
        }
        out << ',';
        if (c.abs_error) {
            out << *c.abs_error;
        }
        out << ',' << c.variance_bound << '\n';
    }
    return out.str();
}

json to_json(const BenchGrid &grid) {
    json cells = json::array();
    for (const auto &c : grid.cells) {
        cells.push_back({
            {"m", c.m},
            {"n", c.n},
            {"nm", static_cast<std::uint64_t>(c.m) * c.n},
            {"setup_ns", c.setup_ns},
            {"sampling_ns", c.sampling_ns},
            {"estimate", c.estimate},
            {"exact", c.exact ? json(*c.exact) : json(nullptr)},
            {"abs_error", c.abs_error ? json(*c.abs_error) : json(nullptr)},
            {"variance_bound", c.variance_bound},
            {"product_multiplications", c.product_multiplications},
        });
    }
    json scaling = json::array();
    for (const auto &s : grid.scaling) {
        scaling.push_back({
            {"m", s.m},
            {"slope_ns_per_sample", s.slope_ns_per_sample},
            {"intercept_ns", s.intercept_ns},
            {"r_squared", s.r_squared},
            {"time_ratios", s.time_ratios},
        });
    }
    return {{"cells", cells}, {"scaling", scaling}};
}

}  // namespace gaussperm::cli

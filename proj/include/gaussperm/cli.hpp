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

#ifndef GAUSSPERM_CLI_HPP
#define GAUSSPERM_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gaussperm/estimator.hpp"
#include "gaussperm/exact.hpp"
#include "gaussperm/matrix.hpp"
#include "gaussperm/wick.hpp"
#include "json.hpp"

namespace gaussperm::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 2,
    kExitValidation = 3,
    kExitNumerical = 4,
    kExitConsistency = 5,
};

/// Conflicting or missing command-line flags.
class UsageError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Entry point of the `gaussperm` tool. `args` includes the program name.
/// Reports go to `out`, diagnostics to `err`; returns the process exit code.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

// ---- reports -------------------------------------------------------------

std::string library_version();

/// "fnv1a64:<hex>" over the shape and the bit patterns of the entries.
std::string matrix_digest(const DenseMatrix &a);

nlohmann::json to_json(const EstimateReport &report);
EstimateReport estimate_report_from_json(const nlohmann::json &j);
nlohmann::json to_json(const PermanentValue &value);
nlohmann::json to_json(const PairingSum &sum);
nlohmann::json to_json(const MagnitudeReport &report);

/// Wraps a command payload with the command echo, input digest, version and
/// timestamp.
nlohmann::json make_run_report(const std::string &command, const DenseMatrix *input, nlohmann::json result);

// ---- bench ---------------------------------------------------------------

struct BenchOptions {
    std::vector<std::size_t> m_list;
    std::vector<std::uint64_t> n_list;
    std::uint64_t seed = 0;
    /// Each cell is timed this many times; the fastest run is kept.
    std::size_t repeats = 3;
    std::size_t threads = 1;
    /// Largest M for which the exact permanent is computed.
    std::size_t exact_max_m = 7;
};

struct BenchCell {
    std::size_t m = 0;
    std::uint64_t n = 0;
    std::int64_t setup_ns = 0;
    std::int64_t sampling_ns = 0;
    double estimate = 0.0;
    std::optional<double> exact;
    std::optional<double> abs_error;
    double variance_bound = 0.0;
    std::uint64_t product_multiplications = 0;
};

/// Least-squares fit of sampling time against N at one M.
struct BenchScaling {
    std::size_t m = 0;
    double slope_ns_per_sample = 0.0;
    double intercept_ns = 0.0;
    double r_squared = 0.0;
    /// sampling_ns[k+1] / sampling_ns[k] over cells sorted by N.
    std::vector<double> time_ratios;
};

struct BenchGrid {
    std::vector<BenchCell> cells;
    std::vector<BenchScaling> scaling;
};

/// Uniform [-1, 1] test matrix; the same (m, seed) always gives the same matrix.
DenseMatrix random_matrix(std::size_t m, std::uint64_t seed, double lo = -1.0, double hi = 1.0);

BenchGrid run_bench(const BenchOptions &options);
std::string bench_csv(const BenchGrid &grid);
nlohmann::json to_json(const BenchGrid &grid);

}  // namespace gaussperm::cli

#endif

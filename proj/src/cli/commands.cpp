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

#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "CLI11.hpp"
#include "gaussperm/cli.hpp"
#include "gaussperm/errors.hpp"

namespace gaussperm::cli {

using nlohmann::json;

namespace {

// Sample counts are accepted in scientific notation ("1e6") as long as they
// denote a positive integer.
std::uint64_t parse_count(const std::string &text, const char *flag) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception &) {
        throw UsageError(std::string(flag) + ": cannot parse '" + text + "' as a count");
    }
    if (used != text.size() || !(value >= 1.0) || value != std::floor(value) || value > 1.8e19) {
        throw UsageError(std::string(flag) + ": '" + text + "' is not a positive integer");
    }
    return static_cast<std::uint64_t>(value);
}

void emit(std::ostream &out, const json &report, bool as_json) {
    if (as_json) {
        out << report.dump() << '\n';
        return;
    }
    const json &result = report.at("result");
    for (auto it = result.begin(); it != result.end(); ++it) {
        if (it->is_structured()) {
            out << it.key() << ": " << it->dump() << '\n';
        } else if (it->is_string()) {
            out << it.key() << ": " << it->get<std::string>() << '\n';
        } else {
            out << it.key() << ": " << it->dump() << '\n';
        }
    }
}

double relative_gap(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// ---- exact -----------------------------------------------------------------

struct ExactArgs {
    std::string matrix_path;
    std::string method = "all";
    std::optional<std::size_t> max_m;
    bool json = false;
};

int cmd_exact(const ExactArgs &args, const std::string &echo, std::ostream &out, std::ostream &err) {
    const DenseMatrix a = read_matrix_file(args.matrix_path);
    if (!a.is_square()) {
        throw ValidationError("matrix in '" + args.matrix_path + "' is " + std::to_string(a.rows()) + "x" +
                              std::to_string(a.cols()) + ", expected square");
    }
    OracleLimits limits;
    if (args.max_m) {
        limits.naive_max_m = limits.ryser_max_m = limits.glynn_max_m = *args.max_m;
    }
    json result;
    json ops;
    std::vector<double> values;
    auto record = [&](const char *key, const PermanentValue &v) {
        result[key] = v.value;
        ops[key] = v.ops_performed;
        values.push_back(v.value);
    };
    if (args.method == "naive" || args.method == "all") {
        record("naive", permanent_naive(a, limits));
    }
    if (args.method == "ryser" || args.method == "all") {
        record("ryser", permanent_ryser(a, limits));
    }
    if (args.method == "glynn-enum" || args.method == "all") {
        record("glynn_enum", glynn_full_enumeration(a, limits));
    }
    result["m"] = a.rows();
    result["method"] = args.method;
    result["ops_performed"] = ops;
    int code = kExitOk;
    if (args.method == "all") {
        double discrepancy = 0.0;
        for (double v : values) {
            discrepancy = std::max(discrepancy, relative_gap(v, values.front()));
        }
        result["max_discrepancy"] = discrepancy;
        if (discrepancy > 1e-9) {
            err << "exact: methods disagree, max relative discrepancy " << discrepancy << '\n';
            code = kExitConsistency;
        }
    }
    emit(out, make_run_report(echo, &a, result), args.json);
    return code;
}

// ---- estimate --------------------------------------------------------------

struct EstimateArgs {
    std::string matrix_path;
    std::optional<std::string> samples;
    std::optional<double> epsilon;
    std::optional<double> c;
    std::optional<double> delta;
    std::optional<double> t;
    std::optional<double> alpha;
    bool unsafe_alpha = false;
    std::uint64_t seed = 0;
    std::size_t threads = 1;
    std::size_t chunk_size = 4096;
    std::string method = "gaussian-field";
    bool check_exact = false;
    bool log_magnitude = false;
    bool json = false;
};

int cmd_estimate(const EstimateArgs &args, const std::string &echo, std::ostream &out) {
    const int modes = (args.samples ? 1 : 0) + (args.epsilon ? 1 : 0) + (args.c ? 1 : 0);
    if (modes != 1) {
        throw UsageError("estimate: give exactly one of --samples, --epsilon, or --c with --delta");
    }
    if (args.c && !args.delta) {
        throw UsageError("estimate: --c needs --delta");
    }
    if (args.samples && args.delta) {
        throw UsageError("estimate: --delta only applies with --c or --epsilon");
    }
    if (args.t && !args.samples) {
        throw UsageError("estimate: --t only applies with --samples; --c and --epsilon fix t themselves");
    }
    if (args.t && !(*args.t > 0.0)) {
        throw ValidationError("estimate: --t must be positive");
    }

    const DenseMatrix a = read_matrix_file(args.matrix_path);
    if (!a.is_square()) {
        throw ValidationError("matrix in '" + args.matrix_path + "' is " + std::to_string(a.rows()) + "x" +
                              std::to_string(a.cols()) + ", expected square");
    }
    const std::size_t m = a.rows();

    std::optional<double> c = args.c ? args.c : args.epsilon;
    const double delta = args.delta.value_or(0.05);
    std::uint64_t n = 0;
    if (args.samples) {
        n = parse_count(*args.samples, "--samples");
    } else {
        if (!(*c > 0.0)) {
            throw ValidationError("estimate: error multiple must be positive");
        }
        n = required_samples(m, args.alpha.value_or(frobenius_norm(a)), *c, delta);
    }

    SamplerConfig config;
    config.seed = args.seed;
    config.threads = args.threads;
    config.chunk_size = args.chunk_size;
    EstimateOptions options;
    options.alpha = args.alpha;
    options.unsafe_alpha = args.unsafe_alpha;
    options.t = args.t;

    if (args.log_magnitude) {
        if (args.method != "gaussian-field") {
            throw UsageError("estimate: --log-magnitude only applies to the gaussian-field method");
        }
        const MagnitudeReport magnitude = product_magnitude_stats(a, n, config, options);
        emit(out, make_run_report(echo, &a, to_json(magnitude)), args.json);
        return kExitOk;
    }

    EstimateReport report = args.method == "glynn-random" ? glynn_estimate(a, n, config, options)
                                                          : estimate_permanent(a, n, config, options);
    if (c && m > 0) {
        // t = c (sqrt(3) alpha)^M for the Gaussian field, c ||A||_F^M for Glynn.
        const double t = args.method == "glynn-random"
                             ? *c * std::pow(report.alpha, static_cast<double>(m))
                             : error_scale(m, report.alpha, *c);
        const double bound = report.variance_bound > 0.0 && t > 0.0
                                 ? std::min(1.0, report.variance_bound /
                                                     (t * t * static_cast<double>(report.n_samples)))
                                 : 0.0;
        report.chebyshev = ChebyshevAt{t, bound};
    }
    json result = to_json(report);
    if (c) {
        result[args.c ? "c" : "epsilon"] = *c;
        result["delta"] = delta;
        result["required_samples"] = n;
    }
    if (args.check_exact && m <= 7) {
        const double exact = permanent_naive(a).value;
        result["exact"] = exact;
        result["abs_error"] = std::abs(report.estimate - exact);
    }
    emit(out, make_run_report(echo, &a, result), args.json);
    return kExitOk;
}

// ---- bound -----------------------------------------------------------------

struct BoundArgs {
    std::size_t m = 0;
    double alpha = 0.0;
    std::optional<double> t;
    std::optional<std::string> n;
    std::optional<double> c;
    std::optional<double> delta;
    bool json = false;
};

int cmd_bound(const BoundArgs &args, const std::string &echo, std::ostream &out) {
    const bool tn = args.t || args.n;
    const bool cd = args.c || args.delta;
    if (!tn && !cd) {
        throw UsageError("bound: give --t with --n, and/or --c with --delta");
    }
    if (tn && !(args.t && args.n)) {
        throw UsageError("bound: --t and --n go together");
    }
    if (cd && !(args.c && args.delta)) {
        throw UsageError("bound: --c and --delta go together");
    }
    json result = {{"m", args.m}, {"alpha", args.alpha}};
    if (!(args.alpha > 0.0)) {
        throw ValidationError("bound: --alpha must be positive");
    }
    result["variance_bound"] = variance_bound(args.m, args.alpha);
    if (tn) {
        BoundQuery q{args.m, args.alpha, *args.t, 0, std::nullopt};
        if (!(*args.t > 0.0)) {
            throw ValidationError("bound: --t must be positive");
        }
        q.n = parse_count(*args.n, "--n");
        result["t"] = q.t;
        result["n"] = q.n;
        result["chebyshev_bound"] = chebyshev_failure_bound(q);
    }
    if (cd) {
        const std::uint64_t n = required_samples(args.m, args.alpha, *args.c, *args.delta);
        const double t = error_scale(args.m, args.alpha, *args.c);
        result["c"] = *args.c;
        result["delta"] = *args.delta;
        result["required_samples"] = n;
        result["error_scale_t"] = t;
        result["chebyshev_bound_at_required"] = chebyshev_failure_bound({args.m, args.alpha, t, n, args.c});
    }
    emit(out, make_run_report(echo, nullptr, result), args.json);
    return kExitOk;
}

// ---- wick-check ------------------------------------------------------------

struct WickArgs {
    std::size_t m = 3;
    std::size_t trials = 50;
    std::uint64_t seed = 0;
    bool json = false;
};

int cmd_wick_check(const WickArgs &args, const std::string &echo, std::ostream &out, std::ostream &err) {
    if (args.m > 4) {
        throw SizeLimitError("wick-check: --m must be at most 4 (the pairing oracle visits 2M legs)");
    }
    double max_discrepancy = 0.0;
    std::uint64_t pairings = 0;
    for (std::size_t trial = 0; trial < args.trials; ++trial) {
        const DenseMatrix a = random_matrix(args.m, args.seed + trial, -2.0, 2.0);
        const double perm = permanent_naive(a).value;
        const GaussianEmbedding embedding = build_embedding(a, {frobenius_norm(a) + 0.5, false});
        const CovarianceModel model(embedding);
        std::vector<std::size_t> all(2 * args.m);
        std::iota(all.begin(), all.end(), 0);
        const PairingSum isserlis = isserlis_expectation(model, all);
        pairings += isserlis.pairings_counted;
        double via_subfields = 0.0;
        try {
            via_subfields = perm_via_subfields(model, std::span(all).first(args.m), std::span(all).subspan(args.m));
        } catch (const ConsistencyError &) {
            err << "wick-check: subfield paths disagree on trial " << trial << " for matrix:\n" << format_matrix(a);
            throw;
        }
        const double gap = std::max(relative_gap(isserlis.value, perm), relative_gap(via_subfields, perm));
        max_discrepancy = std::max(max_discrepancy, gap);
        if (gap > 1e-9) {
            err << "wick-check: trial " << trial << " disagrees (relative gap " << gap << ") for matrix:\n"
                << format_matrix(a);
            json result = {{"m", args.m}, {"trials", trial + 1}, {"max_discrepancy", max_discrepancy}, {"ok", false}};
            emit(out, make_run_report(echo, nullptr, result), args.json);
            return kExitConsistency;
        }
    }
    json result = {{"m", args.m},
                   {"trials", args.trials},
                   {"seed", args.seed},
                   {"pairings_visited", pairings},
                   {"max_discrepancy", max_discrepancy},
                   {"ok", true}};
    emit(out, make_run_report(echo, nullptr, result), args.json);
    return kExitOk;
}

// ---- bench -----------------------------------------------------------------

struct BenchArgs {
    std::vector<std::string> m_list;
    std::vector<std::string> n_list;
    std::uint64_t seed = 0;
    std::size_t repeats = 3;
    std::size_t threads = 1;
    std::optional<std::string> out_path;
    bool json = false;
};

int cmd_bench(const BenchArgs &args, const std::string &echo, std::ostream &out) {
    BenchOptions options;
    for (const auto &m : args.m_list) {
        std::size_t used = 0;
        unsigned long value = 0;
        try {
            value = std::stoul(m, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used == 0 || used != m.size()) {
            throw UsageError("--m-list: '" + m + "' is not a dimension");
        }
        options.m_list.push_back(value);
    }
    for (const auto &n : args.n_list) {
        options.n_list.push_back(parse_count(n, "--n-list"));
    }
    options.seed = args.seed;
    options.repeats = args.repeats;
    options.threads = args.threads;
    const BenchGrid grid = run_bench(options);
    const std::string csv = bench_csv(grid);
    if (args.out_path) {
        std::ofstream file(*args.out_path);
        if (!file) {
            throw ValidationError("cannot write '" + *args.out_path + "'");
        }
        file << csv;
    }
    if (args.json) {
        out << make_run_report(echo, nullptr, to_json(grid)).dump() << '\n';
    } else if (!args.out_path) {
        out << csv;
    }
    return kExitOk;
}

std::string join(const std::vector<std::string> &args) {
    std::string s;
    for (std::size_t k = 1; k < args.size(); ++k) {
        if (k > 1) {
            s += ' ';
        }
        s += args[k];
    }
    return s;
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Additive-error permanent estimation with Gaussian fields", "gaussperm"};
    app.require_subcommand(1);
    app.set_version_flag("--version", library_version());

    ExactArgs exact;
    auto *exact_cmd = app.add_subcommand("exact", "Exact permanent by naive, Ryser, or Glynn enumeration");
    exact_cmd->add_option("matrix", exact.matrix_path, "Matrix text file")->required();
    exact_cmd->add_option("--method", exact.method, "naive|ryser|glynn-enum|all")
        ->check(CLI::IsMember({"naive", "ryser", "glynn-enum", "all"}));
    exact_cmd->add_option("--max-m", exact.max_m, "Override the size ceiling of every method");
    exact_cmd->add_flag("--json", exact.json, "Emit one JSON object");

    EstimateArgs est;
    auto *est_cmd = app.add_subcommand("estimate", "Monte Carlo estimate of the permanent");
    est_cmd->add_option("matrix", est.matrix_path, "Matrix text file")->required();
    est_cmd->add_option("--samples,-n", est.samples, "Number of samples N");
    est_cmd->add_option("--epsilon", est.epsilon, "Error multiple; t = epsilon (sqrt(3) alpha)^M");
    est_cmd->add_option("--c", est.c, "Error multiple; t = c (sqrt(3) alpha)^M, needs --delta");
    est_cmd->add_option("--delta", est.delta, "Failure probability for --c / --epsilon (default 0.05)");
    est_cmd->add_option("--t", est.t, "Report the Chebyshev bound at this additive error");
    est_cmd->add_option("--alpha", est.alpha, "Diagonal shift (default: Frobenius norm)");
    est_cmd->add_flag("--unsafe-alpha", est.unsafe_alpha, "Allow alpha below the Frobenius norm");
    est_cmd->add_option("--seed", est.seed, "RNG seed");
    est_cmd->add_option("--threads", est.threads, "Worker threads (0 = all cores)");
    est_cmd->add_option("--chunk-size", est.chunk_size, "Samples per RNG chunk")->check(CLI::PositiveNumber);
    est_cmd->add_option("--method", est.method, "gaussian-field|glynn-random")
        ->check(CLI::IsMember({"gaussian-field", "glynn-random"}));
    est_cmd->add_flag("--check-exact", est.check_exact, "Also report the true error when M <= 7");
    est_cmd->add_flag("--log-magnitude", est.log_magnitude, "Report log-magnitude statistics of the products");
    est_cmd->add_flag("--json", est.json, "Emit one JSON object");

    BoundArgs bound;
    auto *bound_cmd = app.add_subcommand("bound", "Chebyshev failure bound and required sample count");
    bound_cmd->add_option("--m", bound.m, "Matrix dimension M")->required();
    bound_cmd->add_option("--alpha", bound.alpha, "Diagonal shift alpha")->required();
    bound_cmd->add_option("--t", bound.t, "Additive error t");
    bound_cmd->add_option("--n", bound.n, "Sample count N");
    bound_cmd->add_option("--c", bound.c, "Error multiple c");
    bound_cmd->add_option("--delta", bound.delta, "Failure probability delta");
    bound_cmd->add_flag("--json", bound.json, "Emit one JSON object");

    WickArgs wick;
    auto *wick_cmd = app.add_subcommand("wick-check", "Check pairing sums against the exact permanent");
    wick_cmd->add_option("--m", wick.m, "Matrix dimension (at most 4)");
    wick_cmd->add_option("--trials", wick.trials, "Random matrices to check");
    wick_cmd->add_option("--seed", wick.seed, "RNG seed");
    wick_cmd->add_flag("--json", wick.json, "Emit one JSON object");

    BenchArgs bench;
    auto *bench_cmd = app.add_subcommand("bench", "Time the estimator over an (M, N) grid");
    bench_cmd->add_option("--m-list", bench.m_list, "Comma separated dimensions")->delimiter(',');
    bench_cmd->add_option("--n-list", bench.n_list, "Comma separated sample counts")->delimiter(',');
    bench_cmd->add_option("--seed", bench.seed, "RNG seed");
    bench_cmd->add_option("--repeats", bench.repeats, "Timing repeats per cell (fastest kept)");
    bench_cmd->add_option("--threads", bench.threads, "Worker threads");
    bench_cmd->add_option("--out", bench.out_path, "Write the CSV grid here");
    bench_cmd->add_flag("--json", bench.json, "Emit the grid and scaling fit as one JSON object");

    std::vector<const char *> argv;
    argv.reserve(args.size());
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    const std::string echo = join(args);
    try {
        if (*exact_cmd) {
            return cmd_exact(exact, echo, out, err);
        }
        if (*est_cmd) {
            return cmd_estimate(est, echo, out);
        }
        if (*bound_cmd) {
            return cmd_bound(bound, echo, out);
        }
        if (*wick_cmd) {
            return cmd_wick_check(wick, echo, out, err);
        }
        if (*bench_cmd) {
            return cmd_bench(bench, echo, out);
        }
    } catch (const UsageError &e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const OverflowError &e) {
        err << "numerical error: " << e.what() << " (try a smaller M or alpha, or --log-magnitude)\n";
        return kExitNumerical;
    } catch (const NumericalError &e) {
        err << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const ConsistencyError &e) {
        err << "consistency failure: " << e.what() << '\n';
        return kExitConsistency;
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception &e) {
        err << "internal error: " << e.what() << '\n';
        return kExitConsistency;
    }
    return kExitUsage;
}

}  // namespace gaussperm::cli

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

#include <bit>
#include <chrono>
#include <cstdio>
#include <ctime>

#include "gaussperm/cli.hpp"

#ifndef GAUSSPERM_VERSION
#define GAUSSPERM_VERSION "0.0.0"
#endif

namespace gaussperm::cli {

using nlohmann::json;

std::string library_version() { return GAUSSPERM_VERSION; }

std::string matrix_digest(const DenseMatrix &a) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    auto feed = [&hash](std::uint64_t word) {
        for (int b = 0; b < 8; ++b) {
            hash ^= (word >> (8 * b)) & 0xff;
            hash *= 0x100000001b3ULL;
        }
    };
    feed(a.rows());
    feed(a.cols());
    for (double x : a.entries()) {
        feed(std::bit_cast<std::uint64_t>(x));
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return std::string("fnv1a64:") + buf;
}

json to_json(const EstimateReport &r) {
    json j = {
        {"estimate", r.estimate},
        {"n_samples", r.n_samples},
        {"alpha", r.alpha},
        {"jitter_applied", r.jitter_applied},
        {"m", r.m},
        {"variance_bound", r.variance_bound},
        {"empirical_variance", r.empirical_variance},
        {"seed", r.seed},
        {"wall_ns_setup", r.wall_ns_setup},
        {"wall_ns_sampling", r.wall_ns_sampling},
        {"method", std::string(to_string(r.method))},
        {"product_multiplications", r.product_multiplications},
    };
    if (r.chebyshev) {
        j["t"] = r.chebyshev->t;
        j["chebyshev_bound"] = r.chebyshev->bound;
    } else {
        j["t"] = nullptr;
        j["chebyshev_bound"] = nullptr;
    }
    return j;
}

EstimateReport estimate_report_from_json(const json &j) {
    EstimateReport r;
    r.estimate = j.at("estimate").get<double>();
    r.n_samples = j.at("n_samples").get<std::uint64_t>();
    r.alpha = j.at("alpha").get<double>();
    r.jitter_applied = j.value("jitter_applied", 0.0);
    r.m = j.at("m").get<std::size_t>();
    r.variance_bound = j.at("variance_bound").get<double>();
    r.empirical_variance = j.value("empirical_variance", 0.0);
    r.seed = j.at("seed").get<std::uint64_t>();
    r.wall_ns_setup = j.at("wall_ns_setup").get<std::int64_t>();
    r.wall_ns_sampling = j.at("wall_ns_sampling").get<std::int64_t>();
    const std::string method = j.at("method").get<std::string>();
    if (method == to_string(EstimatorMethod::kGaussianField)) {
        r.method = EstimatorMethod::kGaussianField;
    } else if (method == to_string(EstimatorMethod::kGlynnRandom)) {
        r.method = EstimatorMethod::kGlynnRandom;
    } else {
        throw std::invalid_argument("unknown estimator method '" + method + "'");
    }
    r.product_multiplications = j.value("product_multiplications", std::uint64_t{0});
    if (j.contains("chebyshev_bound") && !j.at("chebyshev_bound").is_null()) {
        r.chebyshev = ChebyshevAt{j.at("t").get<double>(), j.at("chebyshev_bound").get<double>()};
    }
    return r;
}

json to_json(const PermanentValue &v) {
    return {{"value", v.value}, {"method", std::string(to_string(v.method))}, {"ops_performed", v.ops_performed}};
}

json to_json(const PairingSum &s) { return {{"value", s.value}, {"pairings_counted", s.pairings_counted}}; }

json to_json(const MagnitudeReport &r) {
    return {{"n_samples", r.n_samples},         {"m", r.m},
            {"alpha", r.alpha},                 {"mean_log_abs", r.mean_log_abs},
            {"max_log_abs", r.max_log_abs},     {"negative_fraction", r.negative_fraction},
            {"method", "gaussian-field-log-magnitude"}};
}

namespace {

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

json make_run_report(const std::string &command, const DenseMatrix *input, json result) {
    json report = {
        {"command", command},
        {"version", library_version()},
        {"timestamp", utc_timestamp()},
        {"result", std::move(result)},
    };
    if (input != nullptr) {
        report["input"] = {{"rows", input->rows()}, {"cols", input->cols()}, {"hash", matrix_digest(*input)}};
    }
    return report;
}

}  // namespace gaussperm::cli

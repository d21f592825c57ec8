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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <vector>

#include "gaussperm/errors.hpp"
#include "gaussperm/estimator.hpp"
#include "gaussperm/exact.hpp"
#include "gaussperm/matrix.hpp"
#include "gaussperm/wick.hpp"

namespace py = pybind11;
using namespace gaussperm;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

DenseMatrix to_matrix(const Array &array) {
    if (array.ndim() != 2) {
        throw InvalidInput("expected a 2-d array, got " + std::to_string(array.ndim()) + " dimensions");
    }
    const auto rows = static_cast<std::size_t>(array.shape(0));
    const auto cols = static_cast<std::size_t>(array.shape(1));
    return DenseMatrix(rows, cols, std::vector<double>(array.data(), array.data() + rows * cols));
}

Array to_array(const DenseMatrix &m) {
    Array out({m.rows(), m.cols()});
    std::copy(m.entries().begin(), m.entries().end(), out.mutable_data());
    return out;
}

py::dict report_dict(const EstimateReport &r) {
    py::dict d;
    d["estimate"] = r.estimate;
    d["n_samples"] = r.n_samples;
    d["alpha"] = r.alpha;
    d["jitter_applied"] = r.jitter_applied;
    d["m"] = r.m;
    d["variance_bound"] = r.variance_bound;
    d["empirical_variance"] = r.empirical_variance;
    d["seed"] = r.seed;
    d["method"] = std::string(to_string(r.method));
    d["product_multiplications"] = r.product_multiplications;
    d["wall_ns_setup"] = r.wall_ns_setup;
    d["wall_ns_sampling"] = r.wall_ns_sampling;
    d["t"] = r.chebyshev ? py::cast(r.chebyshev->t) : py::none();
    d["chebyshev_bound"] = r.chebyshev ? py::cast(r.chebyshev->bound) : py::none();
    return d;
}

PermanentValue exact_permanent(const DenseMatrix &a, const std::string &method) {
    if (method == "naive") {
        return permanent_naive(a);
    }
    if (method == "ryser") {
        return permanent_ryser(a);
    }
    if (method == "glynn-enum") {
        return glynn_full_enumeration(a);
    }
    throw ValidationError("unknown method '" + method + "'; expected naive, ryser, or glynn-enum");
}

}  // namespace

PYBIND11_MODULE(_gaussperm, m) {
    m.doc() = "Permanent estimation with Gaussian fields";

    // Translators run newest first, so the base class goes first.
    py::register_exception<Error>(m, "GausspermError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<OverflowError>(m, "SampleOverflowError", PyExc_OverflowError);
    py::register_exception<ConsistencyError>(m, "ConsistencyError", PyExc_RuntimeError);

    m.def(
        "permanent",
        [](const Array &a, const std::string &method) { return exact_permanent(to_matrix(a), method).value; },
        py::arg("a"), py::arg("method") = "ryser", "Exact permanent by naive, ryser, or glynn-enum.");

    m.def(
        "build_embedding",
        [](const Array &a, std::optional<double> alpha, bool unsafe_alpha) {
            const GaussianEmbedding e = build_embedding(to_matrix(a), {alpha, unsafe_alpha});
            py::dict d;
            d["m"] = e.m;
            d["alpha"] = e.alpha;
            d["jitter_applied"] = e.jitter_applied;
            d["cov"] = to_array(e.cov);
            d["chol"] = to_array(e.chol);
            return d;
        },
        py::arg("a"), py::arg("alpha") = py::none(), py::arg("unsafe_alpha") = false,
        "Covariance [[aI, A], [A^T, aI]] and its Cholesky factor.");

    m.def(
        "estimate",
        [](const Array &a, std::uint64_t n, std::uint64_t seed, std::size_t threads, std::size_t chunk_size,
           std::optional<double> alpha, bool unsafe_alpha, std::optional<double> t, const std::string &method) {
            const DenseMatrix mat = to_matrix(a);
            const SamplerConfig config{seed, chunk_size, threads};
            const EstimateOptions options{alpha, unsafe_alpha, t};
            EstimateReport r;
            {
                py::gil_scoped_release release;
                if (method == "gaussian-field") {
                    r = estimate_permanent(mat, n, config, options);
                } else if (method == "glynn-random") {
                    r = glynn_estimate(mat, n, config, options);
                } else {
                    throw ValidationError("unknown method '" + method + "'");
                }
            }
            return report_dict(r);
        },
        py::arg("a"), py::arg("n"), py::arg("seed") = 0, py::arg("threads") = 1, py::arg("chunk_size") = 4096,
        py::arg("alpha") = py::none(), py::arg("unsafe_alpha") = false, py::arg("t") = py::none(),
        py::arg("method") = "gaussian-field", "Monte Carlo permanent estimate; returns the run report as a dict.");

    m.def("variance_bound", &variance_bound, py::arg("m"), py::arg("alpha"));
    m.def("error_scale", &error_scale, py::arg("m"), py::arg("alpha"), py::arg("c"));
    m.def(
        "chebyshev_failure_bound",
        [](std::size_t m, double alpha, double t, std::uint64_t n) {
            return chebyshev_failure_bound({m, alpha, t, n, std::nullopt});
        },
        py::arg("m"), py::arg("alpha"), py::arg("t"), py::arg("n"));
    m.def("required_samples", &required_samples, py::arg("m"), py::arg("alpha"), py::arg("c"), py::arg("delta"));
    m.def(
        "exact_single_sample_variance",
        [](const Array &a, double alpha, bool unsafe_alpha) {
            return exact_single_sample_variance(to_matrix(a), alpha, unsafe_alpha);
        },
        py::arg("a"), py::arg("alpha"), py::arg("unsafe_alpha") = false);
    m.def(
        "isserlis_expectation",
        [](const Array &cov, const std::vector<std::size_t> &indices) {
            const PairingSum s = isserlis_expectation(CovarianceModel(to_matrix(cov)), indices);
            return py::make_tuple(s.value, s.pairings_counted);
        },
        py::arg("cov"), py::arg("indices"), "Sum over pairings of the legs; returns (value, pairings_counted).");
    m.def(
        "parse_matrix", [](const std::string &text) { return to_array(parse_matrix(text)); }, py::arg("text"));
}

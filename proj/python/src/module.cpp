// Copyright 2026 The ABL Lab Authors
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

// Reports cross the boundary as JSON text; the Python package decodes them.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "abl_lab/abl.hpp"
#include "abl_lab/cli.hpp"
#include "abl_lab/ensemble.hpp"
#include "abl_lab/errors.hpp"
#include "abl_lab/fallacies.hpp"
#include "abl_lab/protocol_file.hpp"
#include "abl_lab/report.hpp"
#include "abl_lab/verify.hpp"

namespace py = pybind11;

namespace {

abl::Protocol load(const std::string& path) { return abl::build_protocol(abl::load_protocol_file(path)); }

std::string exact(const std::string& path) {
    const abl::Protocol p = load(path);
    return abl::dump(abl::exact_json(p, abl::abl_distribution(p)));
}

std::string mc(const std::string& path, std::uint64_t n, std::uint64_t seed, bool postselect, unsigned threads) {
    const abl::Protocol p = load(path);
    const abl::EnsembleStats s = abl::run_ensemble(p, n, seed, {.postselect = postselect, .threads = threads});
    return abl::dump(abl::mc_json(s, abl::compare_mc_exact(s, p)));
}

std::string verify(std::size_t max_dim, std::size_t max_n, std::size_t instances, std::uint64_t seed) {
    abl::VerifyOptions o;
    o.max_dim = max_dim;
    o.max_n = max_n;
    o.instances = instances;
    o.seed = seed;
    return abl::dump(abl::verify_json(abl::run_verify(o)));
}

std::string berkson(double p_a, double p_b, std::uint64_t n, std::uint64_t seed) {
    const abl::BerksonParams params{p_a, p_b, n};
    return abl::dump(abl::berkson_json(params, seed, abl::berkson_exact(params), abl::berkson_mc(params, seed)));
}

py::tuple run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = abl::run_cli(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Pre- and post-selected measurement protocols";

    py::register_exception<abl::ImpossibleBranch>(m, "ImpossibleBranch", PyExc_ValueError);
    py::register_exception<abl::ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<abl::DimensionError>(m, "DimensionError", PyExc_ValueError);

    m.def("exact", &exact, py::arg("path"));
    m.def("mc", &mc, py::arg("path"), py::arg("n") = abl::kDefaultTrials, py::arg("seed") = abl::kDefaultSeed,
          py::arg("postselect") = true, py::arg("threads") = 1u);
    m.def("verify", &verify, py::arg("max_dim") = 3, py::arg("max_n") = 2, py::arg("instances") = 200,
          py::arg("seed") = abl::kDefaultSeed);
    m.def("berkson", &berkson, py::arg("p_a") = 0.1, py::arg("p_b") = 0.1, py::arg("n") = 10'000,
          py::arg("seed") = abl::kDefaultSeed);
    m.def(
        "abl_probability",
        [](const std::string& path, const std::vector<std::string>& labels) {
            return abl::abl_probability(load(path), abl::OutcomeSequence{labels});
        },
        py::arg("path"), py::arg("labels"));
    m.def("run_cli", &run_cli, py::arg("args"));
}

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

#include "abl_lab/random_models.hpp"

#include <cmath>

namespace abl {

namespace {

Complex gaussian(RandomStream& rng) {
    const double re = rng.normal();
    const double im = rng.normal();
    return {re * M_SQRT1_2, im * M_SQRT1_2};
}

ComplexVector gaussian_vector(std::size_t dim, RandomStream& rng) {
    ComplexVector v(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        v[i] = gaussian(rng);
    }
    return v;
}

}  // namespace

ComplexOperator random_unitary(std::size_t dim, RandomStream& rng) {
    std::vector<ComplexVector> columns;
    columns.reserve(dim);
    while (columns.size() < dim) {
        ComplexVector v = gaussian_vector(dim, rng);
        // Two passes of modified Gram-Schmidt.
        for (int pass = 0; pass < 2; ++pass) {
            for (const ComplexVector& q : columns) {
                v += -inner(q, v) * q;
            }
        }
        const double n = v.norm();
        if (n < 1e-8) {
            continue;  // measure-zero degenerate draw
        }
        columns.push_back(Complex(1.0 / n) * v);
    }
    ComplexOperator u(dim);
    for (std::size_t c = 0; c < dim; ++c) {
        for (std::size_t r = 0; r < dim; ++r) {
            u(r, c) = columns[c][r];
        }
    }
    return u;
}

ComplexOperator random_self_adjoint(std::size_t dim, RandomStream& rng) {
    ComplexOperator g(dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            g(r, c) = gaussian(rng);
        }
    }
    ComplexOperator h = g + g.adjoint();
    h *= 0.5;
    return h;
}

ComplexVector random_unit_vector(std::size_t dim, RandomStream& rng) {
    return gaussian_vector(dim, rng).normalized();
}

QuantumState random_mixed_state(std::size_t dim, RandomStream& rng) {
    ComplexOperator g(dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            g(r, c) = gaussian(rng);
        }
    }
    ComplexOperator rho = g * g.adjoint();
    rho *= Complex(1.0 / trace(rho).real());
    // Exact hermiticity after rounding.
    ComplexOperator sym = rho + rho.adjoint();
    sym *= 0.5;
    return QuantumState::mixed(std::move(sym));
}

Observable random_complete_observable(std::size_t dim, RandomStream& rng, std::string name) {
    const ComplexOperator u = random_unitary(dim, rng);
    std::vector<Complex> spectrum(dim);
    double level = rng.uniform() * 2.0 - 1.0;
    for (std::size_t k = 0; k < dim; ++k) {
        spectrum[k] = level;
        level += 0.5 + rng.uniform();
    }
    ComplexOperator h = u * ComplexOperator::diagonal(spectrum) * u.adjoint();
    ComplexOperator sym = h + h.adjoint();
    sym *= 0.5;
    return observable_from_operator(sym, std::move(name));
}

Protocol random_protocol(std::size_t dim, std::size_t n, RandomStream& rng, RandomProtocolOptions options) {
    std::vector<Observable> pool;
    auto draw = [&](const std::string& name) -> Observable {
        if (!pool.empty() && rng.bernoulli(options.reuse_probability)) {
            return pool[rng.below(pool.size())];
        }
        pool.push_back(random_complete_observable(dim, rng, name));
        return pool.back();
    };
    Observable a = draw("A");
    std::vector<Observable> mids;
    for (std::size_t i = 0; i < n; ++i) {
        mids.push_back(draw("C" + std::to_string(i + 1)));
    }
    Observable b = draw("B");
    const std::string a_label = a.outcome(rng.below(a.size())).label;
    const std::string b_label = b.outcome(rng.below(b.size())).label;
    return Protocol(Selection{std::move(a), a_label}, std::move(mids), Selection{std::move(b), b_label});
}

}  // namespace abl

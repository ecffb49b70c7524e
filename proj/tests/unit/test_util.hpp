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

#pragma once

#include <cmath>
#include <string>

#include "abl_lab/linalg.hpp"
#include "abl_lab/protocol_file.hpp"
#include "abl_lab/random.hpp"

namespace abl::testing {

inline const Complex I{0, 1};

inline ComplexOperator mat2(Complex a, Complex b, Complex c, Complex d) { return ComplexOperator(2, {a, b, c, d}); }

inline ComplexOperator sigma_x() { return mat2(0, 1, 1, 0); }
inline ComplexOperator sigma_y() { return mat2(0, -I, I, 0); }
inline ComplexOperator sigma_z() { return mat2(1, 0, 0, -1); }

inline ComplexVector ket(std::initializer_list<Complex> entries) { return ComplexVector(std::vector<Complex>(entries)); }

inline const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

// Entries drawn independently, no structure assumed.
inline ComplexOperator random_matrix(std::size_t dim, RandomStream& rng) {
    ComplexOperator out(dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            out(r, c) = Complex(rng.normal(), rng.normal());
        }
    }
    return out;
}

inline ComplexOperator random_hermitian(std::size_t dim, RandomStream& rng) {
    const ComplexOperator m = random_matrix(dim, rng);
    ComplexOperator h = m + m.adjoint();
    h *= 0.5;
    return h;
}

inline Protocol fixture(const std::string& name) {
    return build_protocol(load_protocol_file(std::string(ABL_LAB_DATA_DIR) + "/" + name));
}

inline std::string fixture_path(const std::string& name) { return std::string(ABL_LAB_DATA_DIR) + "/" + name; }

}  // namespace abl::testing

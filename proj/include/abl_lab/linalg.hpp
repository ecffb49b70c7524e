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

/**
 * @file
 * Dense complex linear algebra for small Hilbert spaces.
 *
 * Operators are stored row-major. The Kronecker layout used by tensor() and
 * partial_trace() puts the first factor in the most significant position:
 * for x of dimension m and y of dimension n,
 *
 *     tensor(x, y)(i * n + k, j * n + l) == x(i, j) * y(k, l).
 */

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace abl {

using Complex = std::complex<double>;

/// Default tolerance for the structural predicates.
inline constexpr double kDefaultTol = 1e-10;

class ComplexVector {
   public:
    explicit ComplexVector(std::size_t dim);
    explicit ComplexVector(std::vector<Complex> entries);

    /// Computational basis vector |index>.
    static ComplexVector basis(std::size_t dim, std::size_t index);

    std::size_t dim() const noexcept { return entries_.size(); }
    Complex operator[](std::size_t i) const { return entries_[i]; }
    Complex& operator[](std::size_t i) { return entries_[i]; }
    std::span<const Complex> entries() const noexcept { return entries_; }
    std::span<Complex> entries() noexcept { return entries_; }

    double norm() const;
    bool is_unit(double tol = kDefaultTol) const;
    ComplexVector normalized() const;

    /// Multiplies by a unit phase so the first component with magnitude above
    /// `tol` is real and positive.
    ComplexVector phase_fixed(double tol = kDefaultTol) const;

    ComplexVector& operator+=(const ComplexVector& other);
    ComplexVector& operator*=(Complex factor);

    friend bool operator==(const ComplexVector&, const ComplexVector&) = default;

   private:
    std::vector<Complex> entries_;
};

ComplexVector operator+(ComplexVector x, const ComplexVector& y);
ComplexVector operator*(Complex factor, ComplexVector x);

/// <x|y>, antilinear in the first argument.
Complex inner(const ComplexVector& x, const ComplexVector& y);
ComplexVector tensor(const ComplexVector& x, const ComplexVector& y);
double max_abs_diff(const ComplexVector& x, const ComplexVector& y);

class ComplexOperator {
   public:
    /// Zero operator.
    explicit ComplexOperator(std::size_t dim);
    /// Takes `entries` in row-major order; requires entries.size() == dim * dim.
    ComplexOperator(std::size_t dim, std::vector<Complex> entries);

    static ComplexOperator identity(std::size_t dim);
    static ComplexOperator diagonal(std::span<const Complex> diag);
    /// |ket><bra|
    static ComplexOperator outer(const ComplexVector& ket, const ComplexVector& bra);
    /// |v><v| (a projector when v is a unit vector).
    static ComplexOperator projector(const ComplexVector& v);

    std::size_t dim() const noexcept { return dim_; }
    Complex operator()(std::size_t row, std::size_t col) const { return entries_[row * dim_ + col]; }
    Complex& operator()(std::size_t row, std::size_t col) { return entries_[row * dim_ + col]; }
    std::span<const Complex> entries() const noexcept { return entries_; }

    ComplexOperator adjoint() const;

    bool is_self_adjoint(double tol = kDefaultTol) const;
    bool is_positive_semidefinite(double tol = kDefaultTol) const;
    bool is_projector(double tol = kDefaultTol) const;
    bool is_unit_trace(double tol = kDefaultTol) const;

    ComplexOperator& operator+=(const ComplexOperator& other);
    ComplexOperator& operator-=(const ComplexOperator& other);
    ComplexOperator& operator*=(Complex factor);

    friend bool operator==(const ComplexOperator&, const ComplexOperator&) = default;

   private:
    std::size_t dim_;
    std::vector<Complex> entries_;
};

ComplexOperator matmul(const ComplexOperator& x, const ComplexOperator& y);
ComplexOperator operator*(const ComplexOperator& x, const ComplexOperator& y);
ComplexOperator operator*(Complex factor, ComplexOperator x);
ComplexOperator operator+(ComplexOperator x, const ComplexOperator& y);
ComplexOperator operator-(ComplexOperator x, const ComplexOperator& y);

/// x |v>
ComplexVector apply(const ComplexOperator& x, const ComplexVector& v);

ComplexOperator tensor(const ComplexOperator& x, const ComplexOperator& y);
Complex trace(const ComplexOperator& x);
/// <v| x |v>
Complex expectation(const ComplexOperator& x, const ComplexVector& v);
double max_abs_diff(const ComplexOperator& x, const ComplexOperator& y);
/// Rank numerically: number of eigenvalues above `tol` (self-adjoint input).
std::size_t hermitian_rank(const ComplexOperator& x, double tol = 1e-9);

/**
 * Traces out every factor not listed in `keep`.
 *
 * `dims` lists the factor dimensions in Kronecker order; their product must
 * equal x.dim(). `keep` holds factor indices; duplicates are rejected and the
 * kept factors stay in their original relative order. Keeping nothing yields
 * the 1x1 operator [trace(x)].
 */
ComplexOperator partial_trace(const ComplexOperator& x, std::span<const std::size_t> dims,
                              std::span<const std::size_t> keep);

/// (1 x ... x op x ... x 1) |v>, with `op` acting on factor `factor` of the
/// Kronecker decomposition `dims`.
ComplexVector apply_on_factor(const ComplexOperator& op, const ComplexVector& v, std::span<const std::size_t> dims,
                              std::size_t factor);

/// partial_trace(|v><v|, dims, keep) without materialising the full projector.
ComplexOperator reduced_density(const ComplexVector& v, std::span<const std::size_t> dims,
                                std::span<const std::size_t> keep);

struct EigenPair {
    double value;
    ComplexVector vector;
};

struct Eigendecomposition {
    /// Ascending eigenvalues with orthonormal, phase-fixed eigenvectors.
    std::vector<EigenPair> pairs;
    /// True when two adjacent eigenvalues lie within kDegeneracyGap.
    bool has_degeneracy = false;

    static constexpr double kDegeneracyGap = 1e-8;
};

/**
 * Spectral decomposition of a self-adjoint operator.
 *
 * Throws ValidationError if x is not self-adjoint within `tol` and
 * ConvergenceError if the solver does not converge.
 */
Eigendecomposition eigendecompose_self_adjoint(const ComplexOperator& x, double tol = kDefaultTol);

// Plain-text block format: a line holding the dimension, followed by the
// rows. Operators have `dim` rows of `dim` tokens; vectors have a single row
// of `dim` tokens. Each token is `re+imi` / `re-imi` written with shortest
// round-trip precision, so formatting then parsing is lossless.

std::string format_complex(Complex z);
/// Accepts `re+imi`, `re-imi`, a bare real `re`, or a bare imaginary `imi`.
Complex parse_complex(std::string_view token);

std::string to_text(const ComplexOperator& x);
std::string to_text(const ComplexVector& v);
ComplexOperator operator_from_text(std::string_view text);
ComplexVector vector_from_text(std::string_view text);

}  // namespace abl

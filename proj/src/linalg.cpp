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

#include "abl_lab/linalg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "abl_lab/errors.hpp"

namespace abl {

namespace {

using RowMajorMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a) + " vs " +
                             std::to_string(b) + ")");
    }
}

// Offsets into the full Kronecker index for every multi-index over the given
// factors. Factor order follows `factors`.
std::vector<std::size_t> factor_offsets(std::span<const std::size_t> dims, std::span<const std::size_t> strides,
                                        const std::vector<std::size_t>& factors) {
    std::vector<std::size_t> offsets{0};
    for (std::size_t f : factors) {
        std::vector<std::size_t> next;
        next.reserve(offsets.size() * dims[f]);
        for (std::size_t base : offsets) {
            for (std::size_t digit = 0; digit < dims[f]; ++digit) {
                next.push_back(base + digit * strides[f]);
            }
        }
        offsets = std::move(next);
    }
    return offsets;
}

struct TraceSplit {
    std::vector<std::size_t> kept_offsets;
    std::vector<std::size_t> traced_offsets;
};

TraceSplit split_factors(std::size_t total_dim, std::span<const std::size_t> dims,
                         std::span<const std::size_t> keep) {
    if (dims.empty()) {
        throw DimensionError("partial_trace: empty factor list");
    }
    std::size_t product = 1;
    for (std::size_t d : dims) {
        if (d == 0) {
            throw DimensionError("partial_trace: zero factor dimension");
        }
        product *= d;
    }
    if (product != total_dim) {
        throw DimensionError("partial_trace: factor dimensions multiply to " + std::to_string(product) +
                             ", operator has dimension " + std::to_string(total_dim));
    }
    std::vector<bool> kept(dims.size(), false);
    for (std::size_t k : keep) {
        if (k >= dims.size()) {
            throw DimensionError("partial_trace: factor index " + std::to_string(k) + " out of range");
        }
        if (kept[k]) {
            throw DimensionError("partial_trace: factor index " + std::to_string(k) + " listed twice");
        }
        kept[k] = true;
    }
    std::vector<std::size_t> strides(dims.size());
    std::size_t stride = 1;
    for (std::size_t i = dims.size(); i-- > 0;) {
        strides[i] = stride;
        stride *= dims[i];
    }
    std::vector<std::size_t> kept_factors;
    std::vector<std::size_t> traced_factors;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        (kept[i] ? kept_factors : traced_factors).push_back(i);
    }
    return {factor_offsets(dims, strides, kept_factors), factor_offsets(dims, strides, traced_factors)};
}

}  // namespace

// ---------------------------------------------------------------- vectors

ComplexVector::ComplexVector(std::size_t dim) : entries_(dim) {
    if (dim == 0) {
        throw DimensionError("ComplexVector: dimension must be positive");
    }
}

ComplexVector::ComplexVector(std::vector<Complex> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) {
        throw DimensionError("ComplexVector: dimension must be positive");
    }
}

ComplexVector ComplexVector::basis(std::size_t dim, std::size_t index) {
    ComplexVector v(dim);
    if (index >= dim) {
        throw DimensionError("ComplexVector::basis: index out of range");
    }
    v[index] = 1.0;
    return v;
}

double ComplexVector::norm() const {
    double sum = 0;
    for (const Complex& z : entries_) {
        sum += std::norm(z);
    }
    return std::sqrt(sum);
}

bool ComplexVector::is_unit(double tol) const { return std::abs(norm() - 1.0) <= tol; }

ComplexVector ComplexVector::normalized() const {
    double n = norm();
    if (n == 0) {
        throw ValidationError("ComplexVector::normalized: zero vector");
    }
    return Complex(1.0 / n) * *this;
}

ComplexVector ComplexVector::phase_fixed(double tol) const {
    for (const Complex& z : entries_) {
        double mag = std::abs(z);
        if (mag > tol) {
            return (std::conj(z) / mag) * *this;
        }
    }
    return *this;
}

ComplexVector& ComplexVector::operator+=(const ComplexVector& other) {
    require_same_dim(dim(), other.dim(), "vector addition");
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        entries_[i] += other.entries_[i];
    }
    return *this;
}

ComplexVector& ComplexVector::operator*=(Complex factor) {
    for (Complex& z : entries_) {
        z *= factor;
    }
    return *this;
}

ComplexVector operator+(ComplexVector x, const ComplexVector& y) { return x += y; }
ComplexVector operator*(Complex factor, ComplexVector x) { return x *= factor; }

Complex inner(const ComplexVector& x, const ComplexVector& y) {
    require_same_dim(x.dim(), y.dim(), "inner");
    Complex sum = 0;
    for (std::size_t i = 0; i < x.dim(); ++i) {
        sum += std::conj(x[i]) * y[i];
    }
    return sum;
}

ComplexVector tensor(const ComplexVector& x, const ComplexVector& y) {
    ComplexVector out(x.dim() * y.dim());
    for (std::size_t i = 0; i < x.dim(); ++i) {
        for (std::size_t k = 0; k < y.dim(); ++k) {
            out[i * y.dim() + k] = x[i] * y[k];
        }
    }
    return out;
}

double max_abs_diff(const ComplexVector& x, const ComplexVector& y) {
    require_same_dim(x.dim(), y.dim(), "max_abs_diff");
    double m = 0;
    for (std::size_t i = 0; i < x.dim(); ++i) {
        m = std::max(m, std::abs(x[i] - y[i]));
    }
    return m;
}

// -------------------------------------------------------------- operators

ComplexOperator::ComplexOperator(std::size_t dim) : dim_(dim), entries_(dim * dim) {
    if (dim == 0) {
        throw DimensionError("ComplexOperator: dimension must be positive");
    }
}

ComplexOperator::ComplexOperator(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), entries_(std::move(entries)) {
    if (dim == 0) {
        throw DimensionError("ComplexOperator: dimension must be positive");
    }
    if (entries_.size() != dim * dim) {
        throw DimensionError("ComplexOperator: expected " + std::to_string(dim * dim) + " entries, got " +
                             std::to_string(entries_.size()));
    }
}

ComplexOperator ComplexOperator::identity(std::size_t dim) {
    ComplexOperator out(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        out(i, i) = 1.0;
    }
    return out;
}

ComplexOperator ComplexOperator::diagonal(std::span<const Complex> diag) {
    ComplexOperator out(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) {
        out(i, i) = diag[i];
    }
    return out;
}

ComplexOperator ComplexOperator::outer(const ComplexVector& ket, const ComplexVector& bra) {
    require_same_dim(ket.dim(), bra.dim(), "outer");
    ComplexOperator out(ket.dim());
    for (std::size_t r = 0; r < ket.dim(); ++r) {
        for (std::size_t c = 0; c < bra.dim(); ++c) {
            out(r, c) = ket[r] * std::conj(bra[c]);
        }
    }
    return out;
}

ComplexOperator ComplexOperator::projector(const ComplexVector& v) { return outer(v, v); }

ComplexOperator ComplexOperator::adjoint() const {
    ComplexOperator out(dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = 0; c < dim_; ++c) {
            out(c, r) = std::conj((*this)(r, c));
        }
    }
    return out;
}

bool ComplexOperator::is_self_adjoint(double tol) const {
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = r; c < dim_; ++c) {
            if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > tol) {
                return false;
            }
        }
    }
    return true;
}

bool ComplexOperator::is_positive_semidefinite(double tol) const {
    if (!is_self_adjoint(tol)) {
        return false;
    }
    auto spectrum = eigendecompose_self_adjoint(*this, tol);
    return spectrum.pairs.front().value >= -tol;
}

bool ComplexOperator::is_projector(double tol) const {
    return is_self_adjoint(tol) && max_abs_diff(matmul(*this, *this), *this) <= tol;
}

bool ComplexOperator::is_unit_trace(double tol) const { return std::abs(trace(*this) - 1.0) <= tol; }

ComplexOperator& ComplexOperator::operator+=(const ComplexOperator& other) {
    require_same_dim(dim_, other.dim_, "operator addition");
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        entries_[i] += other.entries_[i];
    }
    return *this;
}

ComplexOperator& ComplexOperator::operator-=(const ComplexOperator& other) {
    require_same_dim(dim_, other.dim_, "operator subtraction");
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        entries_[i] -= other.entries_[i];
    }
    return *this;
}

ComplexOperator& ComplexOperator::operator*=(Complex factor) {
    for (Complex& z : entries_) {
        z *= factor;
    }
    return *this;
}

ComplexOperator matmul(const ComplexOperator& x, const ComplexOperator& y) {
    require_same_dim(x.dim(), y.dim(), "matmul");
    const std::size_t n = x.dim();
    std::vector<Complex> out(n * n);
    auto xs = x.entries();
    auto ys = y.entries();
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t k = 0; k < n; ++k) {
            const Complex xrk = xs[r * n + k];
            if (xrk == Complex(0)) {
                continue;
            }
            for (std::size_t c = 0; c < n; ++c) {
                out[r * n + c] += xrk * ys[k * n + c];
            }
        }
    }
    return ComplexOperator(n, std::move(out));
}

ComplexOperator operator*(const ComplexOperator& x, const ComplexOperator& y) { return matmul(x, y); }
ComplexOperator operator*(Complex factor, ComplexOperator x) { return x *= factor; }
ComplexOperator operator+(ComplexOperator x, const ComplexOperator& y) { return x += y; }
ComplexOperator operator-(ComplexOperator x, const ComplexOperator& y) { return x -= y; }

ComplexVector apply(const ComplexOperator& x, const ComplexVector& v) {
    require_same_dim(x.dim(), v.dim(), "apply");
    ComplexVector out(v.dim());
    for (std::size_t r = 0; r < x.dim(); ++r) {
        Complex sum = 0;
        for (std::size_t c = 0; c < x.dim(); ++c) {
            sum += x(r, c) * v[c];
        }
        out[r] = sum;
    }
    return out;
}

ComplexOperator tensor(const ComplexOperator& x, const ComplexOperator& y) {
    const std::size_t m = x.dim();
    const std::size_t n = y.dim();
    ComplexOperator out(m * n);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const Complex xij = x(i, j);
            for (std::size_t k = 0; k < n; ++k) {
                for (std::size_t l = 0; l < n; ++l) {
                    out(i * n + k, j * n + l) = xij * y(k, l);
                }
            }
        }
    }
    return out;
}

Complex trace(const ComplexOperator& x) {
    Complex sum = 0;
    for (std::size_t i = 0; i < x.dim(); ++i) {
        sum += x(i, i);
    }
    return sum;
}

Complex expectation(const ComplexOperator& x, const ComplexVector& v) { return inner(v, apply(x, v)); }

double max_abs_diff(const ComplexOperator& x, const ComplexOperator& y) {
    require_same_dim(x.dim(), y.dim(), "max_abs_diff");
    double m = 0;
    auto xs = x.entries();
    auto ys = y.entries();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        m = std::max(m, std::abs(xs[i] - ys[i]));
    }
    return m;
}

std::size_t hermitian_rank(const ComplexOperator& x, double tol) {
    auto spectrum = eigendecompose_self_adjoint(x, std::max(tol, kDefaultTol));
    return static_cast<std::size_t>(std::count_if(spectrum.pairs.begin(), spectrum.pairs.end(),
                                                  [tol](const EigenPair& p) { return p.value > tol; }));
}

ComplexOperator partial_trace(const ComplexOperator& x, std::span<const std::size_t> dims,
                              std::span<const std::size_t> keep) {
    const TraceSplit split = split_factors(x.dim(), dims, keep);
    const std::size_t out_dim = split.kept_offsets.size();
    ComplexOperator out(out_dim);
    for (std::size_t r = 0; r < out_dim; ++r) {
        for (std::size_t c = 0; c < out_dim; ++c) {
            Complex sum = 0;
            for (std::size_t t : split.traced_offsets) {
                sum += x(split.kept_offsets[r] + t, split.kept_offsets[c] + t);
            }
            out(r, c) = sum;
        }
    }
    return out;
}

ComplexVector apply_on_factor(const ComplexOperator& op, const ComplexVector& v, std::span<const std::size_t> dims,
                              std::size_t factor) {
    if (factor >= dims.size()) {
        throw DimensionError("apply_on_factor: factor index out of range");
    }
    std::size_t product = 1;
    for (std::size_t d : dims) {
        product *= d;
    }
    if (product != v.dim()) {
        throw DimensionError("apply_on_factor: factor dimensions do not match vector dimension");
    }
    require_same_dim(op.dim(), dims[factor], "apply_on_factor");
    std::size_t inner_stride = 1;
    for (std::size_t i = factor + 1; i < dims.size(); ++i) {
        inner_stride *= dims[i];
    }
    const std::size_t n = dims[factor];
    const std::size_t outer = v.dim() / (n * inner_stride);
    ComplexVector out(v.dim());
    for (std::size_t hi = 0; hi < outer; ++hi) {
        for (std::size_t lo = 0; lo < inner_stride; ++lo) {
            const std::size_t base = hi * n * inner_stride + lo;
            for (std::size_t r = 0; r < n; ++r) {
                Complex sum = 0;
                for (std::size_t c = 0; c < n; ++c) {
                    sum += op(r, c) * v[base + c * inner_stride];
                }
                out[base + r * inner_stride] = sum;
            }
        }
    }
    return out;
}

ComplexOperator reduced_density(const ComplexVector& v, std::span<const std::size_t> dims,
                                std::span<const std::size_t> keep) {
    const TraceSplit split = split_factors(v.dim(), dims, keep);
    const std::size_t out_dim = split.kept_offsets.size();
    ComplexOperator out(out_dim);
    for (std::size_t r = 0; r < out_dim; ++r) {
        for (std::size_t c = r; c < out_dim; ++c) {
            Complex sum = 0;
            for (std::size_t t : split.traced_offsets) {
                sum += v[split.kept_offsets[r] + t] * std::conj(v[split.kept_offsets[c] + t]);
            }
            out(r, c) = sum;
            out(c, r) = std::conj(sum);
        }
    }
    return out;
}

Eigendecomposition eigendecompose_self_adjoint(const ComplexOperator& x, double tol) {
    if (!x.is_self_adjoint(tol)) {
        throw ValidationError("eigendecompose_self_adjoint: operator is not self-adjoint");
    }
    const auto n = static_cast<Eigen::Index>(x.dim());
    Eigen::Map<const RowMajorMatrix> mapped(x.entries().data(), n, n);
    // Symmetrise so round-off in the input cannot bias which triangle is used.
    const Eigen::MatrixXcd hermitian = (mapped + mapped.adjoint()) * 0.5;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian);
    if (solver.info() != Eigen::Success) {
        throw ConvergenceError("eigendecompose_self_adjoint: solver did not converge");
    }

    Eigendecomposition out;
    out.pairs.reserve(x.dim());
    for (Eigen::Index k = 0; k < n; ++k) {
        std::vector<Complex> column(x.dim());
        for (Eigen::Index i = 0; i < n; ++i) {
            column[static_cast<std::size_t>(i)] = solver.eigenvectors()(i, k);
        }
        out.pairs.push_back({solver.eigenvalues()(k), ComplexVector(std::move(column)).phase_fixed(tol)});
    }
    for (std::size_t k = 1; k < out.pairs.size(); ++k) {
        if (out.pairs[k].value - out.pairs[k - 1].value <= Eigendecomposition::kDegeneracyGap) {
            out.has_degeneracy = true;
        }
    }
    return out;
}

// ------------------------------------------------------------ text format

namespace {

std::string format_double(double value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, end);
}

double parse_double(std::string_view text, std::string_view token) {
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    double value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw ValidationError("malformed complex token '" + std::string(token) + "'");
    }
    return value;
}

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") != std::string::npos) {
            lines.push_back(line);
        }
    }
    return lines;
}

std::vector<Complex> parse_row(const std::string& line) {
    std::istringstream in(line);
    std::vector<Complex> row;
    std::string token;
    while (in >> token) {
        row.push_back(parse_complex(token));
    }
    return row;
}

std::size_t parse_dim_line(const std::string& line) {
    std::istringstream in(line);
    long long dim = 0;
    std::string rest;
    if (!(in >> dim) || (in >> rest) || dim <= 0) {
        throw ValidationError("matrix block: first line must be a positive dimension, got '" + line + "'");
    }
    return static_cast<std::size_t>(dim);
}

}  // namespace

std::string format_complex(Complex z) {
    std::string out = format_double(z.real());
    const double im = z.imag();
    if (!std::signbit(im)) {
        out += '+';
    }
    out += format_double(im);
    out += 'i';
    return out;
}

Complex parse_complex(std::string_view token) {
    if (token.empty()) {
        throw ValidationError("empty complex token");
    }
    if (token.back() != 'i') {
        return {parse_double(token, token), 0.0};
    }
    std::string_view body = token.substr(0, token.size() - 1);
    // Locate the sign that separates the real and imaginary parts; skip a
    // leading sign and signs belonging to an exponent.
    std::size_t split = std::string_view::npos;
    for (std::size_t i = body.size(); i-- > 1;) {
        if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    if (split == std::string_view::npos) {
        return {0.0, parse_double(body, token)};
    }
    return {parse_double(body.substr(0, split), token), parse_double(body.substr(split), token)};
}

std::string to_text(const ComplexOperator& x) {
    std::string out = std::to_string(x.dim()) + "\n";
    for (std::size_t r = 0; r < x.dim(); ++r) {
        for (std::size_t c = 0; c < x.dim(); ++c) {
            if (c > 0) {
                out += ' ';
            }
            out += format_complex(x(r, c));
        }
        out += '\n';
    }
    return out;
}

std::string to_text(const ComplexVector& v) {
    std::string out = std::to_string(v.dim()) + "\n";
    for (std::size_t i = 0; i < v.dim(); ++i) {
        if (i > 0) {
            out += ' ';
        }
        out += format_complex(v[i]);
    }
    out += '\n';
    return out;
}

ComplexOperator operator_from_text(std::string_view text) {
    auto lines = split_lines(text);
    if (lines.empty()) {
        throw ValidationError("matrix block: empty");
    }
    const std::size_t dim = parse_dim_line(lines[0]);
    if (lines.size() != dim + 1) {
        throw ValidationError("matrix block: expected " + std::to_string(dim) + " rows, got " +
                              std::to_string(lines.size() - 1));
    }
    std::vector<Complex> entries;
    entries.reserve(dim * dim);
    for (std::size_t r = 0; r < dim; ++r) {
        auto row = parse_row(lines[r + 1]);
        if (row.size() != dim) {
            throw ValidationError("matrix block: row " + std::to_string(r + 1) + " has " +
                                  std::to_string(row.size()) + " entries, expected " + std::to_string(dim));
        }
        entries.insert(entries.end(), row.begin(), row.end());
    }
    return ComplexOperator(dim, std::move(entries));
}

ComplexVector vector_from_text(std::string_view text) {
    auto lines = split_lines(text);
    if (lines.size() != 2) {
        throw ValidationError("vector block: expected a dimension line and one row of entries");
    }
    const std::size_t dim = parse_dim_line(lines[0]);
    auto row = parse_row(lines[1]);
    if (row.size() != dim) {
        throw ValidationError("vector block: expected " + std::to_string(dim) + " entries, got " +
                              std::to_string(row.size()));
    }
    return ComplexVector(std::move(row));
}

}  // namespace abl

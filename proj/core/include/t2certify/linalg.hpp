// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <span>

namespace t2c::linalg {

// Small dense helpers for d x d row-major matrices (d is a handful at most).

// out = m * v
void matvec(std::span<const double> m, std::span<const double> v, std::span<double> out) noexcept;

// out = a * b
void matmul(std::span<const double> a, std::span<const double> b, std::size_t dim,
            std::span<double> out) noexcept;

double norm(std::span<const double> v) noexcept;
double norm_squared(std::span<const double> v) noexcept;

// Largest singular value.
double spectral_norm(std::span<const double> m, std::size_t dim);

// Smallest singular value.
double smallest_singular_value(std::span<const double> m, std::size_t dim);

double frobenius_norm(std::span<const double> m) noexcept;

// min over unit xi of xi^T m xi, i.e. the smallest eigenvalue of (m + m^T)/2.
double ellipticity(std::span<const double> m, std::size_t dim);

}  // namespace t2c::linalg

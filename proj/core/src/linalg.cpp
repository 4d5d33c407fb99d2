// SPDX-License-Identifier: MIT
#include "t2certify/linalg.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace t2c::linalg {
namespace {

using MatrixMap = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                 Eigen::RowMajor>>;

}  // namespace

void matvec(std::span<const double> m, std::span<const double> v, std::span<double> out) noexcept {
  const std::size_t d = v.size();
  for (std::size_t i = 0; i < d; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) s += m[i * d + j] * v[j];
    out[i] = s;
  }
}

void matmul(std::span<const double> a, std::span<const double> b, std::size_t dim,
            std::span<double> out) noexcept {
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < dim; ++k) s += a[i * dim + k] * b[k * dim + j];
      out[i * dim + j] = s;
    }
  }
}

double norm_squared(std::span<const double> v) noexcept {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

double norm(std::span<const double> v) noexcept { return std::sqrt(norm_squared(v)); }

double frobenius_norm(std::span<const double> m) noexcept { return norm(m); }

double spectral_norm(std::span<const double> m, std::size_t dim) {
  if (dim == 1) return std::abs(m[0]);
  const MatrixMap a(m.data(), static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  return Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues()(0);
}

double smallest_singular_value(std::span<const double> m, std::size_t dim) {
  if (dim == 1) return std::abs(m[0]);
  const MatrixMap a(m.data(), static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  const auto sv = Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues();
  return sv(sv.size() - 1);
}

double ellipticity(std::span<const double> m, std::size_t dim) {
  if (dim == 1) return m[0];
  const MatrixMap a(m.data(), static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  const Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym, Eigen::EigenvaluesOnly)
      .eigenvalues()(0);
}

}  // namespace t2c::linalg

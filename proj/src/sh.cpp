// Copyright 2026 The freqbrdf Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "freqbrdf/sh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "freqbrdf/error.hpp"

namespace freqbrdf {

namespace {
constexpr double kPi = std::numbers::pi;
}

Direction make_direction(double theta, double phi) {
  Direction d;
  d.theta = std::clamp(theta, 0.0, kPi);
  double p = std::fmod(phi, 2.0 * kPi);
  if (p < 0.0) p += 2.0 * kPi;
  if (p >= 2.0 * kPi) p = 0.0;
  d.phi = p;
  return d;
}

Direction direction_from_vector(const Eigen::Vector3d& v) {
  const Eigen::Vector3d u = v.normalized();
  return make_direction(std::acos(std::clamp(u.z(), -1.0, 1.0)),
                        std::atan2(u.y(), u.x()));
}

Eigen::Vector3d to_vector(const Direction& d) {
  const double s = std::sin(d.theta);
  return {s * std::cos(d.phi), s * std::sin(d.phi), std::cos(d.theta)};
}

ShExpansiond luminance(const ShExpansiond& rgb) {
  if (rgb.channels() == 1) return rgb;
  if (rgb.channels() != 3) {
    throw InvalidInput("luminance needs 1 or 3 channels");
  }
  return ShExpansiond(rgb.max_degree(), rgb.coeffs() * luminance_weights());
}

void DirectionalSamples::validate() const {
  const auto n = static_cast<Eigen::Index>(directions.size());
  if (values.rows() != n || weights.size() != n) {
    throw InvalidInput("directions, values and weights differ in length");
  }
  if (!values.allFinite() || (n > 0 && values.minCoeff() < 0.0)) {
    throw InvalidInput("sample values must be finite and non-negative");
  }
  if (n > 0 && (weights.minCoeff() < 0.0 || weights.maxCoeff() > 1.0 ||
                !weights.allFinite())) {
    throw InvalidInput("sample weights must lie in [0, 1]");
  }
}

Eigen::VectorXd exponential_degree_weights(int max_degree) {
  Eigen::VectorXd w(sh_count(max_degree));
  for (int l = 0; l <= max_degree; ++l) {
    w.segment(sh_index(l, -l), 2 * l + 1).setConstant(std::exp(double(l)));
  }
  return w;
}

Eigen::VectorXd constant_degree_weights(int max_degree) {
  return Eigen::VectorXd::Ones(sh_count(max_degree));
}

ShFitter::ShFitter(std::span<const Direction> dirs,
                   const Eigen::VectorXd& weights, int max_degree,
                   double lambda, const Eigen::VectorXd& regularizer)
    : max_degree_(max_degree),
      basis_(eval_sh_basis<double>(dirs, max_degree)),
      weights_(weights) {
  if (max_degree < 0) throw InvalidInput("max_degree must be >= 0");
  if (lambda < 0.0) throw InvalidInput("lambda must be >= 0");
  if (weights.size() != basis_.rows()) {
    throw InvalidInput("one weight per direction required");
  }
  if (regularizer.size() != basis_.cols()) {
    throw InvalidInput("regularizer needs one entry per coefficient");
  }
  if (basis_.rows() == 0) throw InsufficientSamples("no samples to fit");
  Eigen::MatrixXd a = basis_.transpose() * weights_.asDiagonal() * basis_;
  a.diagonal() += lambda * regularizer;
  ldlt_.compute(a);
  const Eigen::VectorXd d = ldlt_.vectorD().cwiseAbs();
  if (ldlt_.info() != Eigen::Success || d.minCoeff() <= 1e-12 * d.maxCoeff()) {
    throw SingularSystem(
        "normal matrix is rank deficient; pass lambda > 0 or add samples");
  }
}

ShExpansiond ShFitter::fit(const Eigen::MatrixXd& values) const {
  if (values.rows() != basis_.rows()) {
    throw InvalidInput("value rows differ from fitter sample count");
  }
  Eigen::MatrixXd rhs =
      basis_.transpose() * (weights_.asDiagonal() * values);
  return ShExpansiond(max_degree_, ldlt_.solve(rhs));
}

Eigen::MatrixXd ShFitter::projection_matrix() const {
  Eigen::MatrixXd rhs = basis_.transpose() * weights_.asDiagonal();
  return ldlt_.solve(rhs);
}

ShExpansiond fit_dense(const DirectionalSamples& samples, int max_degree) {
  if (samples.size() < sh_count(max_degree)) {
    throw InsufficientSamples("dense fit of degree " +
                              std::to_string(max_degree) + " needs " +
                              std::to_string(sh_count(max_degree)) +
                              " samples, got " +
                              std::to_string(samples.size()));
  }
  ShFitter fitter(samples.directions, samples.weights, max_degree, 0.0);
  return fitter.fit(samples.values);
}

ShExpansiond fit_sparse_regularized(const DirectionalSamples& samples,
                                    int max_degree, double lambda) {
  ShFitter fitter(samples.directions, samples.weights, max_degree, lambda);
  return fitter.fit(samples.values);
}

std::vector<Direction> fibonacci_sphere(int n) {
  std::vector<Direction> out;
  if (n <= 0) return out;
  out.reserve(static_cast<std::size_t>(n));
  const double golden_angle = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    out.push_back(make_direction(std::acos(z), golden_angle * i));
  }
  return out;
}

std::vector<Direction> fibonacci_hemisphere(int n) {
  std::vector<Direction> all = fibonacci_sphere(2 * n);
  all.resize(static_cast<std::size_t>(std::max(n, 0)));
  return all;
}

}  // namespace freqbrdf

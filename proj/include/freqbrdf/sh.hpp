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

#ifndef FREQBRDF_SH_HPP_
#define FREQBRDF_SH_HPP_

#include <cmath>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "freqbrdf/error.hpp"

namespace freqbrdf {

// A direction on the unit sphere. theta is the colatitude measured from +z,
// phi the longitude measured from +x towards +y.
struct Direction {
  double theta = 0.0;
  double phi = 0.0;
};

// Builds a direction with theta clamped to [0, pi] and phi wrapped to
// [0, 2 pi).
Direction make_direction(double theta, double phi);
Direction direction_from_vector(const Eigen::Vector3d& v);
Eigen::Vector3d to_vector(const Direction& d);

// Mirror direction about the local normal (+z).
inline Direction reflect_about_normal(const Direction& d) {
  return make_direction(d.theta, d.phi + std::numbers::pi);
}

constexpr int sh_count(int max_degree) {
  return (max_degree + 1) * (max_degree + 1);
}
constexpr int sh_index(int l, int m) { return l * (l + 1) + m; }
inline int sh_degree(int index) {
  return static_cast<int>(std::sqrt(static_cast<double>(index)));
}

// Writes Y_lm(v) for all l <= max_degree into out[sh_index(l, m)]. v must be
// a unit vector. Real orthonormal basis without the Condon-Shortley phase:
// m > 0 carries cos(m phi), m < 0 carries sin(|m| phi).
template <typename Scalar>
void eval_sh_basis(const Eigen::Matrix<Scalar, 3, 1>& v, int max_degree,
                   Scalar* out) {
  using std::sqrt;
  const Scalar x = v.x(), y = v.y(), z = v.z();
  const Scalar sqrt2 = sqrt(Scalar(2));
  // q holds the normalized Legendre part with the sin(theta)^m factor
  // stripped; the factor is restored through Re/Im of (x + i y)^m.
  Scalar qmm = Scalar(0.5) / sqrt(Scalar(std::numbers::pi));
  Scalar re = Scalar(1), im = Scalar(0);
  for (int m = 0; m <= max_degree; ++m) {
    if (m > 0) {
      qmm *= sqrt(Scalar(2 * m + 1) / Scalar(2 * m));
      const Scalar re_next = re * x - im * y;
      im = re * y + im * x;
      re = re_next;
    }
    const Scalar cos_part = m == 0 ? Scalar(1) : sqrt2 * re;
    const Scalar sin_part = sqrt2 * im;
    Scalar q_prev2 = Scalar(0), q_prev1 = qmm;
    for (int l = m; l <= max_degree; ++l) {
      Scalar q;
      if (l == m) {
        q = qmm;
      } else if (l == m + 1) {
        q = sqrt(Scalar(2 * m + 3)) * z * qmm;
      } else {
        const Scalar a = sqrt(Scalar(4 * l * l - 1) / Scalar(l * l - m * m));
        const Scalar b = sqrt(Scalar((l - 1) * (l - 1) - m * m) /
                              Scalar(4 * (l - 1) * (l - 1) - 1));
        q = a * (z * q_prev1 - b * q_prev2);
      }
      if (l > m) {
        q_prev2 = q_prev1;
        q_prev1 = q;
      }
      out[sh_index(l, m)] = q * cos_part;
      if (m > 0) out[sh_index(l, -m)] = q * sin_part;
    }
  }
}

// One row per direction, one column per (l, m).
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
eval_sh_basis(std::span<const Direction> dirs, int max_degree) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> y(
      static_cast<Eigen::Index>(dirs.size()), sh_count(max_degree));
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const Eigen::Matrix<Scalar, 3, 1> v = to_vector(dirs[i]).cast<Scalar>();
    eval_sh_basis<Scalar>(v, max_degree, y.row(i).data());
  }
  return y;
}

// Coefficients of a spherical function, one column per channel.
template <typename Scalar>
class ShExpansion {
 public:
  using Coeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  ShExpansion() = default;
  ShExpansion(int max_degree, int channels)
      : max_degree_(max_degree),
        coeffs_(Coeffs::Zero(sh_count(max_degree), channels)) {}
  ShExpansion(int max_degree, Coeffs coeffs)
      : max_degree_(max_degree), coeffs_(std::move(coeffs)) {}

  int max_degree() const { return max_degree_; }
  int channels() const { return static_cast<int>(coeffs_.cols()); }
  const Coeffs& coeffs() const { return coeffs_; }
  Coeffs& coeffs() { return coeffs_; }

  Scalar operator()(int l, int m, int c = 0) const {
    return coeffs_(sh_index(l, m), c);
  }
  Scalar& operator()(int l, int m, int c = 0) {
    return coeffs_(sh_index(l, m), c);
  }

  Eigen::Matrix<Scalar, 1, Eigen::Dynamic> evaluate(const Direction& d) const {
    Eigen::Matrix<Scalar, 1, Eigen::Dynamic> y(sh_count(max_degree_));
    eval_sh_basis<Scalar>(to_vector(d).cast<Scalar>(), max_degree_, y.data());
    return y * coeffs_;
  }

  Coeffs evaluate(std::span<const Direction> dirs) const {
    return eval_sh_basis<Scalar>(dirs, max_degree_) * coeffs_;
  }

  template <typename Other>
  ShExpansion<Other> cast() const {
    return ShExpansion<Other>(max_degree_, coeffs_.template cast<Other>());
  }

 private:
  int max_degree_ = 0;
  Coeffs coeffs_;
};

using ShExpansiond = ShExpansion<double>;

// S(l) = sum_m c_lm^2, one row per degree, one column per channel.
template <typename Scalar>
class PowerSpectrum {
 public:
  using Values = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  PowerSpectrum() = default;
  explicit PowerSpectrum(Values values) : values_(std::move(values)) {}

  int max_degree() const { return static_cast<int>(values_.rows()) - 1; }
  int channels() const { return static_cast<int>(values_.cols()); }
  const Values& values() const { return values_; }
  Values& values() { return values_; }
  Scalar operator()(int l, int c = 0) const { return values_(l, c); }

 private:
  Values values_;
};

using PowerSpectrumd = PowerSpectrum<double>;

template <typename Scalar>
PowerSpectrum<Scalar> power_spectrum(const ShExpansion<Scalar>& e) {
  typename PowerSpectrum<Scalar>::Values s(e.max_degree() + 1, e.channels());
  for (int l = 0; l <= e.max_degree(); ++l) {
    s.row(l) = e.coeffs()
                   .middleRows(sh_index(l, -l), 2 * l + 1)
                   .colwise()
                   .squaredNorm();
  }
  return PowerSpectrum<Scalar>(std::move(s));
}

// Rec. 709 weighted sum of the three channels.
inline const Eigen::Vector3d& luminance_weights() {
  static const Eigen::Vector3d w(0.2126, 0.7152, 0.0722);
  return w;
}
ShExpansiond luminance(const ShExpansiond& rgb);

// Radiance samples in a surface-local frame (normal = +z).
struct DirectionalSamples {
  std::vector<Direction> directions;
  Eigen::MatrixXd values;   // size() x channels
  Eigen::VectorXd weights;  // confidence in [0, 1]

  DirectionalSamples() = default;
  DirectionalSamples(std::vector<Direction> dirs, Eigen::MatrixXd vals,
                     Eigen::VectorXd w)
      : directions(std::move(dirs)), values(std::move(vals)),
        weights(std::move(w)) {}
  DirectionalSamples(std::vector<Direction> dirs, Eigen::MatrixXd vals)
      : directions(std::move(dirs)), values(std::move(vals)),
        weights(Eigen::VectorXd::Ones(values.rows())) {}

  int size() const { return static_cast<int>(directions.size()); }
  int channels() const { return static_cast<int>(values.cols()); }
  bool empty() const { return directions.empty(); }

  // Throws InvalidInput when the sizes disagree, a weight leaves [0, 1] or a
  // value is negative or not finite.
  void validate() const;
};

// Per-coefficient regularizer diagonals.
Eigen::VectorXd exponential_degree_weights(int max_degree);
Eigen::VectorXd constant_degree_weights(int max_degree);

// Weighted, optionally regularized least-squares projection onto the basis
// for a fixed set of directions. Solves
//   (Y^T Ws Y + lambda R) c = Y^T Ws f
// with one LDLT factorization shared by every right-hand side.
class ShFitter {
 public:
  ShFitter(std::span<const Direction> dirs, const Eigen::VectorXd& weights,
           int max_degree, double lambda,
           const Eigen::VectorXd& regularizer);
  ShFitter(std::span<const Direction> dirs, const Eigen::VectorXd& weights,
           int max_degree, double lambda)
      : ShFitter(dirs, weights, max_degree, lambda,
                 exponential_degree_weights(max_degree)) {}

  int max_degree() const { return max_degree_; }
  int size() const { return static_cast<int>(basis_.rows()); }

  // values: size() x channels.
  ShExpansiond fit(const Eigen::MatrixXd& values) const;

  // Matrix P with fit(f).coeffs() == P f.
  Eigen::MatrixXd projection_matrix() const;

  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                      Eigen::RowMajor>& basis() const {
    return basis_;
  }

 private:
  int max_degree_;
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
      basis_;
  Eigen::VectorXd weights_;
  Eigen::LDLT<Eigen::MatrixXd> ldlt_;
};

// Least-squares fit on a set that covers the whole sphere. Throws
// InsufficientSamples when fewer than (l*+1)^2 samples are given.
ShExpansiond fit_dense(const DirectionalSamples& samples, int max_degree);

// Sparse, irregular samples with the e^l weighted Tikhonov term. Throws
// SingularSystem when lambda = 0 and the samples do not pin down every
// coefficient.
ShExpansiond fit_sparse_regularized(const DirectionalSamples& samples,
                                    int max_degree, double lambda);

// Golden-angle spiral, deterministic.
std::vector<Direction> fibonacci_sphere(int n);
// The n points of fibonacci_sphere(2 n) with z > 0.
std::vector<Direction> fibonacci_hemisphere(int n);

// Multiplies every degree-l coefficient by kernel(l). Throws InvalidInput
// when the kernel is shorter than max_degree + 1.
template <typename Scalar, typename Kernel>
ShExpansion<Scalar> convolve_isotropic(const ShExpansion<Scalar>& light,
                                       const Eigen::DenseBase<Kernel>& kernel) {
  if (kernel.size() < light.max_degree() + 1) {
    throw InvalidInput("kernel shorter than max_degree + 1");
  }
  ShExpansion<Scalar> out = light;
  for (int l = 0; l <= light.max_degree(); ++l) {
    out.coeffs().middleRows(sh_index(l, -l), 2 * l + 1) *=
        static_cast<Scalar>(kernel(l));
  }
  return out;
}

}  // namespace freqbrdf

#endif  // FREQBRDF_SH_HPP_

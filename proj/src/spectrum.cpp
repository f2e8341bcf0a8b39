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

#include "freqbrdf/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "freqbrdf/brdf.hpp"

namespace freqbrdf {

SpectrumPair spectrum_pair_from_fits(const ShExpansiond& light_fit,
                                     const ShExpansiond& outgoing_fit,
                                     const Eigen::Vector3d& irradiance) {
  if (light_fit.max_degree() != outgoing_fit.max_degree()) {
    throw InvalidInput("light and outgoing fits differ in max_degree");
  }
  if (light_fit.channels() != 3 || outgoing_fit.channels() != 3) {
    throw InvalidInput("spectrum pair needs RGB fits");
  }
  SpectrumPair s;
  s.light = power_spectrum(luminance(light_fit));
  s.outgoing = power_spectrum(luminance(outgoing_fit));
  s.l00 = 0.5 * light_fit.coeffs().row(0).transpose();
  s.b00 = 0.5 * outgoing_fit.coeffs().row(0).transpose();
  s.irradiance = irradiance;
  return s;
}

ShExpansiond predict_outgoing_coefficients(const ShExpansiond& light,
                                           const Eigen::VectorXd& kd,
                                           const Eigen::VectorXd& irradiance,
                                           double ks, double alpha) {
  ShExpansiond out = convolve_isotropic(
      light, filter_kernel(alpha, light.max_degree()));
  out.coeffs() *= ks;
  out.coeffs().row(0) += (kd.cwiseProduct(irradiance) /
                          std::sqrt(std::numbers::pi))
                             .transpose();
  return out;
}

double objective(const SpectrumPair& s, double ks, double alpha) {
  const auto& sl = s.light.values();
  const auto& sb = s.outgoing.values();
  double d = 0.0;
  for (int l = 1; l < sl.rows(); ++l) {
    const double f = ks * ks * std::exp(-2.0 * alpha * alpha * l * l);
    d += (sb.row(l) - f * sl.row(l)).squaredNorm();
  }
  return d;
}

Eigen::VectorXd grid_ks_values(int n_ks) {
  Eigen::VectorXd v(n_ks);
  for (int i = 0; i < n_ks; ++i) v(i) = (i + 0.5) / n_ks;
  return v;
}

Eigen::VectorXd grid_alpha_values(int n_alpha) {
  Eigen::VectorXd v(n_alpha);
  for (int j = 0; j < n_alpha; ++j) {
    const double r = (j + 0.5) / n_alpha;
    v(j) = r * r;
  }
  return v;
}

std::pair<int, int> PosteriorGrid::argmax() const {
  Eigen::Index i = 0, j = 0;
  probs.maxCoeff(&i, &j);
  return {static_cast<int>(i), static_cast<int>(j)};
}

double entropy(std::span<const double> probs, std::size_t n) {
  if (n < 2) return 0.0;
  // Written as 1 - sum p log(n p) / log n so that the uniform and the
  // one-hot distributions land on 1 and 0 without rounding residue.
  const double nd = static_cast<double>(n);
  double s = 0.0;
  for (double p : probs) {
    if (p > 0.0) s += p * std::log(nd * p);
  }
  return std::clamp(1.0 - s / std::log(nd), 0.0, 1.0);
}

void normalize_posterior(PosteriorGrid& grid) {
  const double min_nll = grid.nll.minCoeff();
  grid.probs = (-(grid.nll.array() - min_nll)).exp().matrix();
  grid.probs /= grid.probs.sum();
  grid.entropy =
      entropy(std::span<const double>(grid.probs.data(),
                                      static_cast<std::size_t>(
                                          grid.probs.size())),
              static_cast<std::size_t>(grid.probs.size()));
}

PosteriorGrid grid_search(const SpectrumPair& s, const GridConfig& config) {
  if (config.n_ks < 2 || config.n_alpha < 2) {
    throw InvalidInput("grid needs at least 2 cells per axis");
  }
  if (!(config.sigma > 0.0)) throw InvalidInput("sigma must be positive");
  PosteriorGrid g;
  g.sigma = config.sigma;
  g.ks_values = grid_ks_values(config.n_ks);
  g.alpha_values = grid_alpha_values(config.n_alpha);
  g.nll.resize(config.n_ks, config.n_alpha);
  const double scale = 1.0 / (2.0 * config.sigma * config.sigma);
  for (int j = 0; j < config.n_alpha; ++j) {
    for (int i = 0; i < config.n_ks; ++i) {
      g.nll(i, j) = scale * objective(s, g.ks_values(i), g.alpha_values(j));
    }
  }
  normalize_posterior(g);
  return g;
}

Eigen::Vector3d recover_diffuse(const SpectrumPair& s, double ks) {
  if (!(s.irradiance.maxCoeff() > kMinIrradiance)) {
    throw DegenerateIrradiance("irradiance too small to recover K_d");
  }
  Eigen::Vector3d kd = Eigen::Vector3d::Zero();
  for (int c = 0; c < 3; ++c) {
    if (s.irradiance(c) > kMinIrradiance) {
      kd(c) = (s.b00(c) - ks * s.l00(c)) * std::sqrt(std::numbers::pi) /
              s.irradiance(c);
    }
  }
  return kd.cwiseMax(0.0).cwiseMin(1.0);
}

std::size_t argmin_entropy(std::span<const double> entropies) {
  if (entropies.empty()) throw InvalidInput("no entropies given");
  std::size_t best = 0;
  for (std::size_t i = 1; i < entropies.size(); ++i) {
    if (entropies[i] < entropies[best]) best = i;
  }
  return best;
}

}  // namespace freqbrdf

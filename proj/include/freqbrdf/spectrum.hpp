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

#ifndef FREQBRDF_SPECTRUM_HPP_
#define FREQBRDF_SPECTRUM_HPP_

#include <cstddef>
#include <span>
#include <utility>

#include <Eigen/Core>

#include "freqbrdf/error.hpp"
#include "freqbrdf/sh.hpp"

namespace freqbrdf {

// Power spectra of incoming and outgoing light at one texel plus the DC terms
// used for diffuse recovery.
struct SpectrumPair {
  PowerSpectrumd light;
  PowerSpectrumd outgoing;
  Eigen::Vector3d b00 = Eigen::Vector3d::Zero();
  Eigen::Vector3d l00 = Eigen::Vector3d::Zero();
  Eigen::Vector3d irradiance = Eigen::Vector3d::Zero();
};

// Builds a pair from RGB fits of upper-hemisphere samples taken at the same
// directions. The spectra are luminance spectra. A fit of hemisphere data
// continues a constant over the whole sphere, which doubles its DC
// coefficient compared with the hemisphere-supported signal the diffuse
// relation is written for, so the DC terms are halved.
SpectrumPair spectrum_pair_from_fits(const ShExpansiond& light_fit,
                                     const ShExpansiond& outgoing_fit,
                                     const Eigen::Vector3d& irradiance);

// Outgoing coefficients of the lightweight model:
//   B_00 = pi^{-1/2} K_d E + K_s L_00,  B_lm = K_s e^{-(alpha l)^2} L_lm.
ShExpansiond predict_outgoing_coefficients(const ShExpansiond& light,
                                           const Eigen::VectorXd& kd,
                                           const Eigen::VectorXd& irradiance,
                                           double ks, double alpha);

// sum_{l >= 1} sum_c (S_B(l) - K_s^2 e^{-2 (alpha l)^2} S_L(l))^2.
double objective(const SpectrumPair& s, double ks, double alpha);

struct GridConfig {
  int n_ks = 10;
  int n_alpha = 10;
  double sigma = 1e-2;
};

// Cell centres: K_s = (i + 1/2) / n_ks, alpha = ((j + 1/2) / n_alpha)^2.
Eigen::VectorXd grid_ks_values(int n_ks);
Eigen::VectorXd grid_alpha_values(int n_alpha);

struct PosteriorGrid {
  Eigen::VectorXd ks_values;
  Eigen::VectorXd alpha_values;
  Eigen::MatrixXd nll;    // n_ks x n_alpha, D / (2 sigma^2)
  Eigen::MatrixXd probs;  // n_ks x n_alpha
  double entropy = 1.0;
  double sigma = 1e-2;

  std::pair<int, int> argmax() const;
  double ks_at_argmax() const { return ks_values(argmax().first); }
  double alpha_at_argmax() const { return alpha_values(argmax().second); }
};

// -(1 / log n) sum p log p with 0 log 0 = 0, for probabilities summing to 1.
double entropy(std::span<const double> probs, std::size_t n);

// Normalizes exp(-nll) over all cells and fills probs and entropy.
void normalize_posterior(PosteriorGrid& grid);

PosteriorGrid grid_search(const SpectrumPair& s, const GridConfig& config);

// K_d = (B00 - K_s L00) sqrt(pi) / E per channel, clamped to [0, 1]. Throws
// DegenerateIrradiance when no channel has irradiance above 1e-8; an unlit
// channel alone gets K_d = 0.
Eigen::Vector3d recover_diffuse(const SpectrumPair& s, double ks);

inline constexpr double kMinIrradiance = 1e-8;

// Index of the smallest entropy, the lowest index on ties.
std::size_t argmin_entropy(std::span<const double> entropies);

template <typename Params>
const Params& merge_by_entropy(
    std::span<const std::pair<Params, double>> candidates) {
  if (candidates.empty()) throw InvalidInput("no candidates to merge");
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    if (candidates[i].second < candidates[best].second) best = i;
  }
  return candidates[best].first;
}

}  // namespace freqbrdf

#endif  // FREQBRDF_SPECTRUM_HPP_

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

#include "freqbrdf/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

#include "freqbrdf/error.hpp"
#include "freqbrdf/parallel.hpp"

namespace freqbrdf {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr int kParams = 5;

PrincipledParams prior_mean() {
  PrincipledParams p;
  p.base_color = Eigen::Vector3d::Constant(0.5);
  p.metallic = 0.5;
  p.roughness = 0.5;
  return p;
}

// Least-squares fitter over a dense Fibonacci sphere, shared per degree.
const ShFitter& sphere_fitter(int max_degree) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<ShFitter>> cache;
  std::lock_guard<std::mutex> lock(mu);
  std::unique_ptr<ShFitter>& f = cache[max_degree];
  if (!f) {
    const std::vector<Direction> dirs =
        fibonacci_sphere(16 * sh_count(max_degree));
    f = std::make_unique<ShFitter>(
        dirs, Eigen::VectorXd::Ones(static_cast<Eigen::Index>(dirs.size())),
        max_degree, 0.0);
  }
  return *f;
}
}  // namespace

void OptimizerConfig::validate() const {
  if (iterations < 1) throw InvalidInput("iterations must be >= 1");
  if (!(step > 0.0)) throw InvalidInput("step must be positive");
  if (shadow_refresh < 1) throw InvalidInput("shadow_refresh must be >= 1");
  if (!(tv_weight >= 0.0)) throw InvalidInput("tv_weight must be >= 0");
  if (!(weight_a > 0.0) || !(weight_b > 0.0)) {
    throw InvalidInput("weighting a and b must be positive");
  }
  if (max_degree < 0 || max_degree > 20) {
    throw InvalidInput("max_degree must lie in [0, 20]");
  }
  if (!(lambda >= 0.0)) throw InvalidInput("lambda must be >= 0");
  if (grid.n_ks < 2 || grid.n_alpha < 2) {
    throw InvalidInput("grid needs at least 2 cells per axis");
  }
  if (!(grid.sigma > 0.0)) throw InvalidInput("sigma must be positive");
}

double sample_weight(double theta, double a, double b) {
  if (theta >= kPi / 2) return 0.0;
  const double base = std::max(0.0, 1.0 - std::cos(a * theta));
  return std::clamp(1.0 - std::pow(base, b), 0.0, 1.0);
}

DirectionalSamples sample_light(const IncomingLight& light,
                                const TexelRecord& texel,
                                const std::vector<Direction>& dirs) {
  Eigen::MatrixXd values(static_cast<Eigen::Index>(dirs.size()), 3);
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    values.row(static_cast<Eigen::Index>(i)) =
        light.radiance(texel, to_vector(dirs[i])).transpose();
  }
  return DirectionalSamples(dirs, std::move(values));
}

void build_shading(TexelGrid& grid, const IncomingLight& light,
                   const LightBasis& basis, double alpha_shadow) {
  parallel_for(static_cast<int>(grid.texels.size()), [&](int i) {
    TexelRecord& t = grid.texels[static_cast<std::size_t>(i)];
    const double a = alpha_shadow >= 0.0
                         ? alpha_shadow
                         : t.params.roughness * t.params.roughness;
    t.light = ShadingContext::from_samples(
        basis, sample_light(light, t, basis.directions()), a);
    t.valid = !t.samples.empty() &&
              t.light.irradiance().maxCoeff() > kMinIrradiance;
  });
}

double metallic_from_specular(double ks, const Eigen::Vector3d& base_color) {
  const double denom = base_color.maxCoeff() - 0.04;
  if (denom <= 0.0) return 0.0;
  return std::clamp((ks - 0.04) / denom, 0.0, 1.0);
}

InitResult init_from_spectrum(const TexelRecord& record,
                              const IncomingLight& light,
                              const OptimizerConfig& config) {
  InitResult out;
  out.params = prior_mean();
  if (record.samples.empty()) return out;

  const int n = record.samples.size();
  std::vector<Direction> mirrored(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    mirrored[i] = reflect_about_normal(record.samples.directions[i]);
  }
  // The light is known everywhere, so its spectrum comes from a dense fit
  // over the full sphere in the texel frame.
  const ShFitter& dense = sphere_fitter(config.max_degree);
  const int m = static_cast<int>(dense.basis().rows());
  const std::vector<Direction> sphere = fibonacci_sphere(m);
  Eigen::MatrixXd light_values(m, 3);
  for (int i = 0; i < m; ++i) {
    light_values.row(i) =
        light.radiance(record, to_vector(sphere[i])).transpose();
  }
  const ShExpansiond light_raw = dense.fit(light_values);
  ShExpansiond light_fit = light_raw;
  const ShFitter fitter(mirrored, record.samples.weights, config.max_degree,
                        config.lambda);
  ShExpansiond outgoing_fit = fitter.fit(record.samples.values);
  if (config.prefilter) {
    light_fit = bandlimit_prefilter(light_fit, n);
    outgoing_fit = bandlimit_prefilter(outgoing_fit, n);
  }
  SpectrumPair pair = spectrum_pair_from_fits(light_fit, outgoing_fit,
                                              record.light.irradiance());
  try {
    out.posterior = grid_search(pair, config.grid);
    const double ks = out.posterior.ks_at_argmax();
    const double alpha = out.posterior.alpha_at_argmax();
    // The sparse fit does not keep a hemisphere-only signal's mean in the
    // degree-0 coefficient. The degree-0 split therefore pushes the filtered
    // light through the same fit and rescales both terms by the fit's
    // response to a unit constant.
    const ShExpansiond filtered = convolve_isotropic(
        light_raw, filter_kernel(alpha, config.max_degree));
    const double unit =
        fitter.fit(Eigen::MatrixXd::Ones(n, 1)).coeffs()(0, 0);
    const double scale = std::sqrt(4.0 * kPi) / unit;
    pair.l00 = 0.5 * scale *
               fitter.fit(filtered.evaluate(mirrored)).coeffs().row(0)
                   .transpose();
    pair.b00 *= scale;
    const Eigen::Vector3d kd = recover_diffuse(pair, ks);
    out.params.base_color = kd;
    out.params.roughness = std::sqrt(alpha);
    out.params.metallic = metallic_from_specular(ks, kd);
    out.entropy = out.posterior.entropy;
    out.valid = true;
  } catch (const DegenerateIrradiance&) {
    out.params = prior_mean();
    out.entropy = 1.0;
    out.valid = false;
  }
  return out;
}

void initialize_from_spectrum(TexelGrid& grid, const IncomingLight& light,
                              const OptimizerConfig& config) {
  parallel_for(static_cast<int>(grid.texels.size()), [&](int i) {
    TexelRecord& t = grid.texels[static_cast<std::size_t>(i)];
    const InitResult r = init_from_spectrum(t, light, config);
    t.params = r.params;
    t.entropy = r.entropy;
    t.valid = r.valid;
  });
}

MixedLoss::MixedLoss(const TexelGrid& grid, const OptimizerConfig& config)
    : config_(config), width_(grid.width), height_(grid.height) {
  slot_.assign(grid.texels.size(), -1);
  for (std::size_t i = 0; i < grid.texels.size(); ++i) {
    if (grid.texels[i].valid && !grid.texels[i].samples.empty()) {
      slot_[i] = static_cast<int>(valid_.size());
      valid_.push_back(static_cast<int>(i));
    }
  }
  work_.resize(valid_.size());
  for (std::size_t k = 0; k < valid_.size(); ++k) {
    const TexelRecord& t = grid.texels[static_cast<std::size_t>(valid_[k])];
    Work& w = work_[k];
    const int n = t.samples.size();
    w.cos_o.resize(n);
    w.fresnel_power.resize(n);
    w.weight = t.samples.weights;
    w.observed = t.samples.values;
    for (int s = 0; s < n; ++s) {
      const double c = std::cos(t.samples.directions[s].theta);
      w.cos_o(s) = c;
      w.fresnel_power(s) = std::pow(std::clamp(1.0 - c, 0.0, 1.0), 5.0);
    }
    observation_count_ += n;
  }
  refresh(grid);
}

Eigen::VectorXd MixedLoss::pack(const TexelGrid& grid) const {
  Eigen::VectorXd x(parameter_count());
  for (std::size_t k = 0; k < valid_.size(); ++k) {
    const PrincipledParams& p =
        grid.texels[static_cast<std::size_t>(valid_[k])].params;
    x.segment<3>(kParams * k) = p.base_color;
    x(kParams * k + 3) = p.metallic;
    x(kParams * k + 4) = p.roughness;
  }
  return x;
}

void MixedLoss::unpack(const Eigen::VectorXd& x, TexelGrid& grid) const {
  for (std::size_t k = 0; k < valid_.size(); ++k) {
    PrincipledParams& p =
        grid.texels[static_cast<std::size_t>(valid_[k])].params;
    p.base_color = x.segment<3>(kParams * k);
    p.metallic = x(kParams * k + 3);
    p.roughness = x(kParams * k + 4);
  }
}

void MixedLoss::refresh(const TexelGrid& grid) {
  const int lmax = config_.max_degree;
  parallel_for(static_cast<int>(valid_.size()), [&](int k) {
    const TexelRecord& t = grid.texels[static_cast<std::size_t>(valid_[k])];
    if (t.light.max_degree() != lmax) {
      throw InvalidInput("shading context degree differs from max_degree");
    }
    Work& w = work_[static_cast<std::size_t>(k)];
    const ShExpansiond& light = t.light.effective_light(config_.model);
    const int n = t.samples.size();
    w.irradiance = t.light.irradiance();
    w.proj.resize(n, 3 * (lmax + 1));
    Eigen::VectorXd y(sh_count(lmax));
    for (int s = 0; s < n; ++s) {
      eval_sh_basis<double>(
          to_vector(reflect_about_normal(t.samples.directions[s])), lmax,
          y.data());
      for (int l = 0; l <= lmax; ++l) {
        const Eigen::Vector3d p =
            light.coeffs().middleRows(sh_index(l, -l), 2 * l + 1).transpose() *
            y.segment(sh_index(l, -l), 2 * l + 1);
        w.proj.block<1, 3>(s, 3 * l) = p.transpose();
      }
    }
  });
}

double MixedLoss::texel_loss(int k, const double* p, double* g) const {
  const Work& w = work_[static_cast<std::size_t>(k)];
  const int lmax = config_.max_degree;
  const ModelOptions& opt = config_.model;
  const double metallic = p[3];
  const double rough = p[4];
  const double alpha = rough * rough;

  Eigen::VectorXd kern(lmax + 1), dkern(lmax + 1);
  for (int l = 0; l <= lmax; ++l) {
    kern(l) = filter_coeff(alpha, l);
    dkern(l) = -2.0 * alpha * l * l * kern(l);
  }
  double r0[3];
  for (int c = 0; c < 3; ++c) r0[c] = 0.04 + (p[c] - 0.04) * metallic;

  double loss = 0.0;
  for (int s = 0; s < w.cos_o.size(); ++s) {
    const double wt = w.weight(s);
    if (wt <= 0.0) continue;
    const double mask = opt.masking ? smith_g1_cos(alpha, w.cos_o(s)) : 1.0;
    const double dmask =
        opt.masking ? smith_g1_dalpha(alpha, w.cos_o(s)) : 0.0;
    const double fp = w.fresnel_power(s);
    for (int c = 0; c < 3; ++c) {
      double spec = 0.0, dspec = 0.0;
      for (int l = 0; l <= lmax; ++l) {
        const double pr = w.proj(s, 3 * l + c);
        spec += kern(l) * pr;
        dspec += dkern(l) * pr;
      }
      const double tint = opt.fresnel ? r0[c] + (1.0 - r0[c]) * fp : r0[c];
      const double dtint_dr0 = opt.fresnel ? 1.0 - fp : 1.0;
      const double diffuse_rate = w.irradiance(c) / kPi;
      double b = p[c] * diffuse_rate + tint * mask * spec;
      const bool clamped = b <= 0.0;
      if (clamped) b = 0.0;
      const double d = b - w.observed(s, c);
      const double root = std::sqrt(d * d + kEpsilon * kEpsilon);
      loss += wt * root;
      if (g == nullptr || clamped) continue;
      const double dl = wt * d / root;
      const double dspec_term = dtint_dr0 * mask * spec;
      g[c] += dl * (diffuse_rate + dspec_term * metallic);
      g[3] += dl * dspec_term * (p[c] - 0.04);
      g[4] += dl * tint * (dmask * spec + mask * dspec) * 2.0 * rough;
    }
  }
  return loss;
}

double MixedLoss::evaluate(const Eigen::VectorXd& x,
                           Eigen::VectorXd* gradient) const {
  const int nv = static_cast<int>(valid_.size());
  if (x.size() != parameter_count()) {
    throw InvalidInput("parameter vector has the wrong length");
  }
  if (nv == 0) {
    if (gradient) gradient->resize(0);
    return 0.0;
  }
  std::vector<double> data(static_cast<std::size_t>(nv), 0.0);
  std::vector<double> tv(static_cast<std::size_t>(nv), 0.0);
  Eigen::VectorXd g_data, g_tv;
  if (gradient) {
    g_data = Eigen::VectorXd::Zero(x.size());
    g_tv = Eigen::VectorXd::Zero(x.size());
  }
  parallel_for(nv, [&](int k) {
    data[static_cast<std::size_t>(k)] = texel_loss(
        k, x.data() + kParams * k,
        gradient ? g_data.data() + kParams * k : nullptr);
  });

  // Each texel owns the edges to its right and lower neighbours for the
  // value and gathers all four edges for its own gradient.
  const double eps2 = kEpsilon * kEpsilon;
  parallel_for(nv, [&](int k) {
    const int idx = valid_[static_cast<std::size_t>(k)];
    const int u = idx % width_, v = idx / width_;
    const int du[4] = {1, 0, -1, 0};
    const int dv[4] = {0, 1, 0, -1};
    double own = 0.0;
    for (int e = 0; e < 4; ++e) {
      const int nu = u + du[e], nvv = v + dv[e];
      if (nu < 0 || nu >= width_ || nvv < 0 || nvv >= height_) continue;
      const int other = slot_[static_cast<std::size_t>(nvv) * width_ + nu];
      if (other < 0) continue;
      for (int q = 0; q < kParams; ++q) {
        const double diff = x(kParams * k + q) - x(kParams * other + q);
        const double root = std::sqrt(diff * diff + eps2);
        if (e < 2) own += root;
        if (gradient) g_tv(kParams * k + q) += diff / root;
      }
    }
    tv[static_cast<std::size_t>(k)] = own;
  });

  double data_sum = 0.0, tv_sum = 0.0;
  for (int k = 0; k < nv; ++k) {
    data_sum += data[static_cast<std::size_t>(k)];
    tv_sum += tv[static_cast<std::size_t>(k)];
  }
  const double data_scale = 1.0 / std::max(observation_count_, 1.0);
  const double tv_scale = config_.tv_weight / nv;
  if (gradient) *gradient = data_scale * g_data + tv_scale * g_tv;
  return data_scale * data_sum + tv_scale * tv_sum;
}

namespace {

void refresh_shadowing(TexelGrid& grid, const IncomingLight& light,
                       const LightBasis& basis) {
  parallel_for(static_cast<int>(grid.texels.size()), [&](int i) {
    TexelRecord& t = grid.texels[static_cast<std::size_t>(i)];
    if (!t.valid) return;
    const double a = t.params.roughness * t.params.roughness;
    t.light = ShadingContext::from_samples(
        basis, sample_light(light, t, basis.directions()), a);
  });
}

void check_finite(double f, int iteration) {
  if (!std::isfinite(f)) {
    std::ostringstream os;
    os << "loss became " << f << " at iteration " << iteration
       << "; check the input radiance for NaN or Inf values";
    throw NonFiniteLoss(os.str());
  }
}

}  // namespace

OptimizeReport optimize(TexelGrid& grid, const IncomingLight& light,
                        const LightBasis& basis,
                        const OptimizerConfig& config) {
  config.validate();
  if (basis.max_degree() != config.max_degree) {
    throw InvalidInput("light basis degree differs from max_degree");
  }
  const bool shadowing = config.model.shadowing;
  OptimizeReport report;
  if (shadowing) refresh_shadowing(grid, light, basis);
  MixedLoss loss(grid, config);
  Eigen::VectorXd x = loss.pack(grid);
  const Eigen::VectorXd x0 = x;
  if (loss.parameter_count() == 0) return report;

  Eigen::VectorXd m = Eigen::VectorXd::Zero(x.size());
  Eigen::VectorXd v = Eigen::VectorXd::Zero(x.size());
  Eigen::VectorXd g;
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kAdamEps = 1e-8;
  double best = 0.0;
  Eigen::VectorXd best_x = x;
  const int iters = config.iterations;
  for (int t = 0; t < iters; ++t) {
    if (shadowing && t > 0 && t % config.shadow_refresh == 0) {
      loss.unpack(x, grid);
      refresh_shadowing(grid, light, basis);
      loss.refresh(grid);
    }
    const double f = loss.evaluate(x, &g);
    check_finite(f, t);
    if (!g.allFinite()) check_finite(g.sum(), t);
    report.history.push_back(f);
    if (t == 0) report.initial_loss = f;
    if (t == 0 || f < best) {
      best = f;
      best_x = x;
    }
    const double lr =
        config.step * 0.5 * (1.0 + std::cos(kPi * t / std::max(iters, 1)));
    m = kBeta1 * m + (1.0 - kBeta1) * g;
    v = kBeta2 * v + (1.0 - kBeta2) * g.cwiseProduct(g);
    const double c1 = 1.0 - std::pow(kBeta1, t + 1);
    const double c2 = 1.0 - std::pow(kBeta2, t + 1);
    x -= (lr / c1) *
         m.cwiseQuotient(((v / c2).cwiseSqrt().array() + kAdamEps).matrix());
    x = x.cwiseMax(0.0).cwiseMin(1.0);
    report.iterations = t + 1;
  }

  // Compare the last iterate with the best one seen, then re-evaluate the
  // winner with shadowing refreshed at its own roughness.
  auto consistent_loss = [&](const Eigen::VectorXd& state) {
    loss.unpack(state, grid);
    if (shadowing) {
      refresh_shadowing(grid, light, basis);
      loss.refresh(grid);
    }
    const double f = loss.evaluate(state, nullptr);
    check_finite(f, iters);
    return f;
  };
  if (iters == 0) {
    report.initial_loss = report.final_loss = consistent_loss(x0);
    return report;
  }
  const double last = loss.evaluate(x, nullptr);
  if (std::isfinite(last) && last < best) best_x = x;
  report.final_loss = consistent_loss(best_x);
  if (report.final_loss > report.initial_loss) {
    report.final_loss = consistent_loss(x0);
  }
  return report;
}

ShExpansiond bandlimit_prefilter(const ShExpansiond& env, int n_views) {
  if (n_views < 1) throw InvalidInput("n_views must be >= 1");
  const double a = 1.0 / std::sqrt(static_cast<double>(n_views));
  return convolve_isotropic(env, filter_kernel(a, env.max_degree()));
}

double alpha_lower_bound(int n_views, double t) {
  if (n_views < 1) throw InvalidInput("n_views must be >= 1");
  if (!(t > 0.0 && t < 1.0)) throw InvalidInput("t must lie in (0, 1)");
  const double lstar =
      std::floor(std::sqrt(static_cast<double>(n_views)) + 1e-12);
  return std::sqrt(-std::log(t)) / lstar;
}

int views_for_alpha(double alpha, double t) {
  if (!(alpha > 0.0)) throw InvalidInput("alpha must be positive");
  if (!(t > 0.0 && t < 1.0)) throw InvalidInput("t must lie in (0, 1)");
  return static_cast<int>(std::ceil(-std::log(t) / (alpha * alpha) - 1e-9));
}

}  // namespace freqbrdf

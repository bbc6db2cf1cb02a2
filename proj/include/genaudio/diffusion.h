// Copyright 2026 The genaudio-eval Authors
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

// Forward/reverse transitions of a Gaussian latent diffusion process.
//
// Steps are 1-based: a latent at step n has been noised n times, step 0 is
// clean data. For step n the schedule gives
//   beta_n        per-step noise variance,
//   alpha_n       1 - beta_n,
//   alpha_bar_n   prod_{k <= n} alpha_k, the signal retained after n steps.
//
//   forward_step:      z_n = sqrt(alpha_n) z_{n-1} + sqrt(beta_n) xi
//   forward_marginal:  z_n = sqrt(alpha_bar_n) z_0 + sqrt(1 - alpha_bar_n) eps
//   denoising_loss:    || eps - eps_hat(z_n, n, c) ||^2
//   reverse_step:      z_{n-1} = (z_n - beta_n / sqrt(1 - alpha_bar_n) eps_hat)
//                                / sqrt(alpha_n) + sigma_n xi

#ifndef GENAUDIO_DIFFUSION_H_
#define GENAUDIO_DIFFUSION_H_

#include <functional>
#include <utility>
#include <vector>

#include "genaudio/random.h"
#include "genaudio/types.h"

namespace genaudio {

enum class ScheduleKind { kLinear };

class NoiseSchedule {
 public:
  explicit NoiseSchedule(std::vector<double> betas);

  int num_steps() const { return static_cast<int>(betas_.size()); }
  // All accessors take 1-based steps in [1, num_steps()].
  double beta(int n) const { return betas_.at(n - 1); }
  double alpha(int n) const { return alphas_.at(n - 1); }
  double alpha_bar(int n) const { return alpha_bars_.at(n - 1); }

  const std::vector<double>& betas() const { return betas_; }
  const std::vector<double>& alpha_bars() const { return alpha_bars_; }

 private:
  std::vector<double> betas_;
  std::vector<double> alphas_;
  std::vector<double> alpha_bars_;
};

NoiseSchedule make_schedule(int steps, double beta_start, double beta_end,
                            ScheduleKind kind = ScheduleKind::kLinear);

struct Latent {
  Vector values;
  int step = 0;
};

enum class Modality { kAudio, kText };

struct ConditionEmbedding {
  Vector values;
  Modality modality = Modality::kAudio;
};

/// eps_hat(z_n, n, c). Implementations must be deterministic.
class NoisePredictor {
 public:
  virtual ~NoisePredictor() = default;
  virtual Vector predict(const Latent& z, int step,
                         const ConditionEmbedding& cond) const = 0;
};

/// Adapts a callable; handy for analytic predictors in tests and demos.
class FunctionPredictor : public NoisePredictor {
 public:
  using Fn = std::function<Vector(const Latent&, int, const ConditionEmbedding&)>;
  explicit FunctionPredictor(Fn fn) : fn_(std::move(fn)) {}
  Vector predict(const Latent& z, int step,
                 const ConditionEmbedding& cond) const override {
    return fn_(z, step, cond);
  }

 private:
  Fn fn_;
};

Latent forward_step(const Latent& z_prev, int n, const NoiseSchedule& sched,
                    Rng& rng);

Latent forward_marginal(const Latent& z0, int n, const NoiseSchedule& sched,
                        const Vector& eps);

/// Single-sample estimate of the noise-prediction objective at step n.
double denoising_loss(const Latent& z0, int n, const Vector& eps,
                      const NoisePredictor& predictor,
                      const ConditionEmbedding& cond,
                      const NoiseSchedule& sched);

enum class ReverseVariance {
  kBeta,       // sigma_n^2 = beta_n
  kPosterior,  // sigma_n^2 = beta_n (1 - alpha_bar_{n-1}) / (1 - alpha_bar_n)
};

/// Posterior-mean step from z_n to z_{n-1}. No noise is added at n = 1.
Latent reverse_step(const Latent& zn, int n, const NoisePredictor& predictor,
                    const ConditionEmbedding& cond, const NoiseSchedule& sched,
                    Rng& rng,
                    ReverseVariance variance = ReverseVariance::kBeta);

}  // namespace genaudio

#endif  // GENAUDIO_DIFFUSION_H_

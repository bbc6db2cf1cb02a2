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

#include "genaudio/diffusion.h"

#include <cmath>
#include <string>

#include "genaudio/error.h"

namespace genaudio {
namespace {

void check_step(int n, const NoiseSchedule& sched) {
  if (n < 1 || n > sched.num_steps()) {
    throw Error(ErrorCode::kStepOutOfRange,
                "step " + std::to_string(n) + " outside [1, " +
                    std::to_string(sched.num_steps()) + "]");
  }
}

void check_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) throw Error(ErrorCode::kNonFiniteValues, what);
}

Vector standard_normal(Eigen::Index dim, Rng& rng) {
  std::normal_distribution<double> normal;
  Vector xi(dim);
  for (Eigen::Index i = 0; i < dim; ++i) xi[i] = normal(rng);
  return xi;
}

}  // namespace

NoiseSchedule::NoiseSchedule(std::vector<double> betas)
    : betas_(std::move(betas)) {
  if (betas_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "schedule needs at least one step");
  }
  alphas_.reserve(betas_.size());
  alpha_bars_.reserve(betas_.size());
  double running = 1.0;
  for (double b : betas_) {
    if (!(b > 0.0 && b < 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "every beta must lie in (0, 1)");
    }
    alphas_.push_back(1.0 - b);
    running *= 1.0 - b;
    alpha_bars_.push_back(running);
  }
  if (!(running > 0.0)) {
    throw Error(ErrorCode::kNumericFailure, "alpha_bar underflows to zero");
  }
}

NoiseSchedule make_schedule(int steps, double beta_start, double beta_end,
                            ScheduleKind kind) {
  if (steps < 1) {
    throw Error(ErrorCode::kInvalidArgument, "steps must be >= 1");
  }
  if (!(beta_start > 0.0 && beta_start <= beta_end && beta_end < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "need 0 < beta_start <= beta_end < 1");
  }
  std::vector<double> betas(static_cast<size_t>(steps));
  switch (kind) {
    case ScheduleKind::kLinear:
      for (int i = 0; i < steps; ++i) {
        betas[i] = steps == 1 ? beta_start
                              : beta_start + (beta_end - beta_start) * i /
                                                 (steps - 1);
      }
      break;
  }
  return NoiseSchedule(std::move(betas));
}

Latent forward_step(const Latent& z_prev, int n, const NoiseSchedule& sched,
                    Rng& rng) {
  check_step(n, sched);
  if (z_prev.step != n - 1) {
    throw Error(ErrorCode::kStepOutOfRange,
                "forward step " + std::to_string(n) + " expects a latent at step " +
                    std::to_string(n - 1) + ", got " +
                    std::to_string(z_prev.step));
  }
  const Vector xi = standard_normal(z_prev.values.size(), rng);
  return {std::sqrt(sched.alpha(n)) * z_prev.values +
              std::sqrt(sched.beta(n)) * xi,
          n};
}

Latent forward_marginal(const Latent& z0, int n, const NoiseSchedule& sched,
                        const Vector& eps) {
  check_step(n, sched);
  if (z0.step != 0) {
    throw Error(ErrorCode::kStepOutOfRange,
                "forward_marginal expects a clean latent (step 0)");
  }
  if (eps.size() != z0.values.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "eps vs latent");
  }
  check_finite(eps, "eps");
  const double ab = sched.alpha_bar(n);
  return {std::sqrt(ab) * z0.values + std::sqrt(1.0 - ab) * eps, n};
}

double denoising_loss(const Latent& z0, int n, const Vector& eps,
                      const NoisePredictor& predictor,
                      const ConditionEmbedding& cond,
                      const NoiseSchedule& sched) {
  check_finite(z0.values, "z0");
  check_finite(cond.values, "condition");
  const Latent zn = forward_marginal(z0, n, sched, eps);
  const Vector pred = predictor.predict(zn, n, cond);
  if (pred.size() != eps.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "predictor returned " + std::to_string(pred.size()) +
                    " values for a latent of dimension " +
                    std::to_string(eps.size()));
  }
  return (eps - pred).squaredNorm();
}

Latent reverse_step(const Latent& zn, int n, const NoisePredictor& predictor,
                    const ConditionEmbedding& cond, const NoiseSchedule& sched,
                    Rng& rng, ReverseVariance variance) {
  check_step(n, sched);
  if (zn.step != n) {
    throw Error(ErrorCode::kStepOutOfRange,
                "reverse step " + std::to_string(n) + " got a latent at step " +
                    std::to_string(zn.step));
  }
  const Vector pred = predictor.predict(zn, n, cond);
  if (pred.size() != zn.values.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "predictor output vs latent");
  }
  const double beta = sched.beta(n);
  const double ab = sched.alpha_bar(n);
  Vector mean = (zn.values - (beta / std::sqrt(1.0 - ab)) * pred) /
                std::sqrt(sched.alpha(n));
  if (n == 1) return {std::move(mean), 0};

  double var = beta;
  if (variance == ReverseVariance::kPosterior) {
    var = beta * (1.0 - sched.alpha_bar(n - 1)) / (1.0 - ab);
  }
  return {mean + std::sqrt(var) * standard_normal(mean.size(), rng), n - 1};
}

}  // namespace genaudio

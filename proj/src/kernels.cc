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

#include "genaudio/kernels.h"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

#include "genaudio/error.h"

namespace genaudio::kernels {
namespace {

// The FFTW planner is not thread-safe; execution of an existing plan on
// fresh (equally aligned) buffers is. Plans live for the process lifetime.
fftw_plan r2c_plan(int n) {
  static std::mutex mu;
  static std::map<int, fftw_plan> plans;
  std::lock_guard<std::mutex> lock(mu);
  auto it = plans.find(n);
  if (it != plans.end()) return it->second;
  double* in = fftw_alloc_real(static_cast<size_t>(n));
  fftw_complex* out = fftw_alloc_complex(static_cast<size_t>(n / 2 + 1));
  fftw_plan plan = fftw_plan_dft_r2c_1d(n, in, out, FFTW_ESTIMATE);
  fftw_free(in);
  fftw_free(out);
  if (plan == nullptr) {
    throw Error(ErrorCode::kNumericFailure,
                "could not plan a real FFT of size " + std::to_string(n));
  }
  plans.emplace(n, plan);
  return plan;
}

std::vector<double> hann_window(int n) {
  std::vector<double> w(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n);
  }
  return w;
}

// Scratch buffers for one thread.
class FrameWorkspace {
 public:
  explicit FrameWorkspace(int n_fft)
      : n_fft_(n_fft),
        in_(fftw_alloc_real(static_cast<size_t>(n_fft))),
        out_(fftw_alloc_complex(static_cast<size_t>(n_fft / 2 + 1))),
        power_(static_cast<size_t>(n_fft / 2 + 1)) {}
  ~FrameWorkspace() {
    fftw_free(in_);
    fftw_free(out_);
  }
  FrameWorkspace(const FrameWorkspace&) = delete;
  FrameWorkspace& operator=(const FrameWorkspace&) = delete;

  void log_mel_frame(fftw_plan plan, std::span<const double> signal,
                     int64_t start, const std::vector<double>& window,
                     const RowMatrix& filterbank, double log_floor,
                     double* out_row) {
    for (int i = 0; i < n_fft_; ++i) {
      in_[i] = signal[static_cast<size_t>(start + i)] * window[i];
    }
    fftw_execute_dft_r2c(plan, in_, out_);
    const int bins = n_fft_ / 2 + 1;
    for (int k = 0; k < bins; ++k) {
      power_[k] = out_[k][0] * out_[k][0] + out_[k][1] * out_[k][1];
    }
    for (Eigen::Index m = 0; m < filterbank.rows(); ++m) {
      const double* w = filterbank.row(m).data();
      double e = 0.0;
      for (int k = 0; k < bins; ++k) e += w[k] * power_[k];
      out_row[m] = std::log(std::max(e, log_floor));
    }
  }

 private:
  int n_fft_;
  double* in_;
  fftw_complex* out_;
  std::vector<double> power_;
};

void check_frames(std::span<const double> signal, const RowMatrix& filterbank,
                  const MelConfig& config, int frames) {
  if (filterbank.cols() != config.num_bins() ||
      filterbank.rows() != config.n_mels) {
    throw Error(ErrorCode::kShapeMismatch, "filterbank does not match config");
  }
  const int64_t needed =
      static_cast<int64_t>(frames - 1) * config.hop + config.n_fft;
  if (frames < 1 || static_cast<int64_t>(signal.size()) < needed) {
    throw Error(ErrorCode::kClipTooShort,
                std::to_string(frames) + " frames need " +
                    std::to_string(needed) + " samples");
  }
}

struct BlockSums {
  std::vector<double> sum;     // max_step * dim
  std::vector<double> sum_sq;  // max_step * dim
};

BlockSums chain_block(const NoiseSchedule& sched, int dim, int64_t first,
                      int64_t last, int max_step, uint64_t seed,
                      ChainStart start) {
  BlockSums sums;
  const size_t cells = static_cast<size_t>(max_step) * dim;
  sums.sum.assign(cells, 0.0);
  sums.sum_sq.assign(cells, 0.0);
  for (int64_t t = first; t < last; ++t) {
    Rng rng = make_rng(seed, static_cast<uint64_t>(t));
    Latent z{Vector::Zero(dim), 0};
    if (start == ChainStart::kStandardNormal) {
      std::normal_distribution<double> normal;
      for (int c = 0; c < dim; ++c) z.values[c] = normal(rng);
    }
    for (int n = 1; n <= max_step; ++n) {
      z = forward_step(z, n, sched, rng);
      double* s = &sums.sum[static_cast<size_t>(n - 1) * dim];
      double* s2 = &sums.sum_sq[static_cast<size_t>(n - 1) * dim];
      for (int c = 0; c < dim; ++c) {
        s[c] += z.values[c];
        s2[c] += z.values[c] * z.values[c];
      }
    }
  }
  return sums;
}

void check_chain(const NoiseSchedule& sched, int dim, int64_t trials,
                 int max_step) {
  if (dim < 1 || trials < 2 || max_step < 1 || max_step > sched.num_steps()) {
    throw Error(ErrorCode::kInvalidArgument,
                "chain moments need dim >= 1, trials >= 2 and 1 <= max_step "
                "<= schedule length");
  }
}

ChainMoments finish_moments(const std::vector<BlockSums>& blocks, int dim,
                            int64_t trials, int max_step) {
  ChainMoments m;
  m.trials = trials;
  m.mean = RowMatrix::Zero(max_step, dim);
  m.variance = RowMatrix::Zero(max_step, dim);
  const double t = static_cast<double>(trials);
  for (int n = 0; n < max_step; ++n) {
    for (int c = 0; c < dim; ++c) {
      const size_t cell = static_cast<size_t>(n) * dim + c;
      double s = 0.0, s2 = 0.0;
      for (const BlockSums& b : blocks) {
        s += b.sum[cell];
        s2 += b.sum_sq[cell];
      }
      const double mean = s / t;
      m.mean(n, c) = mean;
      m.variance(n, c) = (s2 - s * mean) / (t - 1.0);
    }
  }
  return m;
}

int64_t num_blocks(int64_t trials) {
  return (trials + kTrajectoryBlock - 1) / kTrajectoryBlock;
}

RowMatrix centered(const RowMatrix& x, const Vector& mean) {
  if (mean.size() != x.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "mean length vs columns");
  }
  if (x.rows() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "covariance needs at least 2 rows");
  }
  return x.rowwise() - mean.transpose();
}

// Upper triangle entry (i, j) of the scatter matrix; mirrored by callers.
double scatter_entry(const Matrix& ct, Eigen::Index i, Eigen::Index j) {
  const double* a = ct.col(i).data();
  const double* b = ct.col(j).data();
  double s = 0.0;
  for (Eigen::Index r = 0; r < ct.rows(); ++r) s += a[r] * b[r];
  return s;
}

}  // namespace

namespace serial {

RowMatrix log_mel_frames(std::span<const double> signal,
                         const RowMatrix& filterbank, const MelConfig& config,
                         int frames) {
  check_frames(signal, filterbank, config, frames);
  const fftw_plan plan = r2c_plan(config.n_fft);
  const std::vector<double> window = hann_window(config.n_fft);
  const double floor = config.log_floor;
  RowMatrix out(frames, config.n_mels);
  FrameWorkspace ws(config.n_fft);
  for (int t = 0; t < frames; ++t) {
    ws.log_mel_frame(plan, signal, static_cast<int64_t>(t) * config.hop, window,
                     filterbank, floor, out.row(t).data());
  }
  return out;
}

Matrix covariance(const RowMatrix& x, const Vector& mean) {
  // Column-major copy so each feature column is contiguous.
  const Matrix ct = centered(x, mean);
  const Eigen::Index d = x.cols();
  const double denom = static_cast<double>(x.rows() - 1);
  Matrix cov(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i; j < d; ++j) {
      const double v = scatter_entry(ct, i, j) / denom;
      cov(i, j) = v;
      cov(j, i) = v;
    }
  }
  return cov;
}

ChainMoments forward_chain_moments(const NoiseSchedule& sched, int dim,
                                   int64_t trials, int max_step, uint64_t seed,
                                   ChainStart start) {
  check_chain(sched, dim, trials, max_step);
  const int64_t blocks = num_blocks(trials);
  std::vector<BlockSums> sums(static_cast<size_t>(blocks));
  for (int64_t b = 0; b < blocks; ++b) {
    sums[b] = chain_block(sched, dim, b * kTrajectoryBlock,
                          std::min(trials, (b + 1) * kTrajectoryBlock),
                          max_step, seed, start);
  }
  return finish_moments(sums, dim, trials, max_step);
}

}  // namespace serial

namespace parallel {

RowMatrix log_mel_frames(std::span<const double> signal,
                         const RowMatrix& filterbank, const MelConfig& config,
                         int frames) {
  check_frames(signal, filterbank, config, frames);
  const fftw_plan plan = r2c_plan(config.n_fft);
  const std::vector<double> window = hann_window(config.n_fft);
  const double floor = config.log_floor;
  RowMatrix out(frames, config.n_mels);
#pragma omp parallel
  {
    FrameWorkspace ws(config.n_fft);
#pragma omp for schedule(static)
    for (int t = 0; t < frames; ++t) {
      ws.log_mel_frame(plan, signal, static_cast<int64_t>(t) * config.hop,
                       window, filterbank, floor, out.row(t).data());
    }
  }
  return out;
}

Matrix covariance(const RowMatrix& x, const Vector& mean) {
  const Matrix ct = centered(x, mean);
  const Eigen::Index d = x.cols();
  const double denom = static_cast<double>(x.rows() - 1);
  Matrix cov(d, d);
#pragma omp parallel for schedule(dynamic, 4)
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i; j < d; ++j) {
      const double v = scatter_entry(ct, i, j) / denom;
      cov(i, j) = v;
      cov(j, i) = v;
    }
  }
  return cov;
}

ChainMoments forward_chain_moments(const NoiseSchedule& sched, int dim,
                                   int64_t trials, int max_step, uint64_t seed,
                                   ChainStart start) {
  check_chain(sched, dim, trials, max_step);
  const int64_t blocks = num_blocks(trials);
  std::vector<BlockSums> sums(static_cast<size_t>(blocks));
#pragma omp parallel for schedule(dynamic)
  for (int64_t b = 0; b < blocks; ++b) {
    sums[b] = chain_block(sched, dim, b * kTrajectoryBlock,
                          std::min(trials, (b + 1) * kTrajectoryBlock),
                          max_step, seed, start);
  }
  return finish_moments(sums, dim, trials, max_step);
}

}  // namespace parallel

}  // namespace genaudio::kernels

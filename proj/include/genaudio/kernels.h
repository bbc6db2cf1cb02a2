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

// Data-parallel inner loops. Each kernel has a plain serial version, kept as
// the reference the tests compare against, and an OpenMP version. Both
// produce bit-identical results: work is split so that every output element
// is reduced in the same order regardless of thread count.

#ifndef GENAUDIO_KERNELS_H_
#define GENAUDIO_KERNELS_H_

#include <cstdint>
#include <span>

#include "genaudio/diffusion.h"
#include "genaudio/mel.h"
#include "genaudio/types.h"

namespace genaudio::kernels {

/// Per-step, per-coordinate sample moments of simulated forward chains.
/// Row n-1 holds step n.
struct ChainMoments {
  RowMatrix mean;
  RowMatrix variance;  // unbiased, divisor trials - 1
  int64_t trials = 0;
};

enum class ChainStart {
  kZero,            // z_0 = 0
  kStandardNormal,  // z_0 ~ N(0, I)
};

// Trajectories are grouped in fixed-size blocks; each block accumulates its
// sums serially, then blocks are combined in index order.
inline constexpr int64_t kTrajectoryBlock = 1024;

namespace serial {

RowMatrix log_mel_frames(std::span<const double> signal,
                         const RowMatrix& filterbank, const MelConfig& config,
                         int frames);

// Unbiased covariance of the rows of `x` about `mean`, symmetrized.
Matrix covariance(const RowMatrix& x, const Vector& mean);

ChainMoments forward_chain_moments(const NoiseSchedule& sched, int dim,
                                   int64_t trials, int max_step, uint64_t seed,
                                   ChainStart start);

}  // namespace serial

namespace parallel {

RowMatrix log_mel_frames(std::span<const double> signal,
                         const RowMatrix& filterbank, const MelConfig& config,
                         int frames);

Matrix covariance(const RowMatrix& x, const Vector& mean);

ChainMoments forward_chain_moments(const NoiseSchedule& sched, int dim,
                                   int64_t trials, int max_step, uint64_t seed,
                                   ChainStart start);

}  // namespace parallel

}  // namespace genaudio::kernels

#endif  // GENAUDIO_KERNELS_H_

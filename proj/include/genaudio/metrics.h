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

// Set-level scores between generated and reference audio.
//
//   FD / FAD  Frechet distance between Gaussians fitted to two embedding sets:
//             |mu1 - mu2|^2 + Tr(S1 + S2 - 2 (S1^1/2 S2 S1^1/2)^1/2).
//             FD and FAD are the same computation over different backbones.
//   IS        exp(mean_i KL(p(y|x_i) || p(y))), p(y) the mean posterior.
//   KL        mean_i KL(p_ref_i || p_gen_i) over clips paired by id.
//
// Class posteriors are softmax(logits); logs are natural (nats).

#ifndef GENAUDIO_METRICS_H_
#define GENAUDIO_METRICS_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "genaudio/backbone.h"
#include "genaudio/types.h"

namespace genaudio {

struct GaussianStats {
  Vector mean;
  Matrix cov;
  Eigen::Index n = 0;
};

/// Sample mean and unbiased (N - 1) covariance, symmetrized.
GaussianStats gaussian_stats(const EmbeddingSet& set);
GaussianStats gaussian_stats(const RowMatrix& rows);

/// Square root of a symmetric PSD matrix via symmetric eigendecomposition.
/// Eigenvalues in [-1e-8 * trace, 0) are clamped to zero; anything more
/// negative throws kNotPositiveSemidefinite.
Matrix sqrtm_psd(const Matrix& a);

// Relative symmetry tolerance accepted by sqrtm_psd.
inline constexpr double kSymmetryTolerance = 1e-9;
// Negative eigenvalues down to -kPsdClamp * trace are treated as zero.
inline constexpr double kPsdClamp = 1e-8;
// Diagonal jitter, as a fraction of trace / D, for degenerate covariances.
inline constexpr double kCovarianceJitter = 1e-6;
// Computed distances in [-kNegativeDistanceSlack, 0) are reported as 0.
inline constexpr double kNegativeDistanceSlack = 1e-6;

struct FrechetResult {
  double distance = 0.0;
  bool jittered = false;  // a degenerate covariance was regularized
};

FrechetResult frechet(const GaussianStats& a, const GaussianStats& b);
double frechet_distance(const GaussianStats& a, const GaussianStats& b);

/// Row-wise softmax, stable under large logits.
RowMatrix softmax_rows(const RowMatrix& logits);

double inception_score(const EmbeddingSet& set);

/// Removes a trailing "#<kind>@<fraction>" corruption tag.
std::string_view strip_corruption_suffix(std::string_view id);

/// KL(reference || generated), averaged over pairs matched by id.
double kl_divergence(const EmbeddingSet& generated,
                     const EmbeddingSet& reference);

enum class Metric { kFd, kIsc, kKl, kFad };

std::string_view metric_name(Metric m);
/// Parses "fd,isc,kl,fad" (any subset, any order).
std::vector<Metric> parse_metric_list(std::string_view list);

struct MetricReport {
  std::optional<double> fd;
  std::optional<double> isc;
  std::optional<double> kl;
  std::optional<double> fad;
  std::string fd_backbone;
  std::string fad_backbone;
  std::string logits_backbone;
  int64_t n_generated = 0;
  int64_t n_reference = 0;
  std::string kl_direction = "ref||gen";
  std::string config_digest;
  std::vector<std::string> notes;

  bool operator==(const MetricReport&) const = default;
};

/// Embeddings of both sets from one backbone.
struct SetPair {
  const EmbeddingSet& generated;
  const EmbeddingSet& reference;
};

/// `main` feeds FD, IS and KL; `fad` feeds FAD. Only requested scores are
/// filled. Errors are re-thrown tagged with the metric name.
MetricReport evaluate_all(const SetPair& main, const SetPair& fad,
                          const std::vector<Metric>& requested);

/// Desk-mode form: one backbone serves every metric.
MetricReport evaluate_all(const EmbeddingSet& generated,
                          const EmbeddingSet& reference,
                          const std::vector<Metric>& requested);

/// Summary of the conventions a report was computed under.
std::string metrics_config_digest();

}  // namespace genaudio

#endif  // GENAUDIO_METRICS_H_

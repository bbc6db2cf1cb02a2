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

#include "genaudio/metrics.h"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "genaudio/error.h"
#include "genaudio/kernels.h"

namespace genaudio {
namespace {

// A covariance whose smallest eigenvalue is below this fraction of its
// largest is treated as rank deficient.
constexpr double kDegenerateRatio = 1e-12;

struct Regularized {
  Matrix cov;
  bool jittered = false;
};

Regularized regularize(const Matrix& cov) {
  Regularized r{cov, false};
  const Eigen::Index d = cov.rows();
  const double trace = cov.trace();
  if (d == 0 || !(trace > 0.0)) return r;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(cov, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (lo <= kDegenerateRatio * hi) {
    r.cov.diagonal().array() += kCovarianceJitter * trace / static_cast<double>(d);
    r.jittered = true;
  }
  return r;
}

RowMatrix log_softmax_rows(const RowMatrix& logits) {
  RowMatrix out(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double peak = logits.row(i).maxCoeff();
    double sum = 0.0;
    for (Eigen::Index c = 0; c < logits.cols(); ++c) {
      sum += std::exp(logits(i, c) - peak);
    }
    const double lse = peak + std::log(sum);
    for (Eigen::Index c = 0; c < logits.cols(); ++c) {
      out(i, c) = logits(i, c) - lse;
    }
  }
  return out;
}

// sum_c p_c (log p_c - log q_c), skipping classes where p underflowed.
double kl_row(const double* log_p, const double* log_q, Eigen::Index classes) {
  double kl = 0.0;
  for (Eigen::Index c = 0; c < classes; ++c) {
    const double p = std::exp(log_p[c]);
    if (p == 0.0) continue;
    kl += p * (log_p[c] - log_q[c]);
  }
  return kl;
}

const RowMatrix& require_logits(const EmbeddingSet& set, const char* role) {
  if (!set.logits) {
    throw Error(ErrorCode::kMissingLogits,
                std::string(role) + " set from '" + set.backbone_name +
                    "' carries no logits");
  }
  return *set.logits;
}

template <typename Fn>
auto tagged(Metric m, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    rethrow_with_context(e, std::string(metric_name(m)));
  }
}

}  // namespace

GaussianStats gaussian_stats(const RowMatrix& rows) {
  if (rows.rows() < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "Gaussian fit needs at least 2 rows, got " +
                    std::to_string(rows.rows()));
  }
  GaussianStats s;
  s.n = rows.rows();
  s.mean = rows.colwise().mean().transpose();
  s.cov = kernels::parallel::covariance(rows, s.mean);
  return s;
}

GaussianStats gaussian_stats(const EmbeddingSet& set) {
  return gaussian_stats(set.embeddings);
}

Matrix sqrtm_psd(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "sqrtm needs a square matrix");
  }
  if (!a.allFinite()) {
    throw Error(ErrorCode::kNonFiniteValues, "sqrtm input");
  }
  const double norm = a.norm();
  if ((a - a.transpose()).norm() > kSymmetryTolerance * std::max(1.0, norm)) {
    throw Error(ErrorCode::kNotPositiveSemidefinite, "matrix is not symmetric");
  }
  const Matrix sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorCode::kNumericFailure, "eigendecomposition did not converge");
  }
  const double floor = -kPsdClamp * std::abs(sym.trace());
  const Vector& lambda = eig.eigenvalues();
  if (lambda.size() > 0 && lambda.minCoeff() < floor) {
    std::ostringstream msg;
    msg << "eigenvalue " << lambda.minCoeff() << " below clamp threshold "
        << floor;
    throw Error(ErrorCode::kNotPositiveSemidefinite, msg.str());
  }
  const Vector root = lambda.cwiseMax(0.0).cwiseSqrt();
  const Matrix& v = eig.eigenvectors();
  const Matrix r = v * root.asDiagonal() * v.transpose();
  return 0.5 * (r + r.transpose());
}

FrechetResult frechet(const GaussianStats& a, const GaussianStats& b) {
  const Eigen::Index d = a.mean.size();
  if (b.mean.size() != d || a.cov.rows() != d || a.cov.cols() != d ||
      b.cov.rows() != d || b.cov.cols() != d) {
    throw Error(ErrorCode::kDimensionMismatch,
                "Gaussian dimensions " + std::to_string(d) + " and " +
                    std::to_string(b.mean.size()));
  }
  // Identical inputs are exactly zero apart; the trace formula would only
  // reproduce that up to rounding.
  if (a.mean == b.mean && a.cov == b.cov) return {0.0, false};

  const Regularized ra = regularize(a.cov);
  const Regularized rb = regularize(b.cov);
  const Matrix root_a = sqrtm_psd(ra.cov);
  Matrix inner = root_a * rb.cov * root_a;
  inner = 0.5 * (inner + inner.transpose());
  const double cross = sqrtm_psd(inner).trace();

  const double distance = (a.mean - b.mean).squaredNorm() + ra.cov.trace() +
                          rb.cov.trace() - 2.0 * cross;
  if (!std::isfinite(distance)) {
    throw Error(ErrorCode::kNumericFailure, "Frechet distance is not finite");
  }
  if (distance < -kNegativeDistanceSlack) {
    throw Error(ErrorCode::kNumericFailure,
                "Frechet distance " + std::to_string(distance) +
                    " is negative beyond rounding");
  }
  return {std::max(distance, 0.0), ra.jittered || rb.jittered};
}

double frechet_distance(const GaussianStats& a, const GaussianStats& b) {
  return frechet(a, b).distance;
}

RowMatrix softmax_rows(const RowMatrix& logits) {
  return log_softmax_rows(logits).array().exp().matrix();
}

double inception_score(const EmbeddingSet& set) {
  const RowMatrix& logits = require_logits(set, "scored");
  const Eigen::Index n = logits.rows();
  const Eigen::Index classes = logits.cols();
  if (n < 1) throw Error(ErrorCode::kEmptyInput, "inception score on 0 rows");

  const RowMatrix log_p = log_softmax_rows(logits);
  const Vector marginal =
      log_p.array().exp().matrix().colwise().mean().transpose();
  const Vector log_marginal = marginal.array().log().matrix();

  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    total += kl_row(log_p.row(i).data(), log_marginal.data(), classes);
  }
  const double mean_kl = std::max(0.0, total / static_cast<double>(n));
  return std::exp(mean_kl);
}

std::string_view strip_corruption_suffix(std::string_view id) {
  const size_t hash = id.rfind('#');
  if (hash == std::string_view::npos) return id;
  if (id.find('@', hash) == std::string_view::npos) return id;
  return id.substr(0, hash);
}

double kl_divergence(const EmbeddingSet& generated,
                     const EmbeddingSet& reference) {
  const RowMatrix& gen_logits = require_logits(generated, "generated");
  const RowMatrix& ref_logits = require_logits(reference, "reference");
  if (gen_logits.cols() != ref_logits.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "class counts " + std::to_string(gen_logits.cols()) + " vs " +
                    std::to_string(ref_logits.cols()));
  }

  std::map<std::string_view, size_t> gen_by_id;
  for (size_t i = 0; i < generated.ids.size(); ++i) {
    const std::string_view key = strip_corruption_suffix(generated.ids[i]);
    if (!gen_by_id.emplace(key, i).second) {
      throw Error(ErrorCode::kDuplicateId,
                  "two generated clips pair with '" + std::string(key) + "'");
    }
  }
  // Ordered by id so the mean does not depend on input order.
  std::map<std::string_view, std::pair<size_t, size_t>> pairs;
  for (size_t j = 0; j < reference.ids.size(); ++j) {
    const std::string_view key = strip_corruption_suffix(reference.ids[j]);
    auto it = gen_by_id.find(key);
    if (it == gen_by_id.end()) {
      throw Error(ErrorCode::kUnpairedId,
                  "reference clip '" + reference.ids[j] +
                      "' has no generated counterpart");
    }
    if (!pairs.emplace(key, std::make_pair(it->second, j)).second) {
      throw Error(ErrorCode::kDuplicateId,
                  "two reference clips pair with '" + std::string(key) + "'");
    }
  }
  for (const auto& [key, index] : gen_by_id) {
    if (!pairs.contains(key)) {
      throw Error(ErrorCode::kUnpairedId,
                  "generated clip '" + generated.ids[index] +
                      "' has no reference counterpart");
    }
  }

  const RowMatrix log_q = log_softmax_rows(gen_logits);
  const RowMatrix log_p = log_softmax_rows(ref_logits);
  double total = 0.0;
  for (const auto& [key, ij] : pairs) {
    total += kl_row(log_p.row(ij.second).data(), log_q.row(ij.first).data(),
                    log_p.cols());
  }
  return std::max(0.0, total / static_cast<double>(pairs.size()));
}

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::kFd: return "fd";
    case Metric::kIsc: return "isc";
    case Metric::kKl: return "kl";
    case Metric::kFad: return "fad";
  }
  return "?";
}

std::vector<Metric> parse_metric_list(std::string_view list) {
  std::vector<Metric> out;
  size_t pos = 0;
  while (pos <= list.size()) {
    const size_t comma = std::min(list.find(',', pos), list.size());
    const std::string_view token = list.substr(pos, comma - pos);
    Metric m;
    if (token == "fd") {
      m = Metric::kFd;
    } else if (token == "isc" || token == "is") {
      m = Metric::kIsc;
    } else if (token == "kl") {
      m = Metric::kKl;
    } else if (token == "fad") {
      m = Metric::kFad;
    } else {
      throw Error(ErrorCode::kInvalidArgument,
                  "unknown metric '" + std::string(token) + "'");
    }
    if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
    pos = comma + 1;
  }
  return out;
}

std::string metrics_config_digest() {
  return "cov=unbiased(n-1);posterior=softmax;kl=ref||gen;sqrtm=eigh;"
         "jitter=1e-6*trace/D";
}

MetricReport evaluate_all(const SetPair& main, const SetPair& fad,
                          const std::vector<Metric>& requested) {
  validate(main.generated);
  validate(main.reference);
  if (main.generated.backbone_name != main.reference.backbone_name ||
      fad.generated.backbone_name != fad.reference.backbone_name) {
    throw Error(ErrorCode::kInvalidArgument,
                "generated and reference embeddings come from different "
                "backbones");
  }

  MetricReport report;
  report.fd_backbone = main.generated.backbone_name;
  report.logits_backbone = main.generated.backbone_name;
  report.fad_backbone = fad.generated.backbone_name;
  report.n_generated = main.generated.size();
  report.n_reference = main.reference.size();
  report.config_digest = metrics_config_digest();

  auto frechet_of = [&](Metric m, const SetPair& sets) {
    return tagged(m, [&] {
      validate(sets.generated);
      validate(sets.reference);
      const FrechetResult r = frechet(gaussian_stats(sets.generated),
                                      gaussian_stats(sets.reference));
      if (r.jittered) {
        report.notes.push_back(std::string(metric_name(m)) +
                               ": degenerate covariance regularized with "
                               "1e-6*trace/D diagonal jitter");
      }
      return r.distance;
    });
  };

  for (Metric m : requested) {
    switch (m) {
      case Metric::kFd:
        report.fd = frechet_of(m, main);
        break;
      case Metric::kFad:
        report.fad = frechet_of(m, fad);
        break;
      case Metric::kIsc:
        report.isc = tagged(m, [&] { return inception_score(main.generated); });
        break;
      case Metric::kKl:
        report.kl = tagged(
            m, [&] { return kl_divergence(main.generated, main.reference); });
        break;
    }
  }
  return report;
}

MetricReport evaluate_all(const EmbeddingSet& generated,
                          const EmbeddingSet& reference,
                          const std::vector<Metric>& requested) {
  const SetPair pair{generated, reference};
  return evaluate_all(pair, pair, requested);
}

}  // namespace genaudio

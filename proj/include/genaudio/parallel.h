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

#ifndef GENAUDIO_PARALLEL_H_
#define GENAUDIO_PARALLEL_H_

#include <cstddef>
#include <exception>
#include <vector>

namespace genaudio {

inline constexpr const char* kThreadsEnvVar = "GENAUDIO_EVAL_THREADS";

/// Applies GENAUDIO_EVAL_THREADS (a positive integer) as the OpenMP thread
/// cap; unset or invalid leaves the hardware default. Returns the cap in use.
int configure_threads_from_env();

void set_max_threads(int threads);
int max_threads();

/// Sets the OpenMP thread cap for the lifetime of the guard.
class ScopedThreads {
 public:
  explicit ScopedThreads(int threads);
  ~ScopedThreads();
  ScopedThreads(const ScopedThreads&) = delete;
  ScopedThreads& operator=(const ScopedThreads&) = delete;

 private:
  int previous_;
};

/// Runs fn(i) for i in [0, n) across OpenMP threads. Exceptions cannot
/// leave a parallel region, so they are collected and the one from the
/// lowest index is re-thrown after the loop.
template <typename Fn>
void parallel_for(size_t n, Fn&& fn) {
  std::vector<std::exception_ptr> failures(n);
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < count; ++i) {
    try {
      fn(static_cast<size_t>(i));
    } catch (...) {
      failures[static_cast<size_t>(i)] = std::current_exception();
    }
  }
  for (const std::exception_ptr& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
}

}  // namespace genaudio

#endif  // GENAUDIO_PARALLEL_H_

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

#include "genaudio/parallel.h"

#include <omp.h>

#include <charconv>
#include <cstdlib>
#include <cstring>

namespace genaudio {

int configure_threads_from_env() {
  const char* env = std::getenv(kThreadsEnvVar);
  if (env != nullptr) {
    int threads = 0;
    const char* end = env + std::strlen(env);
    const auto res = std::from_chars(env, end, threads);
    if (res.ec == std::errc() && res.ptr == end && threads > 0) {
      omp_set_num_threads(threads);
    }
  }
  return omp_get_max_threads();
}

void set_max_threads(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

int max_threads() { return omp_get_max_threads(); }

ScopedThreads::ScopedThreads(int threads) : previous_(omp_get_max_threads()) {
  set_max_threads(threads);
}

ScopedThreads::~ScopedThreads() { omp_set_num_threads(previous_); }

}  // namespace genaudio

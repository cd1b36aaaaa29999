// Copyright 2026 The rankfuse Authors.
// SPDX-License-Identifier: Apache-2.0

#include "rankfuse/parallel.hpp"

#include <cstdlib>
#include <string_view>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "text_util.hpp"

namespace rankfuse {

namespace {
#ifdef _OPENMP
const int kDefaultThreads = omp_get_max_threads();
#endif
}  // namespace

void set_thread_count(int threads) {
#ifdef _OPENMP
  omp_set_num_threads(threads > 0 ? threads : kDefaultThreads);
#else
  (void)threads;
#endif
}

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

std::optional<int> threads_from_env() {
  const char* value = std::getenv("RANKFUSE_THREADS");
  if (value == nullptr) return std::nullopt;
  auto n = detail::parse_int(value);
  if (!n || *n < 0 || *n > 4096) return std::nullopt;
  return static_cast<int>(*n);
}

}  // namespace rankfuse

// Copyright 2026 The rankfuse Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>

namespace rankfuse {

/// Worker count for the OpenMP kernels; 0 restores the runtime default.
void set_thread_count(int threads);
int thread_count();

/// RANKFUSE_THREADS, if set to a non-negative integer.
std::optional<int> threads_from_env();

}  // namespace rankfuse

// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace gliomics {

// 0 or negative -> hardware concurrency.
int resolve_threads(int requested);

// Runs body(i) for i in [0, n). Work units must be independent and write
// results only to their own index; then serial and parallel runs produce
// identical output. Exceptions from workers are rethrown on the caller.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace gliomics

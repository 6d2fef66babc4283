// Copyright 2026 The rankfair Authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

#pragma once

#include <cstddef>
#include <functional>

namespace rankfair {

/// Worker count resolution: explicit argument > RANKFAIR_WORKERS env var >
/// hardware concurrency. Returns at least 1.
int resolve_workers(int requested = 0);

/// Runs fn(begin, end) over contiguous stripes of [0, n) on `workers`
/// threads. fn must only touch disjoint output slots; results are therefore
/// independent of scheduling. Exceptions from workers are rethrown on the
/// calling thread.
void parallel_for(std::size_t n, int workers,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace rankfair

// Copyright 2026 The freqbrdf Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FREQBRDF_PARALLEL_HPP_
#define FREQBRDF_PARALLEL_HPP_

#include <functional>

namespace freqbrdf {

// Worker count used by parallel_for. Zero selects the hardware concurrency.
void set_thread_count(int threads);
int thread_count();

// Calls fn(i) for i in [0, n) on the worker pool. Work items must write to
// disjoint memory; results do not depend on the thread count.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace freqbrdf

#endif  // FREQBRDF_PARALLEL_HPP_

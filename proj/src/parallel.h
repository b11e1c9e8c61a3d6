// Copyright 2026 The spingo Authors
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

#ifndef SPINGO_SRC_PARALLEL_H_
#define SPINGO_SRC_PARALLEL_H_

#include <algorithm>
#include <cstddef>
#include <future>
#include <vector>

namespace spingo::detail {

// Calls fn(i) for every i < n on up to `threads` workers, worker w taking
// i = w, w + threads, ... The first exception thrown by a worker is rethrown.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  threads = static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(threads, n)));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::future<void>> workers;
  workers.reserve(threads);
  for (unsigned w = 0; w < threads; ++w)
    workers.push_back(std::async(std::launch::async, [&fn, n, threads, w] {
      for (std::size_t i = w; i < n; i += threads) fn(i);
    }));
  for (auto& f : workers) f.wait();
  for (auto& f : workers) f.get();
}

}  // namespace spingo::detail

#endif  // SPINGO_SRC_PARALLEL_H_

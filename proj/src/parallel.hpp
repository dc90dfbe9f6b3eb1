// Copyright 2026 The bridgetrunc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BRIDGETRUNC_SRC_PARALLEL_HPP_
#define BRIDGETRUNC_SRC_PARALLEL_HPP_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace bridgetrunc::detail {

// Runs body(i) for i in [0, count). Work is handed out through a shared
// counter; body must only write to slots owned by i. If several calls throw,
// the exception of the lowest index is rethrown.
template <class Body>
void parallel_for(std::size_t count, std::size_t threads, Body&& body) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::size_t> error_index(threads, count);
  auto worker = [&](std::size_t w) {
    for (;;) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count || stop.load(std::memory_order_relaxed)) return;
      try {
        body(i);
      } catch (...) {
        errors[w] = std::current_exception();
        error_index[w] = i;
        stop = true;
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads - 1);
  for (std::size_t w = 1; w < threads; ++w) pool.emplace_back(worker, w);
  worker(0);
  for (auto& t : pool) t.join();
  std::size_t best = threads;
  for (std::size_t w = 0; w < threads; ++w) {
    if (errors[w] && (best == threads || error_index[w] < error_index[best])) best = w;
  }
  if (best != threads) std::rethrow_exception(errors[best]);
}

}  // namespace bridgetrunc::detail

#endif  // BRIDGETRUNC_SRC_PARALLEL_HPP_

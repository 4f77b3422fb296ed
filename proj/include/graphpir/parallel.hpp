// Copyright 2026 The graphpir Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

namespace gpir {

/// Index-ordered parallel map. Results come back in index order regardless
/// of the worker count, so reductions over them are deterministic.
class ParallelMap {
 public:
  explicit ParallelMap(unsigned workers = 1) : workers_(std::max(1U, workers)) {}

  static ParallelMap hardware() { return ParallelMap(std::max(1U, std::thread::hardware_concurrency())); }

  unsigned workers() const noexcept { return workers_; }

  template <typename F>
  auto operator()(std::size_t count, F&& fn) const -> std::vector<std::invoke_result_t<F&, std::size_t>> {
    using R = std::invoke_result_t<F&, std::size_t>;
    std::vector<R> out(count);
    const auto threads = std::min<std::size_t>(workers_, count);
    if (threads <= 1) {
      for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
      return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    {
      std::vector<std::jthread> pool;
      for (std::size_t t = 0; t < threads; ++t)
        pool.emplace_back([&] {
          for (std::size_t i; (i = next.fetch_add(1)) < count;) {
            try {
              out[i] = fn(i);
            } catch (...) {
              std::lock_guard lock(error_mu);
              if (!error) error = std::current_exception();
            }
          }
        });
    }
    if (error) std::rethrow_exception(error);
    return out;
  }

 private:
  unsigned workers_;
};

/// Splits [0, total) into chunks of at most `chunk` items.
struct ChunkRange {
  std::size_t begin;
  std::size_t end;
};

inline std::vector<ChunkRange> chunk_ranges(std::size_t total, std::size_t chunk) {
  std::vector<ChunkRange> out;
  for (std::size_t b = 0; b < total; b += chunk) out.push_back({b, std::min(total, b + chunk)});
  return out;
}

}  // namespace gpir

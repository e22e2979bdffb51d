// Copyright 2026 The erblock Authors.
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

#include "erblock/engine.hpp"

#include <algorithm>
#include <exception>
#include <stdexcept>
#include <thread>

namespace erblock::engine {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

unsigned resolve_workers(const EngineOptions& options) {
  if (options.workers > 0) return options.workers;
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

void parallel_for(std::size_t taskCount, unsigned workers,
                  const std::function<void(std::size_t)>& body) {
  if (taskCount == 0) return;
  if (workers <= 1 || taskCount == 1) {
    for (std::size_t i = 0; i < taskCount; ++i) body(i);
    return;
  }
  const unsigned threadCount =
      static_cast<unsigned>(std::min<std::size_t>(workers, taskCount));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(taskCount);
  std::vector<std::thread> threads;
  threads.reserve(threadCount);
  for (unsigned t = 0; t < threadCount; ++t) {
    threads.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= taskCount) return;
        try {
          body(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<PairTask> pairwise_tasks(std::size_t partitionCount) {
  if (partitionCount == 0) {
    throw std::invalid_argument("pairwise_tasks: no partitions");
  }
  std::vector<PairTask> tasks;
  tasks.reserve(partitionCount * (partitionCount + 1) / 2);
  for (std::size_t i = 0; i < partitionCount; ++i) {
    for (std::size_t j = i; j < partitionCount; ++j) {
      tasks.push_back(PairTask{i, j});
    }
  }
  return tasks;
}

}  // namespace erblock::engine

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
//
// Local data-parallel map / shuffle / reduce substrate.  Shuffle keys are
// byte strings grouped by exact equality; key groups are assigned to reduce
// workers by 64-bit FNV-1a modulo the worker count.  Results never depend
// on the worker count, only scheduling does.

#ifndef ERBLOCK_ENGINE_HPP_
#define ERBLOCK_ENGINE_HPP_

#include <atomic>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "erblock/errors.hpp"

namespace erblock::engine {

struct EngineOptions {
  unsigned workers = 0;  // 0 = available parallelism
  std::uint64_t memoryCeilingBytes = 4ull << 30;
};

std::uint64_t fnv1a64(std::string_view bytes);

unsigned resolve_workers(const EngineOptions& options);

// Runs body(0..taskCount) across `workers` threads.  The first failing
// task's exception (by task index) is rethrown after all threads join.
void parallel_for(std::size_t taskCount, unsigned workers,
                  const std::function<void(std::size_t)>& body);

struct PairTask {
  std::size_t left;   // partition index, left <= right
  std::size_t right;

  friend bool operator==(const PairTask&, const PairTask&) = default;
};

// All m(m+1)/2 unordered partition pairs, each exactly once.
std::vector<PairTask> pairwise_tasks(std::size_t partitionCount);

template <class Record>
struct PartitionedDataset {
  std::vector<std::vector<Record>> partitions;

  static PartitionedDataset split(std::vector<Record> records,
                                  std::size_t partitionCount) {
    if (partitionCount == 0) partitionCount = 1;
    PartitionedDataset out;
    out.partitions.resize(partitionCount);
    const std::size_t n = records.size();
    const std::size_t chunk = (n + partitionCount - 1) / partitionCount;
    std::size_t at = 0;
    for (auto& part : out.partitions) {
      const std::size_t end = std::min(n, at + chunk);
      part.assign(std::make_move_iterator(records.begin() + at),
                  std::make_move_iterator(records.begin() + end));
      at = end;
    }
    return out;
  }

  std::size_t recordCount() const {
    std::size_t n = 0;
    for (const auto& p : partitions) n += p.size();
    return n;
  }
};

// map: Record -> vector<pair<string, V>>; reduce: (key, values) -> vector<Out>.
// Equivalent to mapping every record, grouping emissions by key and reducing
// each group.  Output is the concatenation of per-key reduce results in
// byte-sorted key order, so it is deterministic for a fixed input.
template <class Record, class MapFn, class ReduceFn>
auto map_group_reduce(const PartitionedDataset<Record>& input, MapFn&& mapFn,
                      ReduceFn&& reduceFn, const EngineOptions& options = {}) {
  using Emitted = std::invoke_result_t<MapFn&, const Record&>;
  using V = typename Emitted::value_type::second_type;
  using OutVec = std::invoke_result_t<ReduceFn&, const std::string&,
                                      const std::vector<V>&>;
  using Out = typename OutVec::value_type;

  const unsigned workers = resolve_workers(options);
  const std::size_t partitionCount = input.partitions.size();

  std::vector<Emitted> perPartition(partitionCount);
  std::atomic<std::uint64_t> emittedBytes{0};
  parallel_for(partitionCount, workers, [&](std::size_t p) {
    Emitted local;
    const auto& records = input.partitions[p];
    for (std::size_t r = 0; r < records.size(); ++r) {
      Emitted emitted;
      try {
        emitted = mapFn(records[r]);
      } catch (const std::exception& e) {
        throw JobError("map failed for record " + std::to_string(p) + ":" +
                       std::to_string(r) + ": " + e.what());
      }
      std::uint64_t bytes = 0;
      for (const auto& kv : emitted) bytes += kv.first.size() + sizeof(V) + 16;
      if (emittedBytes.fetch_add(bytes) + bytes > options.memoryCeilingBytes) {
        throw ResourceLimitError(
            "map output exceeded the memory ceiling of " +
            std::to_string(options.memoryCeilingBytes) + " bytes");
      }
      local.insert(local.end(), std::make_move_iterator(emitted.begin()),
                   std::make_move_iterator(emitted.end()));
    }
    perPartition[p] = std::move(local);
  });

  // Shuffle: group by key; values keep (partition, emission) order.
  std::unordered_map<std::string, std::vector<V>> groups;
  for (auto& emitted : perPartition) {
    for (auto& [key, value] : emitted) {
      groups[std::move(key)].push_back(std::move(value));
    }
    emitted.clear();
    emitted.shrink_to_fit();
  }

  std::vector<const std::string*> keys;
  keys.reserve(groups.size());
  for (const auto& [key, values] : groups) keys.push_back(&key);
  std::sort(keys.begin(), keys.end(),
            [](const std::string* a, const std::string* b) { return *a < *b; });

  std::vector<OutVec> perKey(keys.size());
  parallel_for(workers, workers, [&](std::size_t w) {
    for (std::size_t k = 0; k < keys.size(); ++k) {
      if (fnv1a64(*keys[k]) % workers != w) continue;
      try {
        perKey[k] = reduceFn(*keys[k], groups.at(*keys[k]));
      } catch (const JobError&) {
        throw;
      } catch (const std::exception& e) {
        throw JobError("reduce failed for key '" + *keys[k] + "': " + e.what());
      }
    }
  });

  std::vector<Out> output;
  for (auto& outs : perKey) {
    output.insert(output.end(), std::make_move_iterator(outs.begin()),
                  std::make_move_iterator(outs.end()));
  }
  return output;
}

}  // namespace erblock::engine

#endif  // ERBLOCK_ENGINE_HPP_

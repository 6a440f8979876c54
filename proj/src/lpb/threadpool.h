// Copyright 2026 The lpbench Authors
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

#ifndef LPB_THREADPOOL_H_
#define LPB_THREADPOOL_H_

#include <condition_variable>
#include <cstdint>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace lpb {

// Shared worker pool. parallel_for splits [0, n) into disjoint contiguous
// ranges, so every output element is written by exactly one thread and
// results are identical for any pool size. Nested calls run inline.
class ThreadPool {
 public:
  static ThreadPool& instance();

  // Marks the current thread as already owning its core (e.g. episode-level
  // workers), so nested parallel_for calls run inline instead of contending.
  class InlineScope {
   public:
    InlineScope();
    ~InlineScope();

   private:
    bool prev_;
  };

  int size() const { return static_cast<int>(workers_.size()) + 1; }

  // fn(begin, end) over disjoint ranges covering [0, n).
  void parallel_for(int64_t n, int64_t grain,
                    const std::function<void(int64_t, int64_t)>& fn);

  ~ThreadPool();

 private:
  ThreadPool();
  void worker_loop();

  std::vector<std::thread> workers_;
  std::mutex mu_;
  std::condition_variable work_cv_;
  std::condition_variable done_cv_;
  const std::function<void(int64_t, int64_t)>* job_ = nullptr;
  std::vector<std::pair<int64_t, int64_t>> ranges_;
  size_t next_range_ = 0;
  int active_ = 0;
  uint64_t generation_ = 0;
  bool stop_ = false;
};

}  // namespace lpb

#endif  // LPB_THREADPOOL_H_

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

#include "lpb/threadpool.h"

#include <algorithm>
#include <cstdlib>

namespace lpb {
namespace {

thread_local bool tl_in_pool = false;

int pool_threads() {
  if (const char* env = std::getenv("LPB_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return std::min(n, 64);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(std::min(hw, 16u));
}

}  // namespace

ThreadPool& ThreadPool::instance() {
  static ThreadPool* pool = new ThreadPool();  // leaked on purpose
  return *pool;
}

ThreadPool::InlineScope::InlineScope() : prev_(tl_in_pool) {
  tl_in_pool = true;
}

ThreadPool::InlineScope::~InlineScope() { tl_in_pool = prev_; }

ThreadPool::ThreadPool() {
  int n = pool_threads();
  for (int i = 1; i < n; ++i) {
    workers_.emplace_back([this] { worker_loop(); });
  }
}

ThreadPool::~ThreadPool() {
  {
    std::lock_guard<std::mutex> lock(mu_);
    stop_ = true;
  }
  work_cv_.notify_all();
  for (auto& t : workers_) t.join();
}

void ThreadPool::worker_loop() {
  tl_in_pool = true;
  uint64_t seen = 0;
  while (true) {
    const std::function<void(int64_t, int64_t)>* job = nullptr;
    {
      std::unique_lock<std::mutex> lock(mu_);
      work_cv_.wait(lock, [&] { return stop_ || generation_ != seen; });
      if (stop_) return;
      seen = generation_;
      job = job_;
    }
    while (true) {
      std::pair<int64_t, int64_t> range;
      {
        std::lock_guard<std::mutex> lock(mu_);
        if (next_range_ >= ranges_.size()) break;
        range = ranges_[next_range_++];
      }
      (*job)(range.first, range.second);
    }
    {
      std::lock_guard<std::mutex> lock(mu_);
      if (--active_ == 0) done_cv_.notify_all();
    }
  }
}

void ThreadPool::parallel_for(int64_t n, int64_t grain,
                              const std::function<void(int64_t, int64_t)>& fn) {
  if (n <= 0) return;
  if (grain < 1) grain = 1;
  int nthreads = size();
  if (tl_in_pool || nthreads == 1 || n <= grain) {
    fn(0, n);
    return;
  }
  int64_t chunk = std::max(grain, (n + nthreads - 1) / nthreads);
  std::vector<std::pair<int64_t, int64_t>> ranges;
  for (int64_t b = 0; b < n; b += chunk) {
    ranges.emplace_back(b, std::min(n, b + chunk));
  }
  if (ranges.size() == 1) {
    fn(0, n);
    return;
  }
  {
    std::lock_guard<std::mutex> lock(mu_);
    job_ = &fn;
    ranges_ = std::move(ranges);
    next_range_ = 0;
    active_ = static_cast<int>(workers_.size());
    ++generation_;
  }
  work_cv_.notify_all();
  // Main thread participates.
  while (true) {
    std::pair<int64_t, int64_t> range;
    {
      std::lock_guard<std::mutex> lock(mu_);
      if (next_range_ >= ranges_.size()) break;
      range = ranges_[next_range_++];
    }
    fn(range.first, range.second);
  }
  std::unique_lock<std::mutex> lock(mu_);
  done_cv_.wait(lock, [&] { return active_ == 0; });
  job_ = nullptr;
}

}  // namespace lpb

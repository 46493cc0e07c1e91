// Copyright 2026 codazzi-lab developers
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

#pragma once

#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace codazzi {

/// Worker count: CODAZZI_THREADS when set, else hardware concurrency.
inline int thread_count() {
  if (const char* env = std::getenv("CODAZZI_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

/// Run fn(i) for i in [0, n) over contiguous chunks.  Work items must write
/// disjoint outputs; reductions happen after the join, so results do not
/// depend on the thread count.
template <class Fn>
void parallel_for(long n, Fn fn) {
  int nw = thread_count();
  if (nw <= 1 || n < 256) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> workers;
  std::exception_ptr err;
  std::mutex err_mu;
  long chunk = (n + nw - 1) / nw;
  for (int w = 0; w < nw; ++w) {
    long lo = w * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    workers.emplace_back([&, lo, hi] {
      try {
        for (long i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!err) err = std::current_exception();
      }
    });
  }
  for (auto& t : workers) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace codazzi

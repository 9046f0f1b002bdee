#include "meshsrr/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace meshsrr {

namespace {

constexpr std::size_t kMinWorkPerThread = 1u << 16;

std::size_t read_thread_cap() {
  std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MESH_SRR_THREADS")) {
    try {
      long cap = std::stol(env);
      if (cap > 0) return std::min<std::size_t>(hw, static_cast<std::size_t>(cap));
    } catch (...) {
      // unparsable values fall back to the hardware count
    }
  }
  return hw;
}

}  // namespace

std::size_t worker_threads() {
  static const std::size_t cap = read_thread_cap();
  return cap;
}

void parallel_rows(std::size_t count, std::size_t work_per_row,
                   const std::function<void(std::size_t, std::size_t)>& body) {
  if (count == 0) return;
  std::size_t total = count * std::max<std::size_t>(work_per_row, 1);
  std::size_t workers = std::min({worker_threads(), count, total / kMinWorkPerThread});
  if (workers <= 1) {
    body(0, count);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 1; w < workers; ++w) {
    std::size_t begin = w * chunk;
    std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&body, begin, end] { body(begin, end); });
  }
  body(0, std::min(count, chunk));
}

}  // namespace meshsrr

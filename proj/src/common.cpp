#include "curvkit/common.hpp"

#include <cstdlib>

namespace curvkit {

int resolve_jobs(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CURVKIT_JOBS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

void parallel_chunks(std::size_t n, int jobs,
                     const std::function<void(std::size_t, std::size_t, int)>& body) {
  if (n == 0) return;
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
  if (jobs == 1) {
    body(0, n, 0);
    return;
  }
  std::vector<std::thread> pool;
  std::size_t chunk = (n + jobs - 1) / jobs;
  for (int w = 0; w < jobs; ++w) {
    std::size_t b = w * chunk, e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back(body, b, e, w);
  }
  for (auto& t : pool) t.join();
}

}  // namespace curvkit

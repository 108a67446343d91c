#include "bneck/parallel.hpp"

#include <cstdlib>
#include <string>

namespace bneck {
namespace {

std::atomic<int> g_workers{0};

int default_workers() {
  if (const char* env = std::getenv("BOTTLENECK_LAB_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

int worker_count() {
  const int n = g_workers.load();
  return n > 0 ? n : default_workers();
}

void set_worker_count(int count) { g_workers = count > 0 ? count : 0; }

}  // namespace bneck

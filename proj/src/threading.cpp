#include "advlab/threading.hpp"

#include <atomic>
#include <thread>

namespace advlab {

namespace {
std::atomic<int> g_jobs{1};
}

int max_jobs() { return g_jobs.load(std::memory_order_relaxed); }

void set_max_jobs(int jobs) { g_jobs.store(jobs < 1 ? 1 : jobs, std::memory_order_relaxed); }

int hardware_jobs() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

}  // namespace advlab

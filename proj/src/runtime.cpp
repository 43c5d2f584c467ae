#include "pqspec/runtime.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace pqspec {

namespace {

std::size_t clamp_threads(long n) {
    if (n < 1) return 1;
    if (n > 64) return 64;
    return static_cast<std::size_t>(n);
}

std::size_t initial_thread_count() {
    const char* env = std::getenv("PQSPEC_THREADS");
    if (env == nullptr || *env == '\0') return 1;
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end == env) return 1;
    return clamp_threads(n);
}

std::atomic<std::size_t>& state() {
    static std::atomic<std::size_t> n{initial_thread_count()};
    return n;
}

} // namespace

std::size_t thread_count() { return state().load(std::memory_order_relaxed); }

void set_thread_count(std::size_t n) {
    state().store(clamp_threads(static_cast<long>(n)), std::memory_order_relaxed);
}

} // namespace pqspec

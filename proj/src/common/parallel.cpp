#include "sigmak/common/parallel.hpp"

#include <atomic>

namespace sigmak {

namespace {
std::atomic<Exec> g_exec{Exec::parallel};
}

Exec default_exec() noexcept { return g_exec.load(std::memory_order_relaxed); }
void set_default_exec(Exec exec) noexcept { g_exec.store(exec, std::memory_order_relaxed); }

}  // namespace sigmak

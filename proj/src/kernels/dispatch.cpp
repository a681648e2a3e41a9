#include "beststop/kernels.hpp"

#include <atomic>

namespace beststop::kernels {
namespace {

std::atomic<bool> g_force_scalar{false};

const KernelTable& detect() {
    const KernelTable* simd = avx2_table();
    return simd ? *simd : scalar_table();
}

}  // namespace

const KernelTable& active() {
    static const KernelTable& best = detect();
    return g_force_scalar.load(std::memory_order_relaxed) ? scalar_table() : best;
}

void force_scalar(bool on) { g_force_scalar.store(on, std::memory_order_relaxed); }

}  // namespace beststop::kernels

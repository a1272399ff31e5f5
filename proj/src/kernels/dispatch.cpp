#include <atomic>
#include <cstdlib>
#include <string_view>

#include "rfm/kernels/kernels.hpp"

namespace rfm::kernels {

#if defined(RFM_HAVE_AVX2)
namespace avx2 {
const KernelTable& table();
}
#endif

namespace {

bool cpu_has_avx2() {
#if defined(RFM_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const KernelTable& initial_choice() {
    if (const char* env = std::getenv("RFM_KERNELS"); env && std::string_view(env) == "scalar")
        return scalar_kernels();
    if (const KernelTable* t = avx2_kernels()) return *t;
    return scalar_kernels();
}

std::atomic<const KernelTable*>& current() {
    static std::atomic<const KernelTable*> ptr{&initial_choice()};
    return ptr;
}

} // namespace

const KernelTable* avx2_kernels() {
#if defined(RFM_HAVE_AVX2)
    if (cpu_has_avx2()) return &avx2::table();
#endif
    return nullptr;
}

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

bool select(std::string_view name) {
    if (name == "scalar") {
        current().store(&scalar_kernels(), std::memory_order_release);
        return true;
    }
    if (name == "avx2") {
        const KernelTable* t = avx2_kernels();
        if (!t) return false;
        current().store(t, std::memory_order_release);
        return true;
    }
    return false;
}

} // namespace rfm::kernels

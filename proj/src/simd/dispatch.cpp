#include <cstdlib>
#include <string_view>

#include "countdown/simd/kernels.hpp"

namespace countdown::simd {

const char* isaName(Isa isa) {
    switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
    }
    return "unknown";
}

namespace {

const KernelTable& select() {
    if (const char* forced = std::getenv("COUNTDOWN_SIMD"); forced && std::string_view(forced) == "scalar") {
        return scalarKernels();
    }
    if (const auto* t = avx2Kernels()) return *t;
    if (const auto* t = neonKernels()) return *t;
    return scalarKernels();
}

} // namespace

const KernelTable& kernels() {
    static const KernelTable& chosen = select();
    return chosen;
}

} // namespace countdown::simd

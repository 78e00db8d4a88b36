#pragma once

// Data-parallel inner loops with a portable reference implementation and
// vector variants picked at runtime. Every variant produces bit-identical
// results to the reference, including the floating-point reduction order.

#include <cstddef>
#include <cstdint>

namespace countdown::simd {

enum class Isa { Scalar, Avx2, Neon };

const char* isaName(Isa isa);

struct KernelTable {
    Isa isa;
    /// dst[i] = (dst[i] + c * src[i]) mod p, for 2 <= p <= 251 and entries < p.
    void (*axpyModPrime)(std::uint8_t* dst, const std::uint8_t* src, std::uint8_t c, std::size_t len,
                         std::uint8_t p);
    /// dst[i] ^= mulByC[src[i]], entries < 16 (characteristic-2 fields up to 16).
    void (*axpyChar2)(std::uint8_t* dst, const std::uint8_t* src, const std::uint8_t* mulByC, std::size_t len);
    /// sum_i max(0, a[i] - b[i]), reduced over four interleaved accumulators.
    double (*positivePartSum)(const double* a, const double* b, std::size_t len);
};

const KernelTable& scalarKernels();
/// nullptr when not compiled in or not supported by this CPU.
const KernelTable* avx2Kernels();
const KernelTable* neonKernels();

/// Best supported table; COUNTDOWN_SIMD=scalar forces the reference path.
const KernelTable& kernels();

} // namespace countdown::simd

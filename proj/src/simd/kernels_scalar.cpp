#include "countdown/simd/kernels.hpp"

namespace countdown::simd {

namespace {

void axpyModPrime(std::uint8_t* dst, const std::uint8_t* src, std::uint8_t c, std::size_t len, std::uint8_t p) {
    for (std::size_t i = 0; i < len; ++i) {
        dst[i] = static_cast<std::uint8_t>((dst[i] + static_cast<unsigned>(c) * src[i]) % p);
    }
}

void axpyChar2(std::uint8_t* dst, const std::uint8_t* src, const std::uint8_t* mulByC, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) dst[i] ^= mulByC[src[i]];
}

double positivePartSum(const double* a, const double* b, std::size_t len) {
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < len; ++i) {
        const double d = a[i] - b[i];
        acc[i % 4] += d > 0.0 ? d : 0.0;
    }
    return (acc[0] + acc[2]) + (acc[1] + acc[3]);
}

constexpr KernelTable kTable{Isa::Scalar, axpyModPrime, axpyChar2, positivePartSum};

} // namespace

const KernelTable& scalarKernels() { return kTable; }

} // namespace countdown::simd

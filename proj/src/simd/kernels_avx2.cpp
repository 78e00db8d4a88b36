// Compiled with -mavx2; only reached after a runtime CPU check.
#include "countdown/simd/kernels.hpp"

#if defined(__AVX2__)
#include <immintrin.h>

namespace countdown::simd {

namespace {

void axpyModPrime(std::uint8_t* dst, const std::uint8_t* src, std::uint8_t c, std::size_t len, std::uint8_t p) {
    // Barrett reduction in 16-bit lanes: dst + c*src <= 250 + 250*250 < 2^16,
    // and with m = floor(2^16/p) the estimate leaves a remainder below 2p.
    const auto barrett = static_cast<short>(65536 / p);
    const __m256i vc = _mm256_set1_epi16(c);
    const __m256i vp = _mm256_set1_epi16(p);
    const __m256i vm = _mm256_set1_epi16(barrett);
    std::size_t i = 0;
    for (; i + 16 <= len; i += 16) {
        const __m256i s = _mm256_cvtepu8_epi16(_mm_loadu_si128(reinterpret_cast<const __m128i*>(src + i)));
        const __m256i d = _mm256_cvtepu8_epi16(_mm_loadu_si128(reinterpret_cast<const __m128i*>(dst + i)));
        const __m256i x = _mm256_add_epi16(d, _mm256_mullo_epi16(s, vc));
        const __m256i q = _mm256_mulhi_epu16(x, vm);
        __m256i r = _mm256_sub_epi16(x, _mm256_mullo_epi16(q, vp));
        r = _mm256_min_epu16(r, _mm256_sub_epi16(r, vp));
        const __m128i packed = _mm_packus_epi16(_mm256_castsi256_si128(r), _mm256_extracti128_si256(r, 1));
        _mm_storeu_si128(reinterpret_cast<__m128i*>(dst + i), packed);
    }
    for (; i < len; ++i) dst[i] = static_cast<std::uint8_t>((dst[i] + static_cast<unsigned>(c) * src[i]) % p);
}

void axpyChar2(std::uint8_t* dst, const std::uint8_t* src, const std::uint8_t* mulByC, std::size_t len) {
    const __m256i table =
        _mm256_broadcastsi128_si256(_mm_loadu_si128(reinterpret_cast<const __m128i*>(mulByC)));
    std::size_t i = 0;
    for (; i + 32 <= len; i += 32) {
        const __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
        const __m256i d = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
        const __m256i v = _mm256_xor_si256(d, _mm256_shuffle_epi8(table, s));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), v);
    }
    for (; i < len; ++i) dst[i] ^= mulByC[src[i]];
}

double positivePartSum(const double* a, const double* b, std::size_t len) {
    const __m256d zero = _mm256_setzero_pd();
    __m256d acc = zero;
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_add_pd(acc, _mm256_max_pd(d, zero));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    for (; i < len; ++i) {
        const double d = a[i] - b[i];
        lanes[i % 4] += d > 0.0 ? d : 0.0;
    }
    return (lanes[0] + lanes[2]) + (lanes[1] + lanes[3]);
}

constexpr KernelTable kTable{Isa::Avx2, axpyModPrime, axpyChar2, positivePartSum};

} // namespace

const KernelTable* avx2Kernels() {
    static const bool supported = __builtin_cpu_supports("avx2");
    return supported ? &kTable : nullptr;
}

} // namespace countdown::simd

#else

namespace countdown::simd {
const KernelTable* avx2Kernels() { return nullptr; }
} // namespace countdown::simd

#endif

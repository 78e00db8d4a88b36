#include "countdown/simd/kernels.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)
#include <arm_neon.h>

namespace countdown::simd {

namespace {

void axpyModPrime(std::uint8_t* dst, const std::uint8_t* src, std::uint8_t c, std::size_t len, std::uint8_t p) {
    // Same Barrett scheme as the AVX2 path, 8 lanes of 16 bits per half.
    const uint16x8_t vc = vdupq_n_u16(c);
    const uint16x8_t vp = vdupq_n_u16(p);
    const uint16x8_t vm = vdupq_n_u16(static_cast<std::uint16_t>(65536 / p));
    auto reduce = [&](uint16x8_t x) {
        const uint32x4_t lo = vmull_u16(vget_low_u16(x), vget_low_u16(vm));
        const uint32x4_t hi = vmull_high_u16(x, vm);
        const uint16x8_t q = vcombine_u16(vshrn_n_u32(lo, 16), vshrn_n_u32(hi, 16));
        const uint16x8_t r = vmlsq_u16(x, q, vp);
        return vminq_u16(r, vsubq_u16(r, vp));
    };
    std::size_t i = 0;
    for (; i + 16 <= len; i += 16) {
        const uint8x16_t s = vld1q_u8(src + i);
        const uint8x16_t d = vld1q_u8(dst + i);
        const uint16x8_t xl = vmlaq_u16(vmovl_u8(vget_low_u8(d)), vmovl_u8(vget_low_u8(s)), vc);
        const uint16x8_t xh = vmlaq_u16(vmovl_high_u8(d), vmovl_high_u8(s), vc);
        vst1q_u8(dst + i, vcombine_u8(vmovn_u16(reduce(xl)), vmovn_u16(reduce(xh))));
    }
    for (; i < len; ++i) dst[i] = static_cast<std::uint8_t>((dst[i] + static_cast<unsigned>(c) * src[i]) % p);
}

void axpyChar2(std::uint8_t* dst, const std::uint8_t* src, const std::uint8_t* mulByC, std::size_t len) {
    const uint8x16_t table = vld1q_u8(mulByC);
    std::size_t i = 0;
    for (; i + 16 <= len; i += 16) {
        vst1q_u8(dst + i, veorq_u8(vld1q_u8(dst + i), vqtbl1q_u8(table, vld1q_u8(src + i))));
    }
    for (; i < len; ++i) dst[i] ^= mulByC[src[i]];
}

double positivePartSum(const double* a, const double* b, std::size_t len) {
    const float64x2_t zero = vdupq_n_f64(0.0);
    float64x2_t acc01 = zero;
    float64x2_t acc23 = zero;
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4) {
        acc01 = vaddq_f64(acc01, vmaxq_f64(vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i)), zero));
        acc23 = vaddq_f64(acc23, vmaxq_f64(vsubq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)), zero));
    }
    double lanes[4];
    vst1q_f64(lanes, acc01);
    vst1q_f64(lanes + 2, acc23);
    for (; i < len; ++i) {
        const double d = a[i] - b[i];
        lanes[i % 4] += d > 0.0 ? d : 0.0;
    }
    return (lanes[0] + lanes[2]) + (lanes[1] + lanes[3]);
}

constexpr KernelTable kTable{Isa::Neon, axpyModPrime, axpyChar2, positivePartSum};

} // namespace

const KernelTable* neonKernels() { return &kTable; }

} // namespace countdown::simd

#else

namespace countdown::simd {
const KernelTable* neonKernels() { return nullptr; }
} // namespace countdown::simd

#endif

#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"

#include "countdown/fieldmat.hpp"
#include "countdown/rng.hpp"
#include "countdown/simd/kernels.hpp"

using namespace countdown;
using namespace countdown::simd;

namespace {

std::vector<const KernelTable*> vectorTables() {
    std::vector<const KernelTable*> out;
    if (const auto* t = avx2Kernels()) out.push_back(t);
    if (const auto* t = neonKernels()) out.push_back(t);
    return out;
}

std::vector<std::uint8_t> randomBytes(Rng& rng, std::size_t len, unsigned bound) {
    std::vector<std::uint8_t> v(len);
    for (auto& b : v) b = static_cast<std::uint8_t>(rng.below(bound));
    return v;
}

} // namespace

TEST_CASE("dispatch reports a usable table") {
    const auto& k = kernels();
    CHECK(k.axpyModPrime != nullptr);
    CHECK(k.axpyChar2 != nullptr);
    CHECK(k.positivePartSum != nullptr);
    MESSAGE("active isa: " << std::string(isaName(k.isa)));
}

TEST_CASE("prime-field axpy matches the reference") {
    Rng rng(1);
    const auto& ref = scalarKernels();
    for (const auto* vec : vectorTables()) {
        for (unsigned p = 2; p <= 251; ++p) {
            if (!FqField::supported(p) || FqField::make(p).characteristic() != static_cast<long>(p)) continue;
            for (std::size_t len : {0u, 1u, 15u, 16u, 31u, 32u, 33u, 100u}) {
                const auto src = randomBytes(rng, len, p);
                auto a = randomBytes(rng, len, p);
                auto b = a;
                const auto c = static_cast<std::uint8_t>(rng.below(p));
                ref.axpyModPrime(a.data(), src.data(), c, len, static_cast<std::uint8_t>(p));
                vec->axpyModPrime(b.data(), src.data(), c, len, static_cast<std::uint8_t>(p));
                CHECK(a == b);
            }
            // Extreme operands.
            std::vector<std::uint8_t> src(40, static_cast<std::uint8_t>(p - 1));
            std::vector<std::uint8_t> a(40, static_cast<std::uint8_t>(p - 1));
            auto b = a;
            ref.axpyModPrime(a.data(), src.data(), static_cast<std::uint8_t>(p - 1), 40, static_cast<std::uint8_t>(p));
            vec->axpyModPrime(b.data(), src.data(), static_cast<std::uint8_t>(p - 1), 40, static_cast<std::uint8_t>(p));
            CHECK(a == b);
        }
    }
}

TEST_CASE("characteristic-2 table axpy matches the reference") {
    Rng rng(2);
    const auto& ref = scalarKernels();
    for (const auto* vec : vectorTables()) {
        for (int trial = 0; trial < 200; ++trial) {
            std::uint8_t table[16];
            for (auto& t : table) t = static_cast<std::uint8_t>(rng.below(16));
            const std::size_t len = rng.below(90);
            const auto src = randomBytes(rng, len, 16);
            auto a = randomBytes(rng, len, 16);
            auto b = a;
            ref.axpyChar2(a.data(), src.data(), table, len);
            vec->axpyChar2(b.data(), src.data(), table, len);
            CHECK(a == b);
        }
    }
}

TEST_CASE("positive-part sum is bit-identical") {
    Rng rng(4);
    const auto& ref = scalarKernels();
    for (const auto* vec : vectorTables()) {
        for (int trial = 0; trial < 200; ++trial) {
            const std::size_t len = rng.below(300);
            std::vector<double> a(len);
            std::vector<double> b(len);
            for (std::size_t i = 0; i < len; ++i) {
                a[i] = rng.uniform01() * 1e-3 * static_cast<double>(1 + rng.below(1000));
                b[i] = rng.uniform01() * 1e-3 * static_cast<double>(1 + rng.below(1000));
            }
            const double x = ref.positivePartSum(a.data(), b.data(), len);
            const double y = vec->positivePartSum(a.data(), b.data(), len);
            CHECK(std::memcmp(&x, &y, sizeof x) == 0);
        }
    }
}

TEST_CASE("field ranks do not depend on the kernel table") {
    // Elimination through the dispatched kernels against a table-free field op.
    Rng rng(8);
    for (long q : {2L, 4L, 8L, 16L, 3L, 7L, 251L}) {
        const auto f = FqField::make(q);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<Elem> dst(37);
            std::vector<Elem> src(37);
            for (auto& v : dst) v = static_cast<Elem>(rng.below(static_cast<std::uint64_t>(q)));
            for (auto& v : src) v = static_cast<Elem>(rng.below(static_cast<std::uint64_t>(q)));
            const auto c = static_cast<Elem>(rng.below(static_cast<std::uint64_t>(q)));
            auto expect = dst;
            for (std::size_t i = 0; i < dst.size(); ++i) expect[i] = f.add(dst[i], f.mul(c, src[i]));
            f.axpy(dst.data(), src.data(), c, dst.size());
            CHECK(dst == expect);
        }
    }
}

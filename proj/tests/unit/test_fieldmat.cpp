#include <set>
#include <vector>

#include "doctest.h"

#include "countdown/errors.hpp"
#include "countdown/fieldmat.hpp"
#include "countdown/rng.hpp"

using namespace countdown;

namespace {

const std::vector<long> kOrders{2, 3, 4, 5, 7, 8, 9, 11, 16, 25, 27, 251};

// Rank over a prime field as log_p of the size of the row space.
long rankBySpan(const FqMatrix& a, long p) {
    std::set<std::vector<long>> span;
    long combos = 1;
    for (long r = 0; r < a.rows(); ++r) combos *= p;
    for (long code = 0; code < combos; ++code) {
        std::vector<long> v(static_cast<std::size_t>(a.cols()), 0);
        long c = code;
        for (long r = 0; r < a.rows(); ++r, c /= p) {
            for (long j = 0; j < a.cols(); ++j) v[static_cast<std::size_t>(j)] = (v[static_cast<std::size_t>(j)] + (c % p) * a.at(r, j)) % p;
        }
        span.insert(v);
    }
    long rank = 0;
    for (std::size_t size = span.size(); size > 1; size /= static_cast<std::size_t>(p)) ++rank;
    return rank;
}

} // namespace

TEST_CASE("every nonzero element has an inverse") {
    for (long q : kOrders) {
        const auto f = FqField::make(q);
        for (long a = 1; a < q; ++a) CHECK(f.mul(static_cast<Elem>(a), f.inv(static_cast<Elem>(a))) == 1);
    }
}

TEST_CASE("unsupported orders") {
    CHECK_FALSE(FqField::supported(6));
    CHECK_FALSE(FqField::supported(256));
    CHECK_THROWS(FqField::make(6));
}

TEST_CASE("rank counts for 2x2 over F_2 and F_3") {
    const auto f2 = enumerateRankCounts(FqField::make(2), 2, 2);
    CHECK(f2 == std::vector<mpz_class>{1, 9, 6});
    const auto f3 = enumerateRankCounts(FqField::make(3), 2, 2);
    CHECK(f3[2] == 48);
    CHECK(rankCountExact(3, 2, 2, 2) == 48);
}

TEST_CASE("rank-count formula sums to q^(rows*cols)") {
    for (long q : {2L, 3L, 4L, 5L}) {
        for (long rows = 1; rows <= 4; ++rows) {
            for (long cols = 1; cols <= 4; ++cols) {
                mpz_class total = 0;
                for (long r = 0; r <= std::min(rows, cols); ++r) total += rankCountExact(q, rows, cols, r);
                mpz_class expect;
                mpz_ui_pow_ui(expect.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(rows * cols));
                CHECK(total == expect);
            }
        }
    }
}

TEST_CASE("elimination rank agrees with row-space size") {
    Rng rng(3);
    for (long p : {2L, 3L, 5L}) {
        const auto f = FqField::make(p);
        for (int trial = 0; trial < 60; ++trial) {
            const long rows = 1 + static_cast<long>(rng.below(4));
            const long cols = 1 + static_cast<long>(rng.below(5));
            FqMatrix a = sampleMatrix(f, rows, cols, rng);
            if (trial % 3 == 0 && rows > 1) {
                for (long j = 0; j < cols; ++j) a.set(rows - 1, j, a.at(0, j));
            }
            CHECK(a.rank() == rankBySpan(a, p));
        }
    }
}

TEST_CASE("rank is invariant under transpose") {
    Rng rng(17);
    for (long q : kOrders) {
        const auto f = FqField::make(q);
        for (int trial = 0; trial < 20; ++trial) {
            const long rows = 1 + static_cast<long>(rng.below(7));
            const long cols = 1 + static_cast<long>(rng.below(7));
            const FqMatrix a = sampleMatrix(f, rows, cols, rng);
            CHECK(a.rank() == a.transpose().rank());
            for (long r = 0; r < rows; ++r) {
                for (long c = 0; c < cols; ++c) CHECK(a.at(r, c) < q);
            }
        }
        CHECK(FqMatrix::identity(f, 5).rank() == 5);
    }
}

TEST_CASE("enumeration budget") {
    CHECK_THROWS_AS(enumerateRankCounts(FqField::make(2), 4, 4, 1000.0), BudgetError);
}

TEST_CASE("span process coranks") {
    Rng rng(23);
    const auto f = FqField::make(3);
    for (int trial = 0; trial < 50; ++trial) {
        const auto path = corankSpanProcess(f, 5, 8, rng);
        REQUIRE(path.size() == 9);
        CHECK(path.front() == 5);
        for (std::size_t i = 1; i < path.size(); ++i) {
            CHECK(path[i] <= path[i - 1]);
            CHECK(path[i - 1] - path[i] <= 1);
        }
    }
}

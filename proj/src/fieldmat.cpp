#include "countdown/fieldmat.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <map>
#include <thread>

#include "countdown/errors.hpp"
#include "countdown/qseries.hpp"
#include "countdown/simd/kernels.hpp"

namespace countdown {

namespace {

constexpr long kMaxPrime = 251;

bool isPrime(long q) {
    if (q < 2) return false;
    for (long d = 2; d * d <= q; ++d) {
        if (q % d == 0) return false;
    }
    return true;
}

struct ExtensionSpec {
    long p;
    long degree;
    std::vector<long> low; // monic modulus t^d + low[d-1] t^{d-1} + ... + low[0]
    const char* text;
};

const std::map<long, ExtensionSpec>& extensionSpecs() {
    static const std::map<long, ExtensionSpec> specs{
        {4, {2, 2, {1, 1}, "t^2+t+1"}},
        {8, {2, 3, {1, 1, 0}, "t^3+t+1"}},
        {16, {2, 4, {1, 1, 0, 0}, "t^4+t+1"}},
        {9, {3, 2, {1, 0}, "t^2+1"}},
        {25, {5, 2, {2, 0}, "t^2+2"}},
        {27, {3, 3, {1, 2, 0}, "t^3+2t+1"}},
    };
    return specs;
}

std::vector<long> digits(long v, long p, long d) {
    std::vector<long> out(static_cast<std::size_t>(d));
    for (auto& c : out) {
        c = v % p;
        v /= p;
    }
    return out;
}

long fromDigits(const std::vector<long>& c, long p) {
    long v = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * p + *it;
    return v;
}

long polyMul(long a, long b, const ExtensionSpec& s) {
    const long d = s.degree;
    const auto da = digits(a, s.p, d);
    const auto db = digits(b, s.p, d);
    std::vector<long> prod(static_cast<std::size_t>(2 * d - 1), 0);
    for (long i = 0; i < d; ++i) {
        for (long j = 0; j < d; ++j) prod[static_cast<std::size_t>(i + j)] += da[i] * db[j];
    }
    // t^d = -(low[0] + low[1] t + ...), applied from the top degree down.
    for (long k = 2 * d - 2; k >= d; --k) {
        const long c = prod[static_cast<std::size_t>(k)] % s.p;
        prod[static_cast<std::size_t>(k)] = 0;
        for (long j = 0; j < d; ++j) {
            prod[static_cast<std::size_t>(k - d + j)] += (s.p - c) * s.low[static_cast<std::size_t>(j)];
        }
    }
    prod.resize(static_cast<std::size_t>(d));
    for (auto& c : prod) c %= s.p;
    return fromDigits(prod, s.p);
}

void verifyAxioms(long q, const std::vector<Elem>& add, const std::vector<Elem>& mul, const std::vector<Elem>& inv) {
    auto A = [&](long a, long b) { return add[static_cast<std::size_t>(a * q + b)]; };
    auto M = [&](long a, long b) { return mul[static_cast<std::size_t>(a * q + b)]; };
    for (long a = 0; a < q; ++a) {
        if (A(a, 0) != a || M(a, 1) != a || M(a, 0) != 0) throw std::logic_error("field identity failure");
        if (a != 0 && M(a, inv[static_cast<std::size_t>(a)]) != 1) throw std::logic_error("field inverse failure");
        for (long b = 0; b < q; ++b) {
            if (A(a, b) != A(b, a) || M(a, b) != M(b, a)) throw std::logic_error("field commutativity failure");
            for (long c = 0; c < q; ++c) {
                if (M(M(a, b), c) != M(a, M(b, c)) || A(A(a, b), c) != A(a, A(b, c)) ||
                    M(a, A(b, c)) != A(M(a, b), M(a, c))) {
                    throw std::logic_error("field axiom failure");
                }
            }
        }
    }
}

} // namespace

bool FqField::supported(long q) {
    return (isPrime(q) && q <= kMaxPrime) || extensionSpecs().count(q) > 0;
}

FqField FqField::make(long q) {
    require(supported(q), "unsupported field order q = " + std::to_string(q));
    auto t = std::make_shared<Tables>();
    const auto n = static_cast<std::size_t>(q);
    t->add.resize(n * n);
    t->mul.resize(n * n);
    t->neg.resize(n);
    t->inv.assign(n, 0);
    if (isPrime(q)) {
        for (long a = 0; a < q; ++a) {
            t->neg[static_cast<std::size_t>(a)] = static_cast<Elem>((q - a) % q);
            for (long b = 0; b < q; ++b) {
                t->add[static_cast<std::size_t>(a * q + b)] = static_cast<Elem>((a + b) % q);
                t->mul[static_cast<std::size_t>(a * q + b)] = static_cast<Elem>((a * b) % q);
                if ((a * b) % q == 1) t->inv[static_cast<std::size_t>(a)] = static_cast<Elem>(b);
            }
        }
        return FqField(q, q, 1, Kind::Prime, std::move(t));
    }
    const auto& s = extensionSpecs().at(q);
    t->modulus = s.text;
    for (long a = 0; a < q; ++a) {
        const auto da = digits(a, s.p, s.degree);
        std::vector<long> dn(da.size());
        for (std::size_t i = 0; i < da.size(); ++i) dn[i] = (s.p - da[i]) % s.p;
        t->neg[static_cast<std::size_t>(a)] = static_cast<Elem>(fromDigits(dn, s.p));
        for (long b = 0; b < q; ++b) {
            const auto db = digits(b, s.p, s.degree);
            std::vector<long> sum(da.size());
            for (std::size_t i = 0; i < da.size(); ++i) sum[i] = (da[i] + db[i]) % s.p;
            t->add[static_cast<std::size_t>(a * q + b)] = static_cast<Elem>(fromDigits(sum, s.p));
            const long prod = polyMul(a, b, s);
            t->mul[static_cast<std::size_t>(a * q + b)] = static_cast<Elem>(prod);
            if (prod == 1) t->inv[static_cast<std::size_t>(a)] = static_cast<Elem>(b);
        }
    }
    verifyAxioms(q, t->add, t->mul, t->inv);
    return FqField(q, s.p, s.degree, Kind::Extension, std::move(t));
}

Elem FqField::inv(Elem a) const {
    require(a != 0, "inverse of zero");
    return tables_->inv[a];
}

void FqField::axpy(Elem* dst, const Elem* src, Elem c, std::size_t len) const {
    if (c == 0) return;
    if (kind_ == Kind::Prime) {
        simd::kernels().axpyModPrime(dst, src, c, len, static_cast<Elem>(p_));
    } else if (p_ == 2) {
        // Char 2: addition is XOR; the kernel wants a 16-entry lookup row.
        std::array<Elem, 16> row{};
        for (long v = 0; v < q_; ++v) row[static_cast<std::size_t>(v)] = mul(c, static_cast<Elem>(v));
        simd::kernels().axpyChar2(dst, src, row.data(), len);
    } else {
        const Elem* m = tables_->mul.data() + static_cast<std::size_t>(c) * static_cast<std::size_t>(q_);
        for (std::size_t i = 0; i < len; ++i) dst[i] = add(dst[i], m[src[i]]);
    }
}

void FqField::scale(Elem* row, Elem c, std::size_t len) const {
    for (std::size_t i = 0; i < len; ++i) row[i] = mul(c, row[i]);
}

FqMatrix::FqMatrix(FqField field, long rows, long cols)
    : field_(std::move(field)), rows_(rows), cols_(cols) {
    require(rows >= 0 && cols >= 0, "matrix dimensions must be nonnegative");
    data_.assign(static_cast<std::size_t>(rows * cols), 0);
}

void FqMatrix::set(long r, long c, Elem v) {
    require(v < field_.q(), "entry outside the field");
    data_[static_cast<std::size_t>(r * cols_ + c)] = v;
}

FqMatrix FqMatrix::identity(FqField field, long n) {
    FqMatrix m(std::move(field), n, n);
    for (long i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

FqMatrix FqMatrix::transpose() const {
    FqMatrix t(field_, cols_, rows_);
    for (long r = 0; r < rows_; ++r) {
        for (long c = 0; c < cols_; ++c) t.data_[static_cast<std::size_t>(c * rows_ + r)] = at(r, c);
    }
    return t;
}

long FqMatrix::rank() const {
    auto copy = data_;
    return rankInPlace(field_, copy.data(), rows_, cols_);
}

std::string FqMatrix::str() const {
    static constexpr char kDigits[] = "0123456789abcdefghijklmnopqrstuvwxyz";
    std::string out;
    for (long r = 0; r < rows_; ++r) {
        for (long c = 0; c < cols_; ++c) {
            const Elem v = at(r, c);
            if (field_.q() <= 36) {
                out += kDigits[v];
            } else {
                if (c) out += ' ';
                out += std::to_string(v);
            }
        }
        out += '\n';
    }
    return out;
}

long rankInPlace(const FqField& field, Elem* data, long rows, long cols) {
    long rank = 0;
    for (long col = 0; col < cols && rank < rows; ++col) {
        long pivot = rank;
        while (pivot < rows && data[pivot * cols + col] == 0) ++pivot;
        if (pivot == rows) continue;
        Elem* prow = data + rank * cols;
        if (pivot != rank) std::swap_ranges(prow + col, prow + cols, data + pivot * cols + col);
        const auto len = static_cast<std::size_t>(cols - col);
        field.scale(prow + col, field.inv(prow[col]), len);
        for (long r = rank + 1; r < rows; ++r) {
            Elem* row = data + r * cols;
            if (row[col] != 0) field.axpy(row + col, prow + col, field.neg(row[col]), len);
        }
        ++rank;
    }
    return rank;
}

FqMatrix sampleMatrix(const FqField& field, long rows, long cols, Rng& rng) {
    FqMatrix m(field, rows, cols);
    auto& d = m.data();
    const long q = field.q();
    if ((q & (q - 1)) == 0) {
        const int bits = std::countr_zero(static_cast<unsigned long>(q));
        const int perWord = 64 / bits;
        std::uint64_t word = 0;
        int left = 0;
        for (auto& e : d) {
            if (left == 0) {
                word = rng.next();
                left = perWord;
            }
            e = static_cast<Elem>(word & static_cast<std::uint64_t>(q - 1));
            word >>= bits;
            --left;
        }
    } else {
        for (auto& e : d) e = static_cast<Elem>(rng.below(static_cast<std::uint64_t>(q)));
    }
    return m;
}

mpz_class rankCountExact(long q, long rows, long cols, long r) {
    require(q >= 2, "rankCountExact: q must be >= 2");
    require(rows >= 0 && cols >= 0, "rankCountExact: dimensions must be nonnegative");
    require(r >= 0 && r <= std::min(rows, cols), "rankCountExact: rank out of range");
    const long n = rows;
    const long t = cols - rows;
    const long k = n - r;
    mpz_class count = qBinomial(n + t, t + k, q) * qBinomial(n, n - k, q);
    mpz_class qr;
    mpz_ui_pow_ui(qr.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(r));
    for (long i = 0; i < r; ++i) {
        mpz_class qi;
        mpz_ui_pow_ui(qi.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(i));
        count *= qr - qi;
    }
    return count;
}

std::vector<mpz_class> enumerateRankCounts(const FqField& field, long rows, long cols, double cap, int threads) {
    require(rows >= 0 && cols >= 0, "enumerateRankCounts: dimensions must be nonnegative");
    const long cells = rows * cols;
    const double total = std::pow(static_cast<double>(field.q()), static_cast<double>(cells));
    if (total > cap) throw BudgetError("enumerateRankCounts: too many matrices", total, cap);
    const auto count = static_cast<std::uint64_t>(total);
    const long maxRank = std::min(rows, cols);
    const int workers = std::max(1, std::min<int>(threads, static_cast<int>(std::min<std::uint64_t>(count, 64))));

    std::vector<std::vector<std::uint64_t>> partial(static_cast<std::size_t>(workers),
                                                    std::vector<std::uint64_t>(static_cast<std::size_t>(maxRank) + 1));
    auto work = [&](int w) {
        const std::uint64_t lo = count * static_cast<std::uint64_t>(w) / static_cast<std::uint64_t>(workers);
        const std::uint64_t hi = count * static_cast<std::uint64_t>(w + 1) / static_cast<std::uint64_t>(workers);
        const auto q = static_cast<std::uint64_t>(field.q());
        std::vector<Elem> digits(static_cast<std::size_t>(cells), 0);
        std::uint64_t v = lo;
        for (auto& d : digits) {
            d = static_cast<Elem>(v % q);
            v /= q;
        }
        std::vector<Elem> scratch(digits.size());
        auto& counts = partial[static_cast<std::size_t>(w)];
        for (std::uint64_t i = lo; i < hi; ++i) {
            scratch = digits;
            ++counts[static_cast<std::size_t>(rankInPlace(field, scratch.data(), rows, cols))];
            for (auto& d : digits) { // base-q increment
                if (++d < q) break;
                d = 0;
            }
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }
    std::vector<mpz_class> out(static_cast<std::size_t>(maxRank) + 1, 0);
    for (const auto& counts : partial) {
        for (std::size_t r = 0; r < counts.size(); ++r) out[r] += mpz_class(std::to_string(counts[r]));
    }
    return out;
}

std::vector<long> corankSpanProcess(const FqField& field, long n, long steps, Rng& rng) {
    require(n >= 0 && steps >= 0, "corankSpanProcess: n and steps must be nonnegative");
    // Echelon basis: each row is zero at the pivots of the rows before it and
    // has a 1 at its own pivot, so reducing in insertion order is a membership test.
    std::vector<std::vector<Elem>> basis;
    std::vector<long> pivots;
    std::vector<long> out{n};
    out.reserve(static_cast<std::size_t>(steps) + 1);
    const auto len = static_cast<std::size_t>(n);
    for (long s = 0; s < steps; ++s) {
        std::vector<Elem> v(len);
        for (auto& e : v) e = static_cast<Elem>(rng.below(static_cast<std::uint64_t>(field.q())));
        if (static_cast<long>(basis.size()) < n) {
            for (std::size_t b = 0; b < basis.size(); ++b) {
                const Elem c = v[static_cast<std::size_t>(pivots[b])];
                if (c != 0) field.axpy(v.data(), basis[b].data(), field.neg(c), len);
            }
            const auto it = std::find_if(v.begin(), v.end(), [](Elem e) { return e != 0; });
            if (it != v.end()) {
                field.scale(v.data(), field.inv(*it), len);
                pivots.push_back(it - v.begin());
                basis.push_back(std::move(v));
            }
        }
        out.push_back(n - static_cast<long>(basis.size()));
    }
    return out;
}

} // namespace countdown

#include "countdown/qseries.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "countdown/errors.hpp"

namespace countdown {

template <Scalar S>
void requireUnitInterval(const S& x, const char* what) {
    if (!(S(0) < x && x < S(1))) {
        throw DomainError(std::string(what) + " must lie in (0,1), got " + x.str());
    }
}

template <Scalar S>
S gFinite(const S& x, long a, long b) {
    requireUnitInterval(x);
    require(a >= 1, "gFinite: start index must be >= 1");
    S p(1);
    for (long i = a; i <= b; ++i) p *= S(1) - power(x, i);
    return p;
}

namespace {

// x^{N+1} < tol * (1 - x), decided exactly on the rational backend and with
// certified upper bounds on the float backend.
template <Scalar S>
bool cutoffReached(const S& x, const S& tol, long n) {
    if constexpr (S::kExact) {
        return power(x, n + 1) < tol * (S(1) - x);
    } else {
        return (power(x, n + 1) / (S(1) - x)).upper() < tol.value();
    }
}

} // namespace

template <Scalar S>
long productCutoff(const S& x, const S& tol, long cap) {
    requireUnitInterval(x);
    require(S(0) < tol, "tolerance must be positive");
    const double xd = x.toDouble();
    const double td = tol.toDouble();
    // Log-space estimate, then settle the boundary with the certified test.
    double est = 0.0;
    if (td > 0.0 && td < 1.0 / (1.0 - xd)) {
        est = std::log(td * (1.0 - xd)) / std::log(xd) - 1.0;
    } else if (td == 0.0) {
        est = static_cast<double>(cap) + 1.0; // underflowed tolerance
    }
    if (!(est < static_cast<double>(cap) + 2.0)) {
        throw ResourceError("infinite product cutoff exceeds cap " + std::to_string(cap));
    }
    long n = std::max(0L, static_cast<long>(std::floor(est)) - 1);
    while (n > 0 && cutoffReached(x, tol, n - 1)) --n;
    while (!cutoffReached(x, tol, n)) {
        if (++n > cap) throw ResourceError("infinite product cutoff exceeds cap " + std::to_string(cap));
    }
    return n;
}

template <Scalar S>
TruncatedProduct<S> gInfinite(const S& x, long a, const S& tol, long cap) {
    require(a >= 1, "gInfinite: start index must be >= 1");
    const long n = std::max(productCutoff(x, tol, cap), a - 1);
    TruncatedProduct<S> out{gFinite(x, a, n), power(x, n + 1) / (S(1) - x), n};
    if constexpr (!S::kExact) out.tailBoundHi = Tracked(out.tailBoundHi.upper());
    return out;
}

template <Scalar S>
Bounded<S> tailComplement(const S& x, long a, const S& tol, long cap) {
    const auto prod = gInfinite(x, a, tol, cap);
    if constexpr (S::kExact) {
        // True value lies in [1 - v, 1 - v + v * tail].
        return {S(1) - prod.value, prod.value * prod.tailBoundHi};
    } else {
        const double xd = x.value();
        const double u = Tracked::kUnit;
        double logSum = 0.0;
        double absTerms = 0.0;
        double sensitivity = 0.0; // |d/dx sum log1p(-x^i)|
        long count = 0;
        for (long i = a; i <= prod.cutoffIndex; ++i) {
            const double xi = std::pow(xd, static_cast<double>(i));
            const double term = std::log1p(-xi);
            logSum += term;
            absTerms += std::fabs(term);
            sensitivity += static_cast<double>(i) * xi / (xd * (1.0 - xi));
            ++count;
        }
        const double value = -std::expm1(logSum);
        const double logErr = (4.0 + static_cast<double>(count)) * u * absTerms + sensitivity * x.errBound();
        const double ePow = std::exp(logSum + logErr);
        const double roundErr = ePow * logErr * (1.0 + 4.0 * u) + 2.0 * u * std::fabs(value);
        const double truncErr = ePow * prod.tailBoundHi.upper();
        return {Tracked(value, roundErr), Tracked(truncErr)};
    }
}

template <Scalar S>
EulerTail<S>::EulerTail(const S& x, const S& tol, long aMax, long cap) : one_(1) {
    require(aMax >= 1, "EulerTail: aMax must be >= 1");
    cutoff_ = productCutoff(x, tol, cap);
    relTail_ = power(x, cutoff_ + 1) / (S(1) - x);
    if constexpr (!S::kExact) relTail_ = Tracked(relTail_.upper());
    const long stored = std::min(aMax, cutoff_);
    suffix_.resize(static_cast<std::size_t>(stored), S(1));
    S acc(1);
    for (long i = cutoff_; i >= 1; --i) {
        acc *= S(1) - power(x, i);
        if (i <= stored) suffix_[static_cast<std::size_t>(i - 1)] = acc;
    }
}

template <Scalar S>
const S& EulerTail<S>::product(long a) const {
    require(a >= 1, "EulerTail: start index must be >= 1");
    if (a > cutoff_) return one_;
    if (a > static_cast<long>(suffix_.size())) throw DomainError("EulerTail: start index beyond precomputed range");
    return suffix_[static_cast<std::size_t>(a - 1)];
}

mpz_class qBinomial(long n, long k, long q) {
    require(q >= 2, "qBinomial: q must be >= 2");
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    mpz_class num = 1;
    mpz_class den = 1;
    mpz_class t;
    for (long i = 0; i < k; ++i) {
        mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(n - i));
        num *= t - 1;
        mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(i + 1));
        den *= t - 1;
    }
    mpz_class out;
    mpz_divexact(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return out;
}

template <Scalar S>
S technicalIdentityGap(const S& x, const S& y, long m, long n, long K) {
    if (!(abs(x) < S(1)) || !(abs(y) < S(1))) throw DomainError("technicalIdentityGap: need |x| < 1 and |y| < 1");
    require(m >= 0 && n >= m, "technicalIdentityGap: need n >= m >= 0");
    require(K >= 0, "technicalIdentityGap: K must be >= 0");
    S lhs(1);
    for (long i = m; i <= n; ++i) lhs /= S(1) - y * power(x, i);
    const S step = y * power(x, m);
    S term(1);
    S rhs(1);
    for (long k = 1; k <= K; ++k) {
        term *= step * (S(1) - power(x, n - m + k)) / (S(1) - power(x, k));
        rhs += term;
    }
    return lhs - rhs;
}

#define COUNTDOWN_INSTANTIATE(S)                                                          \
    template void requireUnitInterval<S>(const S&, const char*);                          \
    template S gFinite<S>(const S&, long, long);                                          \
    template long productCutoff<S>(const S&, const S&, long);                             \
    template TruncatedProduct<S> gInfinite<S>(const S&, long, const S&, long);            \
    template Bounded<S> tailComplement<S>(const S&, long, const S&, long);                \
    template class EulerTail<S>;                                                          \
    template S technicalIdentityGap<S>(const S&, const S&, long, long, long);

COUNTDOWN_INSTANTIATE(Rational)
COUNTDOWN_INSTANTIATE(Tracked)

#undef COUNTDOWN_INSTANTIATE

} // namespace countdown

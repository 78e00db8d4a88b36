#pragma once

// Finite and infinite q-products, Gaussian binomials, and the partition
// generating-function identity used to derive the partial-sum laws.

#include <vector>

#include <gmpxx.h>

#include "countdown/scalar.hpp"

namespace countdown {

inline constexpr long kDefaultCutoffCap = 10'000'000;

/// prod_{i=a}^{N} (1 - x^i) standing in for the infinite product prod_{i>=a}.
/// The true product lies in [value * (1 - tailBoundHi), value].
template <Scalar S>
struct TruncatedProduct {
    S value;
    S tailBoundHi;
    long cutoffIndex = 0;
};

/// prod_{i=a}^{b} (1 - x^i); exactly 1 when b < a.
template <Scalar S>
S gFinite(const S& x, long a, long b);

/// Smallest N >= 0 with x^{N+1}/(1-x) < tol. Throws ResourceError past `cap`.
template <Scalar S>
long productCutoff(const S& x, const S& tol, long cap = kDefaultCutoffCap);

template <Scalar S>
TruncatedProduct<S> gInfinite(const S& x, long a, const S& tol, long cap = kDefaultCutoffCap);

/// 1 - prod_{i>=a}(1 - x^i) with a certified enclosure. The float backend uses
/// a log1p/expm1 evaluation so small results keep their relative accuracy.
template <Scalar S>
Bounded<S> tailComplement(const S& x, long a, const S& tol, long cap = kDefaultCutoffCap);

/// Suffix products prod_{i=a}^{N}(1 - x^i) for 1 <= a <= aMax, all sharing one
/// cutoff N, so truncated infinite products compose exactly on the rational
/// backend (prod_{i>=a} * prod_{i<a} == prod_{i>=1}).
template <Scalar S>
class EulerTail {
public:
    EulerTail(const S& x, const S& tol, long aMax, long cap = kDefaultCutoffCap);

    /// Truncated prod_{i>=a}(1 - x^i), a >= 1.
    const S& product(long a) const;
    /// Relative deviation bound shared by every product(a).
    const S& relTail() const { return relTail_; }
    long cutoff() const { return cutoff_; }
    long maxStart() const { return static_cast<long>(suffix_.size()); }

private:
    std::vector<S> suffix_; // suffix_[a-1] = prod_{i=a}^{N}
    S one_;
    S relTail_;
    long cutoff_ = 0;
};

/// Gaussian binomial [n choose k]_q; 0 outside 0 <= k <= n.
mpz_class qBinomial(long n, long k, long q);

/// prod_{i=m}^{n} 1/(1 - y x^i) minus the first K+1 terms of its expansion
/// sum_k y^k x^{mk} prod_{i=n-m+1}^{n-m+k}(1-x^i) / prod_{i=1}^{k}(1-x^i).
template <Scalar S>
S technicalIdentityGap(const S& x, const S& y, long m, long n, long K);

/// Throws DomainError unless 0 < x < 1.
template <Scalar S>
void requireUnitInterval(const S& x, const char* what = "x");

} // namespace countdown

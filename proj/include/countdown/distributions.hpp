#pragma once

// Exact laws of the delay sums S_n, S, R_n and of the corank X^{(n)}_t, X_t,
// plus the mode of S and the critical points where that mode moves.

#include <optional>
#include <span>
#include <vector>

#include "countdown/process.hpp"
#include "countdown/qseries.hpp"
#include "countdown/scalar.hpp"

namespace countdown {

/// Probability mass function on {0, 1, ...} stored up to a cutoff.
template <Scalar S>
struct Pmf {
    std::vector<S> probs;
    S tailMassHi{0}; ///< certified bound on the mass beyond probs.size() - 1
    S probErr{0};    ///< certified bound on sum_k |probs[k] - true mass at k|

    S at(long k) const {
        return (k >= 0 && k < static_cast<long>(probs.size())) ? probs[static_cast<std::size_t>(k)] : S(0);
    }
    long size() const { return static_cast<long>(probs.size()); }
    S sum() const;
};

template <Scalar S>
struct ModeReport {
    long mode = 0;
    S modeProb;
    bool tieWithNext = false;
};

struct CriticalPoint {
    double x = 0.0;        ///< root of x^{k+1} = 1 - x in (0,1)
    double y = 0.0;        ///< -1 / log(x)
    double residual = 0.0; ///< x^{k+1} + x - 1 at the returned x
    double bracket = 0.0;  ///< final bisection bracket width
};

template <Scalar S>
struct RnTailCheck {
    S exact;       ///< P(R_n > 1)
    S exactSlack;  ///< certified |exact - true|
    S proofBound;  ///< (x^{n+1}/(1-x))^2
    S statedBound; ///< x^{2n}/(1-x)^2
    bool proofHolds = false;
    bool statedHolds = false;
};

/// Law of Z_m + ... + Z_n (n = m - 1 gives the point mass at 0). With an
/// infinite cutoff this is the law of R_{m-1}. When kMax is empty the support
/// is extended until the certified tail drops below tol.
template <Scalar S>
Pmf<S> pmfPartialSum(const S& x, long m, Cutoff n, std::optional<long> kMax, const S& tol);

/// Law of S_n (finite cutoff) or S (infinite cutoff).
template <Scalar S>
Pmf<S> hittingTimePmf(const S& x, Cutoff n, std::optional<long> kMax, const S& tol) {
    return pmfPartialSum(x, 1, n, kMax, tol);
}

/// Law of R_n = Z_{n+1} + Z_{n+2} + ...
template <Scalar S>
Pmf<S> remainderPmf(const S& x, long n, std::optional<long> kMax, const S& tol) {
    return pmfPartialSum(x, n + 1, Cutoff::infinite(), kMax, tol);
}

/// Law of the height at time t of phi(Z^{(n)}) (or phi(Z) for an infinite
/// cutoff). For a finite cutoff the full support {0..n} is stored unless kMax
/// is smaller; when n + t < 0 the law is the point mass at -t.
template <Scalar S>
Pmf<S> corankPmf(const S& x, Cutoff n, long t, std::optional<long> kMax, const S& tol);

/// Probability of a death at time t from height k: P(S_n - S_{k-1} = t + k).
template <Scalar S>
S deathProb(const S& x, Cutoff n, long t, long k, const S& tol);

template <Scalar S>
ModeReport<S> modeOfS(const S& x, const S& tol);

/// Bisection for the root of x^{k+1} + x - 1 on (0,1).
CriticalPoint criticalX(long k, double tol = 1e-15);

template <Scalar S>
RnTailCheck<S> rnTailBoundCheck(const S& x, long n, const S& tol);

/// p[k+1]^2 >= p[k] p[k+2] over the stored entries (certified on the float backend).
template <Scalar S>
bool isLogConcave(std::span<const S> probs);

} // namespace countdown

#pragma once

// Total-variation distances between the truncated and untruncated laws:
// direct summation over certified pmfs, closed forms where they are proved,
// and the surrounding upper/lower bounds and leading-order asymptotics.

#include <optional>
#include <string>

#include "countdown/distributions.hpp"
#include "countdown/scalar.hpp"

namespace countdown {

template <Scalar S>
struct TvValue {
    S value;
    S slack{0};         ///< certified |value - true quantity|; 0 for pure formulas
    std::string method; ///< short tag describing how the value was obtained
};

template <Scalar S>
struct TvReport {
    std::optional<TvValue<S>> exact;
    std::optional<TvValue<S>> directSum;
    std::optional<TvValue<S>> lower;
    std::optional<TvValue<S>> upper;
    std::optional<TvValue<S>> asymptotic;
    // x^{n+t+1}/(2(1-x)) and x^{n+t+1}/(1-x), reported for t >= 0 with x <= 1/2.
    std::optional<TvValue<S>> elementaryLower;
    std::optional<TvValue<S>> elementaryUpper;
    bool closedForm = false;
    std::string status; ///< "closed-form" or "no closed form established for x > 1/2"
};

/// sum_k max(0, p_k - r_k) over the stored union support; slack covers both
/// tails and the stored-value errors.
template <Scalar S>
Bounded<S> tvFromPmfs(const Pmf<S>& p, const Pmf<S>& r);

/// Distance between the whole untruncated and truncated processes.
template <Scalar S>
TvReport<S> tvProcess(const S& x, long n, const S& tol);

/// Height at time t: X_t versus X^{(n)}_t.
template <Scalar S>
TvReport<S> tvCorank(const S& x, long n, long t, const S& tol);

/// Hitting time: S versus S_n.
template <Scalar S>
TvReport<S> tvHitting(const S& x, long n, const S& tol);

template <Scalar S>
struct LowerBoundCheck {
    S bound;     ///< (prod_{-t<i<=n}(1-x^i)) (x^{n+1}/(1-x) - x^{2n+3}/(1-x)^2)
    S directSum; ///< d_TV(X_t, X^{(n)}_t) by summation
    S slack;
    bool holds = false;
};

/// Requires t <= 0 and n + t >= 0 (the bound can exceed the distance otherwise).
template <Scalar S>
LowerBoundCheck<S> tvLowerNonpositiveT(const S& x, long n, long t, const S& tol);

/// Bounds for (n minus the rank of a uniform n x (n+m) matrix over F_q)
/// against its n -> infinity limit. Exact backend only.
struct FgRow {
    long q = 0;
    long n = 0;
    long m = 0;
    Rational exact;
    Rational exactSlack;
    Rational fgLower;  ///< 1 / (8 q^{m+n+1})
    Rational fgUpper;  ///< 3 / q^{m+n+1}
    Rational newUpper; ///< q/(q-1) q^{-(n+m+1)} for m >= 0, q/(q-1) q^{-(n+1)} for m < 0
    bool fgLowerHolds = false;
    bool fgUpperHolds = false;
    bool newUpperHolds = false;
    bool newBelowFg = false;
    /// Conjunction of the inequalities that apply: all four for m >= 0, exact <= newUpper for m < 0.
    bool ok() const;
};

FgRow fgComparison(long q, long n, long m, const Rational& tol);

/// d_TV(X, X+1) = max_k P(X = k) for unimodal X. The stored entries must be
/// unimodal and the tail mass must stay below the maximum; the returned slack
/// covers whatever the unstored tail could add. Throws NotUnimodal otherwise.
template <Scalar S>
Bounded<S> tvUnimodalShift(const Pmf<S>& p);

/// d_TV(X, X + U) with U ~ Bernoulli(prob) independent of X.
template <Scalar S>
Bounded<S> tvBernoulliShift(const Pmf<S>& p, const S& prob);

} // namespace countdown

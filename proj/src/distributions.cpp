#include "countdown/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "countdown/errors.hpp"

namespace countdown {

namespace {

constexpr long kSupportCap = 1'000'000;

// Sum of stored probabilities times the shared relative truncation bound, plus
// the float backend's own rounding bounds.
template <Scalar S>
S storedError(const std::vector<S>& probs, const S& relTail) {
    S total(0);
    double rounding = 0.0;
    for (const auto& p : probs) {
        total += p;
        rounding += errorOf(p);
    }
    return upperBound(total * relTail + S(rounding));
}

template <Scalar S>
S complementFallback(const Pmf<S>& pmf) {
    S rest = S(1) - pmf.sum() + pmf.probErr;
    rest = upperBound(rest);
    return rest < S(0) ? S(0) : rest;
}

// last * r / (1 - r) when r < 1, i.e. a geometric bound on everything past `last`.
template <Scalar S>
std::optional<S> geometricTail(const S& last, const S& ratio) {
    const S r = upperBound(ratio);
    if (!(r < S(1))) return std::nullopt;
    return upperBound(upperBound(last) * r / (S(1) - r));
}

template <Scalar S>
S minTail(const std::optional<S>& certified, const S& fallback) {
    if (certified && *certified < fallback) return *certified;
    return fallback;
}

} // namespace

template <Scalar S>
S Pmf<S>::sum() const {
    S s(0);
    for (const auto& p : probs) s += p;
    return s;
}

template <Scalar S>
Pmf<S> pmfPartialSum(const S& x, long m, Cutoff n, std::optional<long> kMax, const S& tol) {
    requireUnitInterval(x);
    require(m >= 1, "pmfPartialSum: m must be >= 1");
    require(!kMax || *kMax >= 0, "pmfPartialSum: kMax must be >= 0");
    if (n.isFinite()) require(n.value() >= m - 1, "pmfPartialSum: need n >= m - 1");

    const S xm = power(x, m);
    S relTail(0);
    S p(1);
    if (n.isFinite()) {
        p = gFinite(x, m, n.value());
    } else {
        const auto g = gInfinite(x, m, tol);
        p = g.value;
        relTail = g.tailBoundHi;
    }
    // P(k+1)/P(k) <= x^m / (1 - x^{k+1}), and the bound decreases in k.
    auto ratioFrom = [&](long k) { return xm / (S(1) - power(x, k + 1)); };

    Pmf<S> out;
    out.probs.push_back(p);
    const bool pointMass = n.isFinite() && n.value() == m - 1;
    for (long k = 1; !pointMass; ++k) {
        if (kMax) {
            if (k > *kMax) break;
        } else {
            const auto cert = geometricTail(p, ratioFrom(k - 1));
            if (cert && certifiedLess(*cert, tol)) break;
        }
        if (k > kSupportCap) throw ResourceError("pmfPartialSum: support exceeds cap");
        p *= xm / (S(1) - power(x, k));
        if (n.isFinite()) p *= S(1) - power(x, n.value() - m + k);
        out.probs.push_back(p);
    }
    if (pointMass && kMax) out.probs.resize(static_cast<std::size_t>(*kMax) + 1, S(0));

    out.probErr = storedError(out.probs, relTail);
    if (pointMass) {
        out.tailMassHi = S(0);
    } else {
        const long last = out.size() - 1;
        out.tailMassHi = minTail(geometricTail(out.probs.back(), ratioFrom(last)), complementFallback(out));
    }
    return out;
}

template <Scalar S>
Pmf<S> corankPmf(const S& x, Cutoff n, long t, std::optional<long> kMax, const S& tol) {
    requireUnitInterval(x);
    require(!kMax || *kMax >= 0, "corankPmf: kMax must be >= 0");
    const long kLo = std::max(0L, -t);
    Pmf<S> out;

    if (n.isFinite() && n.value() + t < 0) {
        // The truncated path is still on the diagonal.
        const long top = kMax ? std::max(*kMax, kLo) : kLo;
        out.probs.assign(static_cast<std::size_t>(top) + 1, S(0));
        out.probs[static_cast<std::size_t>(kLo)] = S(1);
        return out;
    }

    // P(k+1)/P(k) is at most x^{t+2k+1} / ((1 - x^{k+1})(1 - x^{t+k+1})) for both
    // cutoffs, and the bound decreases in k once t + k >= 0.
    auto ratioFrom = [&](long k) {
        return power(x, t + 2 * k + 1) / ((S(1) - power(x, k + 1)) * (S(1) - power(x, t + k + 1)));
    };

    if (n.isFinite()) {
        const long nn = n.value();
        const long top = kMax ? *kMax : nn;
        out.probs.assign(static_cast<std::size_t>(top) + 1, S(0));
        for (long k = kLo; k <= std::min(top, nn); ++k) {
            out.probs[static_cast<std::size_t>(k)] = power(x, k * (t + k)) * gFinite(x, nn - k + 1, nn + t) *
                                                     gFinite(x, k + 1, nn) / gFinite(x, 1, t + k);
        }
        out.probErr = storedError(out.probs, S(0));
        if (top >= nn) {
            out.tailMassHi = S(0);
        } else {
            out.tailMassHi = minTail(geometricTail(out.probs.back(), ratioFrom(top)), complementFallback(out));
        }
        return out;
    }

    const EulerTail<S> tail(x, tol, std::numeric_limits<long>::max());
    out.probs.assign(static_cast<std::size_t>(kLo), S(0));
    for (long k = kLo;; ++k) {
        if (kMax) {
            if (k > *kMax) break;
        } else if (k > kLo) {
            const auto cert = geometricTail(out.probs.back(), ratioFrom(k - 1));
            if (cert && certifiedLess(*cert, tol)) break;
        }
        if (k > kSupportCap) throw ResourceError("corankPmf: support exceeds cap");
        out.probs.push_back(power(x, k * (t + k)) * tail.product(k + 1) / gFinite(x, 1, t + k));
    }
    out.probErr = storedError(out.probs, tail.relTail());
    const long last = out.size() - 1;
    if (last < kLo) {
        out.tailMassHi = complementFallback(out);
    } else {
        out.tailMassHi = minTail(geometricTail(out.probs.back(), ratioFrom(last)), complementFallback(out));
    }
    return out;
}

template <Scalar S>
S deathProb(const S& x, Cutoff n, long t, long k, const S& tol) {
    requireUnitInterval(x);
    require(k >= 1, "deathProb: k must be >= 1");
    const long j = t + k;
    if (j < 0) return S(0);
    if (n.isFinite() && k > n.value() + 1) {
        // No delays at or above height k: the death happens on the diagonal.
        return j == 0 ? S(1) : S(0);
    }
    return pmfPartialSum(x, k, n, j, tol).probs[static_cast<std::size_t>(j)];
}

template <Scalar S>
ModeReport<S> modeOfS(const S& x, const S& tol) {
    requireUnitInterval(x);
    // P(S = k+1) / P(S = k) = x / (1 - x^{k+1}), decreasing in k.
    for (long k = 0; k <= kSupportCap; ++k) {
        const S r = x / (S(1) - power(x, k + 1));
        if (certifiedLess(S(1), r)) continue;
        ModeReport<S> out;
        out.mode = k;
        out.tieWithNext = !certifiedLess(r, S(1));
        out.modeProb = hittingTimePmf(x, Cutoff::infinite(), k, tol).probs[static_cast<std::size_t>(k)];
        return out;
    }
    throw ResourceError("modeOfS: mode beyond cap");
}

CriticalPoint criticalX(long k, double tol) {
    require(k >= 0, "criticalX: k must be >= 0");
    require(tol > 0.0, "criticalX: tol must be positive");
    const auto f = [k](double v) { return std::pow(v, static_cast<double>(k + 1)) + v - 1.0; };
    double lo = 0.0;
    double hi = 1.0;
    double mid = 0.5;
    for (int iter = 0; iter < 2000; ++iter) {
        mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) {
            lo = hi = mid;
            break;
        }
        (fm < 0.0 ? lo : hi) = mid;
    }
    // Pick whichever bracket end has the smaller residual.
    double best = mid;
    for (const double c : {lo, hi}) {
        if (std::fabs(f(c)) < std::fabs(f(best))) best = c;
    }
    CriticalPoint out;
    out.x = best;
    out.residual = f(best);
    out.bracket = hi - lo;
    out.y = -1.0 / std::log(best);
    if (std::fabs(out.residual) > tol) {
        throw ResourceError("criticalX: residual " + std::to_string(out.residual) + " above tolerance");
    }
    return out;
}

template <Scalar S>
RnTailCheck<S> rnTailBoundCheck(const S& x, long n, const S& tol) {
    requireUnitInterval(x);
    require(n >= 1, "rnTailBoundCheck: n must be >= 1");
    // Sum the positive terms k >= 2 directly; 1 - P(0) - P(1) cancels badly in
    // floating point once P(R_n > 1) is far below machine epsilon.
    // Every stored mass shares the relative truncation error of P(R_n = 0), so
    // the slack scales with the partial sum rather than with the total mass.
    const S relTail = gInfinite(x, n + 1, tol).tailBoundHi;
    long kMax = 8;
    for (;;) {
        const auto pmf = remainderPmf(x, n, kMax, tol);
        S partial(0);
        double rounding = 0.0;
        for (long k = 2; k < pmf.size(); ++k) {
            partial += pmf.probs[static_cast<std::size_t>(k)];
            rounding += errorOf(pmf.probs[static_cast<std::size_t>(k)]);
        }
        const bool settled = certifiedLess(pmf.tailMassHi, partial * ratio<S>(1, 1'000'000'000));
        if (settled || kMax >= kSupportCap) {
            RnTailCheck<S> out;
            out.exact = partial;
            out.exactSlack = upperBound(partial * relTail + pmf.tailMassHi + S(rounding + errorOf(partial)));
            const S a = power(x, n + 1) / (S(1) - x);
            out.proofBound = a * a;
            out.statedBound = power(x, 2 * n) / ((S(1) - x) * (S(1) - x));
            out.proofHolds = certifiedLessEq(partial + out.exactSlack, out.proofBound);
            out.statedHolds = certifiedLessEq(partial + out.exactSlack, out.statedBound);
            return out;
        }
        kMax *= 2;
    }
}

template <Scalar S>
bool isLogConcave(std::span<const S> probs) {
    for (std::size_t k = 0; k + 2 < probs.size(); ++k) {
        if (!certifiedLessEq(probs[k] * probs[k + 2], probs[k + 1] * probs[k + 1])) return false;
    }
    return true;
}

#define COUNTDOWN_INSTANTIATE(S)                                                                 \
    template struct Pmf<S>;                                                                      \
    template Pmf<S> pmfPartialSum<S>(const S&, long, Cutoff, std::optional<long>, const S&);     \
    template Pmf<S> corankPmf<S>(const S&, Cutoff, long, std::optional<long>, const S&);         \
    template S deathProb<S>(const S&, Cutoff, long, long, const S&);                             \
    template ModeReport<S> modeOfS<S>(const S&, const S&);                                       \
    template RnTailCheck<S> rnTailBoundCheck<S>(const S&, long, const S&);                       \
    template bool isLogConcave<S>(std::span<const S>);

COUNTDOWN_INSTANTIATE(Rational)
COUNTDOWN_INSTANTIATE(Tracked)

#undef COUNTDOWN_INSTANTIATE

} // namespace countdown

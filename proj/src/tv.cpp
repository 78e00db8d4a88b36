#include "countdown/tv.hpp"

#include <algorithm>
#include <vector>

#include "countdown/errors.hpp"
#include "countdown/qseries.hpp"
#include "countdown/simd/kernels.hpp"

namespace countdown {

namespace {

// A formula value whose only uncertainty is the backend's own rounding.
template <Scalar S>
TvValue<S> formula(const S& v, std::string method) {
    return {v, upperBound(S(errorOf(v))), std::move(method)};
}

template <Scalar S>
TvValue<S> withSlack(const S& v, const S& slack, std::string method) {
    return {v, upperBound(slack + S(errorOf(v))), std::move(method)};
}

template <Scalar S>
bool atMostHalf(const S& x) {
    return certifiedLessEq(x, ratio<S>(1, 2));
}

template <Scalar S>
TvValue<S> tvValue(const Bounded<S>& b, std::string method) {
    return {b.value, b.slack, std::move(method)};
}

bool isPrimePower(long q) {
    if (q < 2) return false;
    long p = 2;
    while (p * p <= q && q % p != 0) ++p;
    if (q % p != 0) return true; // q itself is prime
    while (q % p == 0) q /= p;
    return q == 1;
}

} // namespace

template <Scalar S>
Bounded<S> tvFromPmfs(const Pmf<S>& p, const Pmf<S>& r) {
    const std::size_t len = std::max(p.probs.size(), r.probs.size());
    const S slack = p.tailMassHi + r.tailMassHi + p.probErr + r.probErr;
    if constexpr (S::kExact) {
        S total(0);
        for (std::size_t k = 0; k < len; ++k) {
            const S d = p.at(static_cast<long>(k)) - r.at(static_cast<long>(k));
            if (S(0) < d) total += d;
        }
        return {total, slack};
    } else {
        std::vector<double> a(len, 0.0);
        std::vector<double> b(len, 0.0);
        double mass = 0.0;
        for (std::size_t k = 0; k < p.probs.size(); ++k) a[k] = p.probs[k].value();
        for (std::size_t k = 0; k < r.probs.size(); ++k) b[k] = r.probs[k].value();
        for (std::size_t k = 0; k < len; ++k) mass += std::fabs(a[k]) + std::fabs(b[k]);
        const double total = simd::kernels().positivePartSum(a.data(), b.data(), len);
        // One rounding per difference plus at most len additions per accumulator chain.
        const double rounding = 1.01 * static_cast<double>(len + 3) * Tracked::kUnit * mass;
        return {Tracked(total), upperBound(slack + Tracked(rounding))};
    }
}

template <Scalar S>
TvReport<S> tvProcess(const S& x, long n, const S& tol) {
    requireUnitInterval(x);
    require(n >= 0, "tvProcess: n must be >= 0");
    TvReport<S> out;
    const auto tc = tailComplement(x, n + 1, tol);
    out.exact = withSlack(tc.value, tc.slack, "1-prod_{i>n}(1-x^i)");
    const S lead = power(x, n + 1) / (S(1) - x);
    out.upper = formula(lead, "x^{n+1}/(1-x)");
    out.lower = formula(lead - power(x, 2 * n + 3) / ((S(1) - x) * (S(1) - x)),
                        "x^{n+1}/(1-x)-x^{2n+3}/(1-x)^2");
    out.asymptotic = formula(lead, "x^{n+1}/(1-x)");
    out.closedForm = true;
    out.status = "closed-form";
    return out;
}

template <Scalar S>
TvReport<S> tvCorank(const S& x, long n, long t, const S& tol) {
    requireUnitInterval(x);
    require(n >= 1, "tvCorank: n must be >= 1");
    TvReport<S> out;
    const auto limit = corankPmf(x, Cutoff::infinite(), t, std::nullopt, tol);
    const auto truncated = corankPmf(x, Cutoff::at(n), t, std::nullopt, tol);
    out.directSum = tvValue(tvFromPmfs(limit, truncated), "sum max(0,p-r)");

    const auto u = tailComplement(x, n + 1, tol);
    out.upper = withSlack(u.value, u.slack, "u(n)=1-prod_{i>n}(1-x^i)");
    if (t <= 0 && n + t >= 0) {
        const S lead = power(x, n + 1) / (S(1) - x);
        const S ell = gFinite(x, -t + 1, n) * (lead - power(x, 2 * n + 3) / ((S(1) - x) * (S(1) - x)));
        out.lower = formula(ell, "l(t,n)");
    }

    if (!atMostHalf(x)) {
        out.status = "no closed form established for x > 1/2";
        return out;
    }
    out.closedForm = true;
    out.status = "closed-form";
    const long a = std::abs(t);
    if (t >= 0) {
        const S head = gFinite(x, t + 1, n + t);
        const auto tail = tailComplement(x, n + t + 1, tol);
        out.exact = withSlack(head * tail.value, head * tail.slack, "prod_{t<i<=n+t}(1-x^i)(1-prod_{i>n+t}(1-x^i))");
        const S lead = power(x, n + t + 1) / (S(1) - x);
        out.elementaryLower = formula(lead / S(2), "x^{n+t+1}/(2(1-x))");
        out.elementaryUpper = formula(lead, "x^{n+t+1}/(1-x)");
    } else {
        const S head = gFinite(x, a + 1, n);
        const auto tail = tailComplement(x, std::max(n, a) + 1, tol);
        out.exact = withSlack(head * tail.value, head * tail.slack,
                              "prod_{|t|<i<=n}(1-x^i)(1-prod_{i>max(n,|t|)}(1-x^i))");
    }
    const auto c = gInfinite(x, a + 1, tol);
    const S asym = c.value * power(x, n + (t >= 0 ? t : 0) + 1) / (S(1) - x);
    out.asymptotic = withSlack(asym, asym * c.tailBoundHi, t >= 0 ? "C_t x^{n+t+1}/(1-x)" : "C_|t| x^{n+1}/(1-x)");
    return out;
}

template <Scalar S>
TvReport<S> tvHitting(const S& x, long n, const S& tol) {
    requireUnitInterval(x);
    require(n >= 1, "tvHitting: n must be >= 1");
    TvReport<S> out;
    const auto limit = hittingTimePmf(x, Cutoff::infinite(), std::nullopt, tol);
    const auto truncated = hittingTimePmf(x, Cutoff::at(n), std::nullopt, tol);
    out.directSum = tvValue(tvFromPmfs(limit, truncated), "sum max(0,p-r)");

    const auto u = tailComplement(x, n + 1, tol);
    out.upper = withSlack(u.value, u.slack, "u(n)=1-prod_{i>n}(1-x^i)");

    // modeProb comes from a product truncated at relative error below tol.
    const auto mode = modeOfS(x, tol);
    const S asym = mode.modeProb * power(x, n + 1) / (S(1) - x);
    out.asymptotic = withSlack(asym, asym * tol, "C_x x^{n+1}/(1-x), C_x=max_k P(S=k)");

    if (!atMostHalf(x)) {
        out.status = "no closed form established for x > 1/2";
        return out;
    }
    out.closedForm = true;
    out.status = "closed-form";
    const S head = gFinite(x, 1, n);
    const auto tail = tailComplement(x, n + 1, tol);
    out.exact = withSlack(head * tail.value, head * tail.slack, "prod_{i<=n}(1-x^i)(1-prod_{i>n}(1-x^i))");
    return out;
}

template <Scalar S>
LowerBoundCheck<S> tvLowerNonpositiveT(const S& x, long n, long t, const S& tol) {
    requireUnitInterval(x);
    require(n >= 1, "tvLowerNonpositiveT: n must be >= 1");
    require(t <= 0, "tvLowerNonpositiveT: t must be <= 0");
    require(n + t >= 0, "tvLowerNonpositiveT: need n + t >= 0");
    const S lead = power(x, n + 1) / (S(1) - x);
    LowerBoundCheck<S> out;
    out.bound = gFinite(x, -t + 1, n) * (lead - power(x, 2 * n + 3) / ((S(1) - x) * (S(1) - x)));
    const auto direct = tvFromPmfs(corankPmf(x, Cutoff::infinite(), t, std::nullopt, tol),
                                   corankPmf(x, Cutoff::at(n), t, std::nullopt, tol));
    out.directSum = direct.value;
    out.slack = direct.slack;
    out.holds = certifiedLessEq(out.bound, direct.value + direct.slack);
    return out;
}

bool FgRow::ok() const {
    if (m < 0) return newUpperHolds;
    return fgLowerHolds && fgUpperHolds && newUpperHolds && newBelowFg;
}

FgRow fgComparison(long q, long n, long m, const Rational& tol) {
    require(isPrimePower(q), "fgComparison: q must be a prime power");
    require(n >= 1, "fgComparison: n must be >= 1");
    require(n + m >= 0, "fgComparison: need n + m >= 0");
    FgRow row;
    row.q = q;
    row.n = n;
    row.m = m;
    const Rational x(1, q);
    const Rational scale = power(x, n + m + 1);
    const Rational lead(q, q - 1);
    row.fgLower = scale / Rational(8);
    row.fgUpper = scale * Rational(3);
    row.newUpper = lead * (m >= 0 ? scale : power(x, n + 1));
    // Keep truncation far below every gap being compared.
    Rational effective = row.fgLower / Rational(1'000'000'000);
    if (tol < effective) effective = tol;
    const auto report = tvCorank(x, n, m, effective);
    row.exact = report.exact->value;
    row.exactSlack = report.exact->slack;
    row.fgLowerHolds = row.fgLower < row.exact - row.exactSlack;
    row.fgUpperHolds = row.exact + row.exactSlack < row.fgUpper;
    row.newUpperHolds = row.exact + row.exactSlack < row.newUpper;
    row.newBelowFg = row.newUpper < row.fgUpper;
    return row;
}

template <Scalar S>
Bounded<S> tvUnimodalShift(const Pmf<S>& p) {
    require(!p.probs.empty(), "tvUnimodalShift: empty pmf");
    std::size_t mode = 0;
    for (std::size_t k = 1; k < p.probs.size(); ++k) {
        if (p.probs[mode] < p.probs[k]) mode = k;
    }
    // A step in the wrong direction only counts when it exceeds both error bars.
    auto drops = [](const S& from, const S& to) { return certifiedLess(to, from); };
    for (std::size_t k = 0; k < mode; ++k) {
        if (drops(p.probs[k], p.probs[k + 1])) {
            throw NotUnimodal("pmf decreases at k = " + std::to_string(k + 1) + " before its maximum");
        }
    }
    for (std::size_t k = mode; k + 1 < p.probs.size(); ++k) {
        if (drops(p.probs[k + 1], p.probs[k])) {
            throw NotUnimodal("pmf increases at k = " + std::to_string(k + 1) + " after its maximum");
        }
    }
    const S& top = p.probs[mode];
    if (!certifiedLess(p.tailMassHi, top)) {
        throw NotUnimodal("tail mass bound does not rule out a later maximum");
    }
    // Past the stored support the increments sum to at most the tail mass.
    return {top, upperBound(p.tailMassHi + p.probErr + S(errorOf(top)))};
}

template <Scalar S>
Bounded<S> tvBernoulliShift(const Pmf<S>& p, const S& prob) {
    require(!(prob < S(0)) && !(S(1) < prob), "tvBernoulliShift: probability must lie in [0,1]");
    const auto shift = tvUnimodalShift(p);
    const S v = prob * shift.value;
    return {v, upperBound(prob * shift.slack + S(errorOf(v)))};
}

#define COUNTDOWN_INSTANTIATE(S)                                                         \
    template Bounded<S> tvFromPmfs<S>(const Pmf<S>&, const Pmf<S>&);                     \
    template TvReport<S> tvProcess<S>(const S&, long, const S&);                         \
    template TvReport<S> tvCorank<S>(const S&, long, long, const S&);                    \
    template TvReport<S> tvHitting<S>(const S&, long, const S&);                         \
    template LowerBoundCheck<S> tvLowerNonpositiveT<S>(const S&, long, long, const S&);  \
    template Bounded<S> tvUnimodalShift<S>(const Pmf<S>&);                               \
    template Bounded<S> tvBernoulliShift<S>(const Pmf<S>&, const S&);

COUNTDOWN_INSTANTIATE(Rational)
COUNTDOWN_INSTANTIATE(Tracked)

#undef COUNTDOWN_INSTANTIATE

} // namespace countdown

#include "countdown/io.hpp"

#include <sstream>

namespace countdown::io {

namespace {

std::string num(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

template <Scalar S>
json valueJson(const std::optional<TvValue<S>>& v) {
    if (!v) return nullptr;
    json j{{"value", scalarText(v->value)}, {"slack", scalarText(v->slack)}, {"method", v->method}};
    if constexpr (!S::kExact) j["err"] = num(v->value.errBound());
    return j;
}

Rational probability(const mpz_class& count, long q, long cells) {
    mpz_class total;
    mpz_ui_pow_ui(total.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(cells));
    return Rational(count, total);
}

} // namespace

std::string scalarText(const Rational& v) { return v.str(); }
std::string scalarText(const Tracked& v) { return v.decimal(17); }

json trajectoryJson(const Trajectory& traj) {
    json points = json::array();
    for (long t = traj.tMin; t <= traj.tMax(); ++t) points.push_back({t, traj.at(t)});
    return {{"tMin", traj.tMin}, {"tMax", traj.tMax()}, {"points", points}};
}

std::string trajectoryCsv(const Trajectory& traj) {
    std::ostringstream os;
    os << "t,x\n";
    for (long t = traj.tMin; t <= traj.tMax(); ++t) os << t << ',' << traj.at(t) << '\n';
    return os.str();
}

template <Scalar S>
json pmfJson(const Pmf<S>& pmf, const S& x, const json& params) {
    json probs = json::array();
    for (const auto& p : pmf.probs) probs.push_back(scalarText(p));
    json j{{"backend", S::kBackendName},
           {"x", scalarText(x)},
           {"params", params},
           {"probs", probs},
           {"tailBound", scalarText(pmf.tailMassHi)},
           {"probErr", scalarText(pmf.probErr)}};
    if constexpr (!S::kExact) {
        json errs = json::array();
        for (const auto& p : pmf.probs) errs.push_back(num(p.errBound()));
        j["errors"] = errs;
    }
    return j;
}

template <Scalar S>
std::string pmfCsv(const Pmf<S>& pmf) {
    std::ostringstream os;
    os << "k,prob,cumulative" << (S::kExact ? "" : ",err") << '\n';
    S cumulative(0);
    for (long k = 0; k < pmf.size(); ++k) {
        const S& p = pmf.probs[static_cast<std::size_t>(k)];
        cumulative += p;
        os << k << ',' << scalarText(p) << ',' << scalarText(cumulative);
        if constexpr (!S::kExact) os << ',' << num(p.errBound());
        os << '\n';
    }
    return os.str();
}

template <Scalar S>
json tvJson(const TvReport<S>& r) {
    json method = json::object();
    auto tag = [&](const char* key, const std::optional<TvValue<S>>& v) {
        if (v) method[key] = v->method;
    };
    tag("exact", r.exact);
    tag("directSum", r.directSum);
    tag("lower", r.lower);
    tag("upper", r.upper);
    tag("asymptotic", r.asymptotic);
    json j{{"backend", S::kBackendName},
           {"status", r.status},
           {"closedForm", r.closedForm},
           {"exact", valueJson(r.exact)},
           {"directSum", valueJson(r.directSum)},
           {"lower", valueJson(r.lower)},
           {"upper", valueJson(r.upper)},
           {"asymptotic", valueJson(r.asymptotic)},
           {"slack", r.exact ? scalarText(r.exact->slack) : (r.directSum ? scalarText(r.directSum->slack) : "0")},
           {"method", method}};
    if (r.elementaryLower) j["elementaryLower"] = valueJson(r.elementaryLower);
    if (r.elementaryUpper) j["elementaryUpper"] = valueJson(r.elementaryUpper);
    return j;
}

json fgJson(const FgRow& row) {
    return {{"backend", Rational::kBackendName},
            {"q", row.q},
            {"n", row.n},
            {"m", row.m},
            {"exact", row.exact.str()},
            {"exactDecimal", row.exact.decimal(12)},
            {"exactSlack", row.exactSlack.str()},
            {"fgLower", row.fgLower.str()},
            {"fgUpper", row.fgUpper.str()},
            {"newUpper", row.newUpper.str()},
            {"fgLowerHolds", row.fgLowerHolds},
            {"fgUpperHolds", row.fgUpperHolds},
            {"newUpperHolds", row.newUpperHolds},
            {"newBelowFg", row.newBelowFg},
            {"ok", row.ok()}};
}

json rankCountsJson(long q, long rows, long cols, const std::vector<mpz_class>& counts) {
    json table = json::array();
    for (std::size_t r = 0; r < counts.size(); ++r) {
        table.push_back({{"rank", r},
                         {"count", counts[r].get_str()},
                         {"probability", probability(counts[r], q, rows * cols).str()}});
    }
    return {{"q", q}, {"rows", rows}, {"cols", cols}, {"backend", Rational::kBackendName}, {"counts", table}};
}

std::string rankCountsCsv(long q, long rows, long cols, const std::vector<mpz_class>& counts) {
    std::ostringstream os;
    os << "rank,count,probability\n";
    for (std::size_t r = 0; r < counts.size(); ++r) {
        os << r << ',' << counts[r].get_str() << ',' << probability(counts[r], q, rows * cols).str() << '\n';
    }
    return os.str();
}

json reportJson(const ComparisonReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows) {
        rows.push_back({{"label", row.label},
                        {"expected", row.expected},
                        {"observed", row.observed},
                        {"absDev", row.absDev},
                        {"sigmaDev", row.sigmaDev}});
    }
    return {{"kind", r.kind},
            {"pass", r.pass},
            {"stochastic", r.stochastic},
            {"threshold", r.threshold},
            {"maxAbsDev", r.maxAbsDev},
            {"maxSigmaDev", r.maxSigmaDev},
            {"samples", r.samples},
            {"seed", r.seed},
            {"rng", Rng::kName},
            {"detail", r.detail},
            {"rows", rows}};
}

json criterionJson(const CriterionResult& c) {
    return {{"id", c.id}, {"name", c.name}, {"pass", c.pass}, {"detail", c.detail}, {"seconds", c.seconds}};
}

template json pmfJson<Rational>(const Pmf<Rational>&, const Rational&, const json&);
template json pmfJson<Tracked>(const Pmf<Tracked>&, const Tracked&, const json&);
template std::string pmfCsv<Rational>(const Pmf<Rational>&);
template std::string pmfCsv<Tracked>(const Pmf<Tracked>&);
template json tvJson<Rational>(const TvReport<Rational>&);
template json tvJson<Tracked>(const TvReport<Tracked>&);

} // namespace countdown::io

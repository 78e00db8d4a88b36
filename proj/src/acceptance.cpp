#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "countdown/errors.hpp"
#include "countdown/fieldmat.hpp"
#include "countdown/harness.hpp"
#include "countdown/qseries.hpp"
#include "countdown/tv.hpp"

namespace countdown {

namespace {

struct Tally {
    long checked = 0;
    long failed = 0;
    std::string first;

    void check(bool ok, const std::string& where) {
        ++checked;
        if (!ok && failed++ == 0) first = where;
    }
    bool pass() const { return failed == 0 && checked > 0; }
    std::string summary(const std::string& extra = "") const {
        std::ostringstream os;
        os << checked << " checks, " << failed << " failed";
        if (!first.empty()) os << "; first failure: " << first;
        if (!extra.empty()) os << "; " << extra;
        return os.str();
    }
};

std::string fmt(double v, int digits = 6) {
    std::ostringstream os;
    os.precision(digits);
    os << v;
    return os.str();
}

Rational tenths(long k) { return Rational(k, 10); }

CriterionResult counts(const SuiteOptions& opt) {
    struct Shape { long q, rows, cols; };
    const Shape shapes[] = {{2, 2, 2}, {2, 2, 3}, {2, 3, 3}, {3, 2, 2}, {3, 2, 3}, {2, 4, 4}, {4, 2, 2}};
    Tally tally;
    for (const auto& s : shapes) {
        const std::string where = "q=" + std::to_string(s.q) + " " + std::to_string(s.rows) + "x" + std::to_string(s.cols);
        const auto field = FqField::make(s.q);
        const auto enumerated = enumerateRankCounts(field, s.rows, s.cols, kDefaultEnumerationCap, opt.threads);
        mpz_class total;
        mpz_ui_pow_ui(total.get_mpz_t(), static_cast<unsigned long>(s.q), static_cast<unsigned long>(s.rows * s.cols));
        const auto law = corankPmf(Rational(1, s.q), Cutoff::at(s.rows), s.cols - s.rows, std::nullopt,
                                   defaultTol<Rational>());
        mpz_class sum = 0;
        for (long r = 0; r <= std::min(s.rows, s.cols); ++r) {
            const mpz_class formula = rankCountExact(s.q, s.rows, s.cols, r);
            const Rational scaled = law.at(s.rows - r) * Rational(total, mpz_class(1));
            tally.check(enumerated[static_cast<std::size_t>(r)] == formula, where + " rank " + std::to_string(r) + " formula");
            tally.check(scaled == Rational(formula, mpz_class(1)), where + " rank " + std::to_string(r) + " pmf");
            sum += enumerated[static_cast<std::size_t>(r)];
        }
        tally.check(sum == total, where + " total");
    }
    return {1, "counts", tally.pass(), tally.summary()};
}

CriterionResult oraclePmf(const SuiteOptions&) {
    Tally tally;
    double worst = 0.0;
    for (const Rational& x : {Rational(1, 2), Rational(1, 3), Rational(2, 5)}) {
        for (long n = 1; n <= 3; ++n) {
            for (long t = -2; t <= 4; ++t) {
                const auto closed = corankPmf(x, Cutoff::at(n), t, std::nullopt, defaultTol<Rational>());
                const auto oracle = oracleCorankPmf(x, n, t);
                const std::string where = "x=" + x.str() + " n=" + std::to_string(n) + " t=" + std::to_string(t);
                const long len = std::max(closed.size(), oracle.size());
                for (long k = 0; k < len; ++k) {
                    const Rational d = abs(closed.at(k) - oracle.at(k));
                    worst = std::max(worst, d.toDouble());
                    tally.check(d <= oracle.tailMassHi && d.toDouble() < 1e-9, where + " k=" + std::to_string(k));
                }
                tally.check(oracle.tailMassHi.toDouble() < 1e-9, where + " tail");
            }
        }
    }
    return {2, "oracle-pmf", tally.pass(), tally.summary("max deviation " + fmt(worst))};
}

CriterionResult tvClosedForm(const SuiteOptions&) {
    Tally tally;
    const Rational base = Rational::parse("1/10000000000"); // 1e-10
    const Rational tol = defaultTol<Rational>();
    double worst = 0.0;
    for (const Rational& x : {Rational(1, 5), Rational(1, 3), Rational(1, 2)}) {
        for (long n = 1; n <= 8; ++n) {
            for (long t = -3; t <= 5; ++t) {
                const auto rep = tvCorank(x, n, t, tol);
                const Rational gap = abs(rep.exact->value - rep.directSum->value);
                worst = std::max(worst, gap.toDouble());
                tally.check(gap <= base + rep.exact->slack + rep.directSum->slack,
                            "corank x=" + x.str() + " n=" + std::to_string(n) + " t=" + std::to_string(t));
            }
            const auto rep = tvHitting(x, n, tol);
            const Rational gap = abs(rep.exact->value - rep.directSum->value);
            worst = std::max(worst, gap.toDouble());
            tally.check(gap <= base + rep.exact->slack + rep.directSum->slack,
                        "hitting x=" + x.str() + " n=" + std::to_string(n));
        }
    }
    return {3, "tv-closed-form", tally.pass(), tally.summary("max |exact - directSum| " + fmt(worst))};
}

CriterionResult bounds(const SuiteOptions&) {
    Tally tally;
    for (long k = 1; k <= 9; ++k) {
        const Rational x = tenths(k);
        for (long n = 1; n <= 30; ++n) {
            // The lower margin is second order, about x^{2n+4}; keep truncation well below it.
            const Rational tol = power(x, 2 * n + 4) / Rational(1000);
            const auto rep = tvProcess(x, n, tol);
            const Rational lo = rep.exact->value - rep.exact->slack;
            const Rational hi = rep.exact->value + rep.exact->slack;
            tally.check(rep.lower->value < lo && hi < rep.upper->value,
                        "process x=" + x.str() + " n=" + std::to_string(n));
        }
    }
    for (long q : {2L, 3L, 4L, 5L}) {
        for (long m = -3; m <= 3; ++m) {
            for (long n = 1; n <= 10; ++n) {
                if (n + m < 0) continue;
                const auto row = fgComparison(q, n, m, defaultTol<Rational>());
                tally.check(row.ok(), "fg q=" + std::to_string(q) + " n=" + std::to_string(n) + " m=" + std::to_string(m));
            }
        }
    }
    return {4, "bounds", tally.pass(), tally.summary()};
}

CriterionResult factorTwo(const SuiteOptions&) {
    Tally tally;
    long lowerFailed = 0;
    long upperFailed = 0;
    std::string cells;
    for (long k = 1; k <= 5; ++k) {
        const Rational x = tenths(k);
        for (long t = 0; t <= 5; ++t) {
            long cellFailed = 0;
            for (long n = 1; n <= 20; ++n) {
                const Rational tol = power(x, n + t + 1) / Rational(1'000'000);
                const auto rep = tvCorank(x, n, t, tol);
                const Rational lo = rep.exact->value - rep.exact->slack;
                const Rational hi = rep.exact->value + rep.exact->slack;
                const bool lowerOk = rep.elementaryLower->value <= lo;
                const bool upperOk = hi <= rep.elementaryUpper->value;
                lowerFailed += lowerOk ? 0 : 1;
                upperFailed += upperOk ? 0 : 1;
                cellFailed += (lowerOk && upperOk) ? 0 : 1;
                tally.check(lowerOk && upperOk, "x=" + x.str() + " n=" + std::to_string(n) + " t=" + std::to_string(t));
            }
            if (cellFailed > 0) {
                cells += (cells.empty() ? "" : ", ") + std::string("(x=") + x.str() + " t=" + std::to_string(t) + ": " +
                         std::to_string(cellFailed) + "/20)";
            }
        }
    }
    std::string extra = "lower violated " + std::to_string(lowerFailed) + ", upper violated " + std::to_string(upperFailed);
    if (!cells.empty()) extra += "; cells " + cells;
    return {5, "factor-two", tally.pass(), tally.summary(extra)};
}

CriterionResult identities(const SuiteOptions&) {
    const std::vector<Rational> xs{Rational(1, 2), Rational(1, 3), Rational(3, 7)};
    long checked = 0;
    long failed = 0;
    std::string first;
    for (const char* id : {"time-reversal", "death", "kiszero", "s-ratio", "s-closed-form", "log-concave"}) {
        const auto s = sweepIdentity(id, xs);
        checked += s.checked;
        failed += s.failures;
        if (first.empty() && !s.firstFailure.empty()) first = std::string(id) + ": " + s.firstFailure;
    }
    std::string detail = std::to_string(checked) + " exact checks, " + std::to_string(failed) + " failed";
    if (!first.empty()) detail += "; first failure: " + first;
    return {6, "identities", failed == 0 && checked > 0, detail};
}

CriterionResult criticalPoints(const SuiteOptions&) {
    Tally tally;
    const auto c0 = criticalX(0);
    tally.check(std::fabs(c0.x - 0.5) <= 1e-15, "x_0 = " + fmt(c0.x, 17));
    const auto c1 = criticalX(1);
    tally.check(std::fabs(c1.x - 0.6180339887) <= 1e-9, "x_1 = " + fmt(c1.x, 17));
    const auto a = criticalX(6907);
    tally.check(std::fabs(a.x - 0.9990004676) <= 1e-9, "x_6907 = " + fmt(a.x, 17));
    const auto b = criticalX(6908);
    tally.check(std::fabs(b.x - 0.9990005939) <= 1e-9, "x_6908 = " + fmt(b.x, 17));
    std::string extra;
    for (long k : {1000L, 10000L}) {
        const auto c = criticalX(k);
        const double dev = std::fabs(static_cast<double>(k) - c.y * std::log(c.y) + 0.5);
        tally.check(dev < 0.01, "k=" + std::to_string(k) + " deviation " + fmt(dev));
        extra += "k=" + std::to_string(k) + ": |k - y log y + 1/2| = " + fmt(dev) + " ";
    }
    return {7, "critical-x", tally.pass(), tally.summary(extra + "x_6907=" + fmt(a.x, 12) + " x_6908=" + fmt(b.x, 12))};
}

CriterionResult asymptotics(const SuiteOptions&) {
    Tally tally;
    std::string extra;
    const Rational half(1, 2);
    const Rational tol = Rational::parse("1/100000000000000000000"); // 1e-20
    for (long t = 0; t <= 2; ++t) {
        const auto rep = tvCorank(half, 30, t, tol);
        const double r = (rep.exact->value / rep.asymptotic->value).toDouble();
        tally.check(r >= 0.995 && r <= 1.005, "corank t=" + std::to_string(t) + " ratio " + fmt(r, 10));
        extra += "t=" + std::to_string(t) + " ratio " + fmt(r, 10) + "; ";
    }
    const auto rep = tvHitting(Tracked(0.7), 40, Tracked(1e-15));
    const double r = rep.directSum->value.value() / rep.asymptotic->value.value();
    const double rel = (rep.directSum->slack.value() + rep.asymptotic->slack.value() * r) / rep.asymptotic->value.value();
    tally.check(r - rel >= 0.98 && r + rel <= 1.02, "hitting x=0.7 n=40 ratio " + fmt(r, 10));
    extra += "hitting x=0.7 n=40 ratio " + fmt(r, 10) + " (slack " + fmt(rel, 3) + ")";
    return {8, "asymptotics", tally.pass(), tally.summary(extra)};
}

CriterionResult monteCarlo(const SuiteOptions& opt) {
    ExperimentSpec matrix;
    matrix.kind = "mc-matrix";
    matrix.params = {{"q", 2}, {"n", 6}, {"m", 0}};
    matrix.samples = opt.mcSamples;
    matrix.seed = opt.seed;
    matrix.threads = opt.threads;
    const auto a = runExperiment(matrix);

    ExperimentSpec chain;
    chain.kind = "mc-hitting";
    chain.params = {{"x", "1/2"}, {"n", 6}};
    chain.samples = opt.mcSamples;
    chain.seed = opt.seed + 1;
    chain.threads = opt.threads;
    const auto b = runExperiment(chain);

    const std::string detail = "matrices: " + a.detail + "; chain: " + b.detail + "; seed " + std::to_string(opt.seed) +
                               ", " + std::to_string(opt.mcSamples) + " samples each";
    return {9, "monte-carlo", a.pass && b.pass, detail};
}

CriterionResult rnTail(const SuiteOptions&) {
    Tally tally;
    double worst = 0.0;
    for (long k : {3L, 5L, 7L, 9L}) {
        const Rational x = tenths(k);
        for (long n = 1; n <= 20; ++n) {
            const auto c = rnTailBoundCheck(x, n, defaultTol<Rational>());
            worst = std::max(worst, (c.exact / c.proofBound).toDouble());
            tally.check(c.proofHolds && c.statedHolds && c.proofBound <= c.statedBound,
                        "x=" + x.str() + " n=" + std::to_string(n));
        }
    }
    return {10, "rn-tail", tally.pass(), tally.summary("max exact/proof bound " + fmt(worst))};
}

CriterionResult technicalIdentity(const SuiteOptions&) {
    Tally tally;
    double worst = 0.0;
    const Rational limit = Rational::parse("1/100000000000000"); // 1e-14
    for (const Rational& x : {Rational(1, 3), Rational(1, 2)}) {
        for (const Rational& y : {Rational(1, 3), Rational(1, 2)}) {
            for (long n = 0; n <= 4; ++n) {
                for (long m = 0; m <= n; ++m) {
                    const Rational gap = abs(technicalIdentityGap(x, y, m, n, 80));
                    worst = std::max(worst, gap.toDouble());
                    tally.check(gap < limit, "x=" + x.str() + " y=" + y.str() + " m=" + std::to_string(m) +
                                                 " n=" + std::to_string(n));
                }
            }
        }
    }
    return {11, "technical-identity", tally.pass(), tally.summary("max |gap| " + fmt(worst))};
}

using SuiteFn = std::function<CriterionResult(const SuiteOptions&)>;

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
    static const std::vector<std::pair<std::string, SuiteFn>> r{
        {"counts", counts},           {"oracle-pmf", oraclePmf},   {"tv-closed-form", tvClosedForm},
        {"bounds", bounds},           {"factor-two", factorTwo},   {"identities", identities},
        {"critical-x", criticalPoints}, {"asymptotics", asymptotics}, {"monte-carlo", monteCarlo},
        {"rn-tail", rnTail},          {"technical-identity", technicalIdentity},
    };
    return r;
}

CriterionResult timed(const std::string& name, const SuiteFn& fn, const SuiteOptions& opt, int id) {
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
        r = fn(opt);
    } catch (const std::exception& e) {
        r = {id, name, false, std::string("error: ") + e.what()};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

} // namespace

const std::vector<std::string>& suiteNames() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [name, fn] : registry()) v.push_back(name);
        v.emplace_back("all");
        return v;
    }();
    return names;
}

std::vector<CriterionResult> runSuite(const std::string& name, const SuiteOptions& options) {
    std::vector<CriterionResult> out;
    int id = 0;
    for (const auto& [suite, fn] : registry()) {
        ++id;
        if (name == "all" || name == suite) out.push_back(timed(suite, fn, options, id));
    }
    if (out.empty()) throw DomainError("unknown suite '" + name + "'");
    return out;
}

} // namespace countdown

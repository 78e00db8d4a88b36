#include "countdown/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "countdown/errors.hpp"
#include "countdown/fieldmat.hpp"
#include "countdown/process.hpp"
#include "countdown/qseries.hpp"
#include "countdown/tv.hpp"

namespace countdown {

using nlohmann::json;

Pmf<Rational> oracleCorankPmf(const Rational& x, long n, long t, long zCap, double budget) {
    requireUnitInterval(x);
    require(n >= 0, "oracleCorankPmf: n must be >= 0");
    require(zCap >= 0, "oracleCorankPmf: zCap must be >= 0");
    const double work = static_cast<double>(std::max(1L, n)) * std::pow(static_cast<double>(zCap + 1), n);
    if (work > budget) throw BudgetError("oracleCorankPmf: enumeration too large", work, budget);

    // Heights k > n sit on the diagonal: they count when -k >= t.
    const long diagonal = std::max(0L, -t - n);
    std::map<std::pair<long, long>, std::uint64_t> counts; // (height, sum_i i z_i) -> #z
    std::vector<long> z(static_cast<std::size_t>(n), 0);
    for (;;) {
        long height = diagonal;
        long tail = 0;
        long weight = 0;
        for (long k = n; k >= 1; --k) {
            tail += z[static_cast<std::size_t>(k - 1)];
            weight += k * z[static_cast<std::size_t>(k - 1)];
            if (tail - k >= t) ++height;
        }
        ++counts[{height, weight}];
        long i = 0;
        while (i < n && ++z[static_cast<std::size_t>(i)] > zCap) z[static_cast<std::size_t>(i++)] = 0;
        if (i == n) break;
    }

    // P(z) = prod_i (1 - x^i) x^{i z_i} = g_n(x) x^{weight}.
    const Rational scale = gFinite(x, 1, n);
    Pmf<Rational> out;
    out.probs.assign(static_cast<std::size_t>(counts.rbegin()->first.first) + 1, Rational(0));
    for (const auto& [key, c] : counts) {
        const Rational mass = Rational(mpz_class(std::to_string(c)), mpz_class(1)) * power(x, key.second);
        out.probs[static_cast<std::size_t>(key.first)] += mass;
    }
    for (auto& p : out.probs) p *= scale;
    Rational unswept(0);
    for (long i = 1; i <= n; ++i) unswept += power(x, i * (zCap + 1));
    out.tailMassHi = unswept;
    return out;
}

ExperimentSpec ExperimentSpec::fromJson(const json& j) {
    ExperimentSpec s;
    s.kind = j.at("kind").get<std::string>();
    if (j.contains("params")) s.params = j.at("params");
    s.samples = j.value("samples", 1L);
    s.seed = j.value("seed", std::uint64_t{1});
    s.tol = j.value("tol", 1e-9);
    s.threads = j.value("threads", 1);
    require(s.samples >= 1, "experiment samples must be >= 1");
    require(s.tol > 0.0, "experiment tol must be positive");
    return s;
}

int defaultThreads() {
    if (const char* env = std::getenv("COUNTDOWN_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<std::uint64_t> histogram(long samples, std::uint64_t seed, int threads, const DrawFactory& makeDraw) {
    require(samples >= 0, "histogram: samples must be >= 0");
    constexpr long kChunk = 1L << 14;
    const long chunks = (samples + kChunk - 1) / kChunk;
    std::atomic<long> nextChunk{0};
    std::mutex mergeLock;
    std::vector<std::uint64_t> total;
    auto worker = [&] {
        Draw draw = makeDraw();
        std::vector<std::uint64_t> local;
        for (long c = nextChunk++; c < chunks; c = nextChunk++) {
            Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(c));
            const long count = std::min(kChunk, samples - c * kChunk);
            for (long i = 0; i < count; ++i) {
                const long v = draw(rng);
                require(v >= 0, "histogram: draws must be nonnegative");
                if (static_cast<std::size_t>(v) >= local.size()) local.resize(static_cast<std::size_t>(v) + 1, 0);
                ++local[static_cast<std::size_t>(v)];
            }
        }
        std::lock_guard<std::mutex> guard(mergeLock);
        if (total.size() < local.size()) total.resize(local.size(), 0);
        for (std::size_t k = 0; k < local.size(); ++k) total[k] += local[k];
    };
    const int workers = static_cast<int>(std::clamp<long>(threads, 1, std::max(1L, chunks)));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return total;
}

ComparisonReport compareHistogram(const std::vector<std::uint64_t>& counts, const std::vector<double>& expected,
                                  double threshold) {
    ComparisonReport rep;
    rep.stochastic = true;
    rep.threshold = threshold;
    std::uint64_t n = 0;
    for (auto c : counts) n += c;
    rep.samples = static_cast<long>(n);
    const double N = static_cast<double>(n);

    auto addRow = [&](std::string label, double p, double observed) {
        const double mean = N * p;
        const double var = std::max(mean * (1.0 - p), 1.0);
        ComparisonRow row{std::move(label), p, observed / N, std::fabs(observed / N - p), std::fabs(observed - mean) / std::sqrt(var)};
        rep.maxAbsDev = std::max(rep.maxAbsDev, row.absDev);
        rep.maxSigmaDev = std::max(rep.maxSigmaDev, row.sigmaDev);
        rep.rows.push_back(std::move(row));
    };

    double pooledP = 1.0;
    double pooledObs = N;
    long pooled = 0;
    const std::size_t bins = std::max(counts.size(), expected.size());
    for (std::size_t k = 0; k < bins; ++k) {
        const double p = k < expected.size() ? expected[k] : 0.0;
        const double obs = k < counts.size() ? static_cast<double>(counts[k]) : 0.0;
        if (N * p >= 5.0) {
            addRow(std::to_string(k), p, obs);
            pooledP -= p;
            pooledObs -= obs;
        } else {
            ++pooled;
        }
    }
    addRow("rest", std::max(0.0, pooledP), pooledObs);
    rep.pass = rep.maxSigmaDev <= threshold;
    std::ostringstream os;
    os << rep.rows.size() << " bins (" << pooled << " pooled into rest), max " << rep.maxSigmaDev << " sigma";
    if (rep.rows.size() > 25) os << "; per-bin threshold not adjusted for " << rep.rows.size() << " comparisons";
    rep.detail = os.str();
    return rep;
}

namespace {

Rational paramRational(const json& p, const char* key) {
    const auto& v = p.at(key);
    return v.is_string() ? Rational::parse(v.get<std::string>()) : Rational::parse(v.dump());
}

double paramDouble(const json& p, const char* key) {
    const auto& v = p.at(key);
    return v.is_string() ? Tracked::parse(v.get<std::string>()).value() : v.get<double>();
}

Cutoff paramCutoff(const json& p, const char* key) {
    const auto& v = p.at(key);
    return v.is_string() ? Cutoff::parse(v.get<std::string>()) : Cutoff::at(v.get<long>());
}

std::vector<double> toDoubles(const std::vector<Tracked>& v) {
    std::vector<double> out;
    for (const auto& e : v) out.push_back(e.value());
    return out;
}

std::vector<double> toDoubles(const std::vector<Rational>& v) {
    std::vector<double> out;
    for (const auto& e : v) out.push_back(e.toDouble());
    return out;
}

ComparisonReport deterministic(std::string kind, std::vector<ComparisonRow> rows, double tol, bool pass,
                               std::string detail) {
    ComparisonReport rep;
    rep.kind = std::move(kind);
    rep.rows = std::move(rows);
    for (const auto& r : rep.rows) rep.maxAbsDev = std::max(rep.maxAbsDev, r.absDev);
    rep.threshold = tol;
    rep.pass = pass;
    rep.detail = std::move(detail);
    return rep;
}

std::vector<Rational> paramRationals(const json& p, const char* key, std::vector<Rational> fallback) {
    if (!p.contains(key)) return fallback;
    std::vector<Rational> xs;
    for (const auto& v : p.at(key)) xs.push_back(v.is_string() ? Rational::parse(v.get<std::string>()) : Rational::parse(v.dump()));
    return xs;
}

} // namespace

ComparisonReport runExperiment(const ExperimentSpec& spec) {
    const auto& p = spec.params;
    ComparisonReport rep;
    if (spec.kind == "mc-corank") {
        const double x = paramDouble(p, "x");
        const Cutoff n = paramCutoff(p, "n");
        const long t = p.at("t").get<long>();
        const auto counts = histogram(spec.samples, spec.seed, spec.threads, [&] {
            return [sampler = DelaySampler(x, n), t](Rng& rng) mutable { return heightAt(sampler(rng), t); };
        });
        const auto law = corankPmf(Tracked(x), n, t, std::nullopt, Tracked(1e-12));
        rep = compareHistogram(counts, toDoubles(law.probs));
    } else if (spec.kind == "mc-hitting") {
        const double x = paramDouble(p, "x");
        const long n = p.at("n").get<long>();
        const auto counts = histogram(spec.samples, spec.seed, spec.threads, [&] {
            return [x, n](Rng& rng) { return chainHittingTime(n, x, rng); };
        });
        const auto law = hittingTimePmf(Tracked(x), Cutoff::at(n), std::nullopt, Tracked(1e-12));
        rep = compareHistogram(counts, toDoubles(law.probs));
    } else if (spec.kind == "mc-matrix") {
        const long q = p.at("q").get<long>();
        const long n = p.at("n").get<long>();
        const long m = p.value("m", 0L);
        const std::string method = p.value("method", std::string("matrix"));
        require(method == "matrix" || method == "span", "mc-matrix: method must be matrix or span");
        require(n + m >= 0, "mc-matrix: need n + m >= 0");
        const FqField field = FqField::make(q);
        const auto counts = histogram(spec.samples, spec.seed, spec.threads, [&]() -> Draw {
            if (method == "span") {
                return [field, n, m](Rng& rng) { return corankSpanProcess(field, n, n + m, rng).back(); };
            }
            return [field, n, m](Rng& rng) { return n - sampleMatrix(field, n, n + m, rng).rank(); };
        });
        const auto law = corankPmf(Rational(1, q), Cutoff::at(n), m, std::nullopt, defaultTol<Rational>());
        rep = compareHistogram(counts, toDoubles(law.probs));
    } else if (spec.kind == "oracle-pmf") {
        const Rational x = paramRational(p, "x");
        const long n = p.at("n").get<long>();
        const long t = p.at("t").get<long>();
        const long zCap = p.value("zCap", kDefaultZCap);
        const auto closed = corankPmf(x, Cutoff::at(n), t, std::nullopt, defaultTol<Rational>());
        const auto oracle = oracleCorankPmf(x, n, t, zCap);
        std::vector<ComparisonRow> rows;
        Rational worst(0);
        for (long k = 0; k < std::max(closed.size(), oracle.size()); ++k) {
            const Rational d = abs(closed.at(k) - oracle.at(k));
            if (worst < d) worst = d;
            rows.push_back({std::to_string(k), closed.at(k).toDouble(), oracle.at(k).toDouble(), d.toDouble(), 0.0});
        }
        const bool certified = worst <= oracle.tailMassHi + closed.probErr + closed.tailMassHi;
        const bool pass = certified && worst.toDouble() <= spec.tol;
        rep = deterministic(spec.kind, std::move(rows), spec.tol, pass,
                            "oracle unswept mass " + oracle.tailMassHi.decimal(6) +
                                (certified ? "" : "; deviation exceeds certified bound"));
    } else if (spec.kind == "oracle-tv") {
        const Rational x = paramRational(p, "x");
        const long n = p.at("n").get<long>();
        const std::string target = p.value("target", std::string("corank"));
        const auto report = target == "hitting" ? tvHitting(x, n, defaultTol<Rational>())
                                                : tvCorank(x, n, p.value("t", 0L), defaultTol<Rational>());
        require(report.exact.has_value(), "oracle-tv: no closed form for this x");
        const auto& e = *report.exact;
        const auto& d = *report.directSum;
        const Rational gap = abs(e.value - d.value);
        const bool pass = gap <= Rational(mpq_class(spec.tol)) + e.slack + d.slack;
        rep = deterministic(spec.kind,
                            {{"exact-vs-directSum", e.value.toDouble(), d.value.toDouble(), gap.toDouble(), 0.0}},
                            spec.tol, pass, "slack " + (e.slack + d.slack).decimal(6));
    } else if (spec.kind == "identity-sweep") {
        const auto xs = paramRationals(p, "x", {Rational(1, 2), Rational(1, 3), Rational(3, 7)});
        const auto sweep = sweepIdentity(p.value("identity", std::string("time-reversal")), xs);
        rep = deterministic(spec.kind, {}, 0.0, sweep.failures == 0,
                            std::to_string(sweep.checked) + " exact checks, " + std::to_string(sweep.failures) +
                                " failures" + (sweep.firstFailure.empty() ? "" : "; first: " + sweep.firstFailure));
    } else {
        throw DomainError("unknown experiment kind '" + spec.kind + "'");
    }
    rep.kind = spec.kind;
    rep.seed = spec.seed;
    if (!rep.stochastic) rep.samples = 0;
    return rep;
}

IdentitySweep sweepIdentity(const std::string& identity, const std::vector<Rational>& xs) {
    IdentitySweep out;
    out.identity = identity;
    const Rational tol = defaultTol<Rational>();
    auto check = [&](bool ok, const std::string& where) {
        ++out.checked;
        if (!ok) {
            if (out.failures == 0) out.firstFailure = where;
            ++out.failures;
        }
    };
    for (const auto& x : xs) {
        const std::string xs_ = x.str();
        if (identity == "time-reversal") {
            // P(X^{(n)}_t = k) = P(X^{(n+t)}_{-t} = t + k), and the same without truncation.
            for (long t = -5; t <= 5; ++t) {
                for (long n = std::max(0L, -t); n <= 8; ++n) {
                    const auto a = corankPmf(x, Cutoff::at(n), t, 8L, tol);
                    const auto b = corankPmf(x, Cutoff::at(n + t), -t, 8L + std::max(0L, t), tol);
                    for (long k = 0; k <= 8; ++k) {
                        const Rational rhs = t + k >= 0 ? b.at(t + k) : Rational(0);
                        check(a.at(k) == rhs, "x=" + xs_ + " n=" + std::to_string(n) + " t=" + std::to_string(t) +
                                                  " k=" + std::to_string(k));
                    }
                }
                const auto a = corankPmf(x, Cutoff::infinite(), t, 8L, tol);
                const auto b = corankPmf(x, Cutoff::infinite(), -t, 8L + std::max(0L, t), tol);
                for (long k = 0; k <= 8; ++k) {
                    const Rational rhs = t + k >= 0 ? b.at(t + k) : Rational(0);
                    check(a.at(k) == rhs, "x=" + xs_ + " n=inf t=" + std::to_string(t) + " k=" + std::to_string(k));
                }
            }
        } else if (identity == "death") {
            // P(X_t = k)(1 - x^k) = P(D_{t,k}).
            std::vector<Cutoff> cutoffs{Cutoff::infinite()};
            for (long n = 0; n <= 8; ++n) cutoffs.push_back(Cutoff::at(n));
            for (const auto& n : cutoffs) {
                for (long t = -5; t <= 5; ++t) {
                    if (n.isFinite() && n.value() + t < 0) continue;
                    const auto pmf = corankPmf(x, n, t, 8L, tol);
                    const long kTop = n.isFinite() ? std::min(8L, n.value()) : 8L;
                    for (long k = std::max(1L, -t); k <= kTop; ++k) {
                        check(pmf.at(k) * (Rational(1) - power(x, k)) == deathProb(x, n, t, k, tol),
                              "x=" + xs_ + " n=" + n.str() + " t=" + std::to_string(t) + " k=" + std::to_string(k));
                    }
                }
            }
        } else if (identity == "kiszero") {
            for (long n = 0; n <= 8; ++n) {
                for (long t = 0; t <= 5; ++t) {
                    const auto pmf = corankPmf(x, Cutoff::at(n), t, std::nullopt, tol);
                    check(pmf.at(0) == gFinite(x, t + 1, n + t),
                          "x=" + xs_ + " n=" + std::to_string(n) + " t=" + std::to_string(t));
                }
            }
        } else if (identity == "s-ratio" || identity == "s-closed-form" || identity == "log-concave") {
            for (long n = 1; n <= 12; ++n) {
                const auto pmf = hittingTimePmf(x, Cutoff::at(n), 32L, tol);
                const std::string where = "x=" + xs_ + " n=" + std::to_string(n);
                if (identity == "log-concave") {
                    check(isLogConcave<Rational>(pmf.probs), where);
                    continue;
                }
                for (long k = 0; k <= 30; ++k) {
                    if (identity == "s-ratio") {
                        const Rational rhs = pmf.at(k) * x * (Rational(1) - power(x, n + k)) / (Rational(1) - power(x, k + 1));
                        check(pmf.at(k + 1) == rhs, where + " k=" + std::to_string(k));
                    } else {
                        const Rational rhs = power(x, k) * (Rational(1) - power(x, n)) * gFinite(x, k + 1, n + k - 1);
                        check(pmf.at(k) == rhs, where + " k=" + std::to_string(k));
                    }
                }
            }
        } else {
            throw DomainError("unknown identity '" + identity + "'");
        }
    }
    return out;
}

} // namespace countdown

#pragma once

// Cross-checks: a brute-force delay-space oracle, seeded Monte Carlo
// comparisons, exact identity sweeps, and the numbered acceptance suites.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "countdown/distributions.hpp"
#include "countdown/rng.hpp"
#include "countdown/scalar.hpp"

namespace countdown {

inline constexpr double kDefaultSigmaThreshold = 4.0;
inline constexpr double kDefaultOracleBudget = 5e7;
inline constexpr long kDefaultZCap = 40;

/// Law of the truncated height at time t by enumerating (z_1..z_n) in
/// {0..zCap}^n. Stored masses are exact for the swept region; tailMassHi
/// bounds the unswept mass sum_i P(Z_i > zCap).
Pmf<Rational> oracleCorankPmf(const Rational& x, long n, long t, long zCap = kDefaultZCap,
                              double budget = kDefaultOracleBudget);

struct ExperimentSpec {
    std::string kind; ///< mc-corank | mc-hitting | mc-matrix | oracle-pmf | oracle-tv | identity-sweep
    nlohmann::json params = nlohmann::json::object();
    long samples = 1;
    std::uint64_t seed = 1;
    double tol = 1e-9;
    int threads = 1;

    static ExperimentSpec fromJson(const nlohmann::json& j);
};

struct ComparisonRow {
    std::string label;
    double expected = 0.0;
    double observed = 0.0;
    double absDev = 0.0;
    double sigmaDev = 0.0; ///< 0 for deterministic rows
};

struct ComparisonReport {
    std::string kind;
    std::vector<ComparisonRow> rows;
    double maxAbsDev = 0.0;
    double maxSigmaDev = 0.0;
    double threshold = 0.0; ///< sigma threshold (stochastic) or absolute tolerance
    bool stochastic = false;
    bool pass = false;
    long samples = 0;
    std::uint64_t seed = 0;
    std::string detail;
};

/// Deterministic given (spec, seed); the thread count does not change results.
ComparisonReport runExperiment(const ExperimentSpec& spec);

using Draw = std::function<long(Rng&)>;
/// Called once per worker so draws may keep unshared caches.
using DrawFactory = std::function<Draw()>;

/// Histogram of draw(rng) over `samples` draws. Work is split into fixed
/// chunks, each with its own Rng::stream(seed, chunk), so the counts do not
/// depend on `threads`.
std::vector<std::uint64_t> histogram(long samples, std::uint64_t seed, int threads, const DrawFactory& makeDraw);

/// Per-bin binomial sigma deviations. Bins with expected count below 5 are
/// pooled into one remainder bin whose variance is floored at 1.
ComparisonReport compareHistogram(const std::vector<std::uint64_t>& counts, const std::vector<double>& expected,
                                  double threshold = kDefaultSigmaThreshold);

/// Outcome of an exact identity sweep on the rational backend.
struct IdentitySweep {
    std::string identity;
    long checked = 0;
    long failures = 0;
    std::string firstFailure;
};

/// identity: time-reversal | death | kiszero | s-ratio | s-closed-form | log-concave.
IdentitySweep sweepIdentity(const std::string& identity, const std::vector<Rational>& xs);

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct SuiteOptions {
    std::uint64_t seed = 20240601;
    int threads = 1;
    long mcSamples = 1'000'000;
};

/// counts, oracle-pmf, tv-closed-form, bounds, factor-two, identities,
/// critical-x, asymptotics, monte-carlo, rn-tail, technical-identity, all.
const std::vector<std::string>& suiteNames();
std::vector<CriterionResult> runSuite(const std::string& name, const SuiteOptions& options);

/// COUNTDOWN_THREADS when set, else the hardware concurrency.
int defaultThreads();

} // namespace countdown

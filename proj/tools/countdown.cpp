// Command-line front end. Exit codes: 0 success, 1 verification failure or
// runtime error, 2 usage error.
#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "countdown/distributions.hpp"
#include "countdown/errors.hpp"
#include "countdown/fieldmat.hpp"
#include "countdown/harness.hpp"
#include "countdown/io.hpp"
#include "countdown/process.hpp"
#include "countdown/tv.hpp"

namespace {

using namespace countdown;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Global {
    std::string tol;
    std::uint64_t seed = 20240601;
    std::string format = "table";
    int threads = 1;
};

class Table {
public:
    explicit Table(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
    void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

    std::string str() const {
        std::vector<std::size_t> width;
        for (const auto& row : rows_) {
            width.resize(std::max(width.size(), row.size()), 0);
            for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
        }
        std::ostringstream os;
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            for (std::size_t c = 0; c < rows_[r].size(); ++c) {
                if (c > 0) os << "  ";
                os << rows_[r][c];
                if (c + 1 < rows_[r].size()) os << std::string(width[c] - rows_[r][c].size(), ' ');
            }
            os << '\n';
            if (r == 0) {
                std::size_t total = 0;
                for (auto w : width) total += w;
                os << std::string(total + 2 * (width.size() - 1), '-') << '\n';
            }
        }
        return os.str();
    }

private:
    std::vector<std::vector<std::string>> rows_;
};

std::string num(double v, int digits = 12) {
    std::ostringstream os;
    os.precision(digits);
    os << v;
    return os.str();
}

// Long exact values are abbreviated in tables; json and csv keep them whole.
std::string shown(const Rational& v) {
    const std::string exact = v.str();
    if (exact.size() <= 32) return exact + " (~" + v.decimal(12) + ")";
    return "~" + v.decimal(15) + " (exact, " + std::to_string(exact.size()) + " chars)";
}
std::string shown(const Tracked& v) { return v.decimal(17) + " +/- " + num(v.errBound(), 3); }

bool isExactLiteral(const std::string& text) { return text.find_first_of(".eE") == std::string::npos; }

template <Scalar S>
S parseScalar(const std::string& text) {
    if constexpr (S::kExact) {
        return Rational::parse(text);
    } else {
        return Tracked::parse(text);
    }
}

template <Scalar S>
S parseTol(const Global& g) {
    if (g.tol.empty()) return defaultTol<S>();
    const S tol = parseScalar<S>(g.tol);
    if (!(S(0) < tol)) throw UsageError("--tol must be positive");
    return tol;
}

// Calls f(x, tol) on the backend selected by the literal form of xText.
template <class F>
int withBackend(const std::string& xText, const Global& g, F&& f) {
    if (isExactLiteral(xText)) return f(Rational::parse(xText), parseTol<Rational>(g));
    return f(Tracked::parse(xText), parseTol<Tracked>(g));
}

std::pair<long, long> parseRange(const std::string& text, const char* flag) {
    const auto colon = text.find(':', text[0] == '-' ? 1 : 0);
    try {
        if (colon == std::string::npos) {
            const long v = std::stol(text);
            return {v, v};
        }
        const long a = std::stol(text.substr(0, colon));
        const long b = std::stol(text.substr(colon + 1));
        if (b < a) throw UsageError(std::string(flag) + ": empty range '" + text + "'");
        return {a, b};
    } catch (const std::logic_error& e) {
        if (dynamic_cast<const UsageError*>(&e)) throw;
        throw UsageError(std::string(flag) + ": expected an integer or a:b range, got '" + text + "'");
    }
}

void emit(const Global& g, const json& j, const std::string& csv, const std::string& table) {
    if (g.format == "json") {
        std::cout << j.dump(2) << '\n';
    } else if (g.format == "csv") {
        std::cout << csv;
    } else {
        std::cout << table;
    }
}

template <Scalar S>
std::string pmfTable(const Pmf<S>& pmf, const S& x, const std::string& what) {
    std::ostringstream os;
    os << what << "  backend=" << S::kBackendName << "  x=" << io::scalarText(x) << '\n';
    os << "tail mass beyond k=" << pmf.size() - 1 << " <= " << lowerOf(pmf.tailMassHi) << ", entry error <= "
       << num(lowerOf(pmf.probErr), 3) << "\n\n";
    Table t({"k", "prob", "cumulative"});
    S cumulative(0);
    for (long k = 0; k < pmf.size(); ++k) {
        cumulative += pmf.at(k);
        t.add({std::to_string(k), shown(pmf.at(k)), shown(cumulative)});
    }
    return os.str() + t.str();
}

template <Scalar S>
std::vector<std::pair<std::string, const std::optional<TvValue<S>>*>> tvFields(const TvReport<S>& r) {
    return {{"exact", &r.exact},
            {"directSum", &r.directSum},
            {"lower", &r.lower},
            {"upper", &r.upper},
            {"asymptotic", &r.asymptotic},
            {"elementaryLower", &r.elementaryLower},
            {"elementaryUpper", &r.elementaryUpper}};
}

template <Scalar S>
std::string tvCsv(const TvReport<S>& r) {
    std::ostringstream os;
    os << "quantity,value,slack,method,backend\n";
    for (const auto& [name, v] : tvFields(r)) {
        if (!*v) continue;
        os << name << ',' << io::scalarText((*v)->value) << ',' << io::scalarText((*v)->slack) << ','
           << (*v)->method << ',' << S::kBackendName << '\n';
    }
    return os.str();
}

template <Scalar S>
std::string tvTable(const TvReport<S>& r, const std::string& what) {
    std::ostringstream os;
    os << what << "  backend=" << S::kBackendName << "  status: " << r.status << "\n\n";
    Table t({"quantity", "value", "slack", "method"});
    for (const auto& [name, v] : tvFields(r)) {
        if (*v) t.add({name, shown((*v)->value), num(upperBound((*v)->slack).upper(), 3), (*v)->method});
    }
    return os.str() + t.str();
}

// ---- subcommand handlers ----

struct DistArgs {
    std::string x;
    std::string n = "inf";
    long t = 0;
    std::optional<long> kMax;
};

int runDist(const std::string& kind, const DistArgs& a, const Global& g) {
    return withBackend(a.x, g, [&](const auto& x, const auto& tol) {
        using S = std::decay_t<decltype(x)>;
        const Cutoff n = Cutoff::parse(a.n);
        Pmf<S> pmf;
        json params{{"n", n.str()}};
        if (kind == "corank") {
            pmf = corankPmf(x, n, a.t, a.kMax, tol);
            params["t"] = a.t;
        } else if (kind == "hitting") {
            pmf = hittingTimePmf(x, n, a.kMax, tol);
        } else {
            if (n.isInfinite()) throw UsageError("dist rn needs a finite --n");
            pmf = remainderPmf(x, n.value(), a.kMax, tol);
        }
        params["kind"] = kind;
        emit(g, io::pmfJson(pmf, x, params), io::pmfCsv(pmf), pmfTable(pmf, x, "law of " + kind + " " + params.dump()));
        return kExitOk;
    });
}

struct TvArgs {
    std::string x;
    long n = 1;
    long t = 0;
};

int runTv(const std::string& kind, const TvArgs& a, const Global& g) {
    return withBackend(a.x, g, [&](const auto& x, const auto& tol) {
        using S = std::decay_t<decltype(x)>;
        TvReport<S> r;
        std::string what = "d_TV " + kind + " n=" + std::to_string(a.n);
        if (kind == "corank") {
            r = tvCorank(x, a.n, a.t, tol);
            what += " t=" + std::to_string(a.t);
        } else if (kind == "hitting") {
            r = tvHitting(x, a.n, tol);
        } else {
            r = tvProcess(x, a.n, tol);
        }
        json j = io::tvJson(r);
        j["x"] = io::scalarText(x);
        j["n"] = a.n;
        if (kind == "corank") j["t"] = a.t;
        emit(g, j, tvCsv(r), tvTable(r, what));
        return kExitOk;
    });
}

int runFg(long q, const std::string& nText, const std::string& mText, const Global& g) {
    const auto [n0, n1] = parseRange(nText, "--n");
    const auto [m0, m1] = parseRange(mText, "--m");
    const Rational tol = parseTol<Rational>(g);
    json rows = json::array();
    std::ostringstream csv;
    csv << "q,n,m,exact,fgLower,fgUpper,newUpper,ok\n";
    Table t({"q", "n", "m", "exact", "fgLower", "fgUpper", "newUpper", "ok"});
    bool allOk = true;
    for (long m = m0; m <= m1; ++m) {
        for (long n = n0; n <= n1; ++n) {
            const FgRow row = fgComparison(q, n, m, tol);
            allOk = allOk && row.ok();
            rows.push_back(io::fgJson(row));
            csv << q << ',' << n << ',' << m << ',' << row.exact.decimal(17) << ',' << row.fgLower.str() << ','
                << row.fgUpper.str() << ',' << row.newUpper.str() << ',' << (row.ok() ? "true" : "false") << '\n';
            t.add({std::to_string(q), std::to_string(n), std::to_string(m), row.exact.decimal(10),
                   row.fgLower.decimal(6), row.fgUpper.decimal(6), row.newUpper.decimal(6), row.ok() ? "yes" : "NO"});
        }
    }
    emit(g, rows.size() == 1 ? rows[0] : rows, csv.str(), t.str());
    return allOk ? kExitOk : kExitFailed;
}

int runCriticalX(long k, const Global& g) {
    const CriticalPoint c = criticalX(k);
    const json j{{"backend", Tracked::kBackendName}, {"k", k},          {"x", num(c.x, 17)},
                 {"y", num(c.y, 17)},                {"residual", c.residual}, {"bracket", c.bracket}};
    std::ostringstream csv;
    csv << "k,x,y,residual,bracket\n" << k << ',' << num(c.x, 17) << ',' << num(c.y, 17) << ',' << c.residual << ','
        << c.bracket << '\n';
    Table t({"k", "x_k", "y_k", "residual", "bracket"});
    t.add({std::to_string(k), num(c.x, 16), num(c.y, 16), num(c.residual, 3), num(c.bracket, 3)});
    emit(g, j, csv.str(), t.str());
    return kExitOk;
}

int runModeS(const std::string& xText, const Global& g) {
    return withBackend(xText, g, [&](const auto& x, const auto& tol) {
        using S = std::decay_t<decltype(x)>;
        const auto r = modeOfS(x, tol);
        json j{{"backend", S::kBackendName},
               {"x", io::scalarText(x)},
               {"mode", r.mode},
               {"modeProb", io::scalarText(r.modeProb)},
               {"tieWithNext", r.tieWithNext}};
        if constexpr (!S::kExact) j["err"] = num(r.modeProb.errBound(), 3);
        std::ostringstream csv;
        csv << "x,mode,modeProb,tieWithNext\n"
            << io::scalarText(x) << ',' << r.mode << ',' << io::scalarText(r.modeProb) << ','
            << (r.tieWithNext ? "true" : "false") << '\n';
        Table t({"x", "mode", "P(S = mode)", "tie with mode+1"});
        t.add({io::scalarText(x), std::to_string(r.mode), shown(r.modeProb), r.tieWithNext ? "yes" : "no"});
        emit(g, j, csv.str(), t.str());
        return kExitOk;
    });
}

int runTrajectory(const std::string& zText, const std::string& window, const std::vector<std::string>& extras,
                  const Global& g) {
    std::vector<long> dense;
    std::stringstream ss(zText);
    for (std::string item; std::getline(ss, item, ',');) {
        try {
            dense.push_back(std::stol(item));
        } catch (const std::logic_error&) {
            throw UsageError("--z: bad entry '" + item + "'");
        }
    }
    DelaySequence z = DelaySequence::fromDense(dense);
    for (const auto& e : extras) {
        const auto colon = e.find(':');
        if (colon == std::string::npos) throw UsageError("--extra expects index:value, got '" + e + "'");
        try {
            z.set(std::stol(e.substr(0, colon)), std::stol(e.substr(colon + 1)));
        } catch (const std::logic_error& err) {
            if (dynamic_cast<const DomainError*>(&err)) throw;
            throw UsageError("--extra expects index:value, got '" + e + "'");
        }
    }
    const auto [t0, t1] = parseRange(window, "--window");
    const Trajectory traj = phi(z, t0, t1);
    json j = io::trajectoryJson(traj);
    j["z"] = z.str();
    j["hittingTime"] = hittingTime(z);
    Table t({"t", "x_t"});
    for (long s = traj.tMin; s <= traj.tMax(); ++s) t.add({std::to_string(s), std::to_string(traj.at(s))});
    emit(g, j, io::trajectoryCsv(traj), "z = " + z.str() + "\n\n" + t.str());
    return kExitOk;
}

int runRankCounts(long q, long rows, long cols, bool enumerate, double cap, const Global& g) {
    if (!FqField::supported(q)) throw UsageError("--q " + std::to_string(q) + " is not a supported field order");
    if (rows < 0 || cols < 0) throw UsageError("--rows and --cols must be nonnegative");
    std::vector<mpz_class> counts;
    for (long r = 0; r <= std::min(rows, cols); ++r) counts.push_back(rankCountExact(q, rows, cols, r));
    json j = io::rankCountsJson(q, rows, cols, counts);
    std::string note;
    bool match = true;
    if (enumerate) {
        const auto enumerated = enumerateRankCounts(FqField::make(q), rows, cols, cap, g.threads);
        match = enumerated == counts;
        json e = json::array();
        for (const auto& c : enumerated) e.push_back(c.get_str());
        j["enumerated"] = e;
        j["match"] = match;
        note = match ? "enumeration agrees with the formula\n" : "ENUMERATION DISAGREES WITH THE FORMULA\n";
    }
    Table t({"rank", "count", "probability"});
    mpz_class total;
    mpz_ui_pow_ui(total.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(rows * cols));
    for (std::size_t r = 0; r < counts.size(); ++r) {
        const Rational p(counts[r], total);
        t.add({std::to_string(r), counts[r].get_str(), p.str() + " (~" + p.decimal(8) + ")"});
    }
    emit(g, j, io::rankCountsCsv(q, rows, cols, counts), t.str() + (note.empty() ? "" : "\n" + note));
    return match ? kExitOk : kExitFailed;
}

struct SimArgs {
    std::string specFile;
    std::string kind;
    std::string x;
    std::string n;
    std::optional<long> t;
    std::optional<long> q;
    std::optional<long> m;
    std::string method;
    std::string identity;
    std::string target;
    std::optional<long> zCap;
    long samples = 100000;
    double tol = 1e-9;
};

int runSimulate(const SimArgs& a, const Global& g, bool seedGiven, bool threadsGiven) {
    ExperimentSpec spec;
    if (!a.specFile.empty()) {
        std::ifstream in(a.specFile);
        if (!in) throw UsageError("cannot open --spec file '" + a.specFile + "'");
        json j;
        try {
            j = json::parse(in);
        } catch (const json::parse_error& e) {
            throw UsageError("--spec: " + std::string(e.what()));
        }
        spec = ExperimentSpec::fromJson(j);
        if (seedGiven || !j.contains("seed")) spec.seed = g.seed;
        if (threadsGiven || !j.contains("threads")) spec.threads = g.threads;
    } else {
        if (a.kind.empty()) throw UsageError("simulate needs --kind or --spec");
        spec.kind = a.kind;
        if (!a.x.empty()) spec.params["x"] = a.x;
        if (!a.n.empty()) {
            if (a.n == "inf") {
                spec.params["n"] = a.n;
            } else {
                try {
                    spec.params["n"] = std::stol(a.n);
                } catch (const std::logic_error&) {
                    throw UsageError("--n: expected an integer or inf, got '" + a.n + "'");
                }
            }
        }
        if (a.t) spec.params["t"] = *a.t;
        if (a.q) spec.params["q"] = *a.q;
        if (a.m) spec.params["m"] = *a.m;
        if (!a.method.empty()) spec.params["method"] = a.method;
        if (!a.identity.empty()) spec.params["identity"] = a.identity;
        if (!a.target.empty()) spec.params["target"] = a.target;
        if (a.zCap) spec.params["zCap"] = *a.zCap;
        spec.samples = a.samples;
        spec.tol = a.tol;
        spec.seed = g.seed;
        spec.threads = g.threads;
    }
    const bool stochastic = spec.kind.rfind("mc-", 0) == 0;
    if (stochastic) {
        std::cerr << "simulate: kind=" << spec.kind << " seed=" << spec.seed << " samples=" << spec.samples
                  << " threads=" << spec.threads << " rng=" << Rng::kName << '\n';
    }
    ComparisonReport r;
    try {
        r = runExperiment(spec);
    } catch (const json::exception& e) {
        throw UsageError("simulate: missing or malformed parameter (" + std::string(e.what()) + ")");
    }
    std::ostringstream csv;
    csv << "label,expected,observed,absDev,sigmaDev\n";
    Table t({"label", "expected", "observed", "absDev", "sigma"});
    for (const auto& row : r.rows) {
        csv << row.label << ',' << num(row.expected, 17) << ',' << num(row.observed, 17) << ',' << row.absDev << ','
            << row.sigmaDev << '\n';
        t.add({row.label, num(row.expected, 8), num(row.observed, 8), num(row.absDev, 3), num(row.sigmaDev, 3)});
    }
    std::ostringstream summary;
    summary << r.kind << ": " << (r.pass ? "PASS" : "FAIL");
    if (r.stochastic) {
        summary << "  max " << num(r.maxSigmaDev, 4) << " sigma (threshold " << r.threshold << ")  samples "
                << r.samples << "  seed " << r.seed;
    } else {
        summary << "  max |dev| " << num(r.maxAbsDev, 4) << " (tol " << r.threshold << ")";
    }
    if (!r.detail.empty()) summary << "  " << r.detail;
    emit(g, io::reportJson(r), csv.str(), (r.rows.empty() ? "" : t.str() + "\n") + summary.str() + '\n');
    return r.pass ? kExitOk : kExitFailed;
}

int runVerify(const std::string& suite, const Global& g) {
    const auto& names = suiteNames();
    if (std::find(names.begin(), names.end(), suite) == names.end()) {
        std::string list;
        for (const auto& s : names) list += (list.empty() ? "" : ", ") + s;
        throw UsageError("unknown suite '" + suite + "'; expected one of: " + list);
    }
    SuiteOptions opt;
    opt.seed = g.seed;
    opt.threads = g.threads;
    if (suite == "all" || suite == "monte-carlo") {
        std::cerr << "verify: seed=" << opt.seed << " threads=" << opt.threads << " rng=" << Rng::kName << '\n';
    }
    const auto results = runSuite(suite, opt);
    bool ok = true;
    json j = json::array();
    std::ostringstream csv;
    std::ostringstream table;
    csv << "id,name,pass,seconds,detail\n";
    for (const auto& r : results) {
        ok = ok && r.pass;
        j.push_back(io::criterionJson(r));
        std::string detail = r.detail;
        std::replace(detail.begin(), detail.end(), ',', ';');
        csv << r.id << ',' << r.name << ',' << (r.pass ? "true" : "false") << ',' << r.seconds << ',' << detail << '\n';
        char line[96];
        std::snprintf(line, sizeof line, "[%s] %2d %-16s %7.2fs  ", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                      r.seconds);
        table << line << r.detail << '\n';
    }
    emit(g, j, csv.str(), table.str());
    return ok ? kExitOk : kExitFailed;
}

CLI::App* deepest(CLI::App* app) {
    for (auto* sub : app->get_subcommands()) return deepest(sub);
    return app;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Countdown process, random-matrix corank laws, and total variation bounds"};
    app.fallthrough();
    app.require_subcommand(1);

    Global g;
    g.threads = defaultThreads();
    app.add_option("--tol", g.tol, "Truncation tolerance (default 1e-12)");
    auto* seedOpt = app.add_option("--seed", g.seed, "Seed for stochastic runs")->capture_default_str();
    app.add_option("--format", g.format, "Output format")
        ->check(CLI::IsMember({"json", "csv", "table"}))
        ->capture_default_str();
    auto* threadsOpt =
        app.add_option("--threads", g.threads, "Worker threads (env COUNTDOWN_THREADS)")->check(CLI::PositiveNumber);

    const char* xHelp = "Parameter x in (0,1); p/q selects the exact backend, a decimal the float backend";

    auto* dist = app.add_subcommand("dist", "Probability mass functions");
    dist->require_subcommand(1);
    DistArgs distArgs;
    std::string distKind;
    for (const char* kind : {"corank", "hitting", "rn"}) {
        auto* sub = dist->add_subcommand(kind, std::string("Law of ") +
                                                   (std::string(kind) == "corank"    ? "the height X^(n)_t"
                                                    : std::string(kind) == "hitting" ? "the hitting time S_n"
                                                                                     : "the remainder R_n"));
        sub->add_option("--x", distArgs.x, xHelp)->required();
        sub->add_option("--n", distArgs.n, "Cutoff n (integer or inf)")->capture_default_str();
        if (std::string(kind) == "corank") sub->add_option("--t", distArgs.t, "Time t")->capture_default_str();
        sub->add_option("--kmax", distArgs.kMax, "Truncate support at kmax");
        sub->callback([&distKind, kind] { distKind = kind; });
    }

    auto* tv = app.add_subcommand("tv", "Total variation distances");
    tv->require_subcommand(1);
    TvArgs tvArgs;
    std::string tvKind;
    for (const char* kind : {"corank", "hitting", "process"}) {
        auto* sub = tv->add_subcommand(kind, std::string("d_TV for the ") + kind + " comparison");
        sub->add_option("--x", tvArgs.x, xHelp)->required();
        sub->add_option("--n", tvArgs.n, "Cutoff n")->required();
        if (std::string(kind) == "corank") sub->add_option("--t", tvArgs.t, "Time t")->capture_default_str();
        sub->callback([&tvKind, kind] { tvKind = kind; });
    }

    long fgQ = 2;
    std::string fgN;
    std::string fgM = "0";
    auto* fg = app.add_subcommand("fg-compare", "Compare exact corank distance with the q^-(m+n+1) bounds");
    fg->add_option("--q", fgQ, "Field size")->required();
    fg->add_option("--n", fgN, "n or range a:b")->required();
    fg->add_option("--m", fgM, "m (column excess) or range a:b")->capture_default_str();

    long critK = 0;
    auto* crit = app.add_subcommand("critical-x", "Root of x^(k+1) = 1 - x where the mode of S moves to k+1");
    crit->add_option("--k", critK, "k >= 0")->required()->check(CLI::NonNegativeNumber);

    std::string modeX;
    auto* mode = app.add_subcommand("mode-s", "Mode of the hitting time S");
    mode->add_option("--x", modeX, xHelp)->required();

    std::string trajZ;
    std::string trajWindow = "-6:8";
    std::vector<std::string> trajExtra;
    auto* traj = app.add_subcommand("trajectory", "Render x = phi(z) on a window");
    traj->add_option("--z", trajZ, "Dense delays z_1,z_2,...")->required();
    traj->add_option("--window", trajWindow, "Inclusive window a:b")->capture_default_str();
    traj->add_option("--extra", trajExtra, "Extra sparse delay index:value (repeatable)");

    long rcQ = 2;
    long rcRows = 0;
    long rcCols = 0;
    bool rcEnumerate = false;
    double rcCap = kDefaultEnumerationCap;
    auto* rc = app.add_subcommand("rank-counts", "Number of rows x cols matrices over F_q of each rank");
    rc->add_option("--q", rcQ, "Field size")->required();
    rc->add_option("--rows", rcRows, "Rows")->required();
    rc->add_option("--cols", rcCols, "Columns")->required();
    rc->add_flag("--enumerate", rcEnumerate, "Also enumerate all matrices and compare");
    rc->add_option("--cap", rcCap, "Enumeration budget (matrices)")->capture_default_str();

    SimArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Run one experiment and compare with the exact law");
    simulate->add_option("--spec", sim.specFile, "Experiment JSON file");
    simulate->add_option("--kind", sim.kind, "Experiment kind")
        ->check(CLI::IsMember({"mc-corank", "mc-hitting", "mc-matrix", "oracle-pmf", "oracle-tv", "identity-sweep"}));
    simulate->add_option("--x", sim.x, "Parameter x");
    simulate->add_option("--n", sim.n, "Cutoff n");
    simulate->add_option("--t", sim.t, "Time t");
    simulate->add_option("--q", sim.q, "Field size (mc-matrix)");
    simulate->add_option("--m", sim.m, "Column excess (mc-matrix)");
    simulate->add_option("--method", sim.method, "matrix or span (mc-matrix)");
    simulate->add_option("--identity", sim.identity, "Identity name (identity-sweep)");
    simulate->add_option("--target", sim.target, "corank or hitting (oracle-tv)");
    simulate->add_option("--zcap", sim.zCap, "Per-coordinate cap (oracle-pmf)");
    simulate->add_option("--samples", sim.samples, "Draws")->capture_default_str()->check(CLI::PositiveNumber);
    simulate->add_option("--experiment-tol", sim.tol, "Absolute tolerance for deterministic kinds")
        ->capture_default_str();

    std::string suite = "all";
    auto* verify = app.add_subcommand("verify", "Run acceptance suites");
    verify->add_option("--suite", suite, "Suite name or all")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << deepest(&app)->help();
        return kExitUsage;
    }

    try {
        if (*dist) return runDist(distKind, distArgs, g);
        if (*tv) return runTv(tvKind, tvArgs, g);
        if (*fg) return runFg(fgQ, fgN, fgM, g);
        if (*crit) return runCriticalX(critK, g);
        if (*mode) return runModeS(modeX, g);
        if (*traj) return runTrajectory(trajZ, trajWindow, trajExtra, g);
        if (*rc) return runRankCounts(rcQ, rcRows, rcCols, rcEnumerate, rcCap, g);
        if (*simulate) return runSimulate(sim, g, seedOpt->count() > 0, threadsOpt->count() > 0);
        if (*verify) return runVerify(suite, g);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << deepest(&app)->help();
        return kExitUsage;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const MalformedTrajectory& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailed;
    }
    return kExitUsage;
}

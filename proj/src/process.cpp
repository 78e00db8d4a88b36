#include "countdown/process.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "countdown/errors.hpp"
#include "countdown/qseries.hpp"
#include "countdown/scalar.hpp"

namespace countdown {

Cutoff Cutoff::at(long n) {
    require(n >= 0, "cutoff must be nonnegative");
    return Cutoff(n);
}

Cutoff Cutoff::parse(const std::string& text) {
    if (text == "inf" || text == "infinity" || text == "oo") return infinite();
    std::size_t used = 0;
    long n = 0;
    try {
        n = std::stol(text, &used);
    } catch (const std::exception&) {
        throw DomainError("bad cutoff '" + text + "'");
    }
    if (used != text.size()) throw DomainError("bad cutoff '" + text + "'");
    return at(n);
}

long Cutoff::value() const {
    require(isFinite(), "cutoff is infinite");
    return n_;
}

DelaySequence DelaySequence::fromDense(std::span<const long> dense) {
    DelaySequence z;
    for (std::size_t i = 0; i < dense.size(); ++i) {
        require(dense[i] >= 0, "delays must be nonnegative");
        if (dense[i] > 0) z.entries_.emplace_back(static_cast<long>(i) + 1, dense[i]);
    }
    return z;
}

DelaySequence DelaySequence::fromSparse(std::vector<Entry> entries) {
    DelaySequence z;
    for (const auto& [i, v] : entries) z.set(i, z.at(i) + v);
    return z;
}

long DelaySequence::at(long i) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), i,
                               [](const Entry& e, long idx) { return e.first < idx; });
    return (it != entries_.end() && it->first == i) ? it->second : 0;
}

void DelaySequence::set(long i, long value) {
    require(i >= 1, "delay index must be >= 1");
    require(value >= 0, "delays must be nonnegative");
    auto it = std::lower_bound(entries_.begin(), entries_.end(), i,
                               [](const Entry& e, long idx) { return e.first < idx; });
    if (it != entries_.end() && it->first == i) {
        if (value == 0) {
            entries_.erase(it);
        } else {
            it->second = value;
        }
    } else if (value != 0) {
        entries_.insert(it, {i, value});
    }
}

long DelaySequence::total() const { return tailSum(1); }

long DelaySequence::tailSum(long k) const {
    long s = 0;
    for (auto it = entries_.rbegin(); it != entries_.rend() && it->first >= k; ++it) s += it->second;
    return s;
}

std::vector<long> DelaySequence::dense(long length) const {
    std::vector<long> out(static_cast<std::size_t>(std::max(0L, length)), 0);
    for (const auto& [i, v] : entries_) {
        if (i <= length) out[static_cast<std::size_t>(i - 1)] = v;
    }
    return out;
}

std::string DelaySequence::str() const {
    std::ostringstream os;
    os << '{';
    for (std::size_t j = 0; j < entries_.size(); ++j) {
        if (j) os << ", ";
        os << entries_[j].first << ':' << entries_[j].second;
    }
    os << '}';
    return os.str();
}

long heightAt(const DelaySequence& z, long t) {
    // T_k - k is strictly decreasing in k, so the height is the number of k with
    // T_k - k >= t. T_k is constant between support indices; count per segment.
    const auto& e = z.entries();
    long suffix = z.total();
    long lo = 0; // segment is k in (lo, hi]
    long count = 0;
    for (const auto& [idx, v] : e) {
        const long hi = idx;
        count += std::max(0L, std::min(hi, suffix - t) - lo);
        suffix -= v;
        lo = hi;
    }
    // Beyond the support T_k = 0: k <= -t.
    count += std::max(0L, -t - lo);
    return count;
}

Trajectory phi(const DelaySequence& z, long tMin, long tMax) {
    require(tMax >= tMin, "phi: empty window");
    Trajectory out;
    out.tMin = tMin;
    out.heights.reserve(static_cast<std::size_t>(tMax - tMin + 1));
    for (long t = tMin; t <= tMax; ++t) out.heights.push_back(heightAt(z, t));
    return out;
}

DelaySequence phiInverse(const Trajectory& traj) {
    if (traj.heights.empty()) throw MalformedTrajectory("empty trajectory");
    const long top = traj.heights.front();
    if (top != -traj.tMin) {
        throw MalformedTrajectory("trajectory must start on the diagonal x = -t (height " + std::to_string(top) +
                                  " at t = " + std::to_string(traj.tMin) + ")");
    }
    if (traj.heights.back() != 0) throw MalformedTrajectory("trajectory must end at height 0");
    std::vector<long> counts(static_cast<std::size_t>(top) + 1, 0);
    for (std::size_t j = 0; j < traj.heights.size(); ++j) {
        const long h = traj.heights[j];
        const long t = traj.tMin + static_cast<long>(j);
        if (h < 0) throw MalformedTrajectory("negative height at t = " + std::to_string(t));
        if (h < -t) throw MalformedTrajectory("height below the diagonal at t = " + std::to_string(t));
        if (j > 0) {
            const long step = traj.heights[j - 1] - h;
            if (step != 0 && step != 1) {
                throw MalformedTrajectory("step of " + std::to_string(step) + " at t = " + std::to_string(t));
            }
        }
        counts[static_cast<std::size_t>(h)] += 1;
    }
    DelaySequence z;
    for (long i = 1; i <= top; ++i) z.set(i, counts[static_cast<std::size_t>(i)] - 1);
    return z;
}

long hittingTime(const DelaySequence& z) { return z.total(); }

long deathTime(const DelaySequence& z, long k) {
    require(k >= 1, "deathTime: k must be >= 1");
    return z.tailSum(k) - k;
}

DelaySampler::DelaySampler(double x, Cutoff cutoff) : x_(x), cutoff_(cutoff) {
    require(x > 0.0 && x < 1.0, "DelaySampler: x must lie in (0,1)");
}

double DelaySampler::complementAbove(long level) {
    while (static_cast<long>(complements_.size()) <= level) {
        const long l = static_cast<long>(complements_.size());
        // Relative tolerance: the complement is about x^{l+1}/(1-x).
        const double tol = std::max(1e-300, 1e-17 * std::pow(x_, static_cast<double>(l + 1)));
        const auto c = tailComplement(Tracked(x_), l + 1, Tracked(tol));
        complements_.push_back(c.value.value());
    }
    return complements_[static_cast<std::size_t>(level)];
}

DelaySequence DelaySampler::operator()(Rng& rng) {
    DelaySequence z;
    if (cutoff_.isFinite()) {
        const long n = cutoff_.value();
        double xi = 1.0;
        for (long i = 1; i <= n; ++i) {
            xi *= x_;
            const auto v = rng.geometric(xi);
            if (v > 0) z.set(i, static_cast<long>(v));
        }
        return z;
    }
    long level = 0;
    bool conditioned = false; // on "some delay above `level` is nonzero"
    for (;;) {
        if (!conditioned) {
            if (!rng.bernoulli(complementAbove(level))) return z;
            conditioned = true;
        }
        const double xi = std::pow(x_, static_cast<double>(level + 1));
        // P(Z_{L+1} = 0 | some Z_i > 0 for i > L)
        const double pZero = (1.0 - xi) * complementAbove(level + 1) / complementAbove(level);
        if (!rng.bernoulli(pZero)) {
            z.set(level + 1, 1 + static_cast<long>(rng.geometric(xi)));
            conditioned = false;
        }
        ++level;
    }
}

DelaySequence sampleDelays(double x, Cutoff cutoff, Rng& rng) {
    DelaySampler sampler(x, cutoff);
    return sampler(rng);
}

ChainState chainStep(ChainState state, double x, Rng& rng) {
    require(state.height >= 0, "chain height must be nonnegative");
    ++state.time;
    if (state.height == 0) return state;
    if (!rng.bernoulli(std::pow(x, static_cast<double>(state.height)))) --state.height;
    return state;
}

long chainHittingTime(long n, double x, Rng& rng) {
    ChainState s{n, -n};
    while (s.height > 0) s = chainStep(s, x, rng);
    return s.time;
}

} // namespace countdown

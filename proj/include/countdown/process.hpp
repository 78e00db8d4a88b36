#pragma once

// The countdown map: a finitely supported delay sequence z = (z_1, z_2, ...)
// determines a path x_t that follows the diagonal x = -t from the far past,
// lingers z_i extra steps at height i, and reaches 0 at time z_1 + z_2 + ...

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "countdown/rng.hpp"

namespace countdown {

/// Index n of the truncation Z^{(n)}, or the untruncated process.
class Cutoff {
public:
    static Cutoff infinite() { return Cutoff(-1); }
    static Cutoff at(long n);
    /// "inf", "infinity" or a nonnegative integer.
    static Cutoff parse(const std::string& text);

    bool isInfinite() const { return n_ < 0; }
    bool isFinite() const { return n_ >= 0; }
    /// Finite value; throws DomainError when infinite.
    long value() const;
    std::string str() const { return isInfinite() ? "inf" : std::to_string(n_); }

    friend bool operator==(Cutoff a, Cutoff b) = default;

private:
    explicit Cutoff(long n) : n_(n) {}
    long n_;
};

/// Finitely supported sequence of nonnegative delays, stored sparsely.
class DelaySequence {
public:
    using Entry = std::pair<long, long>; // (index >= 1, value > 0)

    DelaySequence() = default;
    /// dense[0] is z_1.
    static DelaySequence fromDense(std::span<const long> dense);
    static DelaySequence fromSparse(std::vector<Entry> entries);

    long at(long i) const;
    void set(long i, long value);
    /// Largest i with z_i > 0, or 0 for the zero sequence.
    long maxSupportIndex() const { return entries_.empty() ? 0 : entries_.back().first; }
    long total() const;
    /// z_k + z_{k+1} + ...
    long tailSum(long k) const;
    const std::vector<Entry>& entries() const { return entries_; }
    std::vector<long> dense(long length) const;
    std::string str() const;

    friend bool operator==(const DelaySequence&, const DelaySequence&) = default;

private:
    std::vector<Entry> entries_; // sorted by index, zero values omitted
};

/// A window [tMin, tMin + heights.size() - 1] of a countdown path.
struct Trajectory {
    long tMin = 0;
    std::vector<long> heights;

    long tMax() const { return tMin + static_cast<long>(heights.size()) - 1; }
    long at(long t) const { return heights.at(static_cast<std::size_t>(t - tMin)); }
    friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

/// Height of phi(z) at time t: #{k >= 1 : z_k + z_{k+1} + ... - k >= t}.
long heightAt(const DelaySequence& z, long t);

Trajectory phi(const DelaySequence& z, long tMin, long tMax);

/// Recovers z from a window that starts on the diagonal and ends at height 0.
DelaySequence phiInverse(const Trajectory& traj);

/// First time the path reaches 0; equals the sum of the delays.
long hittingTime(const DelaySequence& z);

/// The unique t with x_t = k and x_{t+1} = k - 1.
long deathTime(const DelaySequence& z, long k);

/// Draws independent delays with P(Z_i >= k) = x^{ik}, zero above the cutoff.
///
/// For the untruncated law the sampler walks up the levels and, at each level
/// L, decides with probability 1 - prod_{i>L}(1 - x^i) whether any delay above L
/// is nonzero; the next coordinate is then drawn from its law conditioned on
/// that event. No truncation is involved.
class DelaySampler {
public:
    DelaySampler(double x, Cutoff cutoff);

    DelaySequence operator()(Rng& rng);

private:
    double complementAbove(long level); // 1 - prod_{i>level}(1 - x^i), cached

    double x_;
    Cutoff cutoff_;
    std::vector<double> complements_;
};

DelaySequence sampleDelays(double x, Cutoff cutoff, Rng& rng);

struct ChainState {
    long height = 0;
    long time = 0;
};

/// One step of the pure-death chain: stay at i with probability x^i, else drop to i-1.
ChainState chainStep(ChainState state, double x, Rng& rng);

/// Runs the chain from height n at time -n and returns the first time it is 0.
long chainHittingTime(long n, double x, Rng& rng);

} // namespace countdown

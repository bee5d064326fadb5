// Monte Carlo machinery: per-device sequence-number generation and
// repeated clustering trials over X devices sending Y probe requests
// each. Each trial's RNG is derived from (seed, trial index), so trials
// are reproducible and order-independent.

#ifndef WICOUNT_SIMULATE_HPP
#define WICOUNT_SIMULATE_HPP

#include <cstdint>
#include <cstdlib>
#include <map>
#include <random>
#include <stdexcept>
#include <vector>

#include "wicount/truesight.hpp"

namespace wicount {

constexpr std::uint64_t kDefaultSeed = 42;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// mt19937_64 with unbiased bounded draws (mask rejection, no modulo
/// bias). The raw engine output is pinned by the standard, so streams
/// reproduce across builds.
class TrialRng {
public:
    explicit TrialRng(std::uint64_t seed) : engine_(seed) {}

    static TrialRng for_trial(std::uint64_t seed, std::uint64_t trial_index) {
        return TrialRng(splitmix64(seed ^ splitmix64(trial_index)));
    }

    std::uint64_t bits() { return engine_(); }

    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("empty draw range");
        std::uint64_t mask = bound - 1;
        mask |= mask >> 1;
        mask |= mask >> 2;
        mask |= mask >> 4;
        mask |= mask >> 8;
        mask |= mask >> 16;
        mask |= mask >> 32;
        for (;;) {
            const std::uint64_t v = engine_() & mask;
            if (v < bound) return v;
        }
    }

    /// Uniform integer in [lo, hi], inclusive.
    std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
        if (lo > hi) throw std::invalid_argument("empty draw range");
        return lo + static_cast<std::int64_t>(
                        below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

private:
    std::mt19937_64 engine_;
};

/// One counter step: add the increment, wrap the 12-bit space by
/// subtracting 4096 when the sum leaves it.
inline std::uint16_t advance_seq(std::uint16_t prev, int increment,
                                 int seq_space = 4096) {
    int next = prev + increment;
    if (next >= seq_space) next -= seq_space;
    return static_cast<std::uint16_t>(next);
}

struct TrialConfig {
    int devices = 1;            // X
    int probes_per_device = 1;  // Y
    int trials = 1;             // N
    int threshold = 50;
    std::uint64_t seed = kDefaultSeed;
    /// In-device gap distribution: uniform over [gap_min, gap_max].
    int gap_min = 1;
    int gap_max = 49;

    void validate() const {
        if (devices < 1 || probes_per_device < 1 || trials < 1)
            throw std::invalid_argument("devices, probes and trials must all be >= 1");
        if (gap_min < 1 || gap_max < gap_min)
            throw std::invalid_argument("need 1 <= gap_min <= gap_max");
        if (threshold <= 0 || threshold > 4096)
            throw std::invalid_argument("threshold must be in 1..4096");
    }
};

/// Distribution of estimates for one (X, Y, N) configuration.
struct TrialHistogram {
    TrialConfig config;
    std::map<int, int> counts;  // estimate -> occurrences
    int correct = 0;            // estimate == X
    int within_one = 0;         // |estimate - X| <= 1

    double correct_rate() const {
        return static_cast<double>(correct) / config.trials;
    }
    double within_one_rate() const {
        return static_cast<double>(within_one) / config.trials;
    }
};

/// One device's probe-request sequence numbers: random start in
/// [0, 4095], then Y-1 steps of a random gap in [gap_min, gap_max],
/// wrapping at 4096.
inline std::vector<std::uint16_t> gen_device_seqnums(int probes, TrialRng& rng,
                                                     int gap_min = 1,
                                                     int gap_max = 49) {
    if (probes < 1) throw std::invalid_argument("probes must be >= 1");
    std::vector<std::uint16_t> seqs;
    seqs.reserve(static_cast<std::size_t>(probes));
    seqs.push_back(static_cast<std::uint16_t>(rng.below(4096)));
    for (int i = 1; i < probes; ++i) {
        const int gap = static_cast<int>(rng.uniform(gap_min, gap_max));
        seqs.push_back(advance_seq(seqs.back(), gap));
    }
    return seqs;
}

/// Pools X devices' sequence numbers and returns the cluster count.
inline int run_trial(const TrialConfig& config, TrialRng& rng) {
    std::vector<std::uint16_t> pool;
    pool.reserve(static_cast<std::size_t>(config.devices) *
                 static_cast<std::size_t>(config.probes_per_device));
    for (int d = 0; d < config.devices; ++d) {
        auto seqs = gen_device_seqnums(config.probes_per_device, rng, config.gap_min,
                                       config.gap_max);
        pool.insert(pool.end(), seqs.begin(), seqs.end());
    }
    return static_cast<int>(cluster_count(pool, ClusterConfig{config.threshold, 4096}));
}

/// Config for one row of a multi-row sweep. Rows get decorrelated seeds
/// derived from the user seed and (X, Y); the derived seed is reported,
/// so `simulate` with it reproduces the row exactly.
inline TrialConfig table_row_config(int devices, int probes_per_device, int trials,
                                    std::uint64_t seed) {
    TrialConfig config;
    config.devices = devices;
    config.probes_per_device = probes_per_device;
    config.trials = trials;
    config.seed = splitmix64(splitmix64(seed) ^
                             (static_cast<std::uint64_t>(devices) << 32 |
                              static_cast<std::uint64_t>(probes_per_device)));
    return config;
}

/// N independent trials; deterministic for a given seed.
inline TrialHistogram run_monte_carlo(const TrialConfig& config) {
    config.validate();
    TrialHistogram hist;
    hist.config = config;
    for (int i = 0; i < config.trials; ++i) {
        TrialRng rng = TrialRng::for_trial(config.seed, static_cast<std::uint64_t>(i));
        const int estimate = run_trial(config, rng);
        ++hist.counts[estimate];
        if (estimate == config.devices) ++hist.correct;
        if (std::abs(estimate - config.devices) <= 1) ++hist.within_one;
    }
    return hist;
}

}  // namespace wicount

#endif  // WICOUNT_SIMULATE_HPP

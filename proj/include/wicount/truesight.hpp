// TrueSight: same classification as Vision, but devices sharing one
// frame-body fingerprint are separated by their sequence numbers.
// Probe-only stations emit near-consecutive sequence numbers, so
// single-linkage clustering with a gap threshold splits one fingerprint
// group into its individual senders.

#ifndef WICOUNT_TRUESIGHT_HPP
#define WICOUNT_TRUESIGHT_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "wicount/fingerprint.hpp"
#include "wicount/frame.hpp"
#include "wicount/vision.hpp"

namespace wicount {

struct ClusterConfig {
    /// Adjacent sorted values split a cluster when their gap reaches the
    /// threshold (gap >= threshold). 50 separates the <=49 in-device
    /// gaps from fresh random starts.
    int threshold = 50;
    /// Sequence numbers live in [0, seq_space). Distance is linear: a
    /// counter wrapping 4095 -> 0 lands at the far end of the range.
    int seq_space = 4096;
};

struct TrueSightCount {
    std::size_t connected_devices = 0;
    std::size_t unconnected_devices = 0;  // total clusters over all fingerprints
    std::size_t total = 0;
    std::map<FrameBodyFingerprint, std::size_t> per_fingerprint_clusters;
};

/// Single-linkage cluster count on one dimension: sort the distinct
/// values and split wherever an adjacent gap reaches the threshold.
/// Duplicates carry no information and are dropped first.
inline std::size_t cluster_count(std::span<const std::uint16_t> seq_nums,
                                 const ClusterConfig& config = {}) {
    if (config.threshold <= 0 || config.threshold > config.seq_space)
        throw std::invalid_argument("cluster threshold must be in 1..seq_space");
    for (std::uint16_t v : seq_nums)
        if (v >= config.seq_space)
            throw std::out_of_range("sequence number " + std::to_string(v) +
                                    " outside [0, " + std::to_string(config.seq_space) +
                                    ")");
    if (seq_nums.empty()) return 0;

    std::vector<std::uint16_t> sorted(seq_nums.begin(), seq_nums.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    std::size_t clusters = 1;
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i] - sorted[i - 1] >= config.threshold) ++clusters;
    return clusters;
}

/// Vision's classification, then per-fingerprint clustering of the
/// probing-set probe requests. The unconnected count is the cluster
/// total, replacing Vision's one-fingerprint-one-device assumption.
inline TrueSightCount truesight_estimate(std::span<const ParsedFrame> frames,
                                         const MacClassification& macs,
                                         const ClusterConfig& config = {},
                                         const IeFilter& filter = IeFilter{}) {
    std::map<FrameBodyFingerprint, std::vector<std::uint16_t>> groups;
    for (const auto& frame : frames) {
        if (frame.kind != FrameKind::ProbeRequest || !frame.addr2 || !frame.seq_num)
            continue;
        if (!macs.probing_set.contains(*frame.addr2)) continue;
        groups[fingerprint_of(frame.ies, filter)].push_back(*frame.seq_num);
    }

    TrueSightCount count;
    count.connected_devices = macs.connected_set.size();
    for (auto& [fp, seqs] : groups) {
        const std::size_t clusters = cluster_count(seqs, config);
        count.per_fingerprint_clusters[fp] = clusters;
        count.unconnected_devices += clusters;
    }
    count.total = count.connected_devices + count.unconnected_devices;
    return count;
}

inline TrueSightCount truesight_estimate(std::span<const ParsedFrame> frames,
                                         const ClusterConfig& config = {},
                                         const IeFilter& filter = IeFilter{}) {
    return truesight_estimate(frames, classify_macs(frames), config, filter);
}

}  // namespace wicount

#endif  // WICOUNT_TRUESIGHT_HPP

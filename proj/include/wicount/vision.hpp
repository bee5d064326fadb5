// Vision: partition the MAC addresses seen in a capture into APs,
// connected devices and probing-only devices, then count connected
// devices by MAC address and unconnected devices by distinct
// frame-body fingerprint. Fingerprints absorb MAC randomization: any
// number of random addresses sharing one frame body count once.

#ifndef WICOUNT_VISION_HPP
#define WICOUNT_VISION_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wicount/fingerprint.hpp"
#include "wicount/frame.hpp"

namespace wicount {

/// The three disjoint address sets. Multicast addresses never appear.
struct MacClassification {
    std::set<MacAddress> ap_set;         // beacon sources
    std::set<MacAddress> connected_set;  // data-frame endpoints minus APs
    std::set<MacAddress> probing_set;    // probe sources minus the above
};

struct VisionCount {
    std::size_t connected_devices = 0;
    std::size_t unconnected_devices = 0;  // distinct fingerprints
    std::size_t total = 0;
    std::map<FrameBodyFingerprint, std::set<MacAddress>> fingerprint_index;
    /// Fingerprints also seen in probes from connected MACs; a nonzero
    /// value marks a potential double count (same device tallied by MAC
    /// and by fingerprint).
    std::size_t shared_fingerprints = 0;
};

/// Address classification over a whole batch of frames. Precedence is
/// global, not temporal: a MAC seen in any data frame of the batch
/// suppresses its probe requests everywhere in the batch.
inline MacClassification classify_macs(std::span<const ParsedFrame> frames) {
    MacClassification result;
    for (const auto& frame : frames) {
        if (frame.kind == FrameKind::Beacon && frame.addr2 &&
            !frame.addr2->is_multicast())
            result.ap_set.insert(*frame.addr2);
    }
    for (const auto& frame : frames) {
        if (frame.kind != FrameKind::Data) continue;
        for (const auto& addr : {frame.addr1, frame.addr2}) {
            if (addr && !addr->is_multicast() && !result.ap_set.contains(*addr))
                result.connected_set.insert(*addr);
        }
    }
    for (const auto& frame : frames) {
        if (frame.kind != FrameKind::ProbeRequest || !frame.addr2) continue;
        const MacAddress& src = *frame.addr2;
        if (src.is_multicast() || result.ap_set.contains(src) ||
            result.connected_set.contains(src))
            continue;
        result.probing_set.insert(src);
    }
    return result;
}

/// Counting pass on top of an existing classification.
inline VisionCount vision_estimate(std::span<const ParsedFrame> frames,
                                   const MacClassification& macs,
                                   const IeFilter& filter = IeFilter{}) {
    VisionCount count;
    count.connected_devices = macs.connected_set.size();
    std::set<FrameBodyFingerprint> from_connected;
    for (const auto& frame : frames) {
        if (frame.kind != FrameKind::ProbeRequest || !frame.addr2) continue;
        if (macs.probing_set.contains(*frame.addr2))
            count.fingerprint_index[fingerprint_of(frame.ies, filter)].insert(
                *frame.addr2);
        else if (macs.connected_set.contains(*frame.addr2))
            from_connected.insert(fingerprint_of(frame.ies, filter));
    }
    count.unconnected_devices = count.fingerprint_index.size();
    count.total = count.connected_devices + count.unconnected_devices;
    for (const auto& fp : from_connected)
        if (count.fingerprint_index.contains(fp)) ++count.shared_fingerprints;
    return count;
}

inline VisionCount vision_estimate(std::span<const ParsedFrame> frames,
                                   const IeFilter& filter = IeFilter{}) {
    return vision_estimate(frames, classify_macs(frames), filter);
}

/// One tumbling window of frames. Start is aligned to a multiple of the
/// window length.
struct WindowSlice {
    std::int64_t start_us = 0;
    std::vector<ParsedFrame> frames;
};

namespace detail {

inline std::int64_t floor_div(std::int64_t value, std::int64_t divisor) {
    std::int64_t q = value / divisor;
    if (value % divisor != 0 && (value < 0) != (divisor < 0)) --q;
    return q;
}

}  // namespace detail

/// Capture stacks reorder slightly; up to this much disorder is sorted
/// away, anything worse is rejected as an ingest problem.
constexpr std::int64_t kMaxTimestampDisorderUs = 1'000'000;

/// Splits a near-time-ordered frame stream into tumbling windows,
/// including empty windows between the first and last frame.
inline std::vector<WindowSlice> split_windows(std::span<const ParsedFrame> frames,
                                              std::int64_t window_us) {
    if (window_us <= 0)
        throw std::invalid_argument("window length must be positive");
    std::vector<WindowSlice> slices;
    if (frames.empty()) return slices;

    std::int64_t running_max = frames.front().timestamp_us;
    for (const auto& frame : frames) {
        if (frame.timestamp_us + kMaxTimestampDisorderUs < running_max)
            throw std::invalid_argument(
                "frame timestamps out of order by more than 1s");
        running_max = std::max(running_max, frame.timestamp_us);
    }

    std::vector<ParsedFrame> sorted(frames.begin(), frames.end());
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const ParsedFrame& a, const ParsedFrame& b) {
                         return a.timestamp_us < b.timestamp_us;
                     });

    const std::int64_t first = detail::floor_div(sorted.front().timestamp_us, window_us);
    const std::int64_t last = detail::floor_div(sorted.back().timestamp_us, window_us);
    std::size_t pos = 0;
    for (std::int64_t w = first; w <= last; ++w) {
        WindowSlice slice;
        slice.start_us = w * window_us;
        const std::int64_t end_us = slice.start_us + window_us;
        while (pos < sorted.size() && sorted[pos].timestamp_us < end_us)
            slice.frames.push_back(sorted[pos++]);
        slices.push_back(std::move(slice));
    }
    return slices;
}

/// Per-window Vision counts over a time-ordered stream.
inline std::vector<std::pair<std::int64_t, VisionCount>> window_estimates(
    std::span<const ParsedFrame> frames, std::int64_t window_us,
    const IeFilter& filter = IeFilter{}) {
    std::vector<std::pair<std::int64_t, VisionCount>> series;
    for (const auto& slice : split_windows(frames, window_us))
        series.emplace_back(slice.start_us, vision_estimate(slice.frames, filter));
    return series;
}

}  // namespace wicount

#endif  // WICOUNT_VISION_HPP

// Turns a SynthScenario into a time-ordered frame stream and writes it
// back out as a pcap capture. Every device keeps one sequence counter
// shared across its frame kinds, incremented per transmitted frame, the
// way real stations number their packets. Randomize-per-probe devices
// draw a fresh locally-administered source address for every probe while
// the counter and frame body stay continuous.

#ifndef WICOUNT_SYNTH_HPP
#define WICOUNT_SYNTH_HPP

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "wicount/frame.hpp"
#include "wicount/pcap.hpp"
#include "wicount/scenario.hpp"
#include "wicount/simulate.hpp"

namespace wicount {

namespace detail {

struct TxEvent {
    std::int64_t time_us = 0;
    std::size_t device = 0;  // index into per-device counters
    FrameKind kind = FrameKind::Other;
    MacAddress addr1;
    MacAddress addr2;  // meaningful for stable senders; probers may redraw
    const ProberSpec* prober = nullptr;
    const std::vector<InformationElement>* ies = nullptr;
};

inline MacAddress random_local_mac(TrialRng& rng, std::set<MacAddress>& used) {
    for (;;) {
        MacAddress mac;
        for (auto& octet : mac.octets)
            octet = static_cast<std::uint8_t>(rng.below(256));
        mac.octets[0] = static_cast<std::uint8_t>((mac.octets[0] & ~0x01) | 0x02);
        if (used.insert(mac).second) return mac;
    }
}

inline std::vector<std::int64_t> sorted_times(int count, std::int64_t span_us,
                                              TrialRng& rng) {
    std::vector<std::int64_t> times(static_cast<std::size_t>(count));
    for (auto& t : times) t = static_cast<std::int64_t>(rng.below(
                               static_cast<std::uint64_t>(span_us)));
    std::sort(times.begin(), times.end());
    return times;
}

}  // namespace detail

/// Default IEs for synthetic beacons: SSID plus basic rates.
inline std::vector<InformationElement> default_beacon_ies() {
    return {InformationElement(0, {'s', 'y', 'n', 't', 'h'}),
            InformationElement(1, {0x82, 0x84, 0x8b, 0x96})};
}

/// Expands a scenario into parsed frames, globally time-ordered.
inline std::vector<ParsedFrame> synth_frames(const SynthScenario& scenario,
                                             TrialRng& rng) {
    scenario.validate();

    // Device slots: one counter per AP, station and prober.
    std::vector<std::uint16_t> counters;
    std::set<MacAddress> used_macs;
    auto new_device = [&](std::optional<std::uint16_t> start) {
        counters.push_back(start ? *start
                                 : static_cast<std::uint16_t>(rng.below(4096)));
        return counters.size() - 1;
    };

    const auto beacon_ies = default_beacon_ies();
    std::vector<detail::TxEvent> events;

    std::vector<std::size_t> ap_device(scenario.aps.size());
    for (std::size_t i = 0; i < scenario.aps.size(); ++i) {
        const auto& ap = scenario.aps[i];
        ap_device[i] = new_device(std::nullopt);
        used_macs.insert(ap.mac);
        for (std::int64_t t : detail::sorted_times(ap.beacon_count, scenario.span_us, rng)) {
            detail::TxEvent ev;
            ev.time_us = t;
            ev.device = ap_device[i];
            ev.kind = FrameKind::Beacon;
            ev.addr1 = MacAddress::broadcast();
            ev.addr2 = ap.mac;
            ev.ies = &beacon_ies;
            events.push_back(ev);
        }
    }

    for (const auto& sta : scenario.connected) {
        const std::size_t sta_dev = new_device(std::nullopt);
        used_macs.insert(sta.mac);
        // The AP's counter keeps running across its beacons and data frames.
        std::size_t ap_dev = 0;
        for (std::size_t i = 0; i < scenario.aps.size(); ++i)
            if (scenario.aps[i].mac == sta.ap) ap_dev = ap_device[i];
        const auto times = detail::sorted_times(sta.data_count, scenario.span_us, rng);
        for (int i = 0; i < sta.data_count; ++i) {
            detail::TxEvent ev;
            ev.time_us = times[static_cast<std::size_t>(i)];
            ev.kind = FrameKind::Data;
            if (i % 2 == 0) {  // station -> AP, then AP -> station
                ev.device = sta_dev;
                ev.addr1 = sta.ap;
                ev.addr2 = sta.mac;
            } else {
                ev.device = ap_dev;
                ev.addr1 = sta.mac;
                ev.addr2 = sta.ap;
            }
            events.push_back(ev);
        }
    }

    for (const auto& prober : scenario.probers) {
        const std::size_t dev = new_device(prober.start_seq);
        if (prober.behavior == ProberSpec::MacBehavior::Stable)
            used_macs.insert(prober.stable_mac);
        for (std::int64_t t :
             detail::sorted_times(prober.probe_count, scenario.span_us, rng)) {
            detail::TxEvent ev;
            ev.time_us = t;
            ev.device = dev;
            ev.kind = FrameKind::ProbeRequest;
            ev.addr1 = MacAddress::broadcast();
            ev.prober = &prober;
            ev.ies = &prober.ies;
            events.push_back(ev);
        }
    }

    // Counters advance in global transmission order.
    std::stable_sort(events.begin(), events.end(),
                     [](const detail::TxEvent& a, const detail::TxEvent& b) {
                         return a.time_us < b.time_us;
                     });

    std::vector<ParsedFrame> frames;
    frames.reserve(events.size());
    for (const auto& ev : events) {
        ParsedFrame frame;
        frame.kind = ev.kind;
        frame.timestamp_us = ev.time_us;
        frame.addr1 = ev.addr1;
        if (ev.prober && ev.prober->behavior == ProberSpec::MacBehavior::RandomizePerProbe)
            frame.addr2 = detail::random_local_mac(rng, used_macs);
        else if (ev.prober)
            frame.addr2 = ev.prober->stable_mac;
        else
            frame.addr2 = ev.addr2;
        frame.seq_num = counters[ev.device];
        counters[ev.device] = advance_seq(counters[ev.device], 1);
        if (ev.ies) frame.ies = *ev.ies;
        frames.push_back(std::move(frame));
    }
    return frames;
}

namespace detail {

inline std::uint32_t crc32_ieee(std::span<const std::uint8_t> bytes) {
    std::uint32_t crc = 0xffffffffu;
    for (std::uint8_t b : bytes) {
        crc ^= b;
        for (int i = 0; i < 8; ++i)
            crc = (crc & 1u) ? (crc >> 1) ^ 0xedb88320u : crc >> 1;
    }
    return ~crc;
}

inline void append_mac(std::vector<std::uint8_t>& out, const MacAddress& mac) {
    out.insert(out.end(), mac.octets.begin(), mac.octets.end());
}

}  // namespace detail

struct CaptureWriteOptions {
    /// Append a CRC32 FCS to every frame and say so in the radiotap
    /// flags. Only honored for link type 127, where the flags field can
    /// announce it.
    bool include_fcs = false;
};

/// Serializes one frame back to 802.11 bytes (no pseudo-header).
inline std::vector<std::uint8_t> encode_frame(const ParsedFrame& frame) {
    std::uint8_t fc0 = 0;
    switch (frame.kind) {
        case FrameKind::Beacon: fc0 = 0x80; break;
        case FrameKind::ProbeRequest: fc0 = 0x40; break;
        case FrameKind::Data: fc0 = 0x08; break;
        case FrameKind::Other:
            throw std::invalid_argument("cannot encode frames of kind Other");
    }
    std::vector<std::uint8_t> out{fc0, 0x00, 0x00, 0x00};  // frame control, duration
    const MacAddress addr1 = frame.addr1.value_or(MacAddress::broadcast());
    const MacAddress addr2 = frame.addr2.value_or(MacAddress{});
    detail::append_mac(out, addr1);
    detail::append_mac(out, addr2);
    // addr3 (BSSID): the sender for beacons, broadcast for probes,
    // the receiver for data.
    if (frame.kind == FrameKind::Beacon)
        detail::append_mac(out, addr2);
    else if (frame.kind == FrameKind::ProbeRequest)
        detail::append_mac(out, MacAddress::broadcast());
    else
        detail::append_mac(out, addr1);
    const std::uint16_t seq_ctl =
        static_cast<std::uint16_t>(frame.seq_num.value_or(0) << 4);
    out.push_back(static_cast<std::uint8_t>(seq_ctl));
    out.push_back(static_cast<std::uint8_t>(seq_ctl >> 8));
    if (frame.kind != FrameKind::Data) {
        for (const auto& ie : frame.ies) {
            out.push_back(ie.tag);
            out.push_back(ie.length());
            out.insert(out.end(), ie.value.begin(), ie.value.end());
        }
    }
    return out;
}

/// Minimal radiotap header: version, length and a flags field that
/// states the FCS situation explicitly.
inline std::vector<std::uint8_t> encode_radiotap_header(bool fcs_present) {
    std::vector<std::uint8_t> rt{0x00, 0x00, 0x09, 0x00,
                                 0x02, 0x00, 0x00, 0x00,  // presence: flags only
                                 0x00};
    if (fcs_present) rt[8] = 0x10;
    return rt;
}

/// Writes frames as a pcap capture readable by read_frames. The frames
/// must already be time-ordered.
inline void write_capture(std::span<const ParsedFrame> frames,
                          const std::filesystem::path& path, std::uint32_t link_type,
                          const CaptureWriteOptions& options = {}) {
    if (link_type != kLinkTypeIeee80211 && link_type != kLinkTypeRadiotap)
        throw std::invalid_argument("link type must be 105 or 127");
    for (std::size_t i = 1; i < frames.size(); ++i)
        if (frames[i].timestamp_us < frames[i - 1].timestamp_us)
            throw std::invalid_argument("frames must be time-ordered");

    const bool fcs = options.include_fcs && link_type == kLinkTypeRadiotap;
    PcapWriter writer(path, link_type);
    for (const auto& frame : frames) {
        std::vector<std::uint8_t> bytes;
        if (link_type == kLinkTypeRadiotap) bytes = encode_radiotap_header(fcs);
        const std::size_t frame_start = bytes.size();
        const auto body = encode_frame(frame);
        bytes.insert(bytes.end(), body.begin(), body.end());
        if (fcs) {
            const std::uint32_t crc = detail::crc32_ieee(
                std::span<const std::uint8_t>(bytes).subspan(frame_start));
            for (int i = 0; i < 4; ++i)
                bytes.push_back(static_cast<std::uint8_t>(crc >> (8 * i)));
        }
        writer.write_record(frame.timestamp_us, bytes);
    }
    writer.flush();
}

}  // namespace wicount

#endif  // WICOUNT_SYNTH_HPP

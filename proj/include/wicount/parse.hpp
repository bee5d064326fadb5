// 802.11 MAC header decoding and the file-to-frames ingest pipeline.
//
// Frame control is a little-endian 16-bit field: bits 0-1 version,
// bits 2-3 type, bits 4-7 subtype. Management and data frames put
// addr1 at offset 4, addr2 at 10, addr3 at 16 and sequence control at
// 22; the management frame body (IE list) starts at 24.

#ifndef WICOUNT_PARSE_HPP
#define WICOUNT_PARSE_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "wicount/frame.hpp"
#include "wicount/pcap.hpp"
#include "wicount/radiotap.hpp"

namespace wicount {

/// Why a frame was dropped instead of parsed. Dropped frames never
/// reach the counting stages.
enum class SkipReason : std::uint8_t {
    TooShort,      // shorter than its mandatory header
    BadVersion,    // frame-control version bits != 0
    MalformedIes,  // an IE length overruns the frame body
    Fragment,      // fragment number != 0; only fragment 0 is counted
};

inline const char* to_string(SkipReason reason) {
    switch (reason) {
        case SkipReason::TooShort: return "too_short";
        case SkipReason::BadVersion: return "bad_version";
        case SkipReason::MalformedIes: return "malformed_ies";
        case SkipReason::Fragment: return "fragment";
    }
    return "unknown";
}

using ParseResult = std::variant<ParsedFrame, SkipReason>;

struct SequenceControl {
    std::uint8_t fragment = 0;   // bits 0-3
    std::uint16_t sequence = 0;  // bits 4-15, 0..4095
};

inline SequenceControl decode_sequence_control(std::uint16_t raw) {
    return {static_cast<std::uint8_t>(raw & 0x0f),
            static_cast<std::uint16_t>(raw >> 4)};
}

inline FrameKind classify_frame_control(std::uint8_t type, std::uint8_t subtype) {
    if (type == 0 && subtype == 4) return FrameKind::ProbeRequest;
    if (type == 0 && subtype == 8) return FrameKind::Beacon;
    if (type == 2) return FrameKind::Data;  // all subtypes, QoS and null included
    return FrameKind::Other;
}

namespace detail {

inline MacAddress read_mac(std::span<const std::uint8_t> bytes, std::size_t offset) {
    MacAddress mac;
    for (std::size_t i = 0; i < 6; ++i) mac.octets[i] = bytes[offset + i];
    return mac;
}

inline std::optional<std::vector<InformationElement>> parse_ies(
    std::span<const std::uint8_t> body) {
    std::vector<InformationElement> ies;
    std::size_t pos = 0;
    while (pos < body.size()) {
        if (pos + 2 > body.size()) return std::nullopt;
        const std::uint8_t tag = body[pos];
        const std::uint8_t len = body[pos + 1];
        pos += 2;
        if (pos + len > body.size()) return std::nullopt;
        ies.emplace_back(tag, std::vector<std::uint8_t>(body.begin() + pos,
                                                        body.begin() + pos + len));
        pos += len;
    }
    return ies;
}

}  // namespace detail

/// Decodes one 802.11 frame. Never throws on arbitrary bytes: every
/// outcome is a ParsedFrame or a SkipReason. Probe requests and beacons
/// get their IE list parsed; data frames only contribute addresses and
/// sequence number; everything else is kind Other with best-effort
/// addresses.
inline ParseResult parse_frame(std::span<const std::uint8_t> bytes, bool fcs_present,
                               std::int64_t timestamp_us) {
    if (fcs_present) {
        if (bytes.size() < 4) return SkipReason::TooShort;
        bytes = bytes.first(bytes.size() - 4);
    }
    if (bytes.size() < 10) return SkipReason::TooShort;

    const std::uint16_t fc = detail::load16(bytes.data(), false);
    if ((fc & 0x03) != 0) return SkipReason::BadVersion;
    const auto type = static_cast<std::uint8_t>((fc >> 2) & 0x03);
    const auto subtype = static_cast<std::uint8_t>((fc >> 4) & 0x0f);

    ParsedFrame frame;
    frame.kind = classify_frame_control(type, subtype);
    frame.timestamp_us = timestamp_us;

    if (frame.kind == FrameKind::Other) {
        frame.addr1 = detail::read_mac(bytes, 4);
        if (bytes.size() >= 16) frame.addr2 = detail::read_mac(bytes, 10);
        return frame;
    }

    if (bytes.size() < 24) return SkipReason::TooShort;
    frame.addr1 = detail::read_mac(bytes, 4);
    frame.addr2 = detail::read_mac(bytes, 10);
    const auto seq_ctl = decode_sequence_control(detail::load16(bytes.data() + 22, false));
    if (seq_ctl.fragment != 0) return SkipReason::Fragment;
    frame.seq_num = seq_ctl.sequence;

    if (frame.kind == FrameKind::ProbeRequest || frame.kind == FrameKind::Beacon) {
        auto ies = detail::parse_ies(bytes.subspan(24));
        if (!ies) return SkipReason::MalformedIes;
        frame.ies = std::move(*ies);
    }
    return frame;
}

/// Per-ingest accounting. frames_read = frames_parsed + frames_skipped.
struct IngestStats {
    std::size_t frames_read = 0;
    std::size_t frames_parsed = 0;
    std::size_t frames_skipped = 0;
    std::map<std::string, std::size_t> skip_reasons;

    void skip(const std::string& reason) {
        ++frames_skipped;
        ++skip_reasons[reason];
    }

    std::string summary() const {
        std::string s = "read=" + std::to_string(frames_read) +
                        " parsed=" + std::to_string(frames_parsed) +
                        " skipped=" + std::to_string(frames_skipped);
        for (const auto& [reason, count] : skip_reasons)
            s += " " + reason + "=" + std::to_string(count);
        return s;
    }
};

struct IngestOptions {
    /// FCS assumption when nothing states it (link 105, or radiotap
    /// without a flags field).
    bool assume_fcs = false;
};

struct IngestResult {
    std::vector<ParsedFrame> frames;
    IngestStats stats;
};

/// Full pipeline: pcap records -> pseudo-header strip -> frame decode.
/// File-level problems throw PcapError; per-frame problems only show up
/// in the stats.
inline IngestResult read_frames(const std::filesystem::path& path,
                                const IngestOptions& options = {}) {
    IngestResult result;
    PcapReader reader(path);
    while (auto record = reader.next()) {
        ++result.stats.frames_read;
        StrippedFrame stripped;
        try {
            stripped = strip_radiotap(record->payload, record->link_type,
                                      options.assume_fcs);
        } catch (const RadiotapError&) {
            result.stats.skip("radiotap_too_short");
            continue;
        }
        ParseResult parsed =
            parse_frame(stripped.frame, stripped.fcs_present, record->timestamp_us);
        if (auto* frame = std::get_if<ParsedFrame>(&parsed)) {
            ++result.stats.frames_parsed;
            result.frames.push_back(std::move(*frame));
        } else {
            result.stats.skip(to_string(std::get<SkipReason>(parsed)));
        }
    }
    // Zero-length records count as read and skipped so the totals add up.
    if (reader.empty_records() > 0) {
        result.stats.frames_read += reader.empty_records();
        result.stats.frames_skipped += reader.empty_records();
        result.stats.skip_reasons["empty_record"] += reader.empty_records();
    }
    return result;
}

}  // namespace wicount

#endif  // WICOUNT_PARSE_HPP

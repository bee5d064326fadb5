// Core 802.11 domain types: MAC addresses, frame kinds, information
// elements and the decoded frame record the analysis pipeline runs on.

#ifndef WICOUNT_FRAME_HPP
#define WICOUNT_FRAME_HPP

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wicount {

/// 6-octet station/AP identifier.
struct MacAddress {
    std::array<std::uint8_t, 6> octets{};

    auto operator<=>(const MacAddress&) const = default;

    /// Group bit: least-significant bit of the first octet.
    bool is_multicast() const { return (octets[0] & 0x01) != 0; }

    /// Locally-administered bit, set on randomized addresses.
    bool is_locally_administered() const { return (octets[0] & 0x02) != 0; }

    std::string to_string() const {
        static const char hex[] = "0123456789abcdef";
        std::string s;
        s.reserve(17);
        for (std::size_t i = 0; i < 6; ++i) {
            if (i) s.push_back(':');
            s.push_back(hex[octets[i] >> 4]);
            s.push_back(hex[octets[i] & 0x0f]);
        }
        return s;
    }

    /// Parses "aa:bb:cc:dd:ee:ff" (case-insensitive, '-' also accepted).
    static MacAddress parse(const std::string& text) {
        auto nibble = [](char c) -> int {
            if (c >= '0' && c <= '9') return c - '0';
            if (c >= 'a' && c <= 'f') return c - 'a' + 10;
            if (c >= 'A' && c <= 'F') return c - 'A' + 10;
            return -1;
        };
        MacAddress mac;
        if (text.size() != 17)
            throw std::invalid_argument("bad MAC address: " + text);
        for (std::size_t i = 0; i < 6; ++i) {
            const int hi = nibble(text[i * 3]);
            const int lo = nibble(text[i * 3 + 1]);
            const bool sep_ok = i == 5 || text[i * 3 + 2] == ':' || text[i * 3 + 2] == '-';
            if (hi < 0 || lo < 0 || !sep_ok)
                throw std::invalid_argument("bad MAC address: " + text);
            mac.octets[i] = static_cast<std::uint8_t>(hi << 4 | lo);
        }
        return mac;
    }

    static MacAddress broadcast() {
        return MacAddress{{0xff, 0xff, 0xff, 0xff, 0xff, 0xff}};
    }
};

inline bool is_multicast(const MacAddress& addr) { return addr.is_multicast(); }
inline bool is_locally_administered(const MacAddress& addr) {
    return addr.is_locally_administered();
}

/// Frame classification derived from the frame-control type/subtype bits.
/// Other frames never influence any count.
enum class FrameKind : std::uint8_t { Beacon, ProbeRequest, Data, Other };

inline const char* to_string(FrameKind kind) {
    switch (kind) {
        case FrameKind::Beacon: return "beacon";
        case FrameKind::ProbeRequest: return "probe_request";
        case FrameKind::Data: return "data";
        case FrameKind::Other: return "other";
    }
    return "other";
}

/// One tag/length/value record from a management frame body.
struct InformationElement {
    std::uint8_t tag{};
    std::vector<std::uint8_t> value;  // at most 255 octets

    InformationElement() = default;
    InformationElement(std::uint8_t t, std::vector<std::uint8_t> v)
        : tag(t), value(std::move(v)) {
        if (value.size() > 255)
            throw std::invalid_argument("IE value exceeds 255 octets");
    }

    std::uint8_t length() const { return static_cast<std::uint8_t>(value.size()); }

    bool operator==(const InformationElement&) const = default;
};

/// One decoded 802.11 frame. Immutable once built; timestamps carry
/// microsecond resolution.
struct ParsedFrame {
    FrameKind kind = FrameKind::Other;
    std::optional<MacAddress> addr1;           // receiver/destination
    std::optional<MacAddress> addr2;           // transmitter/source
    std::optional<std::uint16_t> seq_num;      // 0..4095
    std::vector<InformationElement> ies;       // management frames only
    std::int64_t timestamp_us = 0;

    bool operator==(const ParsedFrame&) const = default;
};

}  // namespace wicount

#endif  // WICOUNT_FRAME_HPP

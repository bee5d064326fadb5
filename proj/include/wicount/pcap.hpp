// Classic pcap (libpcap savefile) reading and writing. Only the two
// monitor-mode link types matter here: 105 (raw 802.11) and 127
// (radiotap). Everything else is rejected at open.

#ifndef WICOUNT_PCAP_HPP
#define WICOUNT_PCAP_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wicount {

constexpr std::uint32_t kLinkTypeIeee80211 = 105;
constexpr std::uint32_t kLinkTypeRadiotap = 127;
constexpr std::uint32_t kPcapMagic = 0xa1b2c3d4;

struct CaptureRecord {
    std::int64_t timestamp_us = 0;  // ts_sec * 1e6 + ts_usec
    std::uint32_t link_type = 0;
    std::vector<std::uint8_t> payload;  // non-empty
};

struct PcapError : std::runtime_error {
    enum class Kind { MalformedHeader, UnsupportedLinkType, TruncatedRecord, Io };

    PcapError(Kind k, const std::string& what) : std::runtime_error(what), kind(k) {}

    Kind kind;
};

namespace detail {

inline std::uint16_t load16(const std::uint8_t* p, bool swap) {
    std::uint16_t v = static_cast<std::uint16_t>(p[0] | p[1] << 8);
    return swap ? static_cast<std::uint16_t>(v >> 8 | v << 8) : v;
}

inline std::uint32_t load32(const std::uint8_t* p, bool swap) {
    std::uint32_t v = static_cast<std::uint32_t>(p[0]) |
                      static_cast<std::uint32_t>(p[1]) << 8 |
                      static_cast<std::uint32_t>(p[2]) << 16 |
                      static_cast<std::uint32_t>(p[3]) << 24;
    if (swap)
        v = (v >> 24) | ((v >> 8) & 0x0000ff00u) | ((v << 8) & 0x00ff0000u) | (v << 24);
    return v;
}

inline void store16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

inline void store32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 24));
}

}  // namespace detail

/// Sequential pcap record reader. Honors the file's byte order (magic
/// 0xa1b2c3d4 or its byte-swapped form) and yields records in file
/// order with original timestamps.
class PcapReader {
public:
    explicit PcapReader(const std::filesystem::path& path)
        : in_(path, std::ios::binary) {
        if (!in_)
            throw PcapError(PcapError::Kind::Io, "cannot open " + path.string());
        std::uint8_t header[24];
        in_.read(reinterpret_cast<char*>(header), sizeof header);
        if (in_.gcount() != sizeof header)
            throw PcapError(PcapError::Kind::MalformedHeader,
                            path.string() + ": not a pcap file (short global header)");
        const std::uint32_t magic_le = detail::load32(header, false);
        if (magic_le == kPcapMagic) {
            swap_ = false;
        } else if (magic_le == 0xd4c3b2a1u) {
            swap_ = true;
        } else {
            throw PcapError(PcapError::Kind::MalformedHeader,
                            path.string() + ": bad pcap magic");
        }
        link_type_ = detail::load32(header + 20, swap_);
        if (link_type_ != kLinkTypeIeee80211 && link_type_ != kLinkTypeRadiotap)
            throw PcapError(PcapError::Kind::UnsupportedLinkType,
                            path.string() + ": unsupported link type " +
                                std::to_string(link_type_) +
                                " (need 105 raw 802.11 or 127 radiotap)");
    }

    std::uint32_t link_type() const { return link_type_; }

    /// Total record headers consumed so far, zero-length records included.
    std::size_t records_seen() const { return records_seen_; }
    std::size_t empty_records() const { return empty_records_; }

    /// Next non-empty record, or nullopt at end of file.
    std::optional<CaptureRecord> next() {
        for (;;) {
            std::uint8_t rec[16];
            in_.read(reinterpret_cast<char*>(rec), sizeof rec);
            const auto got = in_.gcount();
            if (got == 0) return std::nullopt;
            if (got != sizeof rec)
                throw PcapError(PcapError::Kind::TruncatedRecord,
                                "truncated record header at record " +
                                    std::to_string(records_seen_));
            ++records_seen_;
            const std::uint32_t ts_sec = detail::load32(rec, swap_);
            const std::uint32_t ts_usec = detail::load32(rec + 4, swap_);
            const std::uint32_t incl_len = detail::load32(rec + 8, swap_);
            if (incl_len == 0) {
                ++empty_records_;
                continue;
            }
            CaptureRecord record;
            record.timestamp_us =
                static_cast<std::int64_t>(ts_sec) * 1'000'000 + ts_usec;
            record.link_type = link_type_;
            record.payload.resize(incl_len);
            in_.read(reinterpret_cast<char*>(record.payload.data()), incl_len);
            if (in_.gcount() != static_cast<std::streamsize>(incl_len))
                throw PcapError(PcapError::Kind::TruncatedRecord,
                                "record " + std::to_string(records_seen_ - 1) +
                                    " shorter than declared length " +
                                    std::to_string(incl_len));
            return record;
        }
    }

private:
    std::ifstream in_;
    bool swap_ = false;
    std::uint32_t link_type_ = 0;
    std::size_t records_seen_ = 0;
    std::size_t empty_records_ = 0;
};

/// Little-endian classic pcap writer.
class PcapWriter {
public:
    PcapWriter(const std::filesystem::path& path, std::uint32_t link_type)
        : out_(path, std::ios::binary) {
        if (!out_)
            throw PcapError(PcapError::Kind::Io, "cannot create " + path.string());
        std::vector<std::uint8_t> header;
        header.reserve(24);
        detail::store32(header, kPcapMagic);
        detail::store16(header, 2);   // version major
        detail::store16(header, 4);   // version minor
        detail::store32(header, 0);   // thiszone
        detail::store32(header, 0);   // sigfigs
        detail::store32(header, 65535);
        detail::store32(header, link_type);
        write_bytes(header);
    }

    void write_record(std::int64_t timestamp_us, std::span<const std::uint8_t> payload) {
        if (timestamp_us < 0)
            throw PcapError(PcapError::Kind::Io,
                            "pcap cannot represent negative timestamps");
        std::vector<std::uint8_t> rec;
        rec.reserve(16 + payload.size());
        detail::store32(rec, static_cast<std::uint32_t>(timestamp_us / 1'000'000));
        detail::store32(rec, static_cast<std::uint32_t>(timestamp_us % 1'000'000));
        detail::store32(rec, static_cast<std::uint32_t>(payload.size()));
        detail::store32(rec, static_cast<std::uint32_t>(payload.size()));
        rec.insert(rec.end(), payload.begin(), payload.end());
        write_bytes(rec);
    }

    void flush() {
        out_.flush();
        if (!out_) throw PcapError(PcapError::Kind::Io, "pcap write failed");
    }

private:
    void write_bytes(const std::vector<std::uint8_t>& bytes) {
        out_.write(reinterpret_cast<const char*>(bytes.data()),
                   static_cast<std::streamsize>(bytes.size()));
        if (!out_) throw PcapError(PcapError::Kind::Io, "pcap write failed");
    }

    std::ofstream out_;
};

}  // namespace wicount

#endif  // WICOUNT_PCAP_HPP

// Frame-body fingerprinting for probe requests: drop the easy-to-modify
// IEs (SSID, DSSS channel by default), keep everything else byte-for-byte
// in its original order, and digest the result for use as a map key.

#ifndef WICOUNT_FINGERPRINT_HPP
#define WICOUNT_FINGERPRINT_HPP

#include <bitset>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "wicount/frame.hpp"

namespace wicount {

/// 128-bit FNV-1a. Wide enough that accidental digest collisions are
/// negligible at capture-corpus scale.
struct Digest128 {
    std::uint64_t hi = 0;
    std::uint64_t lo = 0;

    auto operator<=>(const Digest128&) const = default;

    std::string to_hex() const {
        static const char hex[] = "0123456789abcdef";
        std::string s(32, '0');
        for (int i = 0; i < 16; ++i) {
            const std::uint64_t word = i < 8 ? hi : lo;
            const int shift = 56 - 8 * (i % 8);
            const auto byte = static_cast<std::uint8_t>(word >> shift);
            s[2 * i] = hex[byte >> 4];
            s[2 * i + 1] = hex[byte & 0x0f];
        }
        return s;
    }
};

inline Digest128 fnv1a_128(std::span<const std::uint8_t> bytes) {
    // FNV-1a offset basis / prime for the 128-bit variant.
    unsigned __int128 hash = (static_cast<unsigned __int128>(0x6c62272e07bb0142ULL) << 64) |
                             0x62b821756295c58dULL;
    const unsigned __int128 prime = (static_cast<unsigned __int128>(1) << 88) | 0x13bULL;
    for (std::uint8_t b : bytes) {
        hash ^= b;
        hash *= prime;
    }
    return Digest128{static_cast<std::uint64_t>(hash >> 64),
                     static_cast<std::uint64_t>(hash)};
}

/// Which IE tags are excluded from fingerprints. Defaults to SSID (0)
/// and DSSS parameter set (3).
class IeFilter {
public:
    IeFilter() : IeFilter{0, 3} {}

    IeFilter(std::initializer_list<int> tags) {
        for (int t : tags) add(t);
    }

    static IeFilter none() {
        IeFilter f;
        f.excluded_.reset();
        return f;
    }

    static IeFilter from_tags(std::span<const int> tags) {
        IeFilter f = none();
        for (int t : tags) f.add(t);
        return f;
    }

    void add(int tag) {
        if (tag < 0 || tag > 255)
            throw std::invalid_argument("IE tag out of range 0..255");
        excluded_.set(static_cast<std::size_t>(tag));
    }

    bool excludes(std::uint8_t tag) const { return excluded_.test(tag); }

private:
    std::bitset<256> excluded_;
};

/// Canonical bytes of the surviving IEs plus their digest. Equality is
/// exact (canonical bytes), so map behavior never depends on the hash.
struct FrameBodyFingerprint {
    std::vector<std::uint8_t> canonical_bytes;
    Digest128 digest;

    bool operator==(const FrameBodyFingerprint& other) const {
        return canonical_bytes == other.canonical_bytes;
    }
    std::strong_ordering operator<=>(const FrameBodyFingerprint& other) const {
        return canonical_bytes <=> other.canonical_bytes;
    }
};

/// Concatenates (tag, length, value) for every IE the filter keeps,
/// preserving order and duplicates, and digests the result. Pure: equal
/// IE lists give equal digests across runs and processes.
inline FrameBodyFingerprint fingerprint_of(std::span<const InformationElement> ies,
                                           const IeFilter& filter = IeFilter{}) {
    FrameBodyFingerprint fp;
    for (const auto& ie : ies) {
        if (filter.excludes(ie.tag)) continue;
        fp.canonical_bytes.push_back(ie.tag);
        fp.canonical_bytes.push_back(ie.length());
        fp.canonical_bytes.insert(fp.canonical_bytes.end(), ie.value.begin(),
                                  ie.value.end());
    }
    fp.digest = fnv1a_128(fp.canonical_bytes);
    return fp;
}

}  // namespace wicount

#endif  // WICOUNT_FINGERPRINT_HPP

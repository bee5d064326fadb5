// Radiotap pseudo-header handling for link type 127 captures. Only the
// pieces the pipeline needs: skip the header via its declared length and
// read the FCS-at-end bit from the flags field when one is present.

#ifndef WICOUNT_RADIOTAP_HPP
#define WICOUNT_RADIOTAP_HPP

#include <cstdint>
#include <span>
#include <stdexcept>

#include "wicount/pcap.hpp"

namespace wicount {

struct RadiotapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StrippedFrame {
    std::span<const std::uint8_t> frame;
    bool fcs_present = false;
};

namespace detail {

constexpr std::uint32_t kRadiotapTsftBit = 1u << 0;
constexpr std::uint32_t kRadiotapFlagsBit = 1u << 1;
constexpr std::uint32_t kRadiotapExtBit = 1u << 31;
constexpr std::uint8_t kRadiotapFlagFcsAtEnd = 0x10;

}  // namespace detail

/// Removes the link-layer pseudo-header. Link 105 payloads pass through
/// unchanged; link 127 payloads lose their radiotap header, whose
/// little-endian length field lives at offset 2. `fcs_fallback` applies
/// whenever no radiotap flags field states the FCS situation explicitly.
///
/// Throws RadiotapError when the declared header length is impossible
/// ("RadiotapTooShort").
inline StrippedFrame strip_radiotap(std::span<const std::uint8_t> payload,
                                    std::uint32_t link_type,
                                    bool fcs_fallback = false) {
    if (link_type == kLinkTypeIeee80211) return {payload, fcs_fallback};
    if (link_type != kLinkTypeRadiotap)
        throw RadiotapError("unsupported link type " + std::to_string(link_type));

    if (payload.size() < 8)
        throw RadiotapError("radiotap header truncated: payload is " +
                            std::to_string(payload.size()) + " bytes");
    const std::size_t rt_len = detail::load16(payload.data() + 2, false);
    if (rt_len < 8 || rt_len > payload.size())
        throw RadiotapError("radiotap declared length " + std::to_string(rt_len) +
                            " exceeds payload of " + std::to_string(payload.size()) +
                            " bytes");

    // Walk the presence words (bit 31 chains another word), then locate
    // the flags byte: only TSFT (8 bytes, 8-aligned) precedes it.
    const std::uint32_t first_word = detail::load32(payload.data() + 4, false);
    std::size_t n_words = 1;
    while ((detail::load32(payload.data() + 4 * n_words, false) & detail::kRadiotapExtBit) &&
           4 + (n_words + 1) * 4 <= rt_len)
        ++n_words;

    bool fcs = fcs_fallback;
    if (first_word & detail::kRadiotapFlagsBit) {
        std::size_t offset = 4 + n_words * 4;
        if (first_word & detail::kRadiotapTsftBit) {
            offset = (offset + 7) & ~std::size_t{7};
            offset += 8;
        }
        if (offset < rt_len)
            fcs = (payload[offset] & detail::kRadiotapFlagFcsAtEnd) != 0;
    }
    return {payload.subspan(rt_len), fcs};
}

}  // namespace wicount

#endif  // WICOUNT_RADIOTAP_HPP

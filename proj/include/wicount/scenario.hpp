// Synthetic capture scenarios: a declarative description of APs,
// connected stations and probing devices, plus the line-oriented text
// format used by the CLI (`wicount-scenario v1`).
//
// File format, one record per line, `#` comments and blank lines allowed:
//
//   wicount-scenario v1
//   ap mac=02:00:00:00:0a:01 beacons=10
//   sta mac=02:00:00:00:0b:01 ap=02:00:00:00:0a:01 data=24
//   prober mac=random probes=440 start_seq=100 ies=0:,1:82848b96,50:0c121860
//   prober mac=06:11:22:33:44:55 probes=5 ies=1:82848b96
//   span_s 60
//
// ies is a comma-separated list of tag:hexvalue pairs kept in order;
// prober mac is either a literal address (stable) or `random` (a fresh
// locally-administered address per probe). start_seq defaults to a
// random counter start.

#ifndef WICOUNT_SCENARIO_HPP
#define WICOUNT_SCENARIO_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wicount/frame.hpp"

namespace wicount {

struct ApSpec {
    MacAddress mac;
    int beacon_count = 0;
};

struct StationSpec {
    MacAddress mac;
    MacAddress ap;
    int data_count = 0;  // frames, alternating station->AP and AP->station
};

struct ProberSpec {
    enum class MacBehavior { Stable, RandomizePerProbe };

    std::vector<InformationElement> ies;
    MacBehavior behavior = MacBehavior::Stable;
    MacAddress stable_mac;  // used when behavior == Stable
    int probe_count = 0;
    std::optional<std::uint16_t> start_seq;  // random when unset
};

struct InvalidScenario : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SynthScenario {
    std::vector<ApSpec> aps;
    std::vector<StationSpec> connected;
    std::vector<ProberSpec> probers;
    std::int64_t span_us = 60'000'000;

    void validate() const {
        std::set<MacAddress> ap_macs;
        for (const auto& ap : aps) {
            if (ap.mac.is_multicast())
                throw InvalidScenario("AP MAC must be unicast: " + ap.mac.to_string());
            if (ap.beacon_count < 0)
                throw InvalidScenario("negative beacon count");
            ap_macs.insert(ap.mac);
        }
        for (const auto& sta : connected) {
            if (sta.mac.is_multicast())
                throw InvalidScenario("station MAC must be unicast: " +
                                      sta.mac.to_string());
            if (ap_macs.contains(sta.mac))
                throw InvalidScenario("station MAC collides with an AP: " +
                                      sta.mac.to_string());
            if (!ap_macs.contains(sta.ap))
                throw InvalidScenario("station references unknown AP " +
                                      sta.ap.to_string());
            if (sta.data_count < 0) throw InvalidScenario("negative data count");
        }
        for (const auto& prober : probers) {
            if (prober.behavior == ProberSpec::MacBehavior::Stable) {
                if (prober.stable_mac.is_multicast())
                    throw InvalidScenario("prober MAC must be unicast: " +
                                          prober.stable_mac.to_string());
                if (ap_macs.contains(prober.stable_mac))
                    throw InvalidScenario("prober MAC collides with an AP: " +
                                          prober.stable_mac.to_string());
            }
            if (prober.probe_count < 0) throw InvalidScenario("negative probe count");
            if (prober.start_seq && *prober.start_seq >= 4096)
                throw InvalidScenario("start_seq must be in 0..4095");
        }
        if (span_us <= 0) throw InvalidScenario("span must be positive");
    }
};

namespace detail {

inline std::vector<std::uint8_t> parse_hex(const std::string& hex,
                                           const std::string& where) {
    if (hex.size() % 2 != 0)
        throw InvalidScenario(where + ": odd-length hex string '" + hex + "'");
    auto nibble = [&](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw InvalidScenario(where + ": bad hex digit '" + std::string(1, c) + "'");
    };
    std::vector<std::uint8_t> bytes;
    bytes.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2)
        bytes.push_back(static_cast<std::uint8_t>(nibble(hex[i]) << 4 | nibble(hex[i + 1])));
    return bytes;
}

inline std::vector<InformationElement> parse_ie_list(const std::string& text,
                                                     const std::string& where) {
    std::vector<InformationElement> ies;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw InvalidScenario(where + ": IE entry '" + item +
                                  "' is not tag:hexvalue");
        int tag = 0;
        try {
            std::size_t used = 0;
            tag = std::stoi(item.substr(0, colon), &used);
            if (used != colon) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw InvalidScenario(where + ": bad IE tag in '" + item + "'");
        }
        if (tag < 0 || tag > 255)
            throw InvalidScenario(where + ": IE tag out of range in '" + item + "'");
        auto value = parse_hex(item.substr(colon + 1), where);
        if (value.size() > 255)
            throw InvalidScenario(where + ": IE value longer than 255 octets");
        ies.emplace_back(static_cast<std::uint8_t>(tag), std::move(value));
    }
    return ies;
}

}  // namespace detail

/// Parses the scenario text format. Errors carry the offending line
/// number.
inline SynthScenario parse_scenario(std::istream& in, const std::string& name) {
    auto fail = [&](int line, const std::string& message) -> void {
        throw InvalidScenario(name + ":" + std::to_string(line) + ": " + message);
    };

    SynthScenario scenario;
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::stringstream ss(line);
        std::string keyword;
        ss >> keyword;
        if (keyword.empty() || keyword[0] == '#') continue;

        if (!header_seen) {
            std::string version;
            ss >> version;
            if (keyword != "wicount-scenario" || version != "v1")
                fail(line_no, "expected header 'wicount-scenario v1'");
            header_seen = true;
            continue;
        }

        const std::string where = name + ":" + std::to_string(line_no);
        auto fields = [&]() {
            std::vector<std::pair<std::string, std::string>> kv;
            std::string token;
            while (ss >> token) {
                const auto eq = token.find('=');
                if (eq == std::string::npos)
                    fail(line_no, "expected key=value, got '" + token + "'");
                kv.emplace_back(token.substr(0, eq), token.substr(eq + 1));
            }
            return kv;
        };
        auto parse_count = [&](const std::string& text, const std::string& key) {
            try {
                std::size_t used = 0;
                const int v = std::stoi(text, &used);
                if (used != text.size() || v < 0) throw std::invalid_argument("");
                return v;
            } catch (const std::exception&) {
                fail(line_no, "bad value for " + key + ": '" + text + "'");
            }
            return 0;
        };
        auto parse_mac = [&](const std::string& text, const std::string& key) {
            try {
                return MacAddress::parse(text);
            } catch (const std::exception&) {
                fail(line_no, "bad MAC for " + key + ": '" + text + "'");
            }
            return MacAddress{};
        };

        if (keyword == "ap") {
            ApSpec ap;
            bool have_mac = false;
            for (const auto& [key, value] : fields()) {
                if (key == "mac") {
                    ap.mac = parse_mac(value, key);
                    have_mac = true;
                } else if (key == "beacons") {
                    ap.beacon_count = parse_count(value, key);
                } else {
                    fail(line_no, "unknown ap field '" + key + "'");
                }
            }
            if (!have_mac) fail(line_no, "ap needs mac=");
            scenario.aps.push_back(ap);
        } else if (keyword == "sta") {
            StationSpec sta;
            bool have_mac = false, have_ap = false;
            for (const auto& [key, value] : fields()) {
                if (key == "mac") {
                    sta.mac = parse_mac(value, key);
                    have_mac = true;
                } else if (key == "ap") {
                    sta.ap = parse_mac(value, key);
                    have_ap = true;
                } else if (key == "data") {
                    sta.data_count = parse_count(value, key);
                } else {
                    fail(line_no, "unknown sta field '" + key + "'");
                }
            }
            if (!have_mac || !have_ap) fail(line_no, "sta needs mac= and ap=");
            scenario.connected.push_back(sta);
        } else if (keyword == "prober") {
            ProberSpec prober;
            bool have_mac = false;
            for (const auto& [key, value] : fields()) {
                if (key == "mac") {
                    have_mac = true;
                    if (value == "random") {
                        prober.behavior = ProberSpec::MacBehavior::RandomizePerProbe;
                    } else {
                        prober.behavior = ProberSpec::MacBehavior::Stable;
                        prober.stable_mac = parse_mac(value, key);
                    }
                } else if (key == "probes") {
                    prober.probe_count = parse_count(value, key);
                } else if (key == "start_seq") {
                    const int seq = parse_count(value, key);
                    if (seq > 4095) fail(line_no, "start_seq must be in 0..4095");
                    prober.start_seq = static_cast<std::uint16_t>(seq);
                } else if (key == "ies") {
                    prober.ies = detail::parse_ie_list(value, where);
                } else {
                    fail(line_no, "unknown prober field '" + key + "'");
                }
            }
            if (!have_mac) fail(line_no, "prober needs mac=");
            scenario.probers.push_back(std::move(prober));
        } else if (keyword == "span_s") {
            std::string value;
            ss >> value;
            double seconds = 0;
            try {
                std::size_t used = 0;
                seconds = std::stod(value, &used);
                if (used != value.size() || seconds <= 0) throw std::invalid_argument("");
            } catch (const std::exception&) {
                fail(line_no, "bad span_s value '" + value + "'");
            }
            scenario.span_us = static_cast<std::int64_t>(seconds * 1'000'000.0);
        } else {
            fail(line_no, "unknown record '" + keyword + "'");
        }
    }
    if (!header_seen)
        throw InvalidScenario(name + ":1: missing 'wicount-scenario v1' header");
    scenario.validate();
    return scenario;
}

inline SynthScenario parse_scenario_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidScenario("cannot open scenario file " + path.string());
    return parse_scenario(in, path.filename().string());
}

}  // namespace wicount

#endif  // WICOUNT_SCENARIO_HPP

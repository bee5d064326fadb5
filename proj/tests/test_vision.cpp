#include <doctest.h>

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "wicount/vision.hpp"

using namespace wicount;

namespace {

std::vector<InformationElement> body_a() {
    return {InformationElement(0, {'x'}), InformationElement(1, {0x82, 0x84})};
}

std::vector<InformationElement> body_b() {
    return {InformationElement(0, {'y'}), InformationElement(1, {0x82, 0x96})};
}

}  // namespace

TEST_CASE("classify: empty input gives three empty sets") {
    const auto macs = classify_macs({});
    CHECK(macs.ap_set.empty());
    CHECK(macs.connected_set.empty());
    CHECK(macs.probing_set.empty());
}

TEST_CASE("classify: beacon, data and probe precedence") {
    const std::vector<ParsedFrame> frames = {
        test::beacon("02:00:00:00:0a:01"),
        test::data("02:00:00:00:0a:01", "02:00:00:00:0b:01"),
        test::probe("02:00:00:00:0b:01", body_a()),
        test::probe("02:00:00:00:0c:01", body_a()),
    };
    const auto macs = classify_macs(frames);
    CHECK(macs.ap_set == std::set<MacAddress>{test::mac("02:00:00:00:0a:01")});
    CHECK(macs.connected_set == std::set<MacAddress>{test::mac("02:00:00:00:0b:01")});
    CHECK(macs.probing_set == std::set<MacAddress>{test::mac("02:00:00:00:0c:01")});
}

TEST_CASE("classify: broadcast data frames leave connected empty") {
    const std::vector<ParsedFrame> frames = {
        test::beacon("02:00:00:00:0a:01"),
        test::data("ff:ff:ff:ff:ff:ff", "02:00:00:00:0a:01"),
    };
    const auto macs = classify_macs(frames);
    CHECK(macs.connected_set.empty());
}

TEST_CASE("classify: probe requests from an AP MAC are not probing") {
    const std::vector<ParsedFrame> frames = {
        test::beacon("02:00:00:00:0a:01"),
        test::probe("02:00:00:00:0a:01", body_a()),
    };
    const auto macs = classify_macs(frames);
    CHECK(macs.probing_set.empty());
}

TEST_CASE("vision: empty input counts zero") {
    const auto count = vision_estimate({});
    CHECK(count.connected_devices == 0);
    CHECK(count.unconnected_devices == 0);
    CHECK(count.total == 0);
}

TEST_CASE("vision: 440 randomized MACs with one frame body count once") {
    std::vector<ParsedFrame> frames;
    std::mt19937_64 rng(3);
    std::set<MacAddress> used;
    for (int i = 0; i < 440; ++i) {
        MacAddress mac;
        for (auto& octet : mac.octets) octet = static_cast<std::uint8_t>(rng() % 256);
        mac.octets[0] = static_cast<std::uint8_t>((mac.octets[0] & ~0x01) | 0x02);
        if (!used.insert(mac).second) {
            --i;
            continue;
        }
        ParsedFrame f;
        f.kind = FrameKind::ProbeRequest;
        f.addr1 = MacAddress::broadcast();
        f.addr2 = mac;
        f.seq_num = static_cast<std::uint16_t>(i % 4096);
        f.ies = body_a();
        f.timestamp_us = i;
        frames.push_back(std::move(f));
    }
    const auto count = vision_estimate(frames);
    const auto macs = classify_macs(frames);
    CHECK(macs.probing_set.size() == 440);
    CHECK(count.connected_devices == 0);
    CHECK(count.unconnected_devices == 1);
    CHECK(count.total == 1);
}

TEST_CASE("vision: connected by MAC, unconnected by fingerprint") {
    const std::vector<ParsedFrame> frames = {
        test::beacon("02:00:00:00:0a:01"),
        test::data("02:00:00:00:0a:01", "02:00:00:00:0b:01"),
        test::probe("02:00:00:00:0b:01", body_a()),  // connected, not re-counted
        test::probe("02:00:00:00:0c:01", body_a()),
        test::probe("02:00:00:00:0d:01", body_b()),
    };
    const auto count = vision_estimate(frames);
    CHECK(count.connected_devices == 1);
    CHECK(count.unconnected_devices == 2);
    CHECK(count.total == 3);
    // body_a also arrived from the connected MAC: flag it.
    CHECK(count.shared_fingerprints == 1);
}

TEST_CASE("vision: fingerprint index maps bodies to their senders") {
    const std::vector<ParsedFrame> frames = {
        test::probe("02:00:00:00:0c:01", body_a()),
        test::probe("02:00:00:00:0d:01", body_a()),
        test::probe("02:00:00:00:0e:01", body_b()),
    };
    const auto count = vision_estimate(frames);
    REQUIRE(count.fingerprint_index.size() == 2);
    const auto fp_a = fingerprint_of(body_a());
    CHECK(count.fingerprint_index.at(fp_a).size() == 2);
}

TEST_CASE("vision: totals survive relabeling of probing MACs") {
    std::vector<ParsedFrame> frames = {
        test::beacon("02:00:00:00:0a:01"),
        test::data("02:00:00:00:0a:01", "02:00:00:00:0b:01"),
        test::probe("02:00:00:00:0c:01", body_a()),
        test::probe("02:00:00:00:0c:01", body_a(), 5),
        test::probe("02:00:00:00:0d:01", body_b(), 9),
    };
    const auto before = vision_estimate(frames);

    const auto probing = classify_macs(frames).probing_set;
    std::map<MacAddress, MacAddress> fresh;
    int next = 0x40;
    for (auto& frame : frames) {
        if (frame.kind != FrameKind::ProbeRequest) continue;
        if (!probing.contains(*frame.addr2)) continue;
        auto [it, inserted] = fresh.emplace(
            *frame.addr2, test::mac("06:00:00:00:00:" + std::to_string(next)));
        if (inserted) next += 2;
        frame.addr2 = it->second;
    }
    const auto after = vision_estimate(frames);
    CHECK(after.connected_devices == before.connected_devices);
    CHECK(after.unconnected_devices == before.unconnected_devices);
    CHECK(after.total == before.total);
}

TEST_CASE("vision: fuzzed inputs keep the set invariants") {
    std::mt19937_64 rng(17);
    const std::vector<std::string> pool = {
        "02:00:00:00:00:01", "02:00:00:00:00:02", "02:00:00:00:00:03",
        "02:00:00:00:00:04", "ff:ff:ff:ff:ff:ff", "01:00:5e:00:00:01",
    };
    for (int round = 0; round < 500; ++round) {
        std::vector<ParsedFrame> frames;
        const int n = static_cast<int>(rng() % 24);
        for (int i = 0; i < n; ++i) {
            const auto pick = [&] { return pool[rng() % pool.size()]; };
            switch (rng() % 4) {
                case 0: frames.push_back(test::beacon(pick(), i)); break;
                case 1: frames.push_back(test::data(pick(), pick(), i)); break;
                case 2: frames.push_back(test::probe(pick(), body_a(), i)); break;
                default: frames.push_back(test::probe(pick(), body_b(), i)); break;
            }
        }
        const auto macs = classify_macs(frames);
        for (const auto& set : {macs.ap_set, macs.connected_set, macs.probing_set})
            for (const auto& m : set) CHECK_FALSE(m.is_multicast());
        for (const auto& m : macs.ap_set) {
            CHECK_FALSE(macs.connected_set.contains(m));
            CHECK_FALSE(macs.probing_set.contains(m));
        }
        for (const auto& m : macs.connected_set)
            CHECK_FALSE(macs.probing_set.contains(m));
        // A MAC seen in any data frame never probes.
        for (const auto& frame : frames) {
            if (frame.kind != FrameKind::Data) continue;
            for (const auto& addr : {frame.addr1, frame.addr2})
                if (addr) CHECK_FALSE(macs.probing_set.contains(*addr));
        }
        const auto count = vision_estimate(frames, macs);
        CHECK(count.total == count.connected_devices + count.unconnected_devices);
        CHECK(count.unconnected_devices == count.fingerprint_index.size());
    }
}

TEST_CASE("windows: empty stream, empty series") {
    CHECK(window_estimates({}, 60'000'000).empty());
}

TEST_CASE("windows: tumbling boundaries and empty windows") {
    const std::vector<ParsedFrame> frames = {
        test::probe("02:00:00:00:0c:01", body_a(), 0),
        test::probe("02:00:00:00:0c:01", body_a(), 70'000'000),
    };
    const auto series = window_estimates(frames, 60'000'000);
    REQUIRE(series.size() == 2);
    CHECK(series[0].first == 0);
    CHECK(series[1].first == 60'000'000);
    CHECK(series[0].second.unconnected_devices == 1);
    CHECK(series[1].second.unconnected_devices == 1);

    const std::vector<ParsedFrame> sparse = {
        test::probe("02:00:00:00:0c:01", body_a(), 10'000'000),
        test::probe("02:00:00:00:0c:01", body_a(), 130'000'000),
    };
    const auto with_gap = window_estimates(sparse, 60'000'000);
    REQUIRE(with_gap.size() == 3);
    CHECK(with_gap[1].second.total == 0);  // empty middle window
}

TEST_CASE("windows: rejects bad input") {
    CHECK_THROWS_AS(window_estimates({}, 0), std::invalid_argument);
    CHECK_THROWS_AS(window_estimates({}, -5), std::invalid_argument);

    const std::vector<ParsedFrame> disordered = {
        test::probe("02:00:00:00:0c:01", body_a(), 10'000'000),
        test::probe("02:00:00:00:0c:01", body_a(), 2'000'000),
    };
    CHECK_THROWS_AS(window_estimates(disordered, 60'000'000), std::invalid_argument);

    const std::vector<ParsedFrame> slightly = {
        test::probe("02:00:00:00:0c:01", body_a(), 10'000'000),
        test::probe("02:00:00:00:0c:01", body_a(), 9'500'000),
    };
    CHECK(window_estimates(slightly, 60'000'000).size() == 1);
}

#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "wicount/parse.hpp"
#include "wicount/scenario.hpp"
#include "wicount/synth.hpp"

using namespace wicount;

TEST_CASE("round-trip: empty capture is a header-only pcap") {
    const auto path = test::temp_path("empty-synth.pcap");
    write_capture({}, path, kLinkTypeIeee80211);
    const auto result = read_frames(path);
    CHECK(result.frames.empty());
    CHECK(result.stats.frames_read == 0);
}

TEST_CASE("round-trip: synthetic frames survive both link types exactly") {
    TrialRng rng(2024);
    for (int round = 0; round < 60; ++round) {
        const auto scenario = test::random_scenario(rng);
        const auto frames = synth_frames(scenario, rng);
        for (const std::uint32_t link_type : {kLinkTypeIeee80211, kLinkTypeRadiotap}) {
            const auto path = test::temp_path("roundtrip.pcap");
            write_capture(frames, path, link_type);
            const auto result = read_frames(path);
            CHECK(result.stats.frames_skipped == 0);
            REQUIRE(result.frames.size() == frames.size());
            for (std::size_t i = 0; i < frames.size(); ++i)
                CHECK(result.frames[i] == frames[i]);
            std::filesystem::remove(path);
        }
    }
}

TEST_CASE("round-trip: radiotap FCS flag is honored") {
    const auto scenario = [] {
        SynthScenario s;
        ProberSpec p;
        p.behavior = ProberSpec::MacBehavior::Stable;
        p.stable_mac = test::mac("06:11:22:33:44:55");
        p.probe_count = 4;
        p.start_seq = 77;
        p.ies = test::rates_ies();
        s.probers.push_back(std::move(p));
        return s;
    }();
    TrialRng rng(5);
    const auto frames = synth_frames(scenario, rng);
    const auto path = test::temp_path("fcs.pcap");
    write_capture(frames, path, kLinkTypeRadiotap, CaptureWriteOptions{true});
    const auto result = read_frames(path);
    REQUIRE(result.frames.size() == frames.size());
    for (std::size_t i = 0; i < frames.size(); ++i)
        CHECK(result.frames[i] == frames[i]);
}

TEST_CASE("write_capture rejects misordered input") {
    std::vector<ParsedFrame> frames = {
        test::probe("06:11:22:33:44:55", test::rates_ies(), 10),
        test::probe("06:11:22:33:44:55", test::rates_ies(), 5),
    };
    CHECK_THROWS_AS(write_capture(frames, test::temp_path("bad.pcap"), 105),
                    std::invalid_argument);
}

// Shared test fixtures: frame builders, random generators and the naive
// agglomerative single-linkage oracle the fast implementation is checked
// against.

#ifndef WICOUNT_TESTS_HELPERS_HPP
#define WICOUNT_TESTS_HELPERS_HPP

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "wicount/fingerprint.hpp"
#include "wicount/frame.hpp"
#include "wicount/scenario.hpp"
#include "wicount/simulate.hpp"

namespace test {

inline std::filesystem::path temp_path(const std::string& stem) {
    static std::atomic<unsigned> counter{0};
    return std::filesystem::temp_directory_path() /
           (stem + "." + std::to_string(::getpid()) + "." +
            std::to_string(counter++));
}

inline void write_file(const std::filesystem::path& path,
                       const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

inline wicount::MacAddress mac(const std::string& text) {
    return wicount::MacAddress::parse(text);
}

inline wicount::ParsedFrame beacon(const std::string& src, std::int64_t t_us = 0,
                                   std::uint16_t seq = 0) {
    wicount::ParsedFrame f;
    f.kind = wicount::FrameKind::Beacon;
    f.addr1 = wicount::MacAddress::broadcast();
    f.addr2 = mac(src);
    f.seq_num = seq;
    f.ies = {wicount::InformationElement(0, {'l', 'a', 'b'})};
    f.timestamp_us = t_us;
    return f;
}

inline wicount::ParsedFrame data(const std::string& dst, const std::string& src,
                                 std::int64_t t_us = 0, std::uint16_t seq = 0) {
    wicount::ParsedFrame f;
    f.kind = wicount::FrameKind::Data;
    f.addr1 = mac(dst);
    f.addr2 = mac(src);
    f.seq_num = seq;
    f.timestamp_us = t_us;
    return f;
}

inline wicount::ParsedFrame probe(const std::string& src,
                                  std::vector<wicount::InformationElement> ies,
                                  std::int64_t t_us = 0, std::uint16_t seq = 0) {
    wicount::ParsedFrame f;
    f.kind = wicount::FrameKind::ProbeRequest;
    f.addr1 = wicount::MacAddress::broadcast();
    f.addr2 = mac(src);
    f.seq_num = seq;
    f.ies = std::move(ies);
    f.timestamp_us = t_us;
    return f;
}

/// Plain O(n^3) agglomerative single linkage: start from singleton
/// clusters and keep merging the closest pair while the minimum
/// inter-cluster distance stays below the threshold. Kept deliberately
/// independent of the sort-and-split implementation.
inline std::size_t naive_single_linkage(std::vector<std::uint16_t> values,
                                        int threshold) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    if (values.empty()) return 0;

    std::vector<std::vector<int>> clusters;
    for (std::uint16_t v : values) clusters.push_back({static_cast<int>(v)});

    for (;;) {
        std::size_t best_a = 0, best_b = 0;
        int best_dist = std::numeric_limits<int>::max();
        for (std::size_t a = 0; a < clusters.size(); ++a) {
            for (std::size_t b = a + 1; b < clusters.size(); ++b) {
                for (int va : clusters[a]) {
                    for (int vb : clusters[b]) {
                        const int dist = std::abs(va - vb);
                        if (dist < best_dist) {
                            best_dist = dist;
                            best_a = a;
                            best_b = b;
                        }
                    }
                }
            }
        }
        if (best_dist == std::numeric_limits<int>::max() || best_dist >= threshold)
            break;
        clusters[best_a].insert(clusters[best_a].end(), clusters[best_b].begin(),
                                clusters[best_b].end());
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(best_b));
    }
    return clusters.size();
}

inline std::vector<wicount::InformationElement> rates_ies() {
    return {wicount::InformationElement(1, {0x82, 0x84, 0x8b, 0x96})};
}

/// Arbitrary small scenario for fuzzing the synth -> capture -> parse
/// pipeline.
inline wicount::SynthScenario random_scenario(wicount::TrialRng& rng) {
    using namespace wicount;
    SynthScenario scenario;
    scenario.span_us = 1'000'000 + static_cast<std::int64_t>(rng.below(60'000'000));
    const auto n_aps = rng.below(3);
    for (std::uint64_t i = 0; i < n_aps; ++i) {
        ApSpec ap;
        ap.mac = MacAddress{{0x02, 0xa0, 0, 0, 0, static_cast<std::uint8_t>(i)}};
        ap.beacon_count = static_cast<int>(rng.below(6));
        scenario.aps.push_back(ap);
    }
    if (!scenario.aps.empty()) {
        const auto n_stas = rng.below(3);
        for (std::uint64_t i = 0; i < n_stas; ++i) {
            StationSpec sta;
            sta.mac = MacAddress{{0x02, 0xb0, 0, 0, 0, static_cast<std::uint8_t>(i)}};
            sta.ap = scenario.aps[rng.below(scenario.aps.size())].mac;
            sta.data_count = static_cast<int>(rng.below(8));
            scenario.connected.push_back(sta);
        }
    }
    const auto n_probers = rng.below(4);
    for (std::uint64_t i = 0; i < n_probers; ++i) {
        ProberSpec prober;
        prober.behavior = rng.below(2) == 0 ? ProberSpec::MacBehavior::Stable
                                            : ProberSpec::MacBehavior::RandomizePerProbe;
        prober.stable_mac =
            MacAddress{{0x06, 0xc0, 0, 0, 0, static_cast<std::uint8_t>(i)}};
        prober.probe_count = static_cast<int>(rng.below(8));
        if (rng.below(2) == 0)
            prober.start_seq = static_cast<std::uint16_t>(rng.below(4096));
        const auto n_ies = rng.below(4);
        for (std::uint64_t k = 0; k < n_ies; ++k) {
            std::vector<std::uint8_t> value(rng.below(8));
            for (auto& b : value) b = static_cast<std::uint8_t>(rng.below(256));
            prober.ies.emplace_back(static_cast<std::uint8_t>(rng.below(256)),
                                    std::move(value));
        }
        scenario.probers.push_back(std::move(prober));
    }
    return scenario;
}

struct CommandResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

/// Runs a shell command with stdout/stderr captured to temp files.
inline CommandResult run_command(const std::string& cmd) {
    const auto out_path = temp_path("cmd.out");
    const auto err_path = temp_path("cmd.err");
    const std::string full =
        cmd + " > " + out_path.string() + " 2> " + err_path.string();
    const int status = std::system(full.c_str());
    auto slurp = [](const std::filesystem::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    CommandResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out_path);
    result.err = slurp(err_path);
    std::filesystem::remove(out_path);
    std::filesystem::remove(err_path);
    return result;
}

inline std::string cli_binary() {
    const char* env = std::getenv("WICOUNT_BIN");
    return env ? env : "./tools/wicount";
}

inline std::filesystem::path scenario_dir() {
    const char* env = std::getenv("WICOUNT_SCENARIO_DIR");
    return env ? std::filesystem::path(env) : std::filesystem::path("scenarios");
}

/// Splits CSV text into rows of cells, keeping `#` comment lines out.
inline std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::istringstream cells_in(line);
        std::string cell;
        while (std::getline(cells_in, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

}  // namespace test

#endif  // WICOUNT_TESTS_HELPERS_HPP

// wicount: passive Wi-Fi device counting from monitor-mode captures.
//
// Subcommands:
//   analyze   per-window Vision/TrueSight counts from a pcap file
//   simulate  Monte Carlo estimate distribution for one (X, Y, N) config
//   tables    reproduce the bundled reference sweeps and compare
//   synth     build a synthetic capture from a scenario file

#include <cstdint>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wicount/wicount.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;

wicount::IeFilter parse_ie_filter(const std::string& text) {
    if (text.empty()) return wicount::IeFilter::none();
    std::vector<int> tags;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        int tag = 0;
        try {
            tag = std::stoi(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size() || tag < 0 || tag > 255)
            throw CLI::ValidationError("--ie-filter",
                                       "'" + item + "' is not an IE tag (0..255)");
        tags.push_back(tag);
    }
    return wicount::IeFilter::from_tags(tags);
}

int run_analyze(const std::string& input, double window_s, int threshold,
                const std::string& ie_filter_text, const std::string& format,
                bool assume_fcs) {
    const wicount::IeFilter filter = parse_ie_filter(ie_filter_text);
    const auto window_us = static_cast<std::int64_t>(window_s * 1e6);

    wicount::IngestResult ingest =
        wicount::read_frames(input, wicount::IngestOptions{assume_fcs});
    std::cerr << "ingest: " << ingest.stats.summary() << "\n";

    const auto rows = wicount::build_analyze_report(
        ingest.frames, window_us, wicount::ClusterConfig{threshold, 4096}, filter);
    for (const auto& row : rows) {
        if (row.shared_fingerprints > 0)
            std::cerr << "warning: window "
                      << wicount::detail::format_fixed(
                             wicount::window_start_seconds(row.window_start_us))
                      << ": " << row.shared_fingerprints
                      << " fingerprint(s) seen from both connected and probing MACs"
                      << " (possible double count)\n";
    }
    if (format == "json")
        std::cout << wicount::to_json(rows).dump(2) << "\n";
    else
        std::cout << wicount::to_csv(rows);
    return kExitOk;
}

int run_simulate(int devices, int probes, int trials, int threshold,
                 std::uint64_t seed, const std::string& format) {
    wicount::TrialConfig config;
    config.devices = devices;
    config.probes_per_device = probes;
    config.trials = trials;
    config.threshold = threshold;
    config.seed = seed;
    const wicount::TrialHistogram hist = wicount::run_monte_carlo(config);
    if (format == "json")
        std::cout << wicount::to_json(hist).dump(2) << "\n";
    else
        std::cout << wicount::to_csv(hist);
    return kExitOk;
}

int run_tables(const std::string& which, int trials, std::uint64_t seed,
               const std::string& format) {
    const auto& reference = which == "table2" ? wicount::reference_table2()
                                              : wicount::reference_table3();
    std::vector<wicount::TableComparison> comparisons;
    for (const auto& row : reference) {
        wicount::TableComparison cmp;
        cmp.reference = row;
        cmp.observed = wicount::run_monte_carlo(wicount::table_row_config(
            row.devices, row.probes_per_device, trials, seed));
        comparisons.push_back(std::move(cmp));
    }
    if (format == "json")
        std::cout << wicount::to_json(comparisons).dump(2) << "\n";
    else
        std::cout << wicount::to_csv(comparisons);
    return kExitOk;
}

int run_synth(const std::string& scenario_path, const std::string& output_path,
              std::uint32_t link_type, std::uint64_t seed, bool fcs) {
    const wicount::SynthScenario scenario =
        wicount::parse_scenario_file(scenario_path);
    wicount::TrialRng rng(wicount::splitmix64(seed));
    const auto frames = wicount::synth_frames(scenario, rng);
    wicount::write_capture(frames, output_path, link_type,
                           wicount::CaptureWriteOptions{fcs});
    std::cout << frames.size() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Passive Wi-Fi device counting tolerant to MAC randomization"};
    app.require_subcommand(1);

    std::string input, format = "csv", ie_filter_text = "0,3";
    double window_s = 60.0;
    int threshold = 50;
    bool assume_fcs = false;

    auto* analyze = app.add_subcommand(
        "analyze", "Per-window Vision/TrueSight counts from a pcap capture");
    analyze->add_option("input", input, "pcap file (link type 105 or 127)")
        ->required();
    analyze->add_option("--window", window_s, "window length in seconds")
        ->default_val(60.0)
        ->check(CLI::PositiveNumber);
    analyze->add_option("--threshold", threshold, "sequence-number gap threshold")
        ->default_val(50)
        ->check(CLI::Range(1, 4096));
    analyze
        ->add_option("--ie-filter", ie_filter_text,
                     "comma-separated IE tags excluded from fingerprints")
        ->default_val("0,3");
    analyze->add_option("--format", format, "output format")
        ->default_val("csv")
        ->check(CLI::IsMember({"csv", "json"}));
    analyze->add_flag("--assume-fcs", assume_fcs,
                      "assume a trailing FCS when the capture does not say");

    int devices = 1, probes = 1, trials = 10000;
    std::uint64_t seed = wicount::kDefaultSeed;

    auto* simulate = app.add_subcommand(
        "simulate", "Monte Carlo distribution of TrueSight estimates");
    simulate->add_option("-X,--devices", devices, "number of devices")
        ->required()
        ->check(CLI::PositiveNumber);
    simulate->add_option("-Y,--probes", probes, "probe requests per device")
        ->required()
        ->check(CLI::PositiveNumber);
    simulate->add_option("-N,--trials", trials, "number of trials")
        ->default_val(10000)
        ->check(CLI::PositiveNumber);
    simulate->add_option("--threshold", threshold, "sequence-number gap threshold")
        ->default_val(50)
        ->check(CLI::Range(1, 4096));
    simulate->add_option("--seed", seed, "RNG seed")->default_val(wicount::kDefaultSeed);
    simulate->add_option("--format", format, "output format")
        ->default_val("csv")
        ->check(CLI::IsMember({"csv", "json"}));

    std::string which;
    auto* tables = app.add_subcommand(
        "tables", "Reproduce a bundled reference sweep and compare");
    tables->add_option("which", which, "which sweep to reproduce")
        ->required()
        ->check(CLI::IsMember({"table2", "table3"}));
    tables->add_option("-N,--trials", trials, "trials per row")
        ->default_val(10000)
        ->check(CLI::PositiveNumber);
    tables->add_option("--seed", seed, "RNG seed")->default_val(wicount::kDefaultSeed);
    tables->add_option("--format", format, "output format")
        ->default_val("csv")
        ->check(CLI::IsMember({"csv", "json"}));

    std::string scenario_path, output_path;
    std::uint32_t link_type = wicount::kLinkTypeRadiotap;
    bool fcs = false;

    auto* synth = app.add_subcommand(
        "synth", "Build a synthetic pcap capture from a scenario file");
    synth->add_option("scenario", scenario_path, "scenario description file")
        ->required();
    synth->add_option("output", output_path, "output pcap path")->required();
    synth->add_option("--link-type", link_type, "pcap link type")
        ->default_val(127)
        ->check(CLI::IsMember({105, 127}));
    synth->add_option("--seed", seed, "RNG seed")->default_val(wicount::kDefaultSeed);
    synth->add_flag("--fcs", fcs, "append an FCS to every frame (link type 127)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (analyze->parsed())
            return run_analyze(input, window_s, threshold, ie_filter_text, format,
                               assume_fcs);
        if (simulate->parsed())
            return run_simulate(devices, probes, trials, threshold, seed, format);
        if (tables->parsed()) return run_tables(which, trials, seed, format);
        if (synth->parsed())
            return run_synth(scenario_path, output_path, link_type, seed, fcs);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const wicount::PcapError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const wicount::InvalidScenario& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitUsage;
}

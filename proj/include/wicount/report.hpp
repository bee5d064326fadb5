// Report building and rendering for the CLI: per-window analysis rows,
// Monte Carlo histograms and the bundled reference-table comparisons,
// each as CSV (stdout-friendly) or JSON with identical fields.

#ifndef WICOUNT_REPORT_HPP
#define WICOUNT_REPORT_HPP

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "wicount/parse.hpp"
#include "wicount/simulate.hpp"
#include "wicount/truesight.hpp"
#include "wicount/vision.hpp"

namespace wicount {

using json = nlohmann::ordered_json;

struct AnalyzeRow {
    std::int64_t window_start_us = 0;
    std::size_t ap_count = 0;
    std::size_t connected = 0;
    std::size_t vision_unconnected = 0;
    std::size_t truesight_unconnected = 0;
    std::size_t vision_total = 0;
    std::size_t truesight_total = 0;
    double randomized_share = 0.0;  // probing MACs with the local bit set
    std::size_t shared_fingerprints = 0;  // diagnostic, not part of the schema
};

/// Windows a capture and runs both estimators on each window.
inline std::vector<AnalyzeRow> build_analyze_report(
    std::span<const ParsedFrame> frames, std::int64_t window_us,
    const ClusterConfig& cluster = {}, const IeFilter& filter = IeFilter{}) {
    std::vector<AnalyzeRow> rows;
    for (const auto& slice : split_windows(frames, window_us)) {
        const MacClassification macs = classify_macs(slice.frames);
        const VisionCount vision = vision_estimate(slice.frames, macs, filter);
        const TrueSightCount truesight =
            truesight_estimate(slice.frames, macs, cluster, filter);

        AnalyzeRow row;
        row.window_start_us = slice.start_us;
        row.ap_count = macs.ap_set.size();
        row.connected = macs.connected_set.size();
        row.vision_unconnected = vision.unconnected_devices;
        row.truesight_unconnected = truesight.unconnected_devices;
        row.vision_total = vision.total;
        row.truesight_total = truesight.total;
        std::size_t randomized = 0;
        for (const auto& mac : macs.probing_set)
            if (mac.is_locally_administered()) ++randomized;
        row.randomized_share = macs.probing_set.empty()
                                   ? 0.0
                                   : static_cast<double>(randomized) /
                                         static_cast<double>(macs.probing_set.size());
        row.shared_fingerprints = vision.shared_fingerprints;
        rows.push_back(row);
    }
    return rows;
}

namespace detail {

inline std::string format_fixed(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", value);
    return buf;
}

}  // namespace detail

inline double window_start_seconds(std::int64_t window_start_us) {
    return static_cast<double>(window_start_us) / 1e6;
}

constexpr const char* kAnalyzeCsvHeader =
    "window_start,ap_count,connected,vision_unconnected,truesight_unconnected,"
    "vision_total,truesight_total,randomized_share";

inline std::string to_csv(std::span<const AnalyzeRow> rows) {
    std::string out = std::string(kAnalyzeCsvHeader) + "\n";
    for (const auto& r : rows) {
        out += detail::format_fixed(window_start_seconds(r.window_start_us));
        out += "," + std::to_string(r.ap_count);
        out += "," + std::to_string(r.connected);
        out += "," + std::to_string(r.vision_unconnected);
        out += "," + std::to_string(r.truesight_unconnected);
        out += "," + std::to_string(r.vision_total);
        out += "," + std::to_string(r.truesight_total);
        out += "," + detail::format_fixed(r.randomized_share);
        out += "\n";
    }
    return out;
}

inline json to_json(std::span<const AnalyzeRow> rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        arr.push_back({{"window_start", window_start_seconds(r.window_start_us)},
                       {"ap_count", r.ap_count},
                       {"connected", r.connected},
                       {"vision_unconnected", r.vision_unconnected},
                       {"truesight_unconnected", r.truesight_unconnected},
                       {"vision_total", r.vision_total},
                       {"truesight_total", r.truesight_total},
                       {"randomized_share", r.randomized_share}});
    }
    return arr;
}

constexpr const char* kHistogramCsvHeader = "X,Y,estimate,count,N,seed";

inline std::string to_csv(const TrialHistogram& hist) {
    std::string out = std::string(kHistogramCsvHeader) + "\n";
    for (const auto& [estimate, count] : hist.counts) {
        out += std::to_string(hist.config.devices);
        out += "," + std::to_string(hist.config.probes_per_device);
        out += "," + std::to_string(estimate);
        out += "," + std::to_string(count);
        out += "," + std::to_string(hist.config.trials);
        out += "," + std::to_string(hist.config.seed);
        out += "\n";
    }
    out += "# correct_rate=" + detail::format_fixed(hist.correct_rate()) + "\n";
    out += "# within_one_rate=" + detail::format_fixed(hist.within_one_rate()) + "\n";
    return out;
}

inline json to_json(const TrialHistogram& hist) {
    json rows = json::array();
    for (const auto& [estimate, count] : hist.counts) {
        rows.push_back({{"X", hist.config.devices},
                        {"Y", hist.config.probes_per_device},
                        {"estimate", estimate},
                        {"count", count},
                        {"N", hist.config.trials},
                        {"seed", hist.config.seed}});
    }
    return json{{"rows", rows},
                {"correct_rate", hist.correct_rate()},
                {"within_one_rate", hist.within_one_rate()}};
}

/// Reference distributions shipped with the tool: estimate counts for
/// the two standard benchmark sweeps (N = 10,000 each).
struct ReferenceRow {
    int devices;            // X
    int probes_per_device;  // Y
    std::map<int, int> counts;
};

/// Sweep 1: X fixed to 5, Y from 1 to 6.
inline const std::vector<ReferenceRow>& reference_table2() {
    static const std::vector<ReferenceRow> rows = {
        {5, 1, {{1, 0}, {2, 4}, {3, 152}, {4, 2124}, {5, 7720}, {6, 0}}},
        {5, 2, {{1, 0}, {2, 13}, {3, 332}, {4, 2785}, {5, 6666}, {6, 204}}},
        {5, 3, {{1, 2}, {2, 29}, {3, 546}, {4, 3246}, {5, 5824}, {6, 353}}},
        {5, 4, {{1, 1}, {2, 66}, {3, 785}, {4, 3704}, {5, 4986}, {6, 458}}},
        {5, 5, {{1, 2}, {2, 102}, {3, 1066}, {4, 3922}, {5, 4352}, {6, 556}}},
        {5, 6, {{1, 4}, {2, 141}, {3, 1334}, {4, 4089}, {5, 3857}, {6, 575}}},
    };
    return rows;
}

/// Sweep 2: Y fixed to 2, X from 1 to 8.
inline const std::vector<ReferenceRow>& reference_table3() {
    static const std::vector<ReferenceRow> rows = {
        {1, 2, {{1, 9940}, {2, 60}}},
        {2, 2, {{1, 358}, {2, 9523}, {3, 119}}},
        {3, 2, {{1, 25}, {2, 1023}, {3, 8786}, {4, 166}}},
        {4, 2, {{1, 2}, {2, 121}, {3, 1912}, {4, 7781}, {5, 184}}},
        {5, 2, {{1, 0}, {2, 13}, {3, 334}, {4, 2771}, {5, 6680}, {6, 202}}},
        {6, 2, {{1, 0}, {2, 4}, {3, 59}, {4, 766}, {5, 3500}, {6, 5470}, {7, 201}}},
        {7, 2,
         {{1, 0}, {2, 0}, {3, 9}, {4, 183}, {5, 1312}, {6, 3961}, {7, 4337}, {8, 198}}},
        {8, 2,
         {{1, 0},
          {2, 0},
          {3, 1},
          {4, 52},
          {5, 457},
          {6, 1957},
          {7, 4115},
          {8, 3247},
          {9, 171}}},
    };
    return rows;
}

/// One reproduced sweep row next to its reference counts.
struct TableComparison {
    TrialHistogram observed;
    ReferenceRow reference;
};

constexpr const char* kTablesCsvHeader =
    "X,Y,estimate,count,reference,abs_deviation,N,seed";

inline std::string to_csv(std::span<const TableComparison> comparisons) {
    std::string out = std::string(kTablesCsvHeader) + "\n";
    for (const auto& cmp : comparisons) {
        std::map<int, int> estimates;  // union of observed and reference keys
        for (const auto& [estimate, count] : cmp.observed.counts)
            estimates[estimate] = 0;
        for (const auto& [estimate, count] : cmp.reference.counts)
            estimates[estimate] = 0;
        for (const auto& [estimate, unused] : estimates) {
            const int observed = cmp.observed.counts.contains(estimate)
                                     ? cmp.observed.counts.at(estimate)
                                     : 0;
            const int reference = cmp.reference.counts.contains(estimate)
                                      ? cmp.reference.counts.at(estimate)
                                      : 0;
            out += std::to_string(cmp.observed.config.devices);
            out += "," + std::to_string(cmp.observed.config.probes_per_device);
            out += "," + std::to_string(estimate);
            out += "," + std::to_string(observed);
            out += "," + std::to_string(reference);
            out += "," + std::to_string(std::abs(observed - reference));
            out += "," + std::to_string(cmp.observed.config.trials);
            out += "," + std::to_string(cmp.observed.config.seed);
            out += "\n";
        }
    }
    return out;
}

inline json to_json(std::span<const TableComparison> comparisons) {
    json rows = json::array();
    for (const auto& cmp : comparisons) {
        std::map<int, int> estimates;
        for (const auto& [estimate, count] : cmp.observed.counts)
            estimates[estimate] = 0;
        for (const auto& [estimate, count] : cmp.reference.counts)
            estimates[estimate] = 0;
        for (const auto& [estimate, unused] : estimates) {
            const int observed = cmp.observed.counts.contains(estimate)
                                     ? cmp.observed.counts.at(estimate)
                                     : 0;
            const int reference = cmp.reference.counts.contains(estimate)
                                      ? cmp.reference.counts.at(estimate)
                                      : 0;
            rows.push_back({{"X", cmp.observed.config.devices},
                            {"Y", cmp.observed.config.probes_per_device},
                            {"estimate", estimate},
                            {"count", observed},
                            {"reference", reference},
                            {"abs_deviation", std::abs(observed - reference)},
                            {"N", cmp.observed.config.trials},
                            {"seed", cmp.observed.config.seed}});
        }
    }
    return json{{"rows", rows}};
}

}  // namespace wicount

#endif  // WICOUNT_REPORT_HPP

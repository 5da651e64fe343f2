#pragma once

#include "netdiff/classify.hpp"
#include "netdiff/edge_list.hpp"
#include "netdiff/node_class.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace netdiff {

struct PlantedPattern {
    std::vector<std::int8_t> pattern; // entries in {-1, 0, +1}, not all zero
    std::uint64_t count = 0;
};

struct PlantedHub {
    std::vector<std::int8_t> pattern;
    std::uint32_t degree = 0;
    std::uint32_t count = 0;
};

// A reproducible multi-network instance with known link groups and optional
// hub nodes whose incident links all share one pattern.
struct PlantedSpec {
    std::uint32_t n_nodes = 0;
    std::uint32_t w_networks = 0;
    std::vector<std::string> network_names; // defaults to Net1..NetW
    double magnitude_min = 0.6;
    double magnitude_max = 0.9;
    double noise_sd = 0.0;
    double tau = 1.0 / 3.0; // category-safety check: magnitude_min must exceed tau
    std::uint64_t seed = 1;
    std::vector<PlantedPattern> patterns;
    std::vector<PlantedHub> hubs;

    // Key-value text: `key = value` lines, `#` comments, repeated
    // `pattern = <signs> : <count>` and `hub = <signs> : <degree> : <count>`.
    static PlantedSpec load(const std::string& path);
    void validate() const;
    std::uint64_t total_links() const;
};

struct GroundTruth {
    std::vector<std::string> labels; // distinct phi_tilde labels, sorted
    // pair key (a << 32 | b, node index order) -> label id
    std::unordered_map<std::uint64_t, std::uint32_t> link_label;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> hub_labels; // node -> label id
    std::vector<std::string> node_names;
};

struct SynthResult {
    std::vector<EdgeList> networks; // every link appears in every list (zeros kept)
    GroundTruth truth;
};

// Deterministic in the seed: the same spec always produces byte-identical
// edge lists. Ground-truth labels are assigned before noise.
SynthResult generate(const PlantedSpec& spec);

struct ClassMetrics {
    std::string label;
    std::uint64_t truth_count = 0;
    std::uint64_t predicted_count = 0;
    std::uint64_t correct = 0;
    double precision = 0.0;
    double recall = 0.0;
};

struct RecoveryReport {
    double link_accuracy = 0.0;                // correctly labelled / planted
    std::optional<double> node_accuracy;       // over planted hubs, if any
    std::uint64_t truth_links = 0;
    std::uint64_t predicted_links = 0;
    std::uint64_t missing_links = 0;           // planted but not classified
    std::vector<ClassMetrics> per_class;
    std::vector<std::string> confusion_labels; // truth x (predicted + "missing")
    std::vector<std::vector<std::uint64_t>> confusion;
};

// Compares classified links (and node assignments) against the planted truth.
// Every classified link must correspond to a planted pair.
RecoveryReport evaluate(const ClassifiedLinks& predicted,
                        const std::vector<NodeClassification>& nodes,
                        const GroundTruth& truth);

} // namespace netdiff

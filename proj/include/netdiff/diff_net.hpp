#pragma once

#include "netdiff/classify.hpp"
#include "netdiff/network_set.hpp"
#include "netdiff/node_class.hpp"
#include "netdiff/scoring.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace netdiff {

struct RunParameters {
    double tau = 1.0 / 3.0;
    bool stretch = false;
    NormalizationMode mode = NormalizationMode::per_phi_tilde;
    double ratio_cutoff = 1.0;
    double alpha = 0.05;
    double enrichment_cutoff = 0.10;
    char delimiter = '\t';
};

// The full analysis product: every classified link with its scores, the
// filtered subset, and the node classifications over that subset.
struct DiffNetwork {
    RunParameters params;
    ClassifiedLinks links;            // all classified links, canonical order
    LinkScores scores;                // parallel to links
    std::vector<std::uint32_t> kept;  // indices passing the ratio filter
    std::vector<NodeClassification> nodes;
    std::vector<IngestStats> ingest;
    std::size_t universe_size = 0;
    std::size_t merged_links = 0;
};

} // namespace netdiff

#pragma once

#include "netdiff/edge_list.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace netdiff {

struct IngestStats {
    std::string network;
    std::size_t input_records = 0;
    std::size_t input_nodes = 0;
    std::size_t dropped_nodes = 0; // nodes outside the common intersection
    std::size_t dropped_links = 0; // records touching a dropped node
};

// W aligned edge lists merged over the common node universe. Node ids are ranks
// in the lexicographically sorted universe, so id order equals name order and a
// link with a < b is already canonical. Weights are dense: one row of W entries
// per link, absent entries filled with 0.
struct NetworkSet {
    std::vector<std::string> network_names;     // size W; first is the reference
    std::vector<std::string> node_names;        // sorted universe; index = node id
    std::vector<std::uint32_t> link_a, link_b;  // per link, a < b, sorted by (a, b)
    std::vector<double> weights;                // link_count() * width(), row-major
    std::vector<IngestStats> ingest;

    std::size_t width() const { return network_names.size(); }
    std::size_t link_count() const { return link_a.size(); }
    std::span<const double> weights_of(std::size_t link) const {
        return {weights.data() + link * width(), width()};
    }
};

struct BuildOptions {
    bool stretch = false; // per-network affine rescale to [-1, 1]
};

// Intersects the per-network node sets (a node set includes endpoints of
// zero-weight records), drops every link touching a node outside the
// intersection, and merges the rest into dense weight vectors. Without
// stretch, weights outside [-1, 1] are an error.
NetworkSet build_network_set(std::vector<EdgeList> lists, const BuildOptions& options = {});

} // namespace netdiff

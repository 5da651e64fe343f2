#pragma once

#include <string>
#include <vector>

namespace netdiff {

// One canonicalized row of an input edge list: node_a < node_b lexicographically,
// weight finite. Zero weights are legal and meaningful: they mark a pair that was
// measured but not significant, which keeps both endpoints in the network's node set.
struct EdgeRecord {
    std::string node_a;
    std::string node_b;
    double weight = 0.0;
};

struct EdgeList {
    std::string name;
    std::vector<EdgeRecord> records;
};

struct ParseFormat {
    char delimiter = '\t'; // '\t' or ','
};

// Reads a three-column delimited file (node1, node2, weight). A header row is
// auto-detected when the third field of the first non-empty row is not a number.
// Rows are canonicalized on the fly; self-loops, duplicate canonical pairs,
// non-finite weights and malformed rows are reported with their line number.
EdgeList load_edge_list(const std::string& path, const std::string& name,
                        const ParseFormat& format = {});

// Writes records back out in the same three-column format, one row per record.
void write_edge_list(const EdgeList& list, const std::string& path,
                     const ParseFormat& format = {});

// Affinely maps the observed weight range onto [-1, 1]. A degenerate range
// (all weights equal) is left unchanged.
EdgeList stretch_weights(EdgeList list);

} // namespace netdiff

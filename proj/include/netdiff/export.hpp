#pragma once

#include "netdiff/diff_net.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>

namespace netdiff {

enum class GraphFormat : std::uint8_t { graphml, dot, json };

GraphFormat parse_graph_format(const std::string& name);

// Per-category tallies over the filtered network; every count is recomputed
// from the lists so the report always reconciles with the exports.
struct Summary {
    std::vector<std::string> networks;
    std::vector<IngestStats> ingest;
    std::size_t node_universe = 0;
    std::size_t merged_links = 0;
    std::size_t removed_all_zero = 0;
    std::size_t classified_links = 0;
    std::size_t kept_links = 0;
    std::size_t pattern_groups = 0; // distinct sign patterns, at most 3^W - 1
    std::map<std::string, std::size_t> link_phi;        // over kept links
    std::map<std::string, std::size_t> link_phi_tilde;  // over kept links
    std::size_t classified_nodes = 0;
    std::map<std::string, std::size_t> node_phi;        // includes "Undefined"
    std::map<std::string, std::size_t> node_phi_tilde;
    std::size_t low_evidence_nodes = 0;
    double group_f_stat = 0.0;
    std::size_t f_df1 = 0, f_df2 = 0;
};

Summary summarize(const DiffNetwork& net);

void print_summary(const Summary& summary, std::ostream& os);

// links.tsv: one row per kept link, canonical order, 6 significant digits.
void export_links_tsv(const DiffNetwork& net, const std::string& path);

// nodes.tsv: one row per classified node, sorted by node name.
void export_nodes_tsv(const DiffNetwork& net, const std::string& path);

// summary.json: parameters + tallies, full precision.
void write_summary_json(const DiffNetwork& net, const Summary& summary, const std::string& path);

// Filtered network as GraphML 1.0, DOT, or JSON. Nodes carry their assigned
// categories; links carry phi_tilde, score_ratio, a width hint and a colour
// keyed by phi (alpha green, beta red, gamma blue).
void export_graph(const DiffNetwork& net, GraphFormat format, const std::string& path);

} // namespace netdiff

#pragma once

#include "netdiff/diff_net.hpp"
#include "netdiff/enrichment.hpp"
#include "netdiff/export.hpp"
#include "netdiff/synth.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace netdiff {

struct NetworkInput {
    std::string name;
    std::string path;
};

struct RunConfig {
    std::vector<NetworkInput> inputs; // ordered; the first network is the reference
    RunParameters params;
    std::string annotations_path; // optional
    std::string out_dir;
    unsigned threads = 0;
    std::vector<std::string> graph_formats; // extra graph exports
};

// Full pipeline on in-memory edge lists; the first list is the reference.
DiffNetwork make_diff_net(std::vector<EdgeList> lists, const RunParameters& params,
                          unsigned threads = 0);

// Loads the inputs, runs the pipeline, writes links.tsv / nodes.tsv /
// summary.json (plus optional graph exports and enrichment.tsv) into
// config.out_dir, and prints the summary to `log`.
DiffNetwork run_make_diff_net(const RunConfig& config, std::ostream& log);

// Rebuilds a DiffNetwork from a previously exported directory
// (links.tsv + nodes.tsv + summary.json).
DiffNetwork load_diff_net(const std::string& dir);

// Re-runs node classification on an exported network at a new alpha and
// rewrites nodes.tsv (into out_dir, defaulting to the input directory).
void run_cluster_nodes(const std::string& net_dir, double alpha, const std::string& out_dir,
                       unsigned threads, std::ostream& log);

// Enrichment over an exported network's classified nodes.
std::vector<EnrichmentResult> run_enrich(const std::string& net_dir,
                                         const std::string& annotations_path,
                                         double weight_cutoff, const std::string& out_path,
                                         std::ostream& log);

void write_enrichment_tsv(const std::vector<EnrichmentResult>& results, const std::string& path);

// Generates a planted instance, writes its edge lists and ground truth, runs
// the pipeline (ratio cutoff 0 so recovery measures classification fidelity),
// and writes recovery.json.
RecoveryReport run_simulate(const PlantedSpec& spec, const std::string& out_dir,
                            unsigned threads, std::ostream& log);

void write_recovery_json(const RecoveryReport& report, const std::string& path);

} // namespace netdiff

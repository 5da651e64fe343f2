// netdiff: compares W >= 2 weighted networks, classifying every link and node
// as common, different or specific, and exports one filtered differential
// network with summary statistics and optional annotation enrichment.

#include "netdiff/error.hpp"
#include "netdiff/pipeline.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

namespace {

netdiff::NetworkInput parse_input(const std::string& arg) {
    const std::size_t eq = arg.find('=');
    if (eq != std::string::npos && eq > 0) {
        return {arg.substr(0, eq), arg.substr(eq + 1)};
    }
    return {std::filesystem::path(arg).stem().string(), arg};
}

char parse_delimiter(const std::string& name) {
    if (name == "tab") return '\t';
    if (name == "comma") return ',';
    throw netdiff::IoError("unknown delimiter '" + name + "' (expected tab or comma)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"differential comparison of weighted networks"};
    app.require_subcommand(1);
    app.fallthrough(); // let --config after a subcommand reach the main app
    app.set_config("--config")->configurable(false);

    // make-diff-net
    auto* make = app.add_subcommand(
        "make-diff-net", "classify and score links across networks, write the filtered network");
    std::vector<std::string> net_args;
    make->add_option("networks", net_args,
                     "input networks as NAME=PATH (first is the reference), 2 or more")
        ->required()
        ->expected(-2);
    netdiff::RunConfig config;
    std::string delimiter = "tab", norm = "group";
    make->add_option("--tau", config.params.tau, "categorization threshold in (0,1)")
        ->capture_default_str();
    make->add_flag("--stretch", config.params.stretch,
                   "rescale each network's weights onto [-1,1]");
    make->add_option("--norm", norm, "normalization mode: group (per phi_tilde) or all")
        ->check(CLI::IsMember({"group", "all"}))
        ->capture_default_str();
    make->add_option("--ratio-cutoff", config.params.ratio_cutoff,
                     "keep links with score_ratio >= cutoff")
        ->capture_default_str();
    make->add_option("--alpha", config.params.alpha, "node test significance level")
        ->capture_default_str();
    make->add_option("--annotations", config.annotations_path,
                     "two-column annotation file for enrichment");
    make->add_option("--weight-cutoff", config.params.enrichment_cutoff,
                     "enrichment weight cutoff")
        ->capture_default_str();
    make->add_option("--out", config.out_dir, "output directory")->required();
    make->add_option("--threads", config.threads, "worker threads (0 = all cores)")
        ->capture_default_str();
    make->add_option("--format", config.graph_formats,
                     "additional graph exports: graphml, dot, json (repeatable)");
    make->add_option("--delimiter", delimiter, "input column delimiter: tab or comma")
        ->check(CLI::IsMember({"tab", "comma"}))
        ->capture_default_str();

    // cluster-nodes
    auto* cluster = app.add_subcommand(
        "cluster-nodes", "re-run node classification on an exported network");
    std::string cluster_dir, cluster_out;
    double cluster_alpha = 0.05;
    unsigned cluster_threads = 0;
    cluster->add_option("--net", cluster_dir, "directory written by make-diff-net")->required();
    cluster->add_option("--alpha", cluster_alpha, "significance level")->capture_default_str();
    cluster->add_option("--out", cluster_out, "output directory (default: --net)");
    cluster->add_option("--threads", cluster_threads, "worker threads (0 = all cores)");

    // simulate
    auto* simulate = app.add_subcommand(
        "simulate", "generate a planted instance, run the pipeline, report recovery");
    std::string spec_path, simulate_out;
    unsigned simulate_threads = 0;
    std::uint64_t seed_override = 0;
    simulate->add_option("--spec", spec_path, "planted instance spec file")->required();
    simulate->add_option("--out", simulate_out, "output directory")->required();
    simulate->add_option("--threads", simulate_threads, "worker threads (0 = all cores)");
    simulate->add_option("--seed", seed_override, "override the spec's seed");

    // enrich
    auto* enrich_cmd = app.add_subcommand(
        "enrich", "annotation enrichment over an exported network's node categories");
    std::string enrich_dir, enrich_annotations, enrich_out;
    double enrich_cutoff = 0.10;
    enrich_cmd->add_option("--net", enrich_dir, "directory written by make-diff-net")->required();
    enrich_cmd->add_option("--annotations", enrich_annotations, "two-column annotation file")
        ->required();
    enrich_cmd->add_option("--weight-cutoff", enrich_cutoff, "significance cutoff on the weight")
        ->capture_default_str();
    enrich_cmd->add_option("--out", enrich_out, "output directory (default: --net)");

    // export
    auto* export_cmd = app.add_subcommand("export", "re-export an exported network as a graph");
    std::string export_dir, export_format = "graphml", export_out;
    export_cmd->add_option("--net", export_dir, "directory written by make-diff-net")->required();
    export_cmd->add_option("--format", export_format, "graphml, dot or json")
        ->check(CLI::IsMember({"graphml", "dot", "json"}))
        ->capture_default_str();
    export_cmd->add_option("--out", export_out, "output directory (default: --net)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*make) {
            config.params.delimiter = parse_delimiter(delimiter);
            config.params.mode = norm == "all" ? netdiff::NormalizationMode::all_links
                                               : netdiff::NormalizationMode::per_phi_tilde;
            if (!(config.params.tau > 0.0 && config.params.tau < 1.0)) {
                throw netdiff::IoError("--tau must lie in (0,1)");
            }
            if (config.params.ratio_cutoff < 0.0) {
                throw netdiff::IoError("--ratio-cutoff must be >= 0");
            }
            if (!(config.params.alpha >= 0.0 && config.params.alpha <= 1.0)) {
                throw netdiff::IoError("--alpha must lie in [0,1]");
            }
            for (const auto& arg : net_args) config.inputs.push_back(parse_input(arg));
            netdiff::run_make_diff_net(config, std::cout);
        } else if (*cluster) {
            netdiff::run_cluster_nodes(cluster_dir, cluster_alpha, cluster_out, cluster_threads,
                                       std::cout);
        } else if (*simulate) {
            netdiff::PlantedSpec spec = netdiff::PlantedSpec::load(spec_path);
            if (simulate->count("--seed") > 0) spec.seed = seed_override;
            netdiff::run_simulate(spec, simulate_out, simulate_threads, std::cout);
        } else if (*enrich_cmd) {
            const std::string dir = enrich_out.empty() ? enrich_dir : enrich_out;
            std::filesystem::create_directories(dir);
            netdiff::run_enrich(enrich_dir, enrich_annotations, enrich_cutoff,
                                (std::filesystem::path(dir) / "enrichment.tsv").string(),
                                std::cout);
        } else if (*export_cmd) {
            const netdiff::DiffNetwork dn = netdiff::load_diff_net(export_dir);
            const std::string dir = export_out.empty() ? export_dir : export_out;
            std::filesystem::create_directories(dir);
            netdiff::export_graph(dn, netdiff::parse_graph_format(export_format),
                                  (std::filesystem::path(dir) / ("graph." + export_format)).string());
        }
    } catch (const netdiff::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const netdiff::AnalysisError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

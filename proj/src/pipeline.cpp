#include "netdiff/pipeline.hpp"
#include "netdiff/error.hpp"
#include "netdiff/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>
#include <unordered_map>

namespace netdiff {

namespace fs = std::filesystem;
using nlohmann::json;

DiffNetwork make_diff_net(std::vector<EdgeList> lists, const RunParameters& params,
                          unsigned threads) {
    BuildOptions build_options;
    build_options.stretch = params.stretch;
    NetworkSet net = build_network_set(std::move(lists), build_options);

    DiffNetwork dn;
    dn.params = params;
    dn.ingest = net.ingest;
    dn.universe_size = net.node_names.size();
    dn.merged_links = net.link_count();
    dn.links = classify_all(net, Tau(params.tau), threads);

    ScoreOptions score_options;
    score_options.mode = params.mode;
    score_options.threads = threads;
    dn.scores = score_all(dn.links, score_options);
    dn.kept = filter_by_ratio(dn.scores, params.ratio_cutoff);
    if (!dn.kept.empty()) {
        dn.nodes = classify_nodes(dn.links, dn.kept, params.alpha, threads);
    }
    return dn;
}

namespace {

std::vector<EdgeList> load_inputs(const std::vector<NetworkInput>& inputs,
                                  const ParseFormat& format, unsigned threads) {
    std::vector<EdgeList> lists(inputs.size());
    std::exception_ptr error;
    std::mutex error_mutex;
    auto load_one = [&](std::size_t i) {
        try {
            lists[i] = load_edge_list(inputs[i].path, inputs[i].name, format);
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
        }
    };
    if (resolve_threads(threads) <= 1 || inputs.size() <= 1) {
        for (std::size_t i = 0; i < inputs.size(); ++i) load_one(i);
    } else {
        std::vector<std::thread> workers;
        workers.reserve(inputs.size());
        for (std::size_t i = 0; i < inputs.size(); ++i) workers.emplace_back(load_one, i);
        for (auto& w : workers) w.join();
    }
    if (error) std::rethrow_exception(error);
    return lists;
}

std::string path_join(const std::string& dir, const std::string& file) {
    return (fs::path(dir) / file).string();
}

std::vector<std::pair<std::string, std::string>> node_category_pairs(const DiffNetwork& net) {
    std::vector<std::pair<std::string, std::string>> pairs;
    pairs.reserve(net.nodes.size());
    for (const auto& nc : net.nodes) {
        pairs.emplace_back(net.links.node_names[nc.node],
                           nc.assigned_label ? net.links.labels[*nc.assigned_label]
                                             : "Undefined");
    }
    return pairs;
}

} // namespace

DiffNetwork run_make_diff_net(const RunConfig& config, std::ostream& log) {
    if (config.inputs.size() < 2) {
        throw AnalysisError("need at least 2 input networks");
    }
    for (const auto& input : config.inputs) {
        if (input.name.empty() || input.name.find_first_of("\t\n") != std::string::npos) {
            throw IoError("network name '" + input.name + "' must be non-empty without tabs");
        }
    }
    ParseFormat format{config.params.delimiter};
    DiffNetwork dn =
        make_diff_net(load_inputs(config.inputs, format, config.threads), config.params,
                      config.threads);

    fs::create_directories(config.out_dir);
    export_links_tsv(dn, path_join(config.out_dir, "links.tsv"));
    export_nodes_tsv(dn, path_join(config.out_dir, "nodes.tsv"));
    const Summary summary = summarize(dn);
    write_summary_json(dn, summary, path_join(config.out_dir, "summary.json"));
    for (const auto& fmt : config.graph_formats) {
        export_graph(dn, parse_graph_format(fmt),
                     path_join(config.out_dir, "graph." + fmt));
    }
    if (!config.annotations_path.empty()) {
        const auto annotations =
            load_annotations(config.annotations_path, config.params.delimiter);
        const auto results =
            enrich(node_category_pairs(dn), annotations, config.params.enrichment_cutoff);
        write_enrichment_tsv(results, path_join(config.out_dir, "enrichment.tsv"));
    }
    print_summary(summary, log);
    return dn;
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t p = line.find('\t', start);
        if (p == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, p - start));
        start = p + 1;
    }
    if (!out.empty() && !out.back().empty() && out.back().back() == '\r') out.back().pop_back();
    return out;
}

double parse_double(const std::string& s, const std::string& context) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
        throw IoError("bad number '" + s + "' in " + context);
    }
    return v;
}

} // namespace

DiffNetwork load_diff_net(const std::string& dir) {
    const std::string links_path = path_join(dir, "links.tsv");
    const std::string nodes_path = path_join(dir, "nodes.tsv");
    const std::string summary_path = path_join(dir, "summary.json");

    DiffNetwork dn;

    // Parameters.
    {
        std::ifstream in(summary_path);
        if (!in) throw IoError("cannot open " + summary_path);
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw IoError(summary_path + ": " + e.what());
        }
        const auto& p = j.at("parameters");
        dn.params.tau = p.at("tau").get<double>();
        dn.params.stretch = p.at("stretch").get<bool>();
        dn.params.mode = p.at("normalization").get<std::string>() == "all"
                             ? NormalizationMode::all_links
                             : NormalizationMode::per_phi_tilde;
        dn.params.ratio_cutoff = p.at("ratio_cutoff").get<double>();
        dn.params.alpha = p.at("alpha").get<double>();
        dn.params.enrichment_cutoff = p.at("enrichment_cutoff").get<double>();
        dn.params.delimiter = p.at("delimiter").get<std::string>() == "comma" ? ',' : '\t';
        dn.links.network_names = p.at("networks").get<std::vector<std::string>>();
        dn.universe_size = j.value("node_universe", std::size_t{0});
        dn.merged_links = j.value("merged_links", std::size_t{0});
    }
    const std::size_t w = dn.links.network_names.size();
    if (w < 2) throw IoError(summary_path + ": fewer than 2 networks recorded");

    // Links.
    std::ifstream in(links_path);
    if (!in) throw IoError("cannot open " + links_path);
    std::string line;
    if (!std::getline(in, line)) throw IoError(links_path + ": empty file");
    const auto header = split_tabs(line);
    if (header.size() != 2 + 2 * w + 7) {
        throw IoError(links_path + ": header does not match " + std::to_string(w) +
                      " networks");
    }

    std::unordered_map<std::string, std::uint32_t> name_ids;
    std::vector<std::string> names;
    auto intern = [&](const std::string& s) {
        auto it = name_ids.find(s);
        if (it != name_ids.end()) return it->second;
        const auto id = static_cast<std::uint32_t>(names.size());
        name_ids.emplace(s, id);
        names.push_back(s);
        return id;
    };

    std::vector<std::uint32_t> raw_a, raw_b;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_tabs(line);
        if (fields.size() != header.size()) {
            throw IoError(links_path + ":" + std::to_string(line_no) + ": wrong column count");
        }
        const std::string ctx = links_path + ":" + std::to_string(line_no);
        raw_a.push_back(intern(fields[0]));
        raw_b.push_back(intern(fields[1]));
        for (std::size_t k = 0; k < w; ++k) {
            dn.links.rho.push_back(parse_double(fields[2 + k], ctx));
        }
        for (std::size_t k = 0; k < w; ++k) {
            dn.links.rho_tilde.push_back(
                static_cast<std::int8_t>(parse_double(fields[2 + w + k], ctx)));
        }
        const std::size_t base = 2 + 2 * w;
        // phi and phi_tilde at base+0 / base+1 are re-derived from rho_tilde below.
        dn.scores.delta.push_back(parse_double(fields[base + 2], ctx));
        dn.scores.delta_star.push_back(parse_double(fields[base + 3], ctx));
        dn.scores.delta_phi_tilde.push_back(parse_double(fields[base + 4], ctx));
        dn.scores.delta_rho_tilde.push_back(parse_double(fields[base + 5], ctx));
        dn.scores.score_ratio.push_back(parse_double(fields[base + 6], ctx));
    }

    // Node ids become name ranks, links re-sorted canonically.
    std::vector<std::uint32_t> rank(names.size());
    {
        std::vector<std::uint32_t> order(names.size());
        std::iota(order.begin(), order.end(), 0u);
        std::sort(order.begin(), order.end(),
                  [&](std::uint32_t x, std::uint32_t y) { return names[x] < names[y]; });
        dn.links.node_names.resize(names.size());
        for (std::uint32_t r = 0; r < order.size(); ++r) {
            rank[order[r]] = r;
            dn.links.node_names[r] = names[order[r]];
        }
    }
    const std::size_t n = raw_a.size();
    std::vector<std::uint64_t> keys(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t a = rank[raw_a[i]], b = rank[raw_b[i]];
        if (a > b) std::swap(a, b);
        keys[i] = (static_cast<std::uint64_t>(a) << 32) | b;
    }
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(),
              [&](std::uint32_t x, std::uint32_t y) { return keys[x] < keys[y]; });

    ClassifiedLinks sorted;
    sorted.network_names = dn.links.network_names;
    sorted.node_names = dn.links.node_names;
    LinkScores sorted_scores;
    std::unordered_map<std::uint64_t, std::uint32_t> group_of_code;
    std::vector<std::uint64_t> codes;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t src = order[i];
        sorted.link_a.push_back(static_cast<std::uint32_t>(keys[src] >> 32));
        sorted.link_b.push_back(static_cast<std::uint32_t>(keys[src] & 0xFFFFFFFFu));
        std::uint64_t code = 0, pow3 = 1;
        for (std::size_t k = 0; k < w; ++k) {
            sorted.rho.push_back(dn.links.rho[src * w + k]);
            const std::int8_t v = dn.links.rho_tilde[src * w + k];
            sorted.rho_tilde.push_back(v);
            code += static_cast<std::uint64_t>(v + 1) * pow3;
            pow3 *= 3;
        }
        codes.push_back(code);
        group_of_code.emplace(code, 0u);
        sorted_scores.delta.push_back(dn.scores.delta[src]);
        sorted_scores.delta_star.push_back(dn.scores.delta_star[src]);
        sorted_scores.delta_phi_tilde.push_back(dn.scores.delta_phi_tilde[src]);
        sorted_scores.delta_rho_tilde.push_back(dn.scores.delta_rho_tilde[src]);
        sorted_scores.score_ratio.push_back(dn.scores.score_ratio[src]);
    }

    std::vector<std::uint64_t> unique_codes;
    for (const auto& [c, g] : group_of_code) unique_codes.push_back(c);
    std::sort(unique_codes.begin(), unique_codes.end());
    std::map<std::string, std::uint32_t> label_ids;
    for (std::uint32_t g = 0; g < unique_codes.size(); ++g) {
        group_of_code[unique_codes[g]] = g;
        PatternGroup pg;
        pg.code = unique_codes[g];
        pg.pattern.resize(w);
        std::uint64_t rest = pg.code;
        for (std::size_t k = 0; k < w; ++k) {
            pg.pattern[k] = static_cast<std::int8_t>(rest % 3) - 1;
            rest /= 3;
        }
        auto [phi, label] = classify_link(pg.pattern, sorted.network_names);
        pg.phi = phi;
        pg.phi_tilde = std::move(label);
        label_ids.emplace(pg.phi_tilde, 0u);
        sorted.groups.push_back(std::move(pg));
    }
    for (auto& [label, id] : label_ids) {
        id = static_cast<std::uint32_t>(sorted.labels.size());
        sorted.labels.push_back(label);
    }
    for (auto& pg : sorted.groups) pg.label_id = label_ids.at(pg.phi_tilde);
    sorted.group.resize(n);
    for (std::size_t i = 0; i < n; ++i) sorted.group[i] = group_of_code.at(codes[i]);

    dn.links = std::move(sorted);
    dn.scores = std::move(sorted_scores);
    dn.kept.resize(n);
    std::iota(dn.kept.begin(), dn.kept.end(), 0u);

    // Node classifications are recomputed from the links at the stored alpha;
    // nodes.tsv is a derived artifact.
    if (n > 0) dn.nodes = classify_nodes(dn.links, dn.kept, dn.params.alpha);
    return dn;
}

void run_cluster_nodes(const std::string& net_dir, double alpha, const std::string& out_dir,
                       unsigned threads, std::ostream& log) {
    DiffNetwork dn = load_diff_net(net_dir);
    dn.params.alpha = alpha;
    dn.nodes = dn.kept.empty() ? std::vector<NodeClassification>{}
                               : classify_nodes(dn.links, dn.kept, alpha, threads);
    const std::string dir = out_dir.empty() ? net_dir : out_dir;
    fs::create_directories(dir);
    export_nodes_tsv(dn, path_join(dir, "nodes.tsv"));
    const Summary summary = summarize(dn);
    log << "reclassified " << summary.classified_nodes << " nodes at alpha=" << alpha << "\n";
    log << "node phi tallies:";
    for (const auto& [k, v] : summary.node_phi) log << " " << k << "=" << v;
    log << "\n";
}

void write_enrichment_tsv(const std::vector<EnrichmentResult>& results,
                          const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "annotation\tcategory\texpected\tobserved\tp_fisher\tp_prop\tweight\tsignificant\n";
    char buf[64];
    for (const auto& r : results) {
        out << r.annotation << '\t' << r.category << '\t' << r.expected << '\t' << r.observed;
        for (double v : {r.p_fisher, r.p_prop, r.weight}) {
            std::snprintf(buf, sizeof(buf), "%.6g", v);
            out << '\t' << buf;
        }
        out << '\t' << (r.significant ? 1 : 0) << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

std::vector<EnrichmentResult> run_enrich(const std::string& net_dir,
                                         const std::string& annotations_path,
                                         double weight_cutoff, const std::string& out_path,
                                         std::ostream& log) {
    const DiffNetwork dn = load_diff_net(net_dir);
    if (dn.nodes.empty()) throw AnalysisError("no classified nodes in " + net_dir);
    const auto annotations = load_annotations(annotations_path, dn.params.delimiter);
    auto results = enrich(node_category_pairs(dn), annotations, weight_cutoff);
    if (!out_path.empty()) write_enrichment_tsv(results, out_path);
    std::size_t significant = 0;
    for (const auto& r : results) significant += r.significant;
    log << results.size() << " (annotation, category) pairs tested, " << significant
        << " below weight cutoff " << weight_cutoff << "\n";
    return results;
}

void write_recovery_json(const RecoveryReport& report, const std::string& path) {
    json j;
    j["link_accuracy"] = report.link_accuracy;
    if (report.node_accuracy) {
        j["node_accuracy"] = *report.node_accuracy;
    } else {
        j["node_accuracy"] = nullptr;
    }
    j["truth_links"] = report.truth_links;
    j["predicted_links"] = report.predicted_links;
    j["missing_links"] = report.missing_links;
    json per_class = json::array();
    for (const auto& m : report.per_class) {
        per_class.push_back({{"label", m.label},
                             {"truth", m.truth_count},
                             {"predicted", m.predicted_count},
                             {"correct", m.correct},
                             {"precision", m.precision},
                             {"recall", m.recall}});
    }
    j["per_class"] = std::move(per_class);
    j["confusion_labels"] = report.confusion_labels;
    j["confusion"] = report.confusion;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
}

RecoveryReport run_simulate(const PlantedSpec& spec, const std::string& out_dir,
                            unsigned threads, std::ostream& log) {
    SynthResult instance = generate(spec);
    fs::create_directories(out_dir);
    std::vector<NetworkInput> inputs;
    for (const auto& list : instance.networks) {
        const std::string path = path_join(out_dir, list.name + ".tsv");
        write_edge_list(list, path);
        inputs.push_back({list.name, path});
    }
    {
        std::ofstream truth_out(path_join(out_dir, "truth.tsv"), std::ios::binary);
        truth_out << "node1\tnode2\tphi_tilde\n";
        std::vector<std::uint64_t> keys;
        keys.reserve(instance.truth.link_label.size());
        for (const auto& [key, label] : instance.truth.link_label) keys.push_back(key);
        std::sort(keys.begin(), keys.end());
        for (const std::uint64_t key : keys) {
            truth_out << instance.truth.node_names[key >> 32] << '\t'
                      << instance.truth.node_names[key & 0xFFFFFFFFu] << '\t'
                      << instance.truth.labels[instance.truth.link_label.at(key)] << '\n';
        }
    }

    RunParameters params;
    params.tau = spec.tau;
    params.ratio_cutoff = 0.0; // recovery measures classification, not strength
    DiffNetwork dn = make_diff_net(std::move(instance.networks), params, threads);

    fs::create_directories(path_join(out_dir, "diffnet"));
    export_links_tsv(dn, path_join(out_dir, "diffnet/links.tsv"));
    export_nodes_tsv(dn, path_join(out_dir, "diffnet/nodes.tsv"));
    write_summary_json(dn, summarize(dn), path_join(out_dir, "diffnet/summary.json"));

    RecoveryReport report = evaluate(dn.links, dn.nodes, instance.truth);
    write_recovery_json(report, path_join(out_dir, "recovery.json"));
    log << "planted links: " << report.truth_links
        << ", classified: " << report.predicted_links
        << ", missing: " << report.missing_links << "\n";
    log << "link label recovery: " << report.link_accuracy << "\n";
    if (report.node_accuracy) {
        log << "hub node assignment accuracy: " << *report.node_accuracy << "\n";
    }
    return report;
}

} // namespace netdiff

#include "netdiff/export.hpp"
#include "netdiff/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>

namespace netdiff {

namespace {

using nlohmann::json;

std::string g6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

const char* phi_color(Phi p) {
    switch (p) {
        case Phi::alpha: return "green";
        case Phi::beta: return "red";
        case Phi::gamma: return "blue";
    }
    return "grey";
}

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string dot_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    return out;
}

std::string node_phi_string(const NodeClassification& nc) {
    return nc.assigned_phi ? phi_code(*nc.assigned_phi) : "Undefined";
}

std::string node_label_string(const DiffNetwork& net, const NodeClassification& nc) {
    return nc.assigned_label ? net.links.labels[*nc.assigned_label] : "Undefined";
}

// Classified-node rows sorted by node name; node ids are name ranks already.
std::vector<std::size_t> node_order(const DiffNetwork& net) {
    std::vector<std::size_t> order(net.nodes.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return net.nodes[x].node < net.nodes[y].node;
    });
    return order;
}

json parameters_json(const RunParameters& p, const std::vector<std::string>& networks) {
    return json{
        {"tau", p.tau},
        {"stretch", p.stretch},
        {"normalization", p.mode == NormalizationMode::per_phi_tilde ? "group" : "all"},
        {"ratio_cutoff", p.ratio_cutoff},
        {"alpha", p.alpha},
        {"enrichment_cutoff", p.enrichment_cutoff},
        {"delimiter", p.delimiter == '\t' ? "tab" : "comma"},
        {"networks", networks},
    };
}

} // namespace

GraphFormat parse_graph_format(const std::string& name) {
    if (name == "graphml") return GraphFormat::graphml;
    if (name == "dot") return GraphFormat::dot;
    if (name == "json") return GraphFormat::json;
    throw IoError("unknown graph format '" + name + "' (expected graphml, dot or json)");
}

Summary summarize(const DiffNetwork& net) {
    Summary s;
    s.networks = net.links.network_names;
    s.ingest = net.ingest;
    s.node_universe = net.universe_size;
    s.merged_links = net.merged_links;
    s.removed_all_zero = net.links.removed_all_zero;
    s.classified_links = net.links.size();
    s.kept_links = net.kept.size();
    s.pattern_groups = net.links.groups.size();
    for (std::uint32_t i : net.kept) {
        s.link_phi[phi_code(net.links.phi_of(i))] += 1;
        s.link_phi_tilde[net.links.label_of(i)] += 1;
    }
    s.classified_nodes = net.nodes.size();
    for (const auto& nc : net.nodes) {
        s.node_phi[node_phi_string(nc)] += 1;
        s.node_phi_tilde[node_label_string(net, nc)] += 1;
        s.low_evidence_nodes += nc.low_evidence;
    }
    s.group_f_stat = net.scores.group_f_stat;
    s.f_df1 = net.scores.f_df1;
    s.f_df2 = net.scores.f_df2;
    return s;
}

void print_summary(const Summary& s, std::ostream& os) {
    os << "networks: " << s.networks.size() << " (";
    for (std::size_t i = 0; i < s.networks.size(); ++i) {
        os << (i ? ", " : "") << s.networks[i];
    }
    os << "), reference: " << (s.networks.empty() ? "-" : s.networks.front()) << "\n";
    for (const auto& st : s.ingest) {
        os << "  " << st.network << ": " << st.input_records << " records, " << st.input_nodes
           << " nodes; dropped " << st.dropped_nodes << " nodes / " << st.dropped_links
           << " links outside the common universe\n";
    }
    os << "node universe: " << s.node_universe << "\n";
    os << "merged links: " << s.merged_links << " (" << s.removed_all_zero
       << " removed as all-zero)\n";
    os << "classified links: " << s.classified_links << " in " << s.pattern_groups
       << " sign-pattern groups\n";
    os << "kept after ratio filter: " << s.kept_links << "\n";
    os << "link phi tallies:";
    for (const auto& [k, v] : s.link_phi) os << " " << k << "=" << v;
    os << "\nlink phi_tilde tallies:";
    for (const auto& [k, v] : s.link_phi_tilde) os << " " << k << "=" << v;
    os << "\nclassified nodes: " << s.classified_nodes << " (" << s.low_evidence_nodes
       << " low-evidence)\n";
    os << "node phi tallies:";
    for (const auto& [k, v] : s.node_phi) os << " " << k << "=" << v;
    os << "\nnode phi_tilde tallies:";
    for (const auto& [k, v] : s.node_phi_tilde) os << " " << k << "=" << v;
    os << "\ndelta ~ phi_tilde group effect: F(" << s.f_df1 << ", " << s.f_df2
       << ") = " << g6(s.group_f_stat) << "\n";
}

void export_links_tsv(const DiffNetwork& net, const std::string& path) {
    auto out = open_out(path);
    const auto& links = net.links;
    const std::size_t w = links.width();

    std::string header = "node1\tnode2";
    for (const auto& name : links.network_names) header += "\trho_" + name;
    for (const auto& name : links.network_names) header += "\trho_tilde_" + name;
    header += "\tphi\tphi_tilde\tdelta\tdelta_star\tdelta_phi_tilde\tdelta_rho_tilde\tscore_ratio\n";
    out << header;

    std::string buf;
    buf.reserve(1 << 20);
    for (std::uint32_t i : net.kept) {
        buf += links.node_names[links.link_a[i]];
        buf += '\t';
        buf += links.node_names[links.link_b[i]];
        for (std::size_t k = 0; k < w; ++k) {
            buf += '\t';
            buf += g6(links.rho[i * w + k]);
        }
        for (std::size_t k = 0; k < w; ++k) {
            buf += '\t';
            buf += std::to_string(static_cast<int>(links.rho_tilde[i * w + k]));
        }
        buf += '\t';
        buf += phi_code(links.phi_of(i));
        buf += '\t';
        buf += links.label_of(i);
        for (double v : {net.scores.delta[i], net.scores.delta_star[i],
                         net.scores.delta_phi_tilde[i], net.scores.delta_rho_tilde[i],
                         net.scores.score_ratio[i]}) {
            buf += '\t';
            buf += g6(v);
        }
        buf += '\n';
        if (buf.size() > (1 << 20) - 1024) {
            out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
            buf.clear();
        }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw IoError("write failed: " + path);
}

void export_nodes_tsv(const DiffNetwork& net, const std::string& path) {
    auto out = open_out(path);
    out << "node\tdegree\tn_alpha\tn_beta\tn_gamma\tchi2_phi\tp_phi\tphi\t"
           "chi2_phi_tilde\tp_phi_tilde\tphi_tilde\tlow_evidence\n";
    for (std::size_t j : node_order(net)) {
        const auto& nc = net.nodes[j];
        out << net.links.node_names[nc.node] << '\t' << nc.degree << '\t' << nc.phi_counts[0]
            << '\t' << nc.phi_counts[1] << '\t' << nc.phi_counts[2] << '\t' << g6(nc.chi2_phi)
            << '\t' << g6(nc.p_phi) << '\t' << node_phi_string(nc) << '\t' << g6(nc.chi2_label)
            << '\t' << g6(nc.p_label) << '\t' << node_label_string(net, nc) << '\t'
            << (nc.low_evidence ? 1 : 0) << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

void write_summary_json(const DiffNetwork& net, const Summary& s, const std::string& path) {
    json j;
    j["parameters"] = parameters_json(net.params, net.links.network_names);
    json ingest = json::array();
    for (const auto& st : s.ingest) {
        ingest.push_back({{"network", st.network},
                          {"records", st.input_records},
                          {"nodes", st.input_nodes},
                          {"dropped_nodes", st.dropped_nodes},
                          {"dropped_links", st.dropped_links}});
    }
    j["ingest"] = std::move(ingest);
    j["node_universe"] = s.node_universe;
    j["merged_links"] = s.merged_links;
    j["links"] = {{"classified", s.classified_links},
                  {"removed_all_zero", s.removed_all_zero},
                  {"kept_after_ratio_filter", s.kept_links},
                  {"pattern_groups", s.pattern_groups},
                  {"phi", s.link_phi},
                  {"phi_tilde", s.link_phi_tilde}};
    j["nodes"] = {{"classified", s.classified_nodes},
                  {"low_evidence", s.low_evidence_nodes},
                  {"phi", s.node_phi},
                  {"phi_tilde", s.node_phi_tilde}};
    j["scores"] = {{"group_f_stat", s.group_f_stat}, {"f_df1", s.f_df1}, {"f_df2", s.f_df2}};
    auto out = open_out(path);
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + path);
}

namespace {

void export_graphml(const DiffNetwork& net, const std::string& path) {
    auto out = open_out(path);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\"\n"
        << "         xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\"\n"
        << "         xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns "
           "http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n"
        << "  <key id=\"vphi\" for=\"node\" attr.name=\"phi\" attr.type=\"string\"/>\n"
        << "  <key id=\"vtilde\" for=\"node\" attr.name=\"phi_tilde\" attr.type=\"string\"/>\n"
        << "  <key id=\"ephi\" for=\"edge\" attr.name=\"phi\" attr.type=\"string\"/>\n"
        << "  <key id=\"etilde\" for=\"edge\" attr.name=\"phi_tilde\" attr.type=\"string\"/>\n"
        << "  <key id=\"eratio\" for=\"edge\" attr.name=\"score_ratio\" attr.type=\"double\"/>\n"
        << "  <key id=\"ewidth\" for=\"edge\" attr.name=\"width\" attr.type=\"double\"/>\n"
        << "  <key id=\"ecolor\" for=\"edge\" attr.name=\"color\" attr.type=\"string\"/>\n"
        << "  <graph id=\"G\" edgedefault=\"undirected\">\n";
    for (std::size_t j : node_order(net)) {
        const auto& nc = net.nodes[j];
        out << "    <node id=\"" << xml_escape(net.links.node_names[nc.node]) << "\">"
            << "<data key=\"vphi\">" << node_phi_string(nc) << "</data>"
            << "<data key=\"vtilde\">" << xml_escape(node_label_string(net, nc)) << "</data>"
            << "</node>\n";
    }
    for (std::uint32_t i : net.kept) {
        out << "    <edge source=\"" << xml_escape(net.links.node_names[net.links.link_a[i]])
            << "\" target=\"" << xml_escape(net.links.node_names[net.links.link_b[i]]) << "\">"
            << "<data key=\"ephi\">" << phi_code(net.links.phi_of(i)) << "</data>"
            << "<data key=\"etilde\">" << xml_escape(net.links.label_of(i)) << "</data>"
            << "<data key=\"eratio\">" << g6(net.scores.score_ratio[i]) << "</data>"
            << "<data key=\"ewidth\">" << g6(net.scores.score_ratio[i]) << "</data>"
            << "<data key=\"ecolor\">" << phi_color(net.links.phi_of(i)) << "</data>"
            << "</edge>\n";
    }
    out << "  </graph>\n</graphml>\n";
    if (!out) throw IoError("write failed: " + path);
}

void export_dot(const DiffNetwork& net, const std::string& path) {
    auto out = open_out(path);
    out << "graph diffnet {\n";
    for (std::size_t j : node_order(net)) {
        const auto& nc = net.nodes[j];
        out << "  \"" << dot_escape(net.links.node_names[nc.node]) << "\" [phi=\""
            << node_phi_string(nc) << "\", phi_tilde=\""
            << dot_escape(node_label_string(net, nc)) << "\"];\n";
    }
    for (std::uint32_t i : net.kept) {
        out << "  \"" << dot_escape(net.links.node_names[net.links.link_a[i]]) << "\" -- \""
            << dot_escape(net.links.node_names[net.links.link_b[i]]) << "\" [color=\""
            << phi_color(net.links.phi_of(i)) << "\", penwidth=" << g6(net.scores.score_ratio[i])
            << ", phi=\"" << phi_code(net.links.phi_of(i)) << "\", phi_tilde=\""
            << dot_escape(net.links.label_of(i)) << "\", score_ratio="
            << g6(net.scores.score_ratio[i]) << "];\n";
    }
    out << "}\n";
    if (!out) throw IoError("write failed: " + path);
}

void export_json_graph(const DiffNetwork& net, const std::string& path) {
    const Summary s = summarize(net);
    json j;
    j["parameters"] = parameters_json(net.params, net.links.network_names);
    j["tallies"] = {{"links", s.kept_links},
                    {"link_phi", s.link_phi},
                    {"link_phi_tilde", s.link_phi_tilde},
                    {"nodes", s.classified_nodes},
                    {"node_phi", s.node_phi},
                    {"node_phi_tilde", s.node_phi_tilde}};
    json nodes = json::array();
    for (std::size_t idx : node_order(net)) {
        const auto& nc = net.nodes[idx];
        nodes.push_back({{"id", net.links.node_names[nc.node]},
                         {"phi", node_phi_string(nc)},
                         {"phi_tilde", node_label_string(net, nc)}});
    }
    j["nodes"] = std::move(nodes);
    json links = json::array();
    const std::size_t w = net.links.width();
    for (std::uint32_t i : net.kept) {
        json rho = json::array();
        json rho_tilde = json::array();
        for (std::size_t k = 0; k < w; ++k) {
            rho.push_back(net.links.rho[i * w + k]);
            rho_tilde.push_back(static_cast<int>(net.links.rho_tilde[i * w + k]));
        }
        links.push_back({{"source", net.links.node_names[net.links.link_a[i]]},
                         {"target", net.links.node_names[net.links.link_b[i]]},
                         {"rho", std::move(rho)},
                         {"rho_tilde", std::move(rho_tilde)},
                         {"phi", phi_code(net.links.phi_of(i))},
                         {"phi_tilde", net.links.label_of(i)},
                         {"delta", net.scores.delta[i]},
                         {"delta_star", net.scores.delta_star[i]},
                         {"delta_phi_tilde", net.scores.delta_phi_tilde[i]},
                         {"delta_rho_tilde", net.scores.delta_rho_tilde[i]},
                         {"score_ratio", net.scores.score_ratio[i]},
                         {"width", net.scores.score_ratio[i]},
                         {"color", phi_color(net.links.phi_of(i))}});
    }
    j["links"] = std::move(links);
    auto out = open_out(path);
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + path);
}

} // namespace

void export_graph(const DiffNetwork& net, GraphFormat format, const std::string& path) {
    switch (format) {
        case GraphFormat::graphml: export_graphml(net, path); return;
        case GraphFormat::dot: export_dot(net, path); return;
        case GraphFormat::json: export_json_graph(net, path); return;
    }
    throw IoError("unknown graph format");
}

} // namespace netdiff

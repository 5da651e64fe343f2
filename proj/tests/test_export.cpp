#include "netdiff/export.hpp"
#include "netdiff/pipeline.hpp"
#include "test_util.hpp"

#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <regex>
#include <set>
#include <sstream>

using namespace netdiff;

namespace {

EdgeList make_list(std::string name, std::vector<EdgeRecord> records) {
    EdgeList list;
    list.name = std::move(name);
    list.records = std::move(records);
    return list;
}

DiffNetwork toy_diff_net() {
    // three links: one alpha, one beta, one gamma across two networks
    auto net1 = make_list("N1", {{"A", "B", 0.9}, {"A", "C", 0.8}, {"B", "C", 0.7}});
    auto net2 = make_list("N2", {{"A", "B", 0.8}, {"A", "C", -0.7}, {"B", "C", 0.0}});
    RunParameters params;
    params.ratio_cutoff = 0.0;
    return make_diff_net({net1, net2}, params);
}

// Minimal structural XML check: tags balance, attributes are quoted, every
// <data key=..> references a declared <key id=..> and edge endpoints exist.
void check_graphml_structure(const std::string& text) {
    REQUIRE(text.find("<?xml") == 0);
    std::vector<std::string> stack;
    std::set<std::string> keys, nodes;
    std::regex tag_re("<(/?)([A-Za-z][A-Za-z0-9]*)((?:[^>\"]|\"[^\"]*\")*?)(/?)>");
    auto begin = std::sregex_iterator(text.begin(), text.end(), tag_re);
    for (auto it = begin; it != std::sregex_iterator(); ++it) {
        const std::string closing = (*it)[1];
        const std::string name = (*it)[2];
        const std::string attrs = (*it)[3];
        const std::string self_closing = (*it)[4];
        if (!closing.empty()) {
            REQUIRE(!stack.empty());
            CHECK(stack.back() == name);
            stack.pop_back();
            continue;
        }
        std::smatch m;
        if (name == "key") {
            std::regex id_re("id=\"([^\"]*)\"");
            REQUIRE(std::regex_search(attrs, m, id_re));
            keys.insert(m[1]);
        } else if (name == "node") {
            std::regex id_re("id=\"([^\"]*)\"");
            REQUIRE(std::regex_search(attrs, m, id_re));
            CHECK(nodes.insert(m[1]).second); // unique ids
        } else if (name == "edge") {
            std::regex src_re("source=\"([^\"]*)\"");
            std::regex dst_re("target=\"([^\"]*)\"");
            REQUIRE(std::regex_search(attrs, m, src_re));
            CHECK(nodes.count(m[1]) == 1);
            REQUIRE(std::regex_search(attrs, m, dst_re));
            CHECK(nodes.count(m[1]) == 1);
        } else if (name == "data") {
            std::regex key_re("key=\"([^\"]*)\"");
            REQUIRE(std::regex_search(attrs, m, key_re));
            CHECK(keys.count(m[1]) == 1); // declared before use
        }
        if (self_closing.empty()) stack.push_back(name);
    }
    CHECK(stack.empty());
}

} // namespace

TEST_CASE("links.tsv carries all columns in canonical order") {
    testutil::TempDir tmp("exp");
    const DiffNetwork dn = toy_diff_net();
    export_links_tsv(dn, tmp.path("links.tsv"));
    std::istringstream in(testutil::read_file(tmp.path("links.tsv")));
    std::string header;
    std::getline(in, header);
    CHECK(header ==
          "node1\tnode2\trho_N1\trho_N2\trho_tilde_N1\trho_tilde_N2\tphi\tphi_tilde\t"
          "delta\tdelta_star\tdelta_phi_tilde\tdelta_rho_tilde\tscore_ratio");
    std::vector<std::string> rows;
    for (std::string line; std::getline(in, line);) rows.push_back(line);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].substr(0, 4) == "A\tB\t");
    CHECK(rows[1].substr(0, 4) == "A\tC\t");
    CHECK(rows[2].substr(0, 4) == "B\tC\t");
    CHECK(rows[0].find("\ta\ta\t") != std::string::npos);       // alpha link, label a
    CHECK(rows[1].find("\tb\tb.N2\t") != std::string::npos);    // sign flip in N2
    CHECK(rows[2].find("\tg\tg.N1\t") != std::string::npos);    // specific to N1
}

TEST_CASE("an empty network exports a header-only file") {
    testutil::TempDir tmp("exp");
    DiffNetwork dn;
    dn.links.network_names = {"N1", "N2"};
    export_links_tsv(dn, tmp.path("links.tsv"));
    const std::string text = testutil::read_file(tmp.path("links.tsv"));
    CHECK(std::count(text.begin(), text.end(), '\n') == 1);
    export_nodes_tsv(dn, tmp.path("nodes.tsv"));
    const std::string nodes = testutil::read_file(tmp.path("nodes.tsv"));
    CHECK(std::count(nodes.begin(), nodes.end(), '\n') == 1);
}

TEST_CASE("exports are byte-stable across repeated runs") {
    testutil::TempDir tmp("exp");
    const DiffNetwork dn = toy_diff_net();
    export_links_tsv(dn, tmp.path("a.tsv"));
    export_links_tsv(dn, tmp.path("b.tsv"));
    CHECK(testutil::read_file(tmp.path("a.tsv")) == testutil::read_file(tmp.path("b.tsv")));
    export_graph(dn, GraphFormat::graphml, tmp.path("a.graphml"));
    export_graph(dn, GraphFormat::graphml, tmp.path("b.graphml"));
    CHECK(testutil::read_file(tmp.path("a.graphml")) ==
          testutil::read_file(tmp.path("b.graphml")));
}

TEST_CASE("TSV reload and reclassification reproduce phi and phi_tilde") {
    testutil::TempDir tmp("exp");
    const DiffNetwork dn = toy_diff_net();
    export_links_tsv(dn, tmp.path("links.tsv"));
    export_nodes_tsv(dn, tmp.path("nodes.tsv"));
    write_summary_json(dn, summarize(dn), tmp.path("summary.json"));
    const DiffNetwork reloaded = load_diff_net(tmp.root());
    REQUIRE(reloaded.links.size() == dn.kept.size());
    for (std::size_t i = 0; i < reloaded.links.size(); ++i) {
        // reclassify the reloaded rho columns from scratch
        std::vector<std::int8_t> cat(reloaded.links.width());
        for (std::size_t k = 0; k < cat.size(); ++k) {
            cat[k] = static_cast<std::int8_t>(
                categorize_weight(reloaded.links.rho_of(i)[k], Tau(reloaded.params.tau)));
        }
        const auto [phi, label] = classify_link(cat, reloaded.links.network_names);
        CHECK(phi == dn.links.phi_of(dn.kept[i]));
        CHECK(label == dn.links.label_of(dn.kept[i]));
    }
}

TEST_CASE("DOT output lists every kept link with a colour") {
    testutil::TempDir tmp("exp");
    const DiffNetwork dn = toy_diff_net();
    export_graph(dn, GraphFormat::dot, tmp.path("graph.dot"));
    const std::string text = testutil::read_file(tmp.path("graph.dot"));
    CHECK(text.find("graph ") == 0);
    CHECK(std::count(text.begin(), text.end(), '-') >= 3); // three undirected edges
    CHECK(text.find("color=\"green\"") != std::string::npos);
    CHECK(text.find("color=\"red\"") != std::string::npos);
    CHECK(text.find("color=\"blue\"") != std::string::npos);
}

TEST_CASE("GraphML output is structurally valid") {
    testutil::TempDir tmp("exp");
    const DiffNetwork dn = toy_diff_net();
    export_graph(dn, GraphFormat::graphml, tmp.path("graph.graphml"));
    check_graphml_structure(testutil::read_file(tmp.path("graph.graphml")));
}

TEST_CASE("JSON graph parses and its tallies match the summary") {
    testutil::TempDir tmp("exp");
    const DiffNetwork dn = toy_diff_net();
    export_graph(dn, GraphFormat::json, tmp.path("graph.json"));
    const auto j = nlohmann::json::parse(testutil::read_file(tmp.path("graph.json")));
    const Summary s = summarize(dn);
    CHECK(j.at("tallies").at("links").get<std::size_t>() == s.kept_links);
    CHECK(j.at("tallies").at("nodes").get<std::size_t>() == s.classified_nodes);
    for (const auto& [label, count] : s.link_phi) {
        CHECK(j.at("tallies").at("link_phi").at(label).get<std::size_t>() == count);
    }
    CHECK(j.at("links").size() == s.kept_links);
    CHECK(j.at("nodes").size() == s.classified_nodes);
}

TEST_CASE("summary tallies reconcile with the link table") {
    const DiffNetwork dn = toy_diff_net();
    const Summary s = summarize(dn);
    CHECK(s.kept_links == dn.kept.size());
    std::size_t phi_total = 0;
    for (const auto& [label, count] : s.link_phi) phi_total += count;
    CHECK(phi_total == s.kept_links);
    std::size_t node_total = 0;
    for (const auto& [label, count] : s.node_phi) node_total += count;
    CHECK(node_total == s.classified_nodes);
    CHECK(s.pattern_groups == dn.links.groups.size());
}

TEST_CASE("unknown graph format is rejected") {
    CHECK_THROWS(parse_graph_format("svg"));
}

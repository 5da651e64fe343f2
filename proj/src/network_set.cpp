#include "netdiff/network_set.hpp"
#include "netdiff/error.hpp"
#include "netdiff/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace netdiff {

namespace {

std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) {
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

} // namespace

NetworkSet build_network_set(std::vector<EdgeList> lists, const BuildOptions& options) {
    const std::size_t w = lists.size();
    if (w < 2) throw AnalysisError("need at least 2 networks, got " + std::to_string(w));
    {
        std::unordered_set<std::string> names;
        for (const auto& list : lists) {
            if (list.records.empty()) {
                throw AnalysisError("network '" + list.name + "' has no links");
            }
            if (!names.insert(list.name).second) {
                throw AnalysisError("duplicate network name '" + list.name + "'");
            }
        }
    }

    if (options.stretch) {
        for (auto& list : lists) list = stretch_weights(std::move(list));
    } else {
        for (const auto& list : lists) {
            for (const auto& rec : list.records) {
                if (rec.weight < -1.0 || rec.weight > 1.0) {
                    throw AnalysisError("network '" + list.name + "': weight " +
                                        std::to_string(rec.weight) + " on " + rec.node_a +
                                        " - " + rec.node_b +
                                        " outside [-1,1]; enable stretch to rescale");
                }
            }
        }
    }

    // Intern every node name across all lists.
    std::unordered_map<std::string, std::uint32_t> intern;
    std::vector<std::string> all_names;
    auto intern_id = [&](const std::string& s) -> std::uint32_t {
        auto it = intern.find(s);
        if (it != intern.end()) return it->second;
        auto id = static_cast<std::uint32_t>(all_names.size());
        intern.emplace(s, id);
        all_names.push_back(s);
        return id;
    };

    const std::size_t total_ids_guess = std::accumulate(
        lists.begin(), lists.end(), std::size_t{0},
        [](std::size_t acc, const EdgeList& l) { return acc + l.records.size(); });
    intern.reserve(total_ids_guess / 4 + 16);

    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> ids_per_list(w);
    std::vector<std::vector<bool>> member(w);
    for (std::size_t k = 0; k < w; ++k) {
        ids_per_list[k].reserve(lists[k].records.size());
        for (const auto& rec : lists[k].records) {
            ids_per_list[k].emplace_back(intern_id(rec.node_a), intern_id(rec.node_b));
        }
    }
    for (std::size_t k = 0; k < w; ++k) {
        member[k].assign(all_names.size(), false);
        for (const auto& [a, b] : ids_per_list[k]) {
            member[k][a] = true;
            member[k][b] = true;
        }
    }

    // Universe = intersection of per-network node sets.
    std::vector<bool> in_universe(all_names.size(), true);
    for (std::size_t k = 0; k < w; ++k) {
        for (std::size_t i = 0; i < all_names.size(); ++i) {
            if (i >= member[k].size() || !member[k][i]) in_universe[i] = false;
        }
    }

    NetworkSet net;
    net.network_names.reserve(w);
    for (const auto& list : lists) net.network_names.push_back(list.name);

    // Node ids become ranks in the sorted universe.
    std::vector<std::uint32_t> universe_ids;
    for (std::uint32_t i = 0; i < all_names.size(); ++i) {
        if (in_universe[i]) universe_ids.push_back(i);
    }
    if (universe_ids.empty()) {
        throw AnalysisError("no node is present in all " + std::to_string(w) + " networks");
    }
    std::sort(universe_ids.begin(), universe_ids.end(),
              [&](std::uint32_t x, std::uint32_t y) { return all_names[x] < all_names[y]; });
    std::vector<std::uint32_t> rank_of(all_names.size(), UINT32_MAX);
    net.node_names.reserve(universe_ids.size());
    for (std::uint32_t r = 0; r < universe_ids.size(); ++r) {
        rank_of[universe_ids[r]] = r;
        net.node_names.push_back(all_names[universe_ids[r]]);
    }

    // Merge retained records into dense weight vectors.
    std::unordered_map<std::uint64_t, std::uint32_t> link_index;
    link_index.reserve(total_ids_guess / 2 + 16);
    std::vector<std::uint64_t> keys;
    net.ingest.resize(w);
    for (std::size_t k = 0; k < w; ++k) {
        auto& stats = net.ingest[k];
        stats.network = lists[k].name;
        stats.input_records = lists[k].records.size();
        std::size_t net_nodes = 0;
        for (std::size_t i = 0; i < member[k].size(); ++i) {
            if (member[k][i]) {
                ++net_nodes;
                if (!in_universe[i]) ++stats.dropped_nodes;
            }
        }
        stats.input_nodes = net_nodes;

        for (std::size_t r = 0; r < ids_per_list[k].size(); ++r) {
            const auto [ia, ib] = ids_per_list[k][r];
            if (!in_universe[ia] || !in_universe[ib]) {
                ++stats.dropped_links;
                continue;
            }
            const std::uint64_t key = pair_key(rank_of[ia], rank_of[ib]);
            auto [it, inserted] = link_index.emplace(key, static_cast<std::uint32_t>(keys.size()));
            if (inserted) {
                keys.push_back(key);
                net.weights.resize(net.weights.size() + w, 0.0);
            }
            net.weights[static_cast<std::size_t>(it->second) * w + k] =
                lists[k].records[r].weight;
        }
    }

    // Canonical link order: sorted by (a, b) rank pairs.
    std::vector<std::uint32_t> order(keys.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(),
              [&](std::uint32_t x, std::uint32_t y) { return keys[x] < keys[y]; });

    const std::size_t n = keys.size();
    net.link_a.resize(n);
    net.link_b.resize(n);
    std::vector<double> sorted_weights(n * w);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t key = keys[order[i]];
        net.link_a[i] = static_cast<std::uint32_t>(key >> 32);
        net.link_b[i] = static_cast<std::uint32_t>(key & 0xFFFFFFFFu);
        std::copy_n(net.weights.begin() + static_cast<std::ptrdiff_t>(order[i]) * static_cast<std::ptrdiff_t>(w),
                    w, sorted_weights.begin() + static_cast<std::ptrdiff_t>(i) * static_cast<std::ptrdiff_t>(w));
    }
    net.weights = std::move(sorted_weights);
    return net;
}

} // namespace netdiff

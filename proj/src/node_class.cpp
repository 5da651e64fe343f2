#include "netdiff/node_class.hpp"
#include "netdiff/error.hpp"
#include "netdiff/parallel.hpp"
#include "netdiff/stats.hpp"

namespace netdiff {

GofResult chi2_gof(std::span<const double> observed,
                   std::span<const double> expected_proportions) {
    if (observed.size() != expected_proportions.size() || observed.empty()) {
        throw AnalysisError("chi2_gof: observed/expected size mismatch");
    }
    double n = 0.0;
    for (double o : observed) n += o;
    if (n < 1.0) throw AnalysisError("chi2_gof: needs at least one observation");

    GofResult r;
    r.df = observed.size() - 1;
    if (r.df == 0) return r; // single category: degenerate, statistic 0, p 1

    double stat = 0.0;
    for (std::size_t c = 0; c < observed.size(); ++c) {
        const double p = expected_proportions[c];
        if (p <= 0.0) {
            if (observed[c] > 0.0) {
                throw AnalysisError("chi2_gof: zero expected proportion with nonzero count");
            }
            continue;
        }
        const double e = n * p;
        const double d = observed[c] - e;
        stat += d * d / e;
    }
    r.statistic = stat;
    r.p_value = chi2_upper_tail(stat, static_cast<double>(r.df));
    return r;
}

namespace {

// Argmax index, or nullopt on a tie for the maximum.
template <typename Counts>
std::optional<std::size_t> unique_argmax(const Counts& counts) {
    std::size_t best = 0;
    bool tie = false;
    for (std::size_t i = 1; i < counts.size(); ++i) {
        if (counts[i] > counts[best]) {
            best = i;
            tie = false;
        } else if (counts[i] == counts[best]) {
            tie = true;
        }
    }
    if (counts[best] == 0 || tie) return std::nullopt;
    return best;
}

} // namespace

std::vector<NodeClassification> classify_nodes(const ClassifiedLinks& links,
                                               std::span<const std::uint32_t> kept,
                                               double alpha_level,
                                               unsigned threads) {
    if (!(alpha_level >= 0.0 && alpha_level <= 1.0)) {
        throw AnalysisError("alpha level must lie in [0,1]");
    }
    if (kept.empty()) return {};
    const std::size_t n_labels = links.labels.size();

    // Global frequencies over kept links; one serial pass.
    std::array<std::uint64_t, 3> global_phi{};
    std::vector<std::uint64_t> global_label(n_labels, 0);
    std::vector<std::uint32_t> degree(links.node_names.size(), 0);
    for (std::uint32_t i : kept) {
        global_phi[static_cast<std::size_t>(links.phi_of(i))] += 1;
        global_label[links.label_id_of(i)] += 1;
        degree[links.link_a[i]] += 1;
        degree[links.link_b[i]] += 1;
    }
    const double total = static_cast<double>(kept.size());

    // Tested categories: globally nonempty ones, in fixed order.
    std::vector<std::size_t> phi_cats, label_cats;
    for (std::size_t c = 0; c < 3; ++c) {
        if (global_phi[c] > 0) phi_cats.push_back(c);
    }
    for (std::size_t c = 0; c < n_labels; ++c) {
        if (global_label[c] > 0) label_cats.push_back(c);
    }
    std::vector<double> phi_props(phi_cats.size()), label_props(label_cats.size());
    for (std::size_t j = 0; j < phi_cats.size(); ++j) {
        phi_props[j] = static_cast<double>(global_phi[phi_cats[j]]) / total;
    }
    for (std::size_t j = 0; j < label_cats.size(); ++j) {
        label_props[j] = static_cast<double>(global_label[label_cats[j]]) / total;
    }

    // Per-node tallies.
    std::vector<std::uint32_t> active_nodes;
    for (std::uint32_t v = 0; v < degree.size(); ++v) {
        if (degree[v] > 0) active_nodes.push_back(v);
    }
    std::vector<std::uint32_t> slot(degree.size(), UINT32_MAX);
    for (std::uint32_t j = 0; j < active_nodes.size(); ++j) slot[active_nodes[j]] = j;

    std::vector<NodeClassification> out(active_nodes.size());
    for (std::size_t j = 0; j < active_nodes.size(); ++j) {
        out[j].node = active_nodes[j];
        out[j].label_counts.assign(n_labels, 0);
    }
    for (std::uint32_t i : kept) {
        for (const std::uint32_t v : {links.link_a[i], links.link_b[i]}) {
            auto& nc = out[slot[v]];
            nc.degree += 1;
            nc.phi_counts[static_cast<std::size_t>(links.phi_of(i))] += 1;
            nc.label_counts[links.label_id_of(i)] += 1;
        }
    }

    parallel_for(out.size(), threads, [&](std::size_t begin, std::size_t end) {
        std::vector<double> obs;
        for (std::size_t j = begin; j < end; ++j) {
            auto& nc = out[j];
            nc.low_evidence = nc.degree < 5;

            obs.resize(phi_cats.size());
            for (std::size_t c = 0; c < phi_cats.size(); ++c) {
                obs[c] = static_cast<double>(nc.phi_counts[phi_cats[c]]);
            }
            const GofResult phi_test = chi2_gof(obs, phi_props);
            nc.chi2_phi = phi_test.statistic;
            nc.p_phi = phi_test.p_value;
            if (phi_cats.size() == 1) {
                // Degenerate single-category network: assignment by convention.
                nc.assigned_phi = static_cast<Phi>(phi_cats[0]);
            } else if (phi_test.p_value < alpha_level) {
                if (auto best = unique_argmax(nc.phi_counts)) {
                    nc.assigned_phi = static_cast<Phi>(*best);
                }
            }

            obs.resize(label_cats.size());
            for (std::size_t c = 0; c < label_cats.size(); ++c) {
                obs[c] = static_cast<double>(nc.label_counts[label_cats[c]]);
            }
            const GofResult label_test = chi2_gof(obs, label_props);
            nc.chi2_label = label_test.statistic;
            nc.p_label = label_test.p_value;
            if (label_cats.size() == 1) {
                nc.assigned_label = static_cast<std::uint32_t>(label_cats[0]);
            } else if (label_test.p_value < alpha_level) {
                if (auto best = unique_argmax(nc.label_counts)) {
                    nc.assigned_label = static_cast<std::uint32_t>(*best);
                }
            }
        }
    });
    return out;
}

} // namespace netdiff

#include "netdiff/enrichment.hpp"
#include "netdiff/error.hpp"
#include "netdiff/stats.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace netdiff {

std::vector<AnnotationSet> load_annotations(const std::string& path, char delimiter) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open annotation file: " + path);
    std::map<std::string, std::vector<std::string>> sets;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::size_t p = line.find(delimiter);
        if (p == std::string::npos || p == 0 || p + 1 >= line.size()) {
            throw IoError(path + ":" + std::to_string(line_no) +
                          ": expected 2 columns (annotation, node)");
        }
        sets[line.substr(0, p)].push_back(line.substr(p + 1));
    }
    std::vector<AnnotationSet> out;
    out.reserve(sets.size());
    for (auto& [name, members] : sets) {
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        out.push_back({name, std::move(members)});
    }
    return out;
}

namespace {

double log_choose(double n, double k) {
    return log_gamma(n + 1.0) - log_gamma(k + 1.0) - log_gamma(n - k + 1.0);
}

} // namespace

double fisher_exact_2x2(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
    const std::uint64_t r1 = a + b, r2 = c + d;
    const std::uint64_t c1 = a + c;
    const std::uint64_t n = r1 + r2;
    if (n == 0) throw AnalysisError("fisher_exact_2x2: empty table");

    const std::uint64_t k_min = c1 > r2 ? c1 - r2 : 0;
    const std::uint64_t k_max = std::min(r1, c1);
    if (k_min == k_max) return 1.0; // degenerate margin: single attainable table

    const double denom = log_choose(static_cast<double>(n), static_cast<double>(c1));
    auto log_pmf = [&](std::uint64_t k) {
        return log_choose(static_cast<double>(r1), static_cast<double>(k)) +
               log_choose(static_cast<double>(r2), static_cast<double>(c1 - k)) - denom;
    };

    const double log_obs = log_pmf(a);
    // Two-sided: sum all tables at most as probable as the observed one.
    // The relative slack absorbs round-off in the tie comparison.
    const double tie_slack = std::log1p(1e-7);
    double p = 0.0;
    for (std::uint64_t k = k_min; k <= k_max; ++k) {
        const double lp = log_pmf(k);
        if (lp <= log_obs + tie_slack) p += std::exp(lp);
    }
    return std::min(p, 1.0);
}

double proportion_test(std::uint64_t x1, std::uint64_t n1, std::uint64_t x2, std::uint64_t n2) {
    if (n1 < 1 || n2 < 1 || x1 > n1 || x2 > n2) {
        throw AnalysisError("proportion_test: invalid counts");
    }
    const std::uint64_t successes = x1 + x2;
    const std::uint64_t total = n1 + n2;
    if (successes == 0 || successes == total) return 1.0; // no variance

    // 2x2 table with Yates correction, p from chi-squared df=1.
    const double cells[2][2] = {
        {static_cast<double>(x1), static_cast<double>(n1 - x1)},
        {static_cast<double>(x2), static_cast<double>(n2 - x2)},
    };
    const double col1 = static_cast<double>(successes);
    const double col2 = static_cast<double>(total - successes);
    const double rows[2] = {static_cast<double>(n1), static_cast<double>(n2)};
    const double cols[2] = {col1, col2};
    const double tn = static_cast<double>(total);

    double max_abs_dev = 0.0;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            max_abs_dev = std::max(max_abs_dev, std::fabs(cells[i][j] - rows[i] * cols[j] / tn));
        }
    }
    const double yates = std::min(0.5, max_abs_dev);
    double stat = 0.0;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const double e = rows[i] * cols[j] / tn;
            const double dev = std::fabs(cells[i][j] - e) - yates;
            stat += dev * dev / e;
        }
    }
    return chi2_upper_tail(stat, 1.0);
}

double fisher_combine(double p1, double p2) {
    if (!(p1 > 0.0) || p1 > 1.0 || !(p2 > 0.0) || p2 > 1.0) {
        const double tiny = std::numeric_limits<double>::denorm_min();
        if (p1 == 0.0) p1 = tiny;
        if (p2 == 0.0) p2 = tiny;
        if (!(p1 > 0.0 && p1 <= 1.0 && p2 > 0.0 && p2 <= 1.0)) {
            throw AnalysisError("fisher_combine: p-values must lie in (0,1]");
        }
    }
    const double x = -2.0 * (std::log(p1) + std::log(p2));
    return chi2_upper_tail(x, 4.0);
}

std::vector<EnrichmentResult> enrich(
    const std::vector<std::pair<std::string, std::string>>& node_categories,
    const std::vector<AnnotationSet>& annotations, double weight_cutoff) {
    if (node_categories.empty() || annotations.empty()) {
        throw AnalysisError("enrich: needs classified nodes and at least one annotation set");
    }

    std::map<std::string, std::set<std::string>> category_nodes;
    std::set<std::string> universe;
    for (const auto& [node, category] : node_categories) {
        category_nodes[category].insert(node);
        universe.insert(node);
    }
    const std::uint64_t n_universe = universe.size();

    std::vector<EnrichmentResult> out;
    for (const auto& ann : annotations) {
        std::set<std::string> members;
        for (const auto& m : ann.members) {
            if (universe.count(m)) members.insert(m);
        }
        if (members.empty()) {
            std::cerr << "warning: annotation '" << ann.name
                      << "' has no member in the analysis node universe; skipped\n";
            continue;
        }
        const std::uint64_t n_ann = members.size();
        for (const auto& [category, nodes] : category_nodes) {
            std::uint64_t observed = 0;
            for (const auto& m : members) observed += nodes.count(m);
            if (observed == 0) continue;

            EnrichmentResult r;
            r.annotation = ann.name;
            r.category = category;
            r.expected = n_ann;
            r.observed = observed;
            const std::uint64_t n_cat = nodes.size();
            // Contingency: annotation membership x category membership.
            const std::uint64_t a = observed;
            const std::uint64_t b = n_ann - observed;
            const std::uint64_t c = n_cat - observed;
            const std::uint64_t d = n_universe - n_ann - c;
            r.p_fisher = fisher_exact_2x2(a, b, c, d);
            // Annotation rate inside the category vs outside it. A category
            // spanning the whole universe leaves nothing to compare against.
            r.p_prop = n_cat == n_universe ? 1.0
                                           : proportion_test(a, n_cat, b, n_universe - n_cat);
            r.weight = fisher_combine(r.p_fisher, r.p_prop);
            r.significant = r.weight <= weight_cutoff;
            out.push_back(std::move(r));
        }
    }
    std::sort(out.begin(), out.end(), [](const EnrichmentResult& x, const EnrichmentResult& y) {
        if (x.weight != y.weight) return x.weight < y.weight;
        if (x.annotation != y.annotation) return x.annotation < y.annotation;
        return x.category < y.category;
    });
    return out;
}

} // namespace netdiff

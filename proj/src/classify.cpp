#include "netdiff/classify.hpp"
#include "netdiff/error.hpp"
#include "netdiff/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

namespace netdiff {

Tau::Tau(double v) : value(v) {
    if (!(v > 0.0 && v < 1.0)) {
        throw AnalysisError("tau must lie in (0,1), got " + std::to_string(v));
    }
}

int categorize_weight(double rho, Tau tau) {
    if (!(std::fabs(rho) <= 1.0)) {
        throw AnalysisError("weight " + std::to_string(rho) + " outside [-1,1]");
    }
    if (rho < -tau.value) return -1;
    if (rho > tau.value) return 1;
    return 0;
}

std::pair<Phi, std::string> classify_link(std::span<const std::int8_t> rho_tilde,
                                          const std::vector<std::string>& network_names) {
    const std::size_t w = rho_tilde.size();
    if (w < 2 || w != network_names.size()) {
        throw AnalysisError("categorical vector length mismatch");
    }
    std::size_t nonzero = 0;
    int sum = 0;
    for (std::int8_t v : rho_tilde) {
        nonzero += (v != 0);
        sum += v;
    }
    if (nonzero == 0) throw AnalysisError("all-zero categorical vector");

    if (nonzero < w) {
        std::string label = "g";
        for (std::size_t k = 0; k < w; ++k) {
            if (rho_tilde[k] != 0) {
                label += '.';
                label += network_names[k];
            }
        }
        return {Phi::gamma, std::move(label)};
    }
    if (static_cast<std::size_t>(std::abs(sum)) == w) {
        return {Phi::alpha, "a"}; // unanimous sign
    }
    std::string label = "b";
    for (std::size_t k = 1; k < w; ++k) {
        if (rho_tilde[k] != rho_tilde[0]) {
            label += '.';
            label += network_names[k];
        }
    }
    return {Phi::beta, std::move(label)};
}

ClassifiedLinks classify_all(const NetworkSet& net, Tau tau, unsigned threads) {
    const std::size_t w = net.width();
    const std::size_t n = net.link_count();
    if (w > 40) throw AnalysisError("more than 40 networks are not supported");

    ClassifiedLinks out;
    out.network_names = net.network_names;
    out.node_names = net.node_names;

    // Pass 1: categorical vectors and pattern codes, parallel per link.
    std::vector<std::int8_t> cat(n * w);
    std::vector<std::uint64_t> code(n);
    const double t = tau.value;
    parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            std::uint64_t c = 0;
            std::uint64_t pow3 = 1;
            for (std::size_t k = 0; k < w; ++k) {
                const double rho = net.weights[i * w + k];
                std::int8_t v = 0;
                if (rho < -t) v = -1;
                else if (rho > t) v = 1;
                cat[i * w + k] = v;
                c += static_cast<std::uint64_t>(v + 1) * pow3;
                pow3 *= 3;
            }
            code[i] = c;
        }
    });

    // Pass 2: serial compaction in canonical order; all-zero vectors drop out.
    out.link_a.reserve(n);
    out.link_b.reserve(n);
    out.rho.reserve(n * w);
    out.rho_tilde.reserve(n * w);
    out.group.reserve(n);
    std::unordered_map<std::uint64_t, std::uint32_t> group_of_code;
    std::vector<std::uint64_t> kept_codes; // per link, group resolved after sorting groups
    kept_codes.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        bool all_zero = true;
        for (std::size_t k = 0; k < w; ++k) {
            if (cat[i * w + k] != 0) { all_zero = false; break; }
        }
        if (all_zero) {
            ++out.removed_all_zero;
            continue;
        }
        out.link_a.push_back(net.link_a[i]);
        out.link_b.push_back(net.link_b[i]);
        out.rho.insert(out.rho.end(), net.weights.begin() + static_cast<std::ptrdiff_t>(i * w),
                       net.weights.begin() + static_cast<std::ptrdiff_t>((i + 1) * w));
        out.rho_tilde.insert(out.rho_tilde.end(),
                             cat.begin() + static_cast<std::ptrdiff_t>(i * w),
                             cat.begin() + static_cast<std::ptrdiff_t>((i + 1) * w));
        kept_codes.push_back(code[i]);
        group_of_code.emplace(code[i], 0u); // placeholder
    }

    // Assign group ids by ascending code so output is input-order independent.
    std::vector<std::uint64_t> unique_codes;
    unique_codes.reserve(group_of_code.size());
    for (const auto& [c, idx] : group_of_code) unique_codes.push_back(c);
    std::sort(unique_codes.begin(), unique_codes.end());

    std::map<std::string, std::uint32_t> label_ids;
    out.groups.reserve(unique_codes.size());
    for (std::uint32_t g = 0; g < unique_codes.size(); ++g) {
        const std::uint64_t c = unique_codes[g];
        group_of_code[c] = g;
        PatternGroup pg;
        pg.code = c;
        pg.pattern.resize(w);
        std::uint64_t rest = c;
        for (std::size_t k = 0; k < w; ++k) {
            pg.pattern[k] = static_cast<std::int8_t>(rest % 3) - 1;
            rest /= 3;
        }
        auto [phi, label] = classify_link(pg.pattern, out.network_names);
        pg.phi = phi;
        pg.phi_tilde = std::move(label);
        label_ids.emplace(pg.phi_tilde, 0u); // fill after collecting
        out.groups.push_back(std::move(pg));
    }
    out.labels.reserve(label_ids.size());
    for (auto& [label, id] : label_ids) {
        id = static_cast<std::uint32_t>(out.labels.size());
        out.labels.push_back(label);
    }
    for (auto& pg : out.groups) pg.label_id = label_ids.at(pg.phi_tilde);

    out.group.resize(kept_codes.size());
    for (std::size_t i = 0; i < kept_codes.size(); ++i) {
        out.group[i] = group_of_code.at(kept_codes[i]);
    }
    return out;
}

} // namespace netdiff

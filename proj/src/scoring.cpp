#include "netdiff/scoring.hpp"
#include "netdiff/error.hpp"
#include "netdiff/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace netdiff {

double raw_distance(std::span<const double> rho, std::span<const std::int8_t> rho_tilde) {
    // Only in-category coordinates enter the numerator: residual weights in
    // the neutral band would otherwise push the value past 1, and the measure
    // is defined as penalized by the maximum distance attainable in-category.
    double num = 0.0;
    std::size_t nonzero = 0;
    for (std::size_t k = 0; k < rho.size(); ++k) {
        if (rho_tilde[k] != 0) {
            num += rho[k] * rho[k];
            ++nonzero;
        }
    }
    if (nonzero == 0) throw AnalysisError("raw_distance: all-zero categorical vector");
    return std::sqrt(num / static_cast<double>(nonzero));
}

double internal_distance(std::span<const double> rho, std::span<const std::int8_t> rho_tilde) {
    double sq = 0.0;
    for (std::size_t k = 0; k < rho.size(); ++k) {
        const double d = rho[k] - static_cast<double>(rho_tilde[k]);
        sq += d * d;
    }
    return std::sqrt(sq / static_cast<double>(rho.size()));
}

std::vector<double> minmax_normalize(std::span<const double> values) {
    std::vector<double> out(values.size());
    if (values.empty()) return out;
    double lo = values[0], hi = values[0];
    for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi == lo) {
        std::fill(out.begin(), out.end(), 1.0);
        return out;
    }
    const double range = hi - lo;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out[i] = (values[i] - lo) / range;
    }
    return out;
}

namespace {

struct Extent {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    double normalize(double v) const { return hi == lo ? 1.0 : (v - lo) / (hi - lo); }
};

} // namespace

LinkScores score_all(const ClassifiedLinks& links, const ScoreOptions& options) {
    const std::size_t n = links.size();
    LinkScores s;
    s.delta.resize(n);
    s.delta_star.resize(n);
    s.delta_phi_tilde.resize(n);
    s.delta_rho_tilde.resize(n);
    s.score_ratio.resize(n);
    if (n == 0) return s;

    std::vector<double> internal_raw(n);
    parallel_for(n, options.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            s.delta[i] = raw_distance(links.rho_of(i), links.rho_tilde_of(i));
            internal_raw[i] = internal_distance(links.rho_of(i), links.rho_tilde_of(i));
        }
    });

    // Serial reductions in canonical link order keep results schedule-independent.
    Extent all_delta, all_internal;
    std::vector<Extent> by_label(links.labels.size());
    for (std::size_t i = 0; i < n; ++i) {
        all_delta.add(s.delta[i]);
        all_internal.add(internal_raw[i]);
        by_label[links.label_id_of(i)].add(s.delta[i]);
    }

    const bool per_group = options.mode == NormalizationMode::per_phi_tilde;
    const double floor = options.internal_floor;
    parallel_for(n, options.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            s.delta_star[i] = all_delta.normalize(s.delta[i]);
            s.delta_phi_tilde[i] = per_group
                                       ? by_label[links.label_id_of(i)].normalize(s.delta[i])
                                       : s.delta_star[i];
            s.delta_rho_tilde[i] = all_internal.normalize(internal_raw[i]);
            s.score_ratio[i] = s.delta_phi_tilde[i] / std::max(s.delta_rho_tilde[i], floor);
        }
    });

    // One-way ANOVA of delta on phi_tilde groups (diagnostic only).
    const std::size_t k = links.labels.size();
    if (k >= 2 && n > k) {
        std::vector<double> group_sum(k, 0.0);
        std::vector<std::size_t> group_n(k, 0);
        double total_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            group_sum[links.label_id_of(i)] += s.delta[i];
            group_n[links.label_id_of(i)] += 1;
            total_sum += s.delta[i];
        }
        const double grand_mean = total_sum / static_cast<double>(n);
        double ssb = 0.0;
        for (std::size_t g = 0; g < k; ++g) {
            if (group_n[g] == 0) continue;
            const double mean = group_sum[g] / static_cast<double>(group_n[g]);
            ssb += static_cast<double>(group_n[g]) * (mean - grand_mean) * (mean - grand_mean);
        }
        double ssw = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint32_t g = links.label_id_of(i);
            const double mean = group_sum[g] / static_cast<double>(group_n[g]);
            ssw += (s.delta[i] - mean) * (s.delta[i] - mean);
        }
        s.f_df1 = k - 1;
        s.f_df2 = n - k;
        const double msb = ssb / static_cast<double>(s.f_df1);
        const double msw = ssw / static_cast<double>(s.f_df2);
        s.group_f_stat = msw > 0.0 ? msb / msw
                                   : (msb > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    }
    return s;
}

std::vector<std::uint32_t> filter_by_ratio(const LinkScores& scores, double cutoff) {
    std::vector<std::uint32_t> kept;
    kept.reserve(scores.score_ratio.size());
    for (std::uint32_t i = 0; i < scores.score_ratio.size(); ++i) {
        if (scores.score_ratio[i] >= cutoff) kept.push_back(i);
    }
    return kept;
}

} // namespace netdiff

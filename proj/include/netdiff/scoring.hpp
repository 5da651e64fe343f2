#pragma once

#include "netdiff/classify.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace netdiff {

enum class NormalizationMode : std::uint8_t {
    all_links,     // one min-max over every link
    per_phi_tilde, // min-max inside each phi_tilde group (default)
};

struct ScoreOptions {
    NormalizationMode mode = NormalizationMode::per_phi_tilde;
    double internal_floor = 1e-6; // ratio denominator floor after normalization
    unsigned threads = 0;
};

// Per-link scores, parallel to a ClassifiedLinks table.
//   delta           category-penalized distance to the origin, in [0,1]
//   delta_star      min-max of delta over all links
//   delta_phi_tilde min-max of delta inside the link's phi_tilde group
//                   (equals delta_star in all_links mode)
//   delta_rho_tilde min-max over all links of the distance to the link's own
//                   ideal corner point; larger means worse clustered
//   score_ratio     delta_phi_tilde / max(delta_rho_tilde, floor)
struct LinkScores {
    std::vector<double> delta;
    std::vector<double> delta_star;
    std::vector<double> delta_phi_tilde;
    std::vector<double> delta_rho_tilde;
    std::vector<double> score_ratio;
    // One-way group effect of delta across phi_tilde groups, reported in the
    // summary as a diagnostic.
    double group_f_stat = 0.0;
    std::size_t f_df1 = 0, f_df2 = 0;
};

// sqrt( sum of rho_k^2 over in-category coordinates / count of those
// coordinates ), always in [0,1]; needs at least one nonzero category.
double raw_distance(std::span<const double> rho, std::span<const std::int8_t> rho_tilde);

// Euclidean distance from rho to its ideal corner rho_tilde, divided by
// sqrt(W) so the result lies in [0,1].
double internal_distance(std::span<const double> rho, std::span<const std::int8_t> rho_tilde);

// (x - min) / (max - min); a constant input maps to all 1.0 so degenerate
// groups survive the ratio filter instead of vanishing.
std::vector<double> minmax_normalize(std::span<const double> values);

LinkScores score_all(const ClassifiedLinks& links, const ScoreOptions& options = {});

// Indices of links with score_ratio >= cutoff, ascending.
std::vector<std::uint32_t> filter_by_ratio(const LinkScores& scores, double cutoff);

} // namespace netdiff

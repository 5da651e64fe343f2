#pragma once

#include "netdiff/classify.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace netdiff {

struct GofResult {
    double statistic = 0.0;
    double p_value = 1.0;
    std::size_t df = 0;
};

// Pearson chi-squared goodness of fit: statistic = sum (O - n p)^2 / (n p),
// p-value from the chi-squared upper tail with (#categories - 1) degrees of
// freedom. A single category is the degenerate test: statistic 0, p 1.
GofResult chi2_gof(std::span<const double> observed, std::span<const double> expected_proportions);

struct NodeClassification {
    std::uint32_t node = 0; // id into ClassifiedLinks::node_names
    std::uint32_t degree = 0;
    std::array<std::uint32_t, 3> phi_counts{}; // alpha, beta, gamma
    std::vector<std::uint32_t> label_counts;   // aligned to ClassifiedLinks::labels
    double chi2_phi = 0.0, p_phi = 1.0;
    double chi2_label = 0.0, p_label = 1.0;
    std::optional<Phi> assigned_phi;
    std::optional<std::uint32_t> assigned_label;
    bool low_evidence = false; // degree < 5: chi-squared approximation is shaky
};

// Classifies every node incident to a kept link. Expected proportions are the
// global category frequencies over the kept links; the test rejects when
// p < alpha_level and the argmax is unique. A tie or a non-rejection leaves
// the node undefined. With a single global category every node is that
// category by convention.
std::vector<NodeClassification> classify_nodes(const ClassifiedLinks& links,
                                               std::span<const std::uint32_t> kept,
                                               double alpha_level = 0.05,
                                               unsigned threads = 0);

} // namespace netdiff

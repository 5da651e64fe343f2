#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace netdiff {

struct AnnotationSet {
    std::string name;
    std::vector<std::string> members;
};

// Two-column delimited file: annotation_name, node_id. One row per member.
std::vector<AnnotationSet> load_annotations(const std::string& path, char delimiter = '\t');

// Two-sided Fisher exact p-value for the 2x2 table (a b / c d), via the
// hypergeometric distribution in log space.
double fisher_exact_2x2(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d);

// Two-sample proportion test (chi-squared with Yates continuity correction)
// comparing x1/n1 against x2/n2. Pooled proportion 0 or 1 gives p = 1.
double proportion_test(std::uint64_t x1, std::uint64_t n1, std::uint64_t x2, std::uint64_t n2);

// Fisher's method over two p-values: X = -2(ln p1 + ln p2), upper chi-squared
// tail with 4 degrees of freedom. Zero p-values are clamped to the smallest
// positive double.
double fisher_combine(double p1, double p2);

struct EnrichmentResult {
    std::string annotation;
    std::string category;        // phi_tilde label, or "Undefined"
    std::uint64_t expected = 0;  // annotation size within the measured universe
    std::uint64_t observed = 0;  // annotated nodes inside the category
    double p_fisher = 1.0;
    double p_prop = 1.0;
    double weight = 1.0;         // combined p-value
    bool significant = false;    // weight <= cutoff
};

// One result per (annotation, category) pair with observed >= 1, sorted by
// ascending weight. node_categories pairs each classified node with its
// phi_tilde category label ("Undefined" participates as a category).
// Annotations with no member in the node universe are skipped with a warning
// on stderr.
std::vector<EnrichmentResult> enrich(
    const std::vector<std::pair<std::string, std::string>>& node_categories,
    const std::vector<AnnotationSet>& annotations, double weight_cutoff = 0.10);

} // namespace netdiff

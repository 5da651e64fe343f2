#pragma once

#include "netdiff/network_set.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace netdiff {

enum class Phi : std::uint8_t { alpha = 0, beta = 1, gamma = 2 };

inline const char* phi_code(Phi p) {
    switch (p) {
        case Phi::alpha: return "a";
        case Phi::beta: return "b";
        case Phi::gamma: return "g";
    }
    return "?";
}

// Categorization threshold partitioning [-1,1] into -1 / 0 / +1 bands.
struct Tau {
    double value = 1.0 / 3.0;
    Tau() = default;
    explicit Tau(double v);
};

// -1 if rho < -tau, +1 if rho > tau, 0 otherwise (inequalities strict, so the
// boundary values +-tau land in the neutral band).
int categorize_weight(double rho, Tau tau = {});

// Phi class and sub-category label for one categorical vector. Labels:
//   alpha -> "a"
//   beta  -> "b." + names of networks whose sign differs from the first
//            (reference) network, joined by "."
//   gamma -> "g." + names of networks where the link is present, joined by "."
// The all-zero vector is a caller error.
std::pair<Phi, std::string> classify_link(std::span<const std::int8_t> rho_tilde,
                                          const std::vector<std::string>& network_names);

// One distinct sign pattern. Patterns are the finest categorization (at most
// 3^W - 1 of them); several patterns can share one phi_tilde label, e.g. the
// two unanimous alpha patterns both label "a".
struct PatternGroup {
    std::vector<std::int8_t> pattern;
    std::uint64_t code = 0;     // base-3 encoding of the pattern
    Phi phi = Phi::alpha;
    std::string phi_tilde;
    std::uint32_t label_id = 0; // index into ClassifiedLinks::labels
};

// Every kept link of a NetworkSet with its categorical vector and group,
// stored as parallel arrays in canonical (sorted pair) order. Links whose
// categorical vector is all-zero are removed.
struct ClassifiedLinks {
    std::vector<std::string> network_names;
    std::vector<std::string> node_names;
    std::vector<std::uint32_t> link_a, link_b;
    std::vector<double> rho;        // size() * width()
    std::vector<std::int8_t> rho_tilde;
    std::vector<std::uint32_t> group;          // per link -> index into groups
    std::vector<PatternGroup> groups;          // sorted by code
    std::vector<std::string> labels;           // distinct phi_tilde labels, sorted
    std::size_t removed_all_zero = 0;

    std::size_t width() const { return network_names.size(); }
    std::size_t size() const { return link_a.size(); }
    std::span<const double> rho_of(std::size_t i) const {
        return {rho.data() + i * width(), width()};
    }
    std::span<const std::int8_t> rho_tilde_of(std::size_t i) const {
        return {rho_tilde.data() + i * width(), width()};
    }
    Phi phi_of(std::size_t i) const { return groups[group[i]].phi; }
    const std::string& label_of(std::size_t i) const { return groups[group[i]].phi_tilde; }
    std::uint32_t label_id_of(std::size_t i) const { return groups[group[i]].label_id; }
};

ClassifiedLinks classify_all(const NetworkSet& net, Tau tau = {}, unsigned threads = 0);

} // namespace netdiff

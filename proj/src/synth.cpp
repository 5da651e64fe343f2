#include "netdiff/synth.hpp"
#include "netdiff/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <unordered_set>

namespace netdiff {

namespace {

// Uniform doubles and gaussians built directly on mt19937_64 output so the
// stream is identical across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform01() { // in [0, 1)
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    std::uint64_t below(std::uint64_t n) { // unbiased via rejection
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }
    double gaussian(double sd) { // Box-Muller, one value per draw pair
        double u1;
        do {
            u1 = uniform01();
        } while (u1 == 0.0);
        const double u2 = uniform01();
        return sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793 * u2);
    }

private:
    std::mt19937_64 engine_;
};

std::vector<std::int8_t> parse_pattern(const std::string& s) {
    std::vector<std::int8_t> p;
    for (char c : s) {
        switch (c) {
            case '+': p.push_back(1); break;
            case '-': p.push_back(-1); break;
            case '0': p.push_back(0); break;
            case ' ': break;
            default:
                throw IoError("bad pattern character '" + std::string(1, c) +
                              "' (expected +, - or 0)");
        }
    }
    if (p.empty()) throw IoError("empty pattern");
    return p;
}

std::string trim_copy(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    std::size_t e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos) return {};
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char delim) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, delim)) out.push_back(trim_copy(item));
    return out;
}

std::string node_name(std::uint32_t id) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "n%07u", id);
    return buf;
}

} // namespace

PlantedSpec PlantedSpec::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open spec file: " + path);
    PlantedSpec spec;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim_copy(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw IoError(path + ":" + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim_copy(line.substr(0, eq));
        const std::string value = trim_copy(line.substr(eq + 1));
        try {
            if (key == "nodes") spec.n_nodes = static_cast<std::uint32_t>(std::stoull(value));
            else if (key == "networks") spec.w_networks = static_cast<std::uint32_t>(std::stoull(value));
            else if (key == "names") spec.network_names = split(value, ',');
            else if (key == "magnitude_min") spec.magnitude_min = std::stod(value);
            else if (key == "magnitude_max") spec.magnitude_max = std::stod(value);
            else if (key == "noise_sd") spec.noise_sd = std::stod(value);
            else if (key == "tau") spec.tau = std::stod(value);
            else if (key == "seed") spec.seed = std::stoull(value);
            else if (key == "pattern") {
                const auto parts = split(value, ':');
                if (parts.size() != 2) throw IoError("pattern needs '<signs> : <count>'");
                spec.patterns.push_back({parse_pattern(parts[0]), std::stoull(parts[1])});
            } else if (key == "hub") {
                const auto parts = split(value, ':');
                if (parts.size() != 3) throw IoError("hub needs '<signs> : <degree> : <count>'");
                spec.hubs.push_back({parse_pattern(parts[0]),
                                     static_cast<std::uint32_t>(std::stoull(parts[1])),
                                     static_cast<std::uint32_t>(std::stoull(parts[2]))});
            } else {
                throw IoError("unknown key '" + key + "'");
            }
        } catch (const std::invalid_argument&) {
            throw IoError(path + ":" + std::to_string(line_no) + ": bad number in '" + value + "'");
        }
    }
    spec.validate();
    return spec;
}

void PlantedSpec::validate() const {
    if (w_networks < 2) throw AnalysisError("spec: need at least 2 networks");
    if (n_nodes < 2) throw AnalysisError("spec: need at least 2 nodes");
    if (!network_names.empty() && network_names.size() != w_networks) {
        throw AnalysisError("spec: names count does not match networks");
    }
    for (const auto& name : network_names) {
        if (name.empty() || name.find_first_of("/\t\n ") != std::string::npos) {
            throw AnalysisError("spec: network name '" + name +
                                "' must be non-empty without spaces, tabs or slashes");
        }
    }
    if (!(magnitude_min > tau)) {
        throw AnalysisError("spec: magnitude_min must exceed tau for category-safe patterns");
    }
    if (!(magnitude_max <= 1.0) || !(magnitude_min <= magnitude_max)) {
        throw AnalysisError("spec: magnitude range must satisfy tau < min <= max <= 1");
    }
    if (noise_sd < 0.0) throw AnalysisError("spec: noise_sd must be >= 0");
    if (patterns.empty() && hubs.empty()) throw AnalysisError("spec: nothing to plant");
    for (const auto& p : patterns) {
        if (p.pattern.size() != w_networks) {
            throw AnalysisError("spec: pattern length does not match networks");
        }
        if (std::all_of(p.pattern.begin(), p.pattern.end(),
                        [](std::int8_t v) { return v == 0; })) {
            throw AnalysisError("spec: all-zero pattern cannot be planted");
        }
    }
    for (const auto& h : hubs) {
        if (h.pattern.size() != w_networks) {
            throw AnalysisError("spec: hub pattern length does not match networks");
        }
        if (h.degree == 0 || h.degree > n_nodes - 1) {
            throw AnalysisError("spec: hub degree out of range");
        }
    }
    const std::uint64_t pairs =
        static_cast<std::uint64_t>(n_nodes) * (n_nodes - 1) / 2;
    if (total_links() > pairs / 2) {
        throw AnalysisError("spec: too many links for " + std::to_string(n_nodes) +
                            " nodes (rejection sampling would stall)");
    }
}

std::uint64_t PlantedSpec::total_links() const {
    std::uint64_t total = 0;
    for (const auto& p : patterns) total += p.count;
    for (const auto& h : hubs) total += static_cast<std::uint64_t>(h.degree) * h.count;
    return total;
}

SynthResult generate(const PlantedSpec& spec) {
    spec.validate();
    const std::uint32_t w = spec.w_networks;
    const std::uint64_t n_links = spec.total_links();

    std::vector<std::string> names = spec.network_names;
    if (names.empty()) {
        for (std::uint32_t k = 0; k < w; ++k) names.push_back("Net" + std::to_string(k + 1));
    }

    SynthResult result;
    result.truth.node_names.reserve(spec.n_nodes);
    for (std::uint32_t i = 0; i < spec.n_nodes; ++i) {
        result.truth.node_names.push_back(node_name(i));
    }

    // Label table shared by truth and report.
    std::map<std::string, std::uint32_t> label_ids;
    auto label_of_pattern = [&](const std::vector<std::int8_t>& pattern) {
        auto [phi, label] = classify_link(pattern, names);
        (void)phi;
        auto it = label_ids.find(label);
        if (it != label_ids.end()) return it->second;
        const auto id = static_cast<std::uint32_t>(label_ids.size());
        label_ids.emplace(label, id);
        return id;
    };

    Rng rng(spec.seed);
    std::unordered_set<std::uint64_t> used;
    used.reserve(n_links * 2);

    std::vector<std::uint64_t> pair_keys;
    std::vector<const std::vector<std::int8_t>*> pair_patterns;
    pair_keys.reserve(n_links);
    pair_patterns.reserve(n_links);

    auto plant = [&](std::uint32_t a, std::uint32_t b, const std::vector<std::int8_t>& pattern) {
        if (result.truth.node_names[a] > result.truth.node_names[b]) std::swap(a, b);
        const std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | b;
        if (!used.insert(key).second) return false;
        pair_keys.push_back(key);
        pair_patterns.push_back(&pattern);
        result.truth.link_label.emplace(key, label_of_pattern(pattern));
        return true;
    };

    // Hubs first: hub h gets node id h (zero-padded names keep id order stable).
    std::uint32_t next_hub = 0;
    for (const auto& hub : spec.hubs) {
        for (std::uint32_t i = 0; i < hub.count; ++i) {
            const std::uint32_t hub_node = next_hub++;
            if (hub_node >= spec.n_nodes) throw AnalysisError("spec: more hubs than nodes");
            result.truth.hub_labels.emplace_back(hub_node, label_of_pattern(hub.pattern));
            std::uint32_t placed = 0;
            while (placed < hub.degree) {
                const auto partner = static_cast<std::uint32_t>(rng.below(spec.n_nodes));
                if (partner == hub_node) continue;
                if (plant(hub_node, partner, hub.pattern)) ++placed;
            }
        }
    }
    for (const auto& planted : spec.patterns) {
        std::uint64_t placed = 0;
        while (placed < planted.count) {
            const auto a = static_cast<std::uint32_t>(rng.below(spec.n_nodes));
            const auto b = static_cast<std::uint32_t>(rng.below(spec.n_nodes));
            if (a == b) continue;
            if (plant(a, b, planted.pattern)) ++placed;
        }
    }

    result.truth.labels.resize(label_ids.size());
    for (const auto& [label, id] : label_ids) result.truth.labels[id] = label;

    // Draw weights: sign * U(magnitude range) on present entries, then noise
    // on every entry, clamped to [-1, 1]. Every link appears in every network
    // so zero weights keep all nodes measured everywhere.
    result.networks.resize(w);
    for (std::uint32_t k = 0; k < w; ++k) {
        result.networks[k].name = names[k];
        result.networks[k].records.reserve(pair_keys.size());
    }
    for (std::size_t i = 0; i < pair_keys.size(); ++i) {
        const std::uint32_t a = static_cast<std::uint32_t>(pair_keys[i] >> 32);
        const std::uint32_t b = static_cast<std::uint32_t>(pair_keys[i] & 0xFFFFFFFFu);
        const auto& pattern = *pair_patterns[i];
        for (std::uint32_t k = 0; k < w; ++k) {
            double weight = 0.0;
            if (pattern[k] != 0) {
                weight = pattern[k] * rng.uniform(spec.magnitude_min, spec.magnitude_max);
            }
            if (spec.noise_sd > 0.0) {
                weight = std::clamp(weight + rng.gaussian(spec.noise_sd), -1.0, 1.0);
            }
            result.networks[k].records.push_back(
                {result.truth.node_names[a], result.truth.node_names[b], weight});
        }
    }
    return result;
}

RecoveryReport evaluate(const ClassifiedLinks& predicted,
                        const std::vector<NodeClassification>& nodes,
                        const GroundTruth& truth) {
    RecoveryReport report;
    report.truth_links = truth.link_label.size();
    report.predicted_links = predicted.size();

    // Union label table: truth labels first, then any extra predicted labels.
    std::map<std::string, std::uint32_t> label_ids;
    for (const auto& label : truth.labels) {
        label_ids.emplace(label, static_cast<std::uint32_t>(label_ids.size()));
    }
    for (const auto& label : predicted.labels) {
        label_ids.emplace(label, static_cast<std::uint32_t>(label_ids.size()));
    }
    report.confusion_labels.resize(label_ids.size());
    for (const auto& [label, id] : label_ids) report.confusion_labels[id] = label;
    const std::size_t n_labels = label_ids.size();
    report.confusion.assign(n_labels, std::vector<std::uint64_t>(n_labels + 1, 0));

    // Predicted pair -> union label id, keyed by node names.
    std::unordered_map<std::uint64_t, std::uint32_t> truth_ids;
    truth_ids.reserve(truth.node_names.size());
    {
        std::unordered_map<std::string, std::uint32_t> by_name;
        by_name.reserve(truth.node_names.size());
        for (std::uint32_t i = 0; i < truth.node_names.size(); ++i) {
            by_name.emplace(truth.node_names[i], i);
        }
        std::unordered_map<std::uint64_t, std::uint32_t> predicted_label;
        predicted_label.reserve(predicted.size());
        for (std::size_t i = 0; i < predicted.size(); ++i) {
            const auto ia = by_name.find(predicted.node_names[predicted.link_a[i]]);
            const auto ib = by_name.find(predicted.node_names[predicted.link_b[i]]);
            if (ia == by_name.end() || ib == by_name.end()) {
                throw AnalysisError("evaluate: predicted node outside the planted universe");
            }
            std::uint32_t a = ia->second, b = ib->second;
            if (truth.node_names[a] > truth.node_names[b]) std::swap(a, b);
            const std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | b;
            if (!truth.link_label.count(key)) {
                throw AnalysisError("evaluate: predicted link not planted (universe mismatch)");
            }
            predicted_label.emplace(key, label_ids.at(predicted.label_of(i)));
        }

        std::uint64_t correct_total = 0;
        for (const auto& [key, truth_label] : truth.link_label) {
            const std::uint32_t t = label_ids.at(truth.labels[truth_label]);
            const auto it = predicted_label.find(key);
            if (it == predicted_label.end()) {
                report.confusion[t][n_labels] += 1;
                ++report.missing_links;
            } else {
                report.confusion[t][it->second] += 1;
                correct_total += (it->second == t);
            }
        }
        report.link_accuracy = report.truth_links == 0
                                   ? 1.0
                                   : static_cast<double>(correct_total) /
                                         static_cast<double>(report.truth_links);
    }

    report.per_class.resize(n_labels);
    for (std::size_t t = 0; t < n_labels; ++t) {
        auto& m = report.per_class[t];
        m.label = report.confusion_labels[t];
        for (std::size_t p = 0; p <= n_labels; ++p) m.truth_count += report.confusion[t][p];
        m.correct = report.confusion[t][t];
        for (std::size_t other = 0; other < n_labels; ++other) {
            m.predicted_count += report.confusion[other][t];
        }
        m.recall = m.truth_count == 0
                       ? 0.0
                       : static_cast<double>(m.correct) / static_cast<double>(m.truth_count);
        m.precision = m.predicted_count == 0
                          ? 0.0
                          : static_cast<double>(m.correct) / static_cast<double>(m.predicted_count);
    }

    if (!truth.hub_labels.empty()) {
        std::unordered_map<std::string, std::string> assigned;
        assigned.reserve(nodes.size());
        for (const auto& nc : nodes) {
            if (nc.assigned_label) {
                assigned.emplace(predicted.node_names[nc.node],
                                 predicted.labels[*nc.assigned_label]);
            }
        }
        std::uint64_t correct = 0;
        for (const auto& [node, label_id] : truth.hub_labels) {
            const auto it = assigned.find(truth.node_names[node]);
            if (it != assigned.end() && it->second == truth.labels[label_id]) ++correct;
        }
        report.node_accuracy =
            static_cast<double>(correct) / static_cast<double>(truth.hub_labels.size());
    }
    return report;
}

} // namespace netdiff

#include "netdiff/edge_list.hpp"
#include "netdiff/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

namespace netdiff {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool parse_weight(std::string_view field, double& out) {
    field = trim(field);
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    if (field.empty()) return false;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

// Splits into exactly three fields; returns false on any other column count.
bool split3(std::string_view line, char delim, std::string_view out[3]) {
    std::size_t p1 = line.find(delim);
    if (p1 == std::string_view::npos) return false;
    std::size_t p2 = line.find(delim, p1 + 1);
    if (p2 == std::string_view::npos) return false;
    if (line.find(delim, p2 + 1) != std::string_view::npos) return false;
    out[0] = trim(line.substr(0, p1));
    out[1] = trim(line.substr(p1 + 1, p2 - p1 - 1));
    out[2] = trim(line.substr(p2 + 1));
    return true;
}

} // namespace

EdgeList load_edge_list(const std::string& path, const std::string& name,
                        const ParseFormat& format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open edge list: " + path);

    EdgeList list;
    list.name = name;

    // Duplicate detection on interned canonical pairs.
    std::unordered_map<std::string, std::uint32_t> intern;
    std::unordered_set<std::uint64_t> seen_pairs;
    auto intern_id = [&](std::string_view s) -> std::uint32_t {
        auto it = intern.find(std::string(s));
        if (it != intern.end()) return it->second;
        auto id = static_cast<std::uint32_t>(intern.size());
        intern.emplace(std::string(s), id);
        return id;
    };

    std::string line;
    std::size_t line_no = 0;
    bool first_data_row = true;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv(line);
        if (line_no == 1 && sv.size() >= 3 &&
            static_cast<unsigned char>(sv[0]) == 0xEF &&
            static_cast<unsigned char>(sv[1]) == 0xBB &&
            static_cast<unsigned char>(sv[2]) == 0xBF) {
            sv.remove_prefix(3); // UTF-8 BOM
        }
        if (trim(sv).empty()) continue;

        std::string_view fields[3];
        if (!split3(sv, format.delimiter, fields)) {
            throw IoError(path + ":" + std::to_string(line_no) +
                          ": expected 3 columns separated by '" +
                          std::string(1, format.delimiter) + "'");
        }

        double w = 0.0;
        if (!parse_weight(fields[2], w)) {
            if (first_data_row) {
                first_data_row = false;
                continue; // header row
            }
            throw IoError(path + ":" + std::to_string(line_no) +
                          ": weight is not a number: '" + std::string(fields[2]) + "'");
        }
        first_data_row = false;

        if (!std::isfinite(w)) {
            throw IoError(path + ":" + std::to_string(line_no) + ": non-finite weight");
        }
        if (fields[0].empty() || fields[1].empty()) {
            throw IoError(path + ":" + std::to_string(line_no) + ": empty node name");
        }
        if (fields[0] == fields[1]) {
            throw IoError(path + ":" + std::to_string(line_no) + ": self-loop on node '" +
                          std::string(fields[0]) + "'");
        }

        EdgeRecord rec;
        if (fields[0] < fields[1]) {
            rec.node_a.assign(fields[0]);
            rec.node_b.assign(fields[1]);
        } else {
            rec.node_a.assign(fields[1]);
            rec.node_b.assign(fields[0]);
        }
        rec.weight = w;

        const std::uint64_t key =
            (static_cast<std::uint64_t>(intern_id(rec.node_a)) << 32) | intern_id(rec.node_b);
        if (!seen_pairs.insert(key).second) {
            throw IoError(path + ":" + std::to_string(line_no) + ": duplicate pair " +
                          rec.node_a + " - " + rec.node_b);
        }
        list.records.push_back(std::move(rec));
    }
    return list;
}

void write_edge_list(const EdgeList& list, const std::string& path,
                     const ParseFormat& format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    std::string buf;
    buf.reserve(1 << 20);
    char num[64];
    for (const auto& rec : list.records) {
        buf.append(rec.node_a);
        buf.push_back(format.delimiter);
        buf.append(rec.node_b);
        buf.push_back(format.delimiter);
        int n = std::snprintf(num, sizeof(num), "%.17g", rec.weight);
        buf.append(num, static_cast<std::size_t>(n));
        buf.push_back('\n');
        if (buf.size() > (1 << 20) - 256) {
            out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
            buf.clear();
        }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw IoError("write failed: " + path);
}

EdgeList stretch_weights(EdgeList list) {
    if (list.records.empty()) {
        throw AnalysisError("stretch: edge list '" + list.name + "' is empty");
    }
    double lo = list.records.front().weight;
    double hi = lo;
    for (const auto& rec : list.records) {
        lo = std::min(lo, rec.weight);
        hi = std::max(hi, rec.weight);
    }
    if (hi == lo) return list; // degenerate range, identity
    const double scale = 2.0 / (hi - lo);
    for (auto& rec : list.records) {
        double w = (rec.weight - lo) * scale - 1.0;
        rec.weight = std::clamp(w, -1.0, 1.0);
    }
    return list;
}

} // namespace netdiff

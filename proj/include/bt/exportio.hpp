#pragma once

#include <charconv>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bt/geometry.hpp"
#include "bt/rational.hpp"

namespace bt {

/// Shortest round-trip decimal form; exact coordinates are rational, floats
/// appear only here at the export boundary.
inline std::string fmt_double(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw std::logic_error("double formatting failed");
    return std::string(buf, p);
}

inline const char* kPointsCsvHeader = "x,y,z,layer_radius,piece_label,word";

inline void write_points_csv(std::ostream& os, const std::vector<LabeledPoint>& pts) {
    os << kPointsCsvHeader << "\n";
    for (const auto& pt : pts)
        os << fmt_double(rational_double(pt.pos.x)) << ','
           << fmt_double(rational_double(pt.pos.y)) << ','
           << fmt_double(rational_double(pt.pos.z)) << ','
           << fmt_double(rational_double(pt.radius)) << ',' << pt.label << ','
           << pt.word.str() << "\n";
}

struct CsvPointRow {
    double x, y, z, radius;
    std::string label;
    std::string word;
};

inline std::vector<CsvPointRow> read_points_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("empty points file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kPointsCsvHeader)
        throw std::invalid_argument("unexpected points header: '" + line + "'");
    std::vector<CsvPointRow> rows;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= line.size(); ++i)
            if (i == line.size() || line[i] == ',') {
                fields.push_back(line.substr(start, i - start));
                start = i + 1;
            }
        if (fields.size() != 6)
            throw std::invalid_argument("line " + std::to_string(lineno) +
                                        ": expected 6 fields");
        auto num = [&](const std::string& s) {
            char* end = nullptr;
            double v = std::strtod(s.c_str(), &end);
            if (end != s.c_str() + s.size())
                throw std::invalid_argument("line " + std::to_string(lineno) +
                                            ": bad number '" + s + "'");
            return v;
        };
        rows.push_back({num(fields[0]), num(fields[1]), num(fields[2]), num(fields[3]),
                        fields[4], fields[5]});
    }
    return rows;
}

/// Stable label → integer id mapping: ids follow the sorted label order.
inline std::map<std::string, int> label_ids(const std::vector<std::string>& labels) {
    std::map<std::string, int> ids;
    for (const auto& l : labels) ids.emplace(l, 0);
    int next = 0;
    for (auto& [label, id] : ids) id = next++;
    return ids;
}

inline void write_ply(std::ostream& os, const std::vector<CsvPointRow>& rows) {
    std::vector<std::string> labels;
    labels.reserve(rows.size());
    for (const auto& r : rows) labels.push_back(r.label);
    std::map<std::string, int> ids = label_ids(labels);
    os << "ply\nformat ascii 1.0\n";
    for (const auto& [label, id] : ids) os << "comment label " << id << " " << label << "\n";
    os << "element vertex " << rows.size() << "\n";
    os << "property double x\nproperty double y\nproperty double z\nproperty int label\n";
    os << "end_header\n";
    for (const auto& r : rows)
        os << fmt_double(r.x) << ' ' << fmt_double(r.y) << ' ' << fmt_double(r.z) << ' '
           << ids.at(r.label) << "\n";
}

inline void write_points_ply(std::ostream& os, const std::vector<LabeledPoint>& pts) {
    std::vector<CsvPointRow> rows;
    rows.reserve(pts.size());
    for (const auto& pt : pts)
        rows.push_back({rational_double(pt.pos.x), rational_double(pt.pos.y),
                        rational_double(pt.pos.z), rational_double(pt.radius), pt.label,
                        pt.word.str()});
    write_ply(os, rows);
}

}  // namespace bt

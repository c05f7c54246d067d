#include "anovakit/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "anovakit/errors.hpp"

namespace anovakit {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

double parse_value(const std::string& field, long line_no) {
    if (field.empty()) throw ParseError("empty value field", line_no);
    const char* begin = field.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + field.size())
        throw ParseError("non-numeric value '" + field + "'", line_no);
    if (!std::isfinite(v)) throw ParseError("non-finite value '" + field + "'", line_no);
    return v;
}

} // namespace

IngestResult ingest_csv(std::istream& in) {
    std::string line;
    long line_no = 0;

    // Header decides the schema by column count.
    std::size_t columns = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        columns = split_fields(line).size();
        break;
    }
    if (columns == 0) throw ParseError("missing header row", std::max(line_no, 1L));
    if (columns > 3)
        throw ParseError("expected 1 (value), 2 (group,value) or 3 (a,b,value) columns, got " +
                             std::to_string(columns),
                         line_no);

    std::vector<double> singles;
    std::map<std::string, std::vector<double>> groups;
    std::map<std::pair<std::string, std::string>, std::vector<double>> cells;

    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::vector<std::string> fields = split_fields(line);
        if (fields.size() != columns)
            throw ParseError("expected " + std::to_string(columns) + " fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        const double value = parse_value(fields.back(), line_no);
        if (columns == 1) {
            singles.push_back(value);
        } else if (columns == 2) {
            if (fields[0].empty()) throw ParseError("empty group label", line_no);
            groups[fields[0]].push_back(value);
        } else {
            if (fields[0].empty() || fields[1].empty())
                throw ParseError("empty factor label", line_no);
            cells[{fields[0], fields[1]}].push_back(value);
        }
    }

    if (columns == 1) {
        if (singles.size() < 2) throw LayoutError("single-sample input needs at least 2 rows");
        std::sort(singles.begin(), singles.end());
        const int n = static_cast<int>(singles.size());
        return IngestResult{Dataset(Layout::single(n), std::move(singles)), {}, {}};
    }

    if (columns == 2) {
        if (groups.size() < 2)
            throw LayoutError("one-way input needs at least 2 distinct groups, got " +
                              std::to_string(groups.size()));
        std::vector<std::string> labels;
        std::vector<int> sizes;
        std::vector<double> values;
        for (auto& [label, obs] : groups) { // std::map iterates labels in sorted order
            if (obs.size() < 2)
                throw LayoutError("group '" + label + "' has fewer than 2 observations");
            labels.push_back(label);
            sizes.push_back(static_cast<int>(obs.size()));
            std::sort(obs.begin(), obs.end());
            values.insert(values.end(), obs.begin(), obs.end());
        }
        return IngestResult{Dataset(Layout::one_way(std::move(sizes)), std::move(values)),
                            std::move(labels),
                            {}};
    }

    // Two-way: collect sorted levels, then demand a complete balanced table.
    std::vector<std::string> levels_a;
    std::vector<std::string> levels_b;
    for (const auto& [key, obs] : cells) {
        if (std::find(levels_a.begin(), levels_a.end(), key.first) == levels_a.end())
            levels_a.push_back(key.first);
        if (std::find(levels_b.begin(), levels_b.end(), key.second) == levels_b.end())
            levels_b.push_back(key.second);
    }
    std::sort(levels_a.begin(), levels_a.end());
    std::sort(levels_b.begin(), levels_b.end());
    if (levels_a.size() < 2 || levels_b.size() < 2)
        throw LayoutError("two-way input needs at least 2 levels per factor, got " +
                          std::to_string(levels_a.size()) + "x" + std::to_string(levels_b.size()));

    const std::size_t cell_size = cells.begin()->second.size();
    std::vector<double> values;
    for (const std::string& la : levels_a)
        for (const std::string& lb : levels_b) {
            const auto it = cells.find({la, lb});
            if (it == cells.end())
                throw UnbalancedError("missing cell (" + la + ", " + lb + ")");
            if (it->second.size() != cell_size)
                throw UnbalancedError("cell (" + la + ", " + lb + ") has " +
                                      std::to_string(it->second.size()) +
                                      " observations, expected " + std::to_string(cell_size));
            std::sort(it->second.begin(), it->second.end());
            values.insert(values.end(), it->second.begin(), it->second.end());
        }
    if (cell_size < 2) throw LayoutError("two-way input needs at least 2 observations per cell");

    Layout layout = Layout::two_way(static_cast<int>(levels_a.size()),
                                    static_cast<int>(levels_b.size()),
                                    static_cast<int>(cell_size));
    return IngestResult{Dataset(std::move(layout), std::move(values)), std::move(levels_a),
                        std::move(levels_b)};
}

IngestResult ingest_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'", 0);
    return ingest_csv(in);
}

} // namespace anovakit

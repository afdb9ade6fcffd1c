#include "ucg/dataset_io.hpp"

#include <charconv>
#include <cstdio>
#include <set>
#include <sstream>

#include "ucg/error.hpp"
#include "ucg/graph_io.hpp"

namespace ucg {

std::string serialize_dataset(const Dataset& d) {
    std::string out;
    char buf[32];
    for (std::size_t r = 0; r < d.variables.size(); ++r) {
        out += d.variables[r];
        for (Eigen::Index c = 0; c < d.values.cols(); ++c) {
            std::snprintf(buf, sizeof buf, ",%.17g", d.values(static_cast<Eigen::Index>(r), c));
            out += buf;
        }
        out += '\n';
    }
    return out;
}

Dataset parse_dataset(std::string_view text) {
    std::vector<std::string> names;
    std::vector<std::vector<double>> rows;
    std::set<std::string> seen;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (line.back() == ',') cells.emplace_back();
        if (cells.empty() || cells[0].empty())
            throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": missing variable name");
        if (!seen.insert(cells[0]).second)
            throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": duplicate variable '" + cells[0] + "'");
        std::vector<double> values;
        for (std::size_t c = 1; c < cells.size(); ++c) {
            const std::string& s = cells[c];
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc() || ptr != s.data() + s.size())
                throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": bad number '" + s + "'");
            values.push_back(v);
        }
        if (!rows.empty() && values.size() != rows.front().size())
            throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": ragged row");
        names.push_back(cells[0]);
        rows.push_back(std::move(values));
    }
    Dataset d;
    d.variables = names;
    d.values = Matrix(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c)
            d.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    return d;
}

Dataset load_dataset(const std::filesystem::path& path) { return parse_dataset(read_text_file(path)); }

void save_dataset(const Dataset& d, const std::filesystem::path& path) { write_text_file(path, serialize_dataset(d)); }

}  // namespace ucg

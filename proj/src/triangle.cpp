#include "laad/triangle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace laad {

double LossTriangle::at(int i, int j) const {
    auto it = cells.find({i, j});
    if (it == cells.end()) {
        std::ostringstream msg;
        msg << "triangle " << line_id << ": missing cell (" << i << "," << j << ")";
        throw std::out_of_range(msg.str());
    }
    return it->second;
}

void LossTriangle::validate() const {
    if (origin_count < 1) throw std::invalid_argument("triangle " + line_id + ": no accident years");
    if (max_lag < 1) throw std::invalid_argument("triangle " + line_id + ": no development lags");
    for (int i = 1; i <= origin_count; ++i) {
        const int last = std::min(max_lag, origin_count + 1 - i);
        for (int j = 1; j <= last; ++j) {
            auto it = cells.find({i, j});
            if (it == cells.end()) {
                std::ostringstream msg;
                msg << "triangle " << line_id << ": cell (" << i << "," << j
                    << ") required by the index set is missing";
                throw std::invalid_argument(msg.str());
            }
            if (!(it->second > 0.0) || !std::isfinite(it->second)) {
                std::ostringstream msg;
                msg << "triangle " << line_id << ": cell (" << i << "," << j
                    << ") must be strictly positive";
                throw std::invalid_argument(msg.str());
            }
        }
    }
    for (const auto& [key, value] : cells) {
        const auto [i, j] = key;
        (void)value;
        if (i < 1 || i > origin_count || j < 1 || j > std::min(max_lag, origin_count + 1 - i)) {
            std::ostringstream msg;
            msg << "triangle " << line_id << ": cell (" << i << "," << j
                << ") lies outside the index set";
            throw std::invalid_argument(msg.str());
        }
    }
}

std::vector<std::pair<int, double>> LossTriangle::latest_diagonal() const {
    std::vector<std::pair<int, double>> out;
    for (int i = 2; i <= origin_count; ++i) {
        const int j = std::min(max_lag, origin_count + 1 - i);
        if (j == max_lag) continue;  // already at ultimate, nothing develops
        out.emplace_back(i, at(i, j));
    }
    return out;
}

LinkRatioSet link_ratios(const std::vector<LossTriangle>& triangles) {
    if (triangles.empty()) throw std::invalid_argument("link_ratios: no triangles");
    LinkRatioSet set;
    set.n_lines = static_cast<int>(triangles.size());
    for (const auto& tri : triangles) {
        tri.validate();
        set.max_lag = std::max(set.max_lag, tri.max_lag);
        set.line_ids.push_back(tri.line_id);
    }
    for (int n = 1; n <= set.n_lines; ++n) {
        const auto& tri = triangles[static_cast<std::size_t>(n - 1)];
        for (int lag = 2; lag <= tri.max_lag; ++lag) {
            for (int i = 1; i <= tri.origin_count; ++i) {
                if (!tri.has_cell(i, lag - 1) || !tri.has_cell(i, lag)) continue;
                const double prev = tri.at(i, lag - 1);
                const double curr = tri.at(i, lag);
                if (!(prev > 0.0) || !(curr > 0.0)) {
                    std::ostringstream msg;
                    msg << "link_ratios: nonpositive cell at line " << tri.line_id << " ("
                        << i << "," << lag << ")";
                    throw std::invalid_argument(msg.str());
                }
                set.observations.push_back({n, i, lag, std::log(curr / prev)});
            }
        }
    }
    return set;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::vector<LossTriangle> load_long_csv(const std::string& path, bool validate_index_set) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);

    std::vector<LossTriangle> out;
    std::map<std::string, std::size_t> index;

    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            if (line != "line,accident_year,dev_lag,cumulative_loss") {
                std::ostringstream msg;
                msg << path << ":" << line_no
                    << ": expected header line,accident_year,dev_lag,cumulative_loss";
                throw std::runtime_error(msg.str());
            }
            continue;
        }
        const auto fields = split_csv_line(line);
        if (fields.size() != 4) {
            std::ostringstream msg;
            msg << path << ":" << line_no << ": expected 4 fields, got " << fields.size();
            throw std::runtime_error(msg.str());
        }
        int ay = 0, lag = 0;
        double loss = 0.0;
        try {
            ay = std::stoi(fields[1]);
            lag = std::stoi(fields[2]);
            loss = std::stod(fields[3]);
        } catch (const std::exception&) {
            std::ostringstream msg;
            msg << path << ":" << line_no << ": malformed numeric field";
            throw std::runtime_error(msg.str());
        }
        if (ay < 1 || lag < 1) {
            std::ostringstream msg;
            msg << path << ":" << line_no << ": accident_year and dev_lag are 1-based";
            throw std::runtime_error(msg.str());
        }
        auto [it, inserted] = index.try_emplace(fields[0], out.size());
        if (inserted) {
            out.emplace_back();
            out.back().line_id = fields[0];
        }
        auto& tri = out[it->second];
        if (!tri.cells.emplace(std::make_pair(ay, lag), loss).second) {
            std::ostringstream msg;
            msg << path << ":" << line_no << ": duplicate cell (" << ay << "," << lag << ")";
            throw std::runtime_error(msg.str());
        }
        tri.origin_count = std::max(tri.origin_count, ay);
        tri.max_lag = std::max(tri.max_lag, lag);
    }
    if (out.empty()) throw std::runtime_error(path + ": no data rows");
    if (validate_index_set)
        for (const auto& tri : out) tri.validate();
    return out;
}

}  // namespace

std::vector<LossTriangle> load_triangles_csv(const std::string& path) {
    return load_long_csv(path, true);
}

std::vector<LossTriangle> load_diagonal_csv(const std::string& path) {
    return load_long_csv(path, false);
}

std::string triangles_to_csv(const std::vector<LossTriangle>& triangles) {
    std::ostringstream out;
    out << "line,accident_year,dev_lag,cumulative_loss\n";
    out.precision(15);
    for (const auto& tri : triangles)
        for (const auto& [key, value] : tri.cells)
            out << tri.line_id << "," << key.first << "," << key.second << "," << value << "\n";
    return out.str();
}

}  // namespace laad

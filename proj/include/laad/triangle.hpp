#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace laad {

/// Cumulative reported losses for one line of business, indexed by accident
/// year i and development lag j (both 1-based). A full triangle has cells for
/// 1 <= i <= I, 1 <= j <= min(J, I+1-i); trapezoids (J != I) are accepted.
struct LossTriangle {
    std::string line_id;
    int origin_count = 0;  // I
    int max_lag = 0;       // J
    std::map<std::pair<int, int>, double> cells;

    bool has_cell(int i, int j) const { return cells.count({i, j}) > 0; }
    double at(int i, int j) const;

    /// Checks the index set and that every cell is strictly positive.
    void validate() const;

    /// Last observed diagonal: for each accident year i >= 2, the cumulative
    /// loss at lag I+1-i (capped at max_lag).
    std::vector<std::pair<int, double>> latest_diagonal() const;
};

struct LinkRatioObs {
    int line = 0;        // 1-based line index (input order)
    int accident_year = 0;
    int target_lag = 0;  // j+1 of the ratio Y_{i,j+1}/Y_{i,j}
    double value = 0.0;  // log link ratio
};

struct LinkRatioSet {
    std::vector<LinkRatioObs> observations;
    int n_lines = 0;
    int max_lag = 0;
    std::vector<std::string> line_ids;
};

/// All adjacent log link ratios, ordered by (line, target lag, accident year).
/// Throws a data error naming (line, i, j) on a nonpositive cell.
LinkRatioSet link_ratios(const std::vector<LossTriangle>& triangles);

/// Long-format CSV loader (header line,accident_year,dev_lag,cumulative_loss).
/// Validates each line's index set. Preserves first-appearance line order.
std::vector<LossTriangle> load_triangles_csv(const std::string& path);

/// Loader for a calendar-diagonal file in the same long format; index-set
/// validation is skipped (cells form a diagonal, not a triangle).
std::vector<LossTriangle> load_diagonal_csv(const std::string& path);

/// Re-emit triangles in the long CSV format (row order line, i, j).
std::string triangles_to_csv(const std::vector<LossTriangle>& triangles);

}  // namespace laad

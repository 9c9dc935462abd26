#include "laad/reserving.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace laad {

std::string to_string(ReserveModel model) {
    switch (model) {
        case ReserveModel::Unconstrained: return "unconstrained";
        case ReserveModel::Best: return "best";
        case ReserveModel::Lasso: return "lasso";
        case ReserveModel::Scad: return "scad";
        case ReserveModel::Mcp: return "mcp";
        case ReserveModel::Laad: return "laad";
    }
    return "?";
}

ReserveModel reserve_model_from_string(const std::string& name) {
    if (name == "unconstrained") return ReserveModel::Unconstrained;
    if (name == "best") return ReserveModel::Best;
    if (name == "lasso") return ReserveModel::Lasso;
    if (name == "scad") return ReserveModel::Scad;
    if (name == "mcp") return ReserveModel::Mcp;
    if (name == "laad") return ReserveModel::Laad;
    throw std::invalid_argument("unknown reserving model: " + name);
}

Eigen::Index ReserveDesign::eta_column(int lag) const {
    for (std::size_t c = 0; c < coef_map.size(); ++c)
        if (!coef_map[c].is_kappa && coef_map[c].lag == lag)
            return static_cast<Eigen::Index>(c);
    throw std::out_of_range("no eta column for lag " + std::to_string(lag));
}

std::optional<Eigen::Index> ReserveDesign::kappa_column(int lag, int line) const {
    for (std::size_t c = 0; c < coef_map.size(); ++c)
        if (coef_map[c].is_kappa && coef_map[c].lag == lag && coef_map[c].line == line)
            return static_cast<Eigen::Index>(c);
    return std::nullopt;
}

ReserveDesign build_design(const LinkRatioSet& lr, int n_lines) {
    if (n_lines < 1) throw std::invalid_argument("build_design: need n_lines >= 1");
    if (lr.observations.empty()) throw std::invalid_argument("build_design: no observations");

    ReserveDesign design;
    design.n_lines = n_lines;
    design.max_lag = lr.max_lag;
    design.line_ids = lr.line_ids;
    design.rows = lr.observations;

    const int n_lags = lr.max_lag - 1;  // target lags 2..max_lag
    // eta block: one column per target lag; kappa block: per line 1..N-1, per lag.
    std::vector<std::string> names;
    design.coef_map.clear();
    for (int lag = 2; lag <= lr.max_lag; ++lag) {
        names.push_back("eta" + std::to_string(lag));
        design.coef_map.push_back({false, lag, 0});
    }
    for (int line = 1; line <= n_lines - 1; ++line) {
        for (int lag = 2; lag <= lr.max_lag; ++lag) {
            names.push_back("kappa" + std::to_string(lag) + "_" + std::to_string(line));
            design.coef_map.push_back({true, lag, line});
        }
    }

    const auto n = static_cast<Eigen::Index>(lr.observations.size());
    const auto cols = static_cast<Eigen::Index>(names.size());
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(n, cols);
    Eigen::VectorXd y(n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto& obs = lr.observations[static_cast<std::size_t>(r)];
        y[r] = obs.value;
        X(r, obs.target_lag - 2) = 1.0;  // eta block is first
        if (obs.line <= n_lines - 1)
            X(r, static_cast<Eigen::Index>(n_lags) * obs.line + obs.target_lag - 2) = 1.0;
    }
    design.dataset = Dataset{std::move(X), std::move(y), std::move(names)};

    design.weights = Eigen::VectorXd::Ones(cols);
    design.weights[design.eta_column(2)] = 0.0;  // eta_2 is never penalized
    return design;
}

double DevFactorTable::zeta_at(int line, int lag) const {
    if (line < 1 || line > static_cast<int>(zeta.size()))
        throw std::out_of_range("dev factor table: bad line index");
    const auto& z = zeta[static_cast<std::size_t>(line - 1)];
    if (lag < 2 || lag > max_lag)
        throw std::out_of_range("dev factor table: no factor for lag " + std::to_string(lag));
    return z[static_cast<std::size_t>(lag - 2)];
}

double DevFactorTable::factor(int line, int lag) const { return std::exp(zeta_at(line, lag)); }

DevFactorTable fit_reserving(const ReserveDesign& design, ReserveModel model, double strength,
                             const ReserveFitOptions& opts) {
    FitResult fit;
    switch (model) {
        case ReserveModel::Unconstrained:
            fit = ols_fit(design.dataset, opts.sigma2);
            break;
        case ReserveModel::Best:
            fit = forward_bic(design.dataset, {design.eta_column(2)}, opts.sigma2);
            break;
        default: {
            PenaltySpec spec;
            switch (model) {
                case ReserveModel::Lasso: spec = PenaltySpec::lasso(strength); break;
                case ReserveModel::Scad: spec = PenaltySpec::scad(strength); break;
                case ReserveModel::Mcp: spec = PenaltySpec::mcp(strength); break;
                default: spec = PenaltySpec::laad(strength); break;
            }
            CdOptions cd;
            cd.tol = opts.tol;
            cd.max_sweeps = opts.max_sweeps;
            cd.penalize_original_scale = opts.penalize_original_scale;
            cd.sigma2 = opts.sigma2;
            fit = coordinate_descent(design.dataset, spec, design.weights, cd);
            break;
        }
    }

    DevFactorTable table;
    table.line_ids = design.line_ids;
    table.max_lag = design.max_lag;
    table.sigma2_hat = fit.sigma2_hat;
    table.zeta.assign(static_cast<std::size_t>(design.n_lines),
                      std::vector<double>(static_cast<std::size_t>(design.max_lag - 1), 0.0));
    for (int line = 1; line <= design.n_lines; ++line) {
        for (int lag = 2; lag <= design.max_lag; ++lag) {
            double z = fit.coefficients[design.eta_column(lag)];
            if (auto kc = design.kappa_column(lag, line)) z += fit.coefficients[*kc];
            table.zeta[static_cast<std::size_t>(line - 1)][static_cast<std::size_t>(lag - 2)] = z;
        }
    }
    return table;
}

CrossClassifiedFit fit_cross_classified(const LossTriangle& triangle) {
    triangle.validate();
    const int I = triangle.origin_count;
    const int J = triangle.max_lag;

    std::vector<std::pair<int, int>> cells;
    for (const auto& [key, value] : triangle.cells) {
        (void)value;
        cells.push_back(key);
    }
    const auto n = static_cast<Eigen::Index>(cells.size());
    const Eigen::Index p = 1 + (I - 1) + (J - 1);

    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(n, p);
    Eigen::VectorXd y(n);
    std::vector<std::string> names;
    names.emplace_back("gamma");
    for (int i = 2; i <= I; ++i) names.push_back("alpha" + std::to_string(i));
    for (int j = 2; j <= J; ++j) names.push_back("delta" + std::to_string(j));

    for (Eigen::Index r = 0; r < n; ++r) {
        const auto [i, j] = cells[static_cast<std::size_t>(r)];
        y[r] = std::log(triangle.at(i, j));
        X(r, 0) = 1.0;
        if (i >= 2) X(r, i - 1) = 1.0;
        if (j >= 2) X(r, (I - 1) + j - 1) = 1.0;
    }

    const FitResult fit = ols_fit(Dataset{std::move(X), std::move(y), std::move(names)},
                                  Sigma2Estimator::DfAdjusted);

    CrossClassifiedFit out;
    out.gamma = fit.coefficients[0];
    out.alpha.assign(static_cast<std::size_t>(I), 0.0);
    out.delta.assign(static_cast<std::size_t>(J), 0.0);
    for (int i = 2; i <= I; ++i) out.alpha[static_cast<std::size_t>(i - 1)] = fit.coefficients[i - 1];
    for (int j = 2; j <= J; ++j)
        out.delta[static_cast<std::size_t>(j - 1)] = fit.coefficients[(I - 1) + j - 1];
    out.sigma2_hat = fit.sigma2_hat;
    return out;
}

PredictionTable predict_next_diagonal(const std::vector<LossTriangle>& triangles,
                                      const DevFactorTable& factors) {
    PredictionTable table;
    table.sigma2_hat = factors.sigma2_hat;
    for (std::size_t t = 0; t < triangles.size(); ++t) {
        const auto& tri = triangles[t];
        tri.validate();
        const int line = static_cast<int>(t) + 1;
        double total = 0.0;
        for (int i = 2; i <= tri.origin_count; ++i) {
            const int j = std::min(tri.max_lag, tri.origin_count + 1 - i);
            if (j == tri.max_lag) continue;  // fully developed (trapezoid rows)
            const int next = j + 1;
            if (next > factors.max_lag) {
                std::ostringstream msg;
                msg << "predict_next_diagonal: no factor for lag " << next << " (line "
                    << tri.line_id << ", accident year " << i << ")";
                throw std::logic_error(msg.str());
            }
            const double latest = tri.at(i, j);
            const double growth =
                std::exp(factors.zeta_at(line, next) + 0.5 * factors.sigma2_hat) - 1.0;
            PredictionRow row;
            row.line_id = tri.line_id;
            row.accident_year = i;
            row.from_lag = j;
            row.latest_cumulative = latest;
            row.predicted_incremental = latest * growth;
            total += row.predicted_incremental;
            table.rows.push_back(std::move(row));
        }
        table.line_totals[tri.line_id] = total;
    }
    return table;
}

std::map<std::string, std::map<int, double>> actual_incrementals(
    const std::vector<LossTriangle>& training, const std::vector<LossTriangle>& diagonal) {
    std::map<std::string, std::map<int, double>> out;
    for (const auto& diag : diagonal) {
        const LossTriangle* train = nullptr;
        for (const auto& tri : training)
            if (tri.line_id == diag.line_id) train = &tri;
        if (!train)
            throw std::invalid_argument("actual_incrementals: no training triangle for line " +
                                        diag.line_id);
        for (const auto& [key, cumulative] : diag.cells) {
            const auto [i, j] = key;
            if (j < 2) continue;
            out[diag.line_id][i] = cumulative - train->at(i, j - 1);
        }
    }
    return out;
}

std::map<std::string, ValidationMetrics> validate(
    const PredictionTable& predictions,
    const std::map<std::string, std::map<int, double>>& actuals) {
    std::map<std::string, ValidationMetrics> out;
    std::map<std::string, int> counts;
    for (const auto& row : predictions.rows) ++counts[row.line_id];
    for (const auto& [line, acts] : actuals) {
        auto it = counts.find(line);
        if (it == counts.end() || it->second != static_cast<int>(acts.size())) {
            std::ostringstream msg;
            msg << "validate: prediction/actual count mismatch for line " << line << " ("
                << (it == counts.end() ? 0 : it->second) << " vs " << acts.size() << ")";
            throw std::invalid_argument(msg.str());
        }
    }

    for (const auto& row : predictions.rows) {
        const auto line_it = actuals.find(row.line_id);
        if (line_it == actuals.end())
            throw std::invalid_argument("validate: no actuals for line " + row.line_id);
        const auto act_it = line_it->second.find(row.accident_year);
        if (act_it == line_it->second.end()) {
            std::ostringstream msg;
            msg << "validate: no actual for line " << row.line_id << " accident year "
                << row.accident_year;
            throw std::invalid_argument(msg.str());
        }
        const double err = row.predicted_incremental - act_it->second;
        auto& m = out[row.line_id];
        m.rmse += err * err;
        m.mae += std::abs(err);
        m.n += 1;
    }
    for (auto& [line, m] : out) {
        (void)line;
        m.rmse = std::sqrt(m.rmse / m.n);
        m.mae /= m.n;
    }
    return out;
}

}  // namespace laad

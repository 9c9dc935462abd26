#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "laad/model_select.hpp"
#include "laad/solver.hpp"
#include "laad/triangle.hpp"

namespace laad {

enum class ReserveModel { Unconstrained, Best, Lasso, Scad, Mcp, Laad };

std::string to_string(ReserveModel model);
ReserveModel reserve_model_from_string(const std::string& name);

struct CoefInfo {
    bool is_kappa = false;  // false: shared eta, true: line-specific kappa
    int lag = 0;            // target lag j+1
    int line = 0;           // 1-based line for kappa columns, 0 for eta
};

/// Regression view of the link ratios: indicator design over the shared
/// development effects eta_{j+1} and the line-specific effects kappa_{j+1}^(n)
/// for lines 1..N-1 (line N carries no kappa, for identifiability). eta_2 is
/// exempt from penalization (weight 0).
struct ReserveDesign {
    Dataset dataset;
    Eigen::VectorXd weights;
    std::vector<CoefInfo> coef_map;    // per column
    std::vector<LinkRatioObs> rows;    // per row, parallel to dataset rows
    int n_lines = 0;
    int max_lag = 0;
    std::vector<std::string> line_ids;

    Eigen::Index eta_column(int lag) const;               // throws if absent
    std::optional<Eigen::Index> kappa_column(int lag, int line) const;
};

ReserveDesign build_design(const LinkRatioSet& lr, int n_lines);

/// Estimated incremental development factors exp(zeta_j^(n)) per line and lag,
/// with the pooled residual variance of the link-ratio regression.
struct DevFactorTable {
    std::vector<std::string> line_ids;
    int max_lag = 0;
    // zeta[line-1][lag-2] for lag in 2..max_lag
    std::vector<std::vector<double>> zeta;
    double sigma2_hat = 0.0;

    double factor(int line, int lag) const;  // exp(zeta); exact 1.0 when zeta == 0
    double zeta_at(int line, int lag) const;
};

struct ReserveFitOptions {
    /// sigma^2 convention for prediction; the df-adjusted pooled estimator
    /// RSS/(n-k) reproduces the source tables and is the default here.
    Sigma2Estimator sigma2 = Sigma2Estimator::DfAdjusted;
    bool penalize_original_scale = false;
    double tol = 1e-10;
    int max_sweeps = 100000;
};

DevFactorTable fit_reserving(const ReserveDesign& design, ReserveModel model,
                             double strength = 0.0, const ReserveFitOptions& opts = {});

/// Unconstrained lognormal cross-classified fit of one triangle:
/// E[log Y_ij] = gamma + alpha_i + delta_j with alpha_1 = delta_1 = 0.
struct CrossClassifiedFit {
    double gamma = 0.0;
    std::vector<double> alpha;  // index 0 <-> accident year 1 (0 by constraint)
    std::vector<double> delta;  // index 0 <-> lag 1 (0 by constraint)
    double sigma2_hat = 0.0;
};

CrossClassifiedFit fit_cross_classified(const LossTriangle& triangle);

struct PredictionRow {
    std::string line_id;
    int accident_year = 0;
    int from_lag = 0;             // last observed lag j
    double latest_cumulative = 0.0;
    double predicted_incremental = 0.0;
};

struct PredictionTable {
    std::vector<PredictionRow> rows;
    std::map<std::string, double> line_totals;
    double sigma2_hat = 0.0;
};

/// Next-calendar-year incremental prediction per accident year i = 2..I:
/// Y_{i,j} * (exp(zeta_{j+1} + sigma^2/2) - 1) with j = I+1-i.
PredictionTable predict_next_diagonal(const std::vector<LossTriangle>& triangles,
                                      const DevFactorTable& factors);

struct ValidationMetrics {
    double rmse = 0.0;
    double mae = 0.0;
    int n = 0;
};

/// Actual incremental claims implied by the next calendar-year diagonal,
/// keyed by line then accident year.
std::map<std::string, std::map<int, double>> actual_incrementals(
    const std::vector<LossTriangle>& training, const std::vector<LossTriangle>& diagonal);

/// RMSE and MAE of predicted vs actual incremental claims per line.
/// Throws on a prediction/actual count mismatch.
std::map<std::string, ValidationMetrics> validate(
    const PredictionTable& predictions,
    const std::map<std::string, std::map<int, double>>& actuals);

}  // namespace laad

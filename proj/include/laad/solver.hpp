#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "laad/penalty.hpp"

namespace laad {

struct Dataset {
    Eigen::MatrixXd design;                 // n x p
    Eigen::VectorXd response;               // n
    std::vector<std::string> column_names;  // p, empty names allowed

    Eigen::Index n_rows() const { return design.rows(); }
    Eigen::Index n_cols() const { return design.cols(); }

    void validate() const;  // finite entries, n >= 1, p >= 1, name count
    std::string column_label(Eigen::Index j) const;
};

struct FitResult {
    Eigen::VectorXd coefficients;        // original column scale
    std::vector<double> objective_trace; // one value per sweep (CD only)
    double sigma2_hat = 0.0;
    int n_iter = 0;
    bool converged = false;
    std::vector<bool> nonzero_mask;
    /// Set when a LAAD fit ran with some effective per-coordinate strength
    /// above 1, outside the guaranteed-convergence regime.
    bool laad_strength_warning = false;

    int nonzero_count() const;
};

enum class Sigma2Estimator { MlRssOverN, DfAdjusted };  // RSS/n vs RSS/(n-k)

struct CdOptions {
    double tol = 1e-8;
    int max_sweeps = 10000;
    std::optional<Eigen::VectorXd> init;  // original-scale start; OLS-style default
    /// Default penalizes normalized-scale coefficients (matches the unit-norm
    /// hypothesis of the convergence theory); the switch penalizes
    /// original-scale coefficients instead.
    bool penalize_original_scale = false;
    Sigma2Estimator sigma2 = Sigma2Estimator::MlRssOverN;
};

/// Divide each column by its Euclidean norm. Returns the normalized dataset
/// and the scale vector; original-scale coefficients are recovered as
/// beta_j = beta_norm_j / scale_j. Throws on a zero-norm column.
std::pair<Dataset, Eigen::VectorXd> normalize_columns(const Dataset& data);

/// Cyclic coordinate descent for penalized least squares
/// 0.5*||y - X beta||^2 + sum_j weights_j * p(beta_j; spec).
/// Columns are normalized internally; `weights` gives per-coefficient penalty
/// multipliers (0 = exempt).
FitResult coordinate_descent(const Dataset& data, const PenaltySpec& spec,
                             const Eigen::VectorXd& weights,
                             const CdOptions& opts = {});

/// Exact least squares via column-pivoted QR. Throws a rank-deficiency error
/// listing the dependent columns when the design has deficient column rank.
FitResult ols_fit(const Dataset& data, Sigma2Estimator sigma2 = Sigma2Estimator::MlRssOverN);

/// Greedy forward selection scored by BIC = n*log(RSS/n) + k*log(n), starting
/// from `always_in`; returns the OLS refit on the selected set, zeros elsewhere.
FitResult forward_bic(const Dataset& data, const std::vector<Eigen::Index>& always_in,
                      Sigma2Estimator sigma2 = Sigma2Estimator::MlRssOverN);

}  // namespace laad

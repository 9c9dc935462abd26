#pragma once

#include <cstdint>
#include <vector>

#include "laad/solver.hpp"

namespace laad {

struct CvResult {
    std::vector<double> grid;          // penalty strengths, descending
    std::vector<double> cv_rmse_mean;  // fold-averaged held-out RMSE per grid value
    std::vector<double> cv_rmse_se;    // standard error across the k fold RMSEs
    double r_min = 0.0;                // grid argmin of the mean
    double r_1se = 0.0;                // largest grid value within one SE of the min
    double r_selected = 0.0;           // geometric mean of r_min and r_1se
};

/// Deterministic fold assignment: seeded shuffle of 0..n-1, fold of shuffled
/// position q is q mod k.
std::vector<int> cv_fold_assignment(std::size_t n, int k, std::uint64_t seed);

/// k-fold cross-validation over a descending strength grid. For each grid
/// value fits on k-1 folds (warm-started along the grid) and scores held-out
/// RMSE; selects by the geometric-mean one-SE rule.
CvResult kfold_cv(const Dataset& data, const PenaltySpec& spec_template,
                  const Eigen::VectorXd& weights, const std::vector<double>& grid,
                  int k, std::uint64_t seed, const CdOptions& opts = {});

/// Default strength grid: `count` log-spaced values from the smallest strength
/// that zeroes every penalized coefficient at beta = 0 down to 1e-4 of it.
std::vector<double> default_strength_grid(const Dataset& data, const PenaltySpec& spec_template,
                                          const Eigen::VectorXd& weights, int count = 50);

/// Empirical effective degrees of freedom by response perturbation:
/// sum_i x_i' (beta(y + eps e_i) - beta(y - eps e_i)) / (2 eps).
/// eps <= 0 selects the default 1e-4 * sd(y). Perturbed fits warm-start from
/// the unperturbed solution.
double empirical_edf(const Dataset& data, const PenaltySpec& spec,
                     const Eigen::VectorXd& weights, double eps = 0.0,
                     const CdOptions& opts = {});

}  // namespace laad

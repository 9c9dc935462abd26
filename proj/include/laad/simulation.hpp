#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "laad/solver.hpp"

namespace laad {

enum class SimModel { Full, Reduced, Best, Lasso, Mcp, Scad, Laad };

std::string to_string(SimModel model);
SimModel sim_model_from_string(const std::string& name);

struct SimConfig {
    int n = 100;
    int reps = 100;
    std::uint64_t seed = 1;
    std::vector<SimModel> models = {SimModel::Full,  SimModel::Reduced, SimModel::Best,
                                    SimModel::Lasso, SimModel::Mcp,     SimModel::Scad,
                                    SimModel::Laad};
    int cv_folds = 5;
    int grid_size = 50;
};

/// Nine main effects plus all 36 pairwise interactions (lexicographic order),
/// and the 45-length true coefficient vector (13 nonzero).
struct SimData {
    Dataset data;  // columns x1..x9, x1:x2, x1:x3, ..., x8:x9
    Eigen::VectorXd true_beta;
};

SimData gen_sim_data(int n, std::uint64_t seed);

struct SimModelReport {
    SimModel model;
    // Per coefficient, over the 45 design columns:
    std::vector<double> bias;  // mean(beta_hat) - beta_true
    std::vector<double> rmse;
    double mean_l1_diff = 0.0;
    double mean_l0_diff = 0.0;
    double avg_runtime_seconds = 0.0;
    int failures = 0;
};

struct SimReport {
    SimConfig config;
    std::vector<std::string> coef_names;
    std::vector<SimModelReport> models;
};

/// Runs the replicated estimation study. Metrics are deterministic functions
/// of the config; runtimes are wall-clock and excluded from that guarantee.
SimReport run_sim_study(const SimConfig& config);

struct QqPoint {
    double p = 0.0;            // plotting position (i - 0.5) / n
    double theoretical = 0.0;  // standard normal quantile at p
    double sample = 0.0;       // standardized residual order statistic
};

/// Residual quantiles of the mains-only fit versus the fit that also carries
/// the four active interactions, on one simulated dataset. Feeds QQ plots of
/// the omitted-interaction lack of fit.
std::vector<std::pair<std::string, std::vector<QqPoint>>> residual_qq(int n,
                                                                      std::uint64_t seed);

}  // namespace laad

#include "laad/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "laad/model_select.hpp"
#include "laad/rng.hpp"

namespace laad {

std::string to_string(SimModel model) {
    switch (model) {
        case SimModel::Full: return "full";
        case SimModel::Reduced: return "reduced";
        case SimModel::Best: return "best";
        case SimModel::Lasso: return "lasso";
        case SimModel::Mcp: return "mcp";
        case SimModel::Scad: return "scad";
        case SimModel::Laad: return "laad";
    }
    return "?";
}

SimModel sim_model_from_string(const std::string& name) {
    if (name == "full") return SimModel::Full;
    if (name == "reduced") return SimModel::Reduced;
    if (name == "best") return SimModel::Best;
    if (name == "lasso") return SimModel::Lasso;
    if (name == "mcp") return SimModel::Mcp;
    if (name == "scad") return SimModel::Scad;
    if (name == "laad") return SimModel::Laad;
    throw std::invalid_argument("unknown simulation model: " + name);
}

namespace {

constexpr int kMains = 9;
constexpr int kCols = 45;  // 9 mains + 36 pairwise interactions

const double kMeans[kMains] = {5.0, -2.0, 1.0, 3.0, 0.0, 0.0, -3.0, 2.0, 3.0};
const double kSds[kMains] = {1.0, 1.0, 2.0, 2.0, 2.0, 3.0, 2.0, 1.0, 1.0};

std::vector<std::string> coef_names() {
    std::vector<std::string> names;
    for (int a = 1; a <= kMains; ++a) names.push_back("x" + std::to_string(a));
    for (int a = 1; a <= kMains; ++a)
        for (int b = a + 1; b <= kMains; ++b)
            names.push_back("x" + std::to_string(a) + ":x" + std::to_string(b));
    return names;
}

int interaction_column(int a, int b) {  // 1-based mains, a < b
    int idx = kMains;
    for (int i = 1; i <= kMains; ++i) {
        for (int j = i + 1; j <= kMains; ++j) {
            if (i == a && j == b) return idx;
            ++idx;
        }
    }
    throw std::logic_error("interaction_column: bad pair");
}

// Acklam's rational approximation of the standard normal quantile
// (absolute error below 1.15e-9 on (0, 1)).
double normal_quantile(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
               (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

}  // namespace

SimData gen_sim_data(int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_sim_data: need n >= 1");
    Rng rng(seed);

    Eigen::MatrixXd mains(n, kMains);
    for (Eigen::Index i = 0; i < n; ++i)
        for (int v = 0; v < kMains; ++v)
            mains(i, v) = kMeans[v] + kSds[v] * rng.next_normal();

    Eigen::MatrixXd X(n, kCols);
    X.leftCols(kMains) = mains;
    int c = kMains;
    for (int a = 0; a < kMains; ++a)
        for (int b = a + 1; b < kMains; ++b)
            X.col(c++) = mains.col(a).cwiseProduct(mains.col(b));

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(kCols);
    const double main_signs[kMains] = {-1, 1, 1, -1, 1, -1, 1, 1, -1};
    for (int v = 0; v < kMains; ++v) beta[v] = main_signs[v];
    beta[interaction_column(1, 6)] = -10.0;
    beta[interaction_column(2, 3)] = 1.0;
    beta[interaction_column(3, 4)] = 0.1;
    beta[interaction_column(4, 6)] = -0.01;

    Eigen::VectorXd y = X * beta;
    for (Eigen::Index i = 0; i < n; ++i) y[i] += rng.next_normal();

    return SimData{Dataset{std::move(X), std::move(y), coef_names()}, std::move(beta)};
}

namespace {

// Fits one model on one replicate; returns the 45-length coefficient vector
// (intercept column handled internally and excluded).
Eigen::VectorXd fit_sim_model(SimModel model, const SimData& sim, const SimConfig& config,
                              std::uint64_t fold_seed) {
    const Eigen::Index n = sim.data.n_rows();

    // All fits include an unpenalized intercept column appended last.
    Dataset with_intercept = sim.data;
    with_intercept.design.conservativeResize(n, kCols + 1);
    with_intercept.design.col(kCols) = Eigen::VectorXd::Ones(n);
    with_intercept.column_names.push_back("intercept");

    const auto strip = [&](const Eigen::VectorXd& full) {
        return Eigen::VectorXd(full.head(kCols));
    };

    switch (model) {
        case SimModel::Full:
            return strip(ols_fit(with_intercept).coefficients);
        case SimModel::Reduced: {
            Dataset reduced;
            reduced.design.resize(n, kMains + 1);
            reduced.design.leftCols(kMains) = sim.data.design.leftCols(kMains);
            reduced.design.col(kMains) = Eigen::VectorXd::Ones(n);
            reduced.response = sim.data.response;
            const FitResult fit = ols_fit(reduced);
            Eigen::VectorXd out = Eigen::VectorXd::Zero(kCols);
            out.head(kMains) = fit.coefficients.head(kMains);
            return out;
        }
        case SimModel::Best: {
            const FitResult fit = forward_bic(with_intercept, {kCols});
            return strip(fit.coefficients);
        }
        default: {
            PenaltySpec spec;
            switch (model) {
                case SimModel::Lasso: spec = PenaltySpec::lasso(1.0); break;
                case SimModel::Mcp: spec = PenaltySpec::mcp(1.0); break;
                case SimModel::Scad: spec = PenaltySpec::scad(1.0); break;
                default: spec = PenaltySpec::laad(1.0); break;
            }
            Eigen::VectorXd weights = Eigen::VectorXd::Ones(kCols + 1);
            weights[kCols] = 0.0;  // intercept exempt
            const auto grid =
                default_strength_grid(with_intercept, spec, weights, config.grid_size);
            const CvResult cv = kfold_cv(with_intercept, spec, weights, grid,
                                         config.cv_folds, fold_seed);
            spec.strength = cv.r_selected;
            const FitResult fit = coordinate_descent(with_intercept, spec, weights);
            return strip(fit.coefficients);
        }
    }
}

}  // namespace

std::vector<std::pair<std::string, std::vector<QqPoint>>> residual_qq(int n,
                                                                      std::uint64_t seed) {
    if (n < 20) throw std::invalid_argument("residual_qq: need n >= 20");
    const SimData sim = gen_sim_data(n, seed);

    const auto qq_of = [&](const std::vector<int>& cols) {
        Dataset sub;
        sub.design.resize(n, static_cast<Eigen::Index>(cols.size()) + 1);
        for (std::size_t c = 0; c < cols.size(); ++c)
            sub.design.col(static_cast<Eigen::Index>(c)) = sim.data.design.col(cols[c]);
        sub.design.col(static_cast<Eigen::Index>(cols.size())) = Eigen::VectorXd::Ones(n);
        sub.response = sim.data.response;
        const FitResult fit = ols_fit(sub);
        Eigen::VectorXd resid = sub.response - sub.design * fit.coefficients;
        const double sd = std::sqrt(resid.squaredNorm() / static_cast<double>(n));
        std::vector<double> sorted(resid.data(), resid.data() + n);
        std::sort(sorted.begin(), sorted.end());
        std::vector<QqPoint> out(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
            out[static_cast<std::size_t>(i)] = {p, normal_quantile(p),
                                                sorted[static_cast<std::size_t>(i)] / sd};
        }
        return out;
    };

    std::vector<int> mains;
    for (int v = 0; v < kMains; ++v) mains.push_back(v);
    std::vector<int> with_interactions = mains;
    with_interactions.push_back(interaction_column(1, 6));
    with_interactions.push_back(interaction_column(2, 3));
    with_interactions.push_back(interaction_column(3, 4));
    with_interactions.push_back(interaction_column(4, 6));

    return {{"reduced", qq_of(mains)}, {"true", qq_of(with_interactions)}};
}

SimReport run_sim_study(const SimConfig& config) {
    if (config.n < 50) throw std::invalid_argument("run_sim_study: need n >= 50");
    if (config.reps < 1) throw std::invalid_argument("run_sim_study: need reps >= 1");

    SimReport report;
    report.config = config;
    report.coef_names = coef_names();

    const auto n_models = config.models.size();
    std::vector<Eigen::VectorXd> sum_dev(n_models, Eigen::VectorXd::Zero(kCols));
    std::vector<Eigen::VectorXd> sum_sq(n_models, Eigen::VectorXd::Zero(kCols));
    std::vector<double> sum_l1(n_models, 0.0), sum_l0(n_models, 0.0), sum_time(n_models, 0.0);
    std::vector<int> failures(n_models, 0), successes(n_models, 0);

    for (int rep = 0; rep < config.reps; ++rep) {
        const SimData sim =
            gen_sim_data(config.n, Rng::substream(config.seed, static_cast<std::uint64_t>(rep))
                                       .next_u64());
        for (std::size_t m = 0; m < n_models; ++m) {
            const std::uint64_t fold_seed =
                Rng::substream(config.seed,
                               0x5151ULL + static_cast<std::uint64_t>(rep) * 101ULL +
                                   static_cast<std::uint64_t>(m))
                    .next_u64();
            const auto start = std::chrono::steady_clock::now();
            Eigen::VectorXd est;
            try {
                est = fit_sim_model(config.models[m], sim, config, fold_seed);
            } catch (const std::exception&) {
                ++failures[m];
                continue;
            }
            const std::chrono::duration<double> elapsed =
                std::chrono::steady_clock::now() - start;
            sum_time[m] += elapsed.count();
            ++successes[m];

            const Eigen::VectorXd dev = est - sim.true_beta;
            sum_dev[m] += dev;
            sum_sq[m] += dev.cwiseAbs2();
            sum_l1[m] += dev.cwiseAbs().sum();
            int l0 = 0;
            for (Eigen::Index j = 0; j < kCols; ++j) {
                const bool true_zero = sim.true_beta[j] == 0.0;
                const bool est_zero = est[j] == 0.0;
                if (true_zero != est_zero) ++l0;
            }
            sum_l0[m] += l0;
        }
    }

    for (std::size_t m = 0; m < n_models; ++m) {
        SimModelReport mr;
        mr.model = config.models[m];
        mr.failures = failures[m];
        const double reps = std::max(successes[m], 1);
        mr.bias.resize(kCols);
        mr.rmse.resize(kCols);
        for (Eigen::Index j = 0; j < kCols; ++j) {
            mr.bias[static_cast<std::size_t>(j)] = sum_dev[m][j] / reps;
            mr.rmse[static_cast<std::size_t>(j)] = std::sqrt(sum_sq[m][j] / reps);
        }
        mr.mean_l1_diff = sum_l1[m] / reps;
        mr.mean_l0_diff = sum_l0[m] / reps;
        mr.avg_runtime_seconds = sum_time[m] / reps;
        report.models.push_back(std::move(mr));
    }
    return report;
}

}  // namespace laad

// Acceptance suite: runs every release criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit status is the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "laad/bootstrap.hpp"
#include "laad/model_select.hpp"
#include "laad/penalty.hpp"
#include "laad/reserving.hpp"
#include "laad/rng.hpp"
#include "laad/simulation.hpp"
#include "laad/solver.hpp"
#include "laad/triangle.hpp"

using namespace laad;

namespace {

const std::string kTriangles = std::string(LAAD_DATA_DIR) + "/ace_2011_triangles.csv";
const std::string kDiagonal = std::string(LAAD_DATA_DIR) + "/ace_2012_diagonal.csv";
const double kPaperR = std::log(1.005261);

struct Check {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (detail.tellp() > 0) detail << "; ";
            detail << what;
        }
    }
};

double seconds_since(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Brute-force oracle used by criterion 1: coarse scan plus fine refinement
// around the best coarse point on each side of zero, with theta = 0 itself as
// an exact candidate. Stays entirely on grid evaluations of the objective.
double oracle_objective(double z, double r) {
    const PenaltySpec spec = PenaltySpec::laad(r);
    const double hi = std::abs(z) + 1.0;
    const double coarse = 1e-3, fine = 1e-6;

    double best_pos = 0.0, best_pos_obj = prox_objective(z, 0.0, spec);
    double best_neg = 0.0, best_neg_obj = best_pos_obj;
    for (double t = coarse; t <= hi; t += coarse) {
        double obj = prox_objective(z, t, spec);
        if (obj < best_pos_obj) {
            best_pos_obj = obj;
            best_pos = t;
        }
        obj = prox_objective(z, -t, spec);
        if (obj < best_neg_obj) {
            best_neg_obj = obj;
            best_neg = -t;
        }
    }
    double best = prox_objective(z, 0.0, spec);
    for (double center : {best_pos, best_neg}) {
        if (center == 0.0) continue;
        const double refined =
            oracle_prox(z, spec, center - 2.0 * coarse, center + 2.0 * coarse, fine);
        best = std::min(best, prox_objective(z, refined, spec));
    }
    return best;
}

Check criterion1() {
    Check c;
    const auto start = std::chrono::steady_clock::now();
    for (double r : {0.1, 0.5, 1.0, 2.0, 5.0}) {
        const PenaltySpec spec = PenaltySpec::laad(r);
        for (int zi = -1000; zi <= 1000; ++zi) {
            const double z = 0.01 * zi;
            const double closed = prox_objective(z, laad_prox(z, r).theta_hat, spec);
            const double oracle = oracle_objective(z, r);
            if (std::abs(closed - oracle) > 1e-8) {
                std::ostringstream what;
                what << "objective gap " << std::abs(closed - oracle) << " at z=" << z
                     << " r=" << r;
                c.require(false, what.str());
                return c;
            }
        }
    }
    const double elapsed = seconds_since(start);
    std::ostringstream what;
    what << "runtime " << elapsed << "s exceeds 10s";
    c.require(elapsed < 10.0, what.str());
    return c;
}

Check criterion2() {
    Check c;
    for (double r : {1.5, 2.0, 4.0, 9.0}) {
        c.require(laad_delta(r, r) < 0.0, "Delta(r|r) not negative at r=" + std::to_string(r));
        c.require(laad_delta(2.0 * std::sqrt(r) - 1.0, r) > 0.0,
                  "Delta(2*sqrt(r)-1|r) not positive at r=" + std::to_string(r));
        const double root = laad_threshold(r);
        const double residual = std::abs(laad_delta(root, r));
        std::ostringstream what;
        what << "|Delta(z*)| = " << residual << " at r=" << r;
        c.require(residual <= 1e-12, what.str());
    }
    return c;
}

Check criterion3() {
    Check c;
    Rng rng(314159);
    int violations = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 50, p = 10;
        Eigen::MatrixXd X(n, p);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < p; ++j) X(i, j) = rng.next_normal();
        for (int j = 0; j < p; ++j) X.col(j) /= X.col(j).norm();
        Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
        for (int j = 0; j < p; j += 3) beta[j] = 3.0 * rng.next_normal();
        Eigen::VectorXd y = X * beta;
        for (int i = 0; i < n; ++i) y[i] += 0.5 * rng.next_normal();
        Dataset data{X, y, {}};

        const double r = 0.05 + 0.95 * rng.next_uniform();
        const PenaltySpec spec = PenaltySpec::laad(r);
        CdOptions opts;
        opts.tol = 1e-10;
        const FitResult fit = coordinate_descent(data, spec, Eigen::VectorXd::Ones(p), opts);

        for (std::size_t s = 1; s < fit.objective_trace.size(); ++s)
            if (fit.objective_trace[s] > fit.objective_trace[s - 1] + 1e-12) ++violations;

        const Eigen::VectorXd resid = y - X * fit.coefficients;
        for (int j = 0; j < p; ++j) {
            const double z = X.col(j).dot(resid) + fit.coefficients[j];
            if (std::abs(fit.coefficients[j] - prox(z, spec)) > 1e-8) ++violations;
        }
    }
    std::ostringstream what;
    what << violations << " descent/fixed-point violations";
    c.require(violations == 0, what.str());
    return c;
}

Check criterion4() {
    Check c;
    const auto triangles = load_triangles_csv(kTriangles);
    const auto gl = fit_cross_classified(triangles[0]);
    const auto close = [&](double got, double want, const std::string& name) {
        std::ostringstream what;
        what << name << " = " << got << " vs " << want;
        c.require(std::abs(got - want) <= 1e-3, what.str());
    };
    close(gl.gamma, 11.382, "gamma");
    close(gl.delta[1], 0.789, "delta2");
    close(gl.delta[9], 1.936, "delta10");
    close(gl.alpha[1], 0.168, "alpha2");
    return c;
}

Check criterion5() {
    Check c;
    const auto triangles = load_triangles_csv(kTriangles);
    const auto design = build_design(link_ratios(triangles), 2);
    const auto table = fit_reserving(design, ReserveModel::Unconstrained);
    const double gl[] = {2.2022, 1.5681, 1.3108, 1.1723, 1.1569, 1.0465, 1.0512, 1.0106, 1.0147};
    const double oc[] = {1.2975, 1.1052, 1.0792, 1.0352, 1.0298, 0.9959, 1.0024, 0.9929, 0.9589};
    for (int lag = 2; lag <= 10; ++lag) {
        std::ostringstream what;
        what << "lag " << lag << ": GL " << table.factor(1, lag) << " OC " << table.factor(2, lag);
        c.require(std::abs(table.factor(1, lag) - gl[lag - 2]) <= 5e-4 &&
                      std::abs(table.factor(2, lag) - oc[lag - 2]) <= 5e-4,
                  what.str());
    }
    return c;
}

Check criterion6() {
    Check c;
    const auto triangles = load_triangles_csv(kTriangles);
    const auto design = build_design(link_ratios(triangles), 2);
    const auto table = fit_reserving(design, ReserveModel::Laad, kPaperR);

    {
        std::ostringstream what;
        what << "GL exp(zeta2) = " << table.factor(1, 2) << " vs 2.3006 +/- 0.02";
        c.require(std::abs(table.factor(1, 2) - 2.3006) <= 0.02, what.str());
    }
    // Zero pattern: GL zeta9, zeta10 = 0; OC zeta7..zeta10 = 0; everything
    // earlier stays nonzero.
    const auto zero = [&](int line, int lag) { return table.zeta_at(line, lag) == 0.0; };
    for (int lag = 2; lag <= 8; ++lag)
        c.require(!zero(1, lag), "GL zeta" + std::to_string(lag) + " unexpectedly zero");
    for (int lag = 9; lag <= 10; ++lag)
        c.require(zero(1, lag), "GL zeta" + std::to_string(lag) + " nonzero");
    for (int lag = 2; lag <= 6; ++lag)
        c.require(!zero(2, lag), "OC zeta" + std::to_string(lag) + " unexpectedly zero");
    for (int lag = 7; lag <= 10; ++lag)
        c.require(zero(2, lag), "OC zeta" + std::to_string(lag) + " nonzero");
    return c;
}

Check criterion7() {
    Check c;
    const auto triangles = load_triangles_csv(kTriangles);
    const auto design = build_design(link_ratios(triangles), 2);
    const auto table = fit_reserving(design, ReserveModel::Laad, kPaperR);
    const auto pred = predict_next_diagonal(triangles, table);

    const auto rel = [&](double got, double want, double tol, const std::string& name) {
        std::ostringstream what;
        what << name << " = " << got << " vs " << want << " (" << 100.0 * (got - want) / want
             << "%)";
        c.require(std::abs(got - want) / want <= tol, what.str());
    };
    rel(pred.line_totals.at("GL"), 800836.0, 0.01, "GL total");
    rel(pred.line_totals.at("OC"), 302046.0, 0.01, "OC total");

    const auto actuals = actual_incrementals(triangles, load_diagonal_csv(kDiagonal));
    const auto metrics = validate(pred, actuals);
    rel(metrics.at("GL").rmse, 37279.38, 0.02, "GL RMSE");
    rel(metrics.at("GL").mae, 27464.62, 0.02, "GL MAE");
    rel(metrics.at("OC").rmse, 8299.45, 0.02, "OC RMSE");
    rel(metrics.at("OC").mae, 5557.39, 0.02, "OC MAE");
    return c;
}

Check criterion8() {
    Check c;
    const auto start = std::chrono::steady_clock::now();
    const auto triangles = load_triangles_csv(kTriangles);
    const auto design = build_design(link_ratios(triangles), 2);
    const double actual_gl = 875659.0, actual_oc = 294690.0;

    struct ModelRun {
        ReserveModel model;
        double strength;
        double table7_gl;
        double table7_oc;
    };
    // Penalized strengths: the LAAD strength is the published optimum; the
    // lasso/scad/mcp strengths are selected by seeded cross-validation on this
    // design (the source article does not state its values). The CV minimizer
    // is used rather than the one-SE point: the published fits show mild
    // shrinkage, and the heavier one-SE choice changes the model family being
    // exercised rather than the bootstrap machinery under test.
    const auto cv_strength = [&](ReserveModel model) {
        PenaltySpec spec;
        switch (model) {
            case ReserveModel::Lasso: spec = PenaltySpec::lasso(1.0); break;
            case ReserveModel::Scad: spec = PenaltySpec::scad(1.0); break;
            default: spec = PenaltySpec::mcp(1.0); break;
        }
        const auto grid = default_strength_grid(design.dataset, spec, design.weights, 50);
        return kfold_cv(design.dataset, spec, design.weights, grid, 5, 20260808).r_min;
    };
    const std::vector<ModelRun> runs = {
        {ReserveModel::Unconstrained, 0.0, 915495.0, 272051.0},
        {ReserveModel::Best, 0.0, 832154.0, 260290.0},
        {ReserveModel::Lasso, cv_strength(ReserveModel::Lasso), 742714.0, 319670.0},
        {ReserveModel::Scad, cv_strength(ReserveModel::Scad), 825710.0, 267454.0},
        {ReserveModel::Mcp, cv_strength(ReserveModel::Mcp), 823791.0, 269979.0},
        {ReserveModel::Laad, kPaperR, 800836.0, 302046.0},
    };

    for (const auto& run : runs) {
        const auto summaries =
            bootstrap_reserve(design, triangles, run.model, run.strength, 1000, 20260808);
        const auto& gl = summaries[0];
        const auto& oc = summaries[1];
        const std::string name = to_string(run.model);
        {
            std::ostringstream what;
            what << name << " GL interval [" << gl.lower95 << ", " << gl.upper95
                 << "] misses actual " << actual_gl;
            c.require(gl.lower95 <= actual_gl && actual_gl <= gl.upper95, what.str());
        }
        {
            std::ostringstream what;
            what << name << " OC interval [" << oc.lower95 << ", " << oc.upper95
                 << "] misses actual " << actual_oc;
            c.require(oc.lower95 <= actual_oc && actual_oc <= oc.upper95, what.str());
        }
        {
            std::ostringstream what;
            what << name << " GL mean " << gl.mean << " vs " << run.table7_gl << " ("
                 << 100.0 * (gl.mean - run.table7_gl) / run.table7_gl << "%)";
            c.require(std::abs(gl.mean - run.table7_gl) / run.table7_gl <= 0.05, what.str());
        }
        {
            std::ostringstream what;
            what << name << " OC mean " << oc.mean << " vs " << run.table7_oc << " ("
                 << 100.0 * (oc.mean - run.table7_oc) / run.table7_oc << "%)";
            c.require(std::abs(oc.mean - run.table7_oc) / run.table7_oc <= 0.05, what.str());
        }
    }
    const double elapsed = seconds_since(start);
    std::ostringstream what;
    what << "runtime " << elapsed << "s exceeds 120s";
    c.require(elapsed < 120.0, what.str());
    return c;
}

Check criterion9() {
    Check c;
    Rng rng(271828);

    // Unpenalized edf equals the column count.
    {
        Eigen::MatrixXd X(30, 6);
        for (int i = 0; i < 30; ++i)
            for (int j = 0; j < 6; ++j) X(i, j) = rng.next_normal();
        Eigen::VectorXd y(30);
        for (int i = 0; i < 30; ++i) y[i] = rng.next_normal();
        const Dataset data{std::move(X), std::move(y), {}};
        const double edf = empirical_edf(data, PenaltySpec::none(), Eigen::VectorXd::Ones(6));
        std::ostringstream what;
        what << "unpenalized edf " << edf << " vs 6";
        c.require(std::abs(edf - 6.0) <= 1e-6, what.str());
    }

    // Lasso edf within 1.0 of the nonzero count on 20 random problems.
    int bad = 0;
    for (int t = 0; t < 20; ++t) {
        Eigen::MatrixXd X(40, 6);
        for (int i = 0; i < 40; ++i)
            for (int j = 0; j < 6; ++j) X(i, j) = rng.next_normal();
        Eigen::VectorXd beta = Eigen::VectorXd::Zero(6);
        beta[0] = 3.0;
        beta[3] = -2.5;
        Eigen::VectorXd y = X * beta;
        for (int i = 0; i < 40; ++i) y[i] += 0.5 * rng.next_normal();
        const Dataset data{std::move(X), std::move(y), {}};
        const PenaltySpec spec = PenaltySpec::lasso(1.0);
        const FitResult fit = coordinate_descent(data, spec, Eigen::VectorXd::Ones(6));
        const double edf = empirical_edf(data, spec, Eigen::VectorXd::Ones(6));
        if (std::abs(edf - fit.nonzero_count()) > 1.0) ++bad;
    }
    {
        std::ostringstream what;
        what << bad << " of 20 lasso problems off by more than 1.0";
        c.require(bad == 0, what.str());
    }

    // Reserving LAAD edf at the published strength.
    {
        const auto design = build_design(link_ratios(load_triangles_csv(kTriangles)), 2);
        const double edf =
            empirical_edf(design.dataset, PenaltySpec::laad(kPaperR), design.weights);
        std::ostringstream what;
        what << "reserving edf " << edf << " vs 12.105 +/- 2";
        c.require(std::abs(edf - 12.105) <= 2.0, what.str());
    }
    return c;
}

Check criterion10() {
    Check c;
    const auto start = std::chrono::steady_clock::now();

    SimConfig config;
    config.n = 1000;
    config.reps = 20;
    config.seed = 20260808;
    config.models = {SimModel::Full, SimModel::Reduced, SimModel::Lasso, SimModel::Laad};
    const SimReport report = run_sim_study(config);

    const auto by_model = [&](SimModel m) -> const SimModelReport& {
        for (const auto& r : report.models)
            if (r.model == m) return r;
        throw std::logic_error("model missing from report");
    };
    int x1x6 = -1;
    for (std::size_t j = 0; j < report.coef_names.size(); ++j)
        if (report.coef_names[j] == "x1:x6") x1x6 = static_cast<int>(j);

    {
        const double bias = by_model(SimModel::Reduced).bias[static_cast<std::size_t>(x1x6)];
        std::ostringstream what;
        what << "reduced-model x1:x6 bias " << bias << " != 10";
        c.require(bias == 10.0, what.str());
    }
    {
        const auto& laad = by_model(SimModel::Laad);
        const auto& lasso = by_model(SimModel::Lasso);
        const auto& full = by_model(SimModel::Full);
        std::ostringstream what;
        what << "L1: laad " << laad.mean_l1_diff << " vs lasso " << lasso.mean_l1_diff;
        c.require(laad.mean_l1_diff < lasso.mean_l1_diff, what.str());
        std::ostringstream what2;
        what2 << "L0: laad " << laad.mean_l0_diff << " vs full " << full.mean_l0_diff;
        c.require(laad.mean_l0_diff < full.mean_l0_diff, what2.str());
    }
    {
        const auto& full = by_model(SimModel::Full);
        int bad = 0;
        for (std::size_t j = 0; j < full.bias.size(); ++j)
            if (std::abs(full.bias[j]) >= 3.0 * full.rmse[j] / std::sqrt(20.0)) ++bad;
        std::ostringstream what;
        what << bad << " coefficients with |bias| >= 3*rmse/sqrt(reps)";
        c.require(bad == 0, what.str());
    }
    const double elapsed = seconds_since(start);
    std::ostringstream what;
    what << "runtime " << elapsed << "s exceeds 300s";
    c.require(elapsed < 300.0, what.str());
    return c;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        std::string name;
        std::function<Check()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "prox-oracle equivalence on the z grid", criterion1},
        {2, "selection-threshold boundary facts and root residual", criterion2},
        {3, "coordinate-descent descent and fixed point (r <= 1)", criterion3},
        {4, "cross-classified GL estimates", criterion4},
        {5, "unconstrained development factors, both lines", criterion5},
        {6, "LAAD factors at r = log(1.005261): level and zero pattern", criterion6},
        {7, "LAAD next-year prediction totals and validation metrics", criterion7},
        {8, "bootstrap containment and mean consistency, six models", criterion8},
        {9, "effective degrees of freedom", criterion9},
        {10, "simulation-study properties", criterion10},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        Check result;
        try {
            result = criterion.run();
        } catch (const std::exception& e) {
            result.pass = false;
            result.detail << "exception: " << e.what();
        }
        const std::string detail = result.detail.str();
        std::cout << (result.pass ? "[PASS]" : "[FAIL]") << " criterion " << criterion.id
                  << ": " << criterion.name;
        if (!detail.empty()) std::cout << " -- " << detail;
        std::cout << "\n" << std::flush;
        if (!result.pass) ++failures;
    }
    if (failures == 0)
        std::cout << "ALL CRITERIA PASSED\n";
    else
        std::cout << failures << " CRITERIA FAILED\n";
    return failures;
}

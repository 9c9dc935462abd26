// Command-line front end: triangle ingestion, model fitting, cross-validation,
// prediction, bootstrap, the simulation study, and curve-data emission.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "laad/bootstrap.hpp"
#include "laad/model_select.hpp"
#include "laad/penalty.hpp"
#include "laad/report_io.hpp"
#include "laad/reserving.hpp"
#include "laad/simulation.hpp"
#include "laad/triangle.hpp"

namespace {

using namespace laad;

std::string default_out_dir() {
    if (const char* env = std::getenv("LAAD_OUT_DIR")) return env;
    return ".";
}

struct CommonArgs {
    std::string out_dir = default_out_dir();
    std::string format = "csv";

    bool json() const { return format == "json"; }
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--out", args.out_dir, "Output directory (default $LAAD_OUT_DIR or .)");
    cmd->add_option("--format", args.format,
                    "Console output format: csv (tables) or json (machine-readable)")
        ->check(CLI::IsMember({"csv", "json"}));
}

std::string out_path(const CommonArgs& args, const std::string& name) {
    std::filesystem::create_directories(args.out_dir);
    return (std::filesystem::path(args.out_dir) / name).string();
}

struct StrengthArgs {
    double strength = -1.0;
    bool use_cv = false;
    int k = 5;
    std::uint64_t seed = 1;
    int grid_size = 50;
};

void add_strength(CLI::App* cmd, StrengthArgs& args, bool require_seed) {
    auto* s = cmd->add_option("--strength", args.strength, "Fixed penalty strength");
    auto* c = cmd->add_flag("--cv", args.use_cv, "Select strength by k-fold cross-validation");
    s->excludes(c);
    c->excludes(s);
    cmd->add_option("--k", args.k, "Cross-validation folds")->check(CLI::PositiveNumber);
    auto* seed =
        cmd->add_option("--seed", args.seed, "Random seed (required for stochastic commands)");
    if (require_seed)
        seed->required();
    else
        c->needs(seed);  // cross-validation shuffles folds, so it needs a seed
    cmd->add_option("--grid-size", args.grid_size, "Strength grid size for CV");
}

PenaltySpec spec_for(ReserveModel model, double strength) {
    switch (model) {
        case ReserveModel::Lasso: return PenaltySpec::lasso(strength);
        case ReserveModel::Scad: return PenaltySpec::scad(strength);
        case ReserveModel::Mcp: return PenaltySpec::mcp(strength);
        case ReserveModel::Laad: return PenaltySpec::laad(strength);
        default: return PenaltySpec::none();
    }
}

bool is_penalized(ReserveModel model) {
    return model == ReserveModel::Lasso || model == ReserveModel::Scad ||
           model == ReserveModel::Mcp || model == ReserveModel::Laad;
}

// Resolves the strength to use: fixed, or CV-selected on the reserving design.
double resolve_strength(const ReserveDesign& design, ReserveModel model,
                        const StrengthArgs& args) {
    if (!is_penalized(model)) return 0.0;
    if (!args.use_cv) {
        if (args.strength < 0.0)
            throw CLI::ValidationError("--strength or --cv is required for penalized models");
        return args.strength;
    }
    const PenaltySpec spec = spec_for(model, 1.0);
    const auto grid =
        default_strength_grid(design.dataset, spec, design.weights, args.grid_size);
    const CvResult cv =
        kfold_cv(design.dataset, spec, design.weights, grid, args.k, args.seed);
    return cv.r_selected;
}

int run_fit(const std::string& triangles_path, const std::string& model_name,
            StrengthArgs& strength_args, const CommonArgs& common) {
    const auto triangles = load_triangles_csv(triangles_path);
    const auto model = reserve_model_from_string(model_name);
    const auto design = build_design(link_ratios(triangles), static_cast<int>(triangles.size()));
    const double strength = resolve_strength(design, model, strength_args);
    const DevFactorTable factors = fit_reserving(design, model, strength);

    std::vector<CrossClassifiedFit> cc;
    std::vector<std::string> ids;
    for (const auto& tri : triangles) {
        cc.push_back(fit_cross_classified(tri));
        ids.push_back(tri.line_id);
    }

    write_text_file(out_path(common, "dev_factors.csv"), dev_factors_csv(factors));
    write_text_file(out_path(common, "cross_classified.csv"), cross_classified_csv(ids, cc));
    const std::string summary = reserving_summary_json(model, strength, factors, nullptr, nullptr);
    write_text_file(out_path(common, "summary.json"), summary);
    if (common.json()) {
        std::cout << summary << "\n";
    } else {
        std::cout << "model=" << to_string(model) << " strength=" << strength
                  << " sigma2=" << factors.sigma2_hat << "\n";
        std::cout << dev_factors_csv(factors);
    }
    return 0;
}

int run_cv(const std::string& triangles_path, const std::string& model_name,
           StrengthArgs& args, const CommonArgs& common) {
    const auto triangles = load_triangles_csv(triangles_path);
    const auto model = reserve_model_from_string(model_name);
    if (!is_penalized(model)) throw CLI::ValidationError("cv requires a penalized model");
    const auto design = build_design(link_ratios(triangles), static_cast<int>(triangles.size()));
    const PenaltySpec spec = spec_for(model, 1.0);
    const auto grid = default_strength_grid(design.dataset, spec, design.weights, args.grid_size);
    const CvResult cv = kfold_cv(design.dataset, spec, design.weights, grid, args.k, args.seed);
    write_text_file(out_path(common, "cv_grid.csv"), cv_grid_csv(cv, args.seed));

    // Effective-degrees-of-freedom curve along the grid (edf, nonzero count,
    // scaled CV RMSE per strength).
    std::ostringstream edf_csv;
    edf_csv << provenance_comment(args.seed, static_cast<long long>(cv.grid.size()));
    edf_csv << "strength,edf,nonzero,cv_rmse_scaled\n";
    edf_csv.precision(10);
    double min_rmse = cv.cv_rmse_mean[0], max_rmse = cv.cv_rmse_mean[0];
    for (double m : cv.cv_rmse_mean) {
        min_rmse = std::min(min_rmse, m);
        max_rmse = std::max(max_rmse, m);
    }
    const double span = max_rmse > min_rmse ? max_rmse - min_rmse : 1.0;
    for (std::size_t g = 0; g < cv.grid.size(); ++g) {
        PenaltySpec at = spec;
        at.strength = cv.grid[g];
        const double edf = empirical_edf(design.dataset, at, design.weights);
        const FitResult fit = coordinate_descent(design.dataset, at, design.weights);
        edf_csv << cv.grid[g] << "," << edf << "," << fit.nonzero_count() << ","
                << (cv.cv_rmse_mean[g] - min_rmse) / span << "\n";
    }
    write_text_file(out_path(common, "edf_curve.csv"), edf_csv.str());

    if (common.json())
        std::cout << cv_result_json(cv, args.seed) << "\n";
    else
        std::cout << "r_min=" << cv.r_min << " r_1se=" << cv.r_1se
                  << " r_selected=" << cv.r_selected << "\n";
    return 0;
}

int run_predict(const std::string& triangles_path, const std::string& actuals_path,
                const std::string& model_name, StrengthArgs& strength_args,
                const CommonArgs& common) {
    const auto triangles = load_triangles_csv(triangles_path);
    const auto model = reserve_model_from_string(model_name);
    const auto design = build_design(link_ratios(triangles), static_cast<int>(triangles.size()));
    const double strength = resolve_strength(design, model, strength_args);
    const DevFactorTable factors = fit_reserving(design, model, strength);
    const PredictionTable predictions = predict_next_diagonal(triangles, factors);

    std::optional<std::map<std::string, std::map<int, double>>> actuals;
    std::map<std::string, ValidationMetrics> metrics;
    if (!actuals_path.empty()) {
        const auto diagonal = load_diagonal_csv(actuals_path);
        actuals = actual_incrementals(triangles, diagonal);
        metrics = validate(predictions, *actuals);
        write_text_file(out_path(common, "validation.csv"), validation_csv(metrics));
    }
    write_text_file(out_path(common, "predictions.csv"),
                    predictions_csv(predictions, actuals ? &*actuals : nullptr));
    const std::string summary = reserving_summary_json(model, strength, factors, &predictions,
                                                       actuals ? &metrics : nullptr);
    write_text_file(out_path(common, "summary.json"), summary);
    if (common.json()) {
        std::cout << summary << "\n";
    } else {
        for (const auto& [line, total] : predictions.line_totals)
            std::cout << line << " total=" << total << "\n";
    }
    return 0;
}

int run_bootstrap(const std::string& triangles_path, const std::string& model_name,
                  StrengthArgs& strength_args, int S, const CommonArgs& common) {
    const auto triangles = load_triangles_csv(triangles_path);
    const auto model = reserve_model_from_string(model_name);
    const auto design = build_design(link_ratios(triangles), static_cast<int>(triangles.size()));
    const double strength = resolve_strength(design, model, strength_args);
    const auto summaries =
        bootstrap_reserve(design, triangles, model, strength, S, strength_args.seed);
    write_text_file(out_path(common, "bootstrap_summary.csv"),
                    bootstrap_summary_csv(summaries, model, strength_args.seed));
    write_text_file(out_path(common, "bootstrap_replicates.csv"),
                    bootstrap_replicates_csv(summaries, strength_args.seed));
    if (common.json()) {
        std::cout << bootstrap_summary_json(summaries, model, strength, strength_args.seed)
                  << "\n";
    } else {
        for (const auto& s : summaries)
            std::cout << s.line_id << " mean=" << s.mean << " lower95=" << s.lower95
                      << " upper95=" << s.upper95 << "\n";
    }
    return 0;
}

int run_simulate(int n, int reps, std::uint64_t seed, const std::string& models_csv,
                 const CommonArgs& common) {
    SimConfig config;
    config.n = n;
    config.reps = reps;
    config.seed = seed;
    if (!models_csv.empty()) {
        config.models.clear();
        std::stringstream ss(models_csv);
        std::string name;
        while (std::getline(ss, name, ',')) config.models.push_back(sim_model_from_string(name));
    }
    const SimReport report = run_sim_study(config);
    write_text_file(out_path(common, "sim_estimates.csv"), sim_estimates_csv(report));
    write_text_file(out_path(common, "sim_norms.csv"), sim_norms_csv(report));

    // Residual quantiles of the mains-only vs true-interactions fits on one
    // replicate, for QQ plotting.
    std::ostringstream qq;
    qq << provenance_comment(seed, n);
    qq << "model,p,theoretical_quantile,sample_quantile\n";
    qq.precision(10);
    for (const auto& [model, points] : residual_qq(n, seed))
        for (const auto& pt : points)
            qq << model << "," << pt.p << "," << pt.theoretical << "," << pt.sample << "\n";
    write_text_file(out_path(common, "sim_residual_quantiles.csv"), qq.str());

    std::cout << sim_norms_csv(report);
    return 0;
}

struct Range {
    double lo = 0.0, hi = 0.0, step = 0.0;
};

Range parse_range(const std::string& text) {
    Range r;
    char c1 = 0, c2 = 0;
    std::stringstream ss(text);
    ss >> r.lo >> c1 >> r.hi >> c2 >> r.step;
    if (!ss || c1 != ':' || c2 != ':' || !(r.step > 0.0) || !(r.lo <= r.hi))
        throw CLI::ValidationError("range must be lo:hi:step with step > 0");
    return r;
}

int run_curves(const std::string& kind, const std::string& penalty, double strength,
               const std::string& z_range, const std::string& r_range, double objective_z,
               const CommonArgs& common) {
    std::ostringstream out;
    out.precision(10);
    if (kind == "prox") {
        const Range zr = parse_range(z_range);
        out << "z,theta_hat\n";
        PenaltySpec spec{penalty_kind_from_string(penalty), strength};
        for (double z = zr.lo; z <= zr.hi + 1e-12; z += zr.step)
            out << z << "," << prox(z, spec) << "\n";
        write_text_file(out_path(common, "prox_curve.csv"), out.str());
    } else if (kind == "region") {
        // Zero/nonzero selection region of the LAAD minimizer over (r, z).
        const Range zr = parse_range(z_range);
        const Range rr = parse_range(r_range);
        out << "r,z,nonzero\n";
        for (double r = rr.lo; r <= rr.hi + 1e-12; r += rr.step)
            for (double z = zr.lo; z <= zr.hi + 1e-12; z += zr.step)
                out << r << "," << z << ","
                    << (r > 0.0 && laad_prox(z, r).theta_hat != 0.0 ? 1 : 0) << "\n";
        write_text_file(out_path(common, "selection_region.csv"), out.str());
    } else if (kind == "constraint") {
        // Level-set samples of the two-dimensional penalty p(b1) + p(b2) = c.
        const Range zr = parse_range(z_range);
        PenaltySpec spec{penalty_kind_from_string(penalty), strength};
        out << "beta1,beta2,penalty\n";
        for (double b1 = zr.lo; b1 <= zr.hi + 1e-12; b1 += zr.step)
            for (double b2 = zr.lo; b2 <= zr.hi + 1e-12; b2 += zr.step)
                out << b1 << "," << b2 << ","
                    << penalty_value_single(b1, spec) + penalty_value_single(b2, spec) << "\n";
        write_text_file(out_path(common, "constraint_region.csv"), out.str());
    } else if (kind == "objective") {
        // One-dimensional objective samples 0.5*(z-theta)^2 + p(theta) at the
        // anchor point z.
        const Range zr = parse_range(z_range);
        PenaltySpec spec{penalty_kind_from_string(penalty), strength};
        out << "theta,objective\n";
        for (double t = zr.lo; t <= zr.hi + 1e-12; t += zr.step)
            out << t << "," << prox_objective(objective_z, t, spec) << "\n";
        write_text_file(out_path(common, "objective_curve.csv"), out.str());
    } else {
        throw CLI::ValidationError("unknown curves kind: " + kind);
    }
    return 0;
}

// Generic tabular penalized regression on any CSV with a declared response.
int run_regress(const std::string& data_path, const std::string& response,
                const std::string& penalty, StrengthArgs& strength_args, bool intercept,
                const std::string& exempt_csv, const CommonArgs& common) {
    std::ifstream in(data_path);
    if (!in) throw CLI::ValidationError("cannot open " + data_path);
    std::string line;
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string field;
        if (header.empty()) {
            while (std::getline(ss, field, ',')) header.push_back(field);
            continue;
        }
        std::vector<double> row;
        while (std::getline(ss, field, ',')) {
            try {
                row.push_back(std::stod(field));
            } catch (const std::exception&) {
                std::ostringstream msg;
                msg << data_path << ":" << line_no << ": non-numeric field '" << field << "'";
                throw CLI::ValidationError(msg.str());
            }
        }
        if (row.size() != header.size()) {
            std::ostringstream msg;
            msg << data_path << ":" << line_no << ": expected " << header.size() << " fields";
            throw CLI::ValidationError(msg.str());
        }
        rows.push_back(std::move(row));
    }
    if (header.empty() || rows.empty()) throw CLI::ValidationError(data_path + ": no data");

    std::ptrdiff_t y_col = -1;
    for (std::size_t c = 0; c < header.size(); ++c)
        if (header[c] == response) y_col = static_cast<std::ptrdiff_t>(c);
    if (y_col < 0) throw CLI::ValidationError("response column not found: " + response);

    std::vector<std::string> exempt;
    {
        std::stringstream ss(exempt_csv);
        std::string name;
        while (std::getline(ss, name, ',')) exempt.push_back(name);
    }

    const auto n = static_cast<Eigen::Index>(rows.size());
    const auto p = static_cast<Eigen::Index>(header.size()) - 1 + (intercept ? 1 : 0);
    Dataset data;
    data.design.resize(n, p);
    data.response.resize(n);
    Eigen::VectorXd weights = Eigen::VectorXd::Ones(p);
    Eigen::Index c_out = 0;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (static_cast<std::ptrdiff_t>(c) == y_col) continue;
        for (Eigen::Index i = 0; i < n; ++i)
            data.design(i, c_out) = rows[static_cast<std::size_t>(i)][c];
        data.column_names.push_back(header[c]);
        for (const auto& e : exempt)
            if (e == header[c]) weights[c_out] = 0.0;
        ++c_out;
    }
    if (intercept) {
        data.design.col(c_out).setOnes();
        data.column_names.push_back("intercept");
        weights[c_out] = 0.0;
    }
    for (Eigen::Index i = 0; i < n; ++i)
        data.response[i] = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(y_col)];

    PenaltySpec spec{penalty_kind_from_string(penalty), 1.0};
    FitResult fit;
    double strength = 0.0;
    if (spec.kind == PenaltyKind::None) {
        fit = ols_fit(data);
    } else {
        if (strength_args.use_cv) {
            const auto grid =
                default_strength_grid(data, spec, weights, strength_args.grid_size);
            const CvResult cv = kfold_cv(data, spec, weights, grid, strength_args.k,
                                         strength_args.seed);
            strength = cv.r_selected;
        } else {
            if (strength_args.strength < 0.0)
                throw CLI::ValidationError("--strength or --cv required");
            strength = strength_args.strength;
        }
        spec.strength = strength;
        fit = coordinate_descent(data, spec, weights);
    }

    std::ostringstream out;
    out.precision(10);
    out << "column,coefficient\n";
    for (Eigen::Index j = 0; j < p; ++j)
        out << data.column_names[static_cast<std::size_t>(j)] << "," << fit.coefficients[j]
            << "\n";
    write_text_file(out_path(common, "coefficients.csv"), out.str());
    std::cout << "penalty=" << penalty << " strength=" << strength
              << " nonzero=" << fit.nonzero_count() << " sigma2=" << fit.sigma2_hat << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LAAD penalized least squares and loss-development toolkit"};
    app.require_subcommand(1);

    CommonArgs common;
    StrengthArgs strength_args;
    std::string triangles_path;
    std::string actuals_path;
    std::string model_name = "laad";

    auto* fit = app.add_subcommand("fit", "Fit development factors to triangles");
    fit->add_option("--triangles", triangles_path, "Triangle CSV")->required();
    fit->add_option("--model", model_name, "unconstrained|best|lasso|scad|mcp|laad")->required();
    add_strength(fit, strength_args, false);
    add_common(fit, common);

    auto* cv = app.add_subcommand("cv", "Cross-validate the penalty strength");
    cv->add_option("--triangles", triangles_path, "Triangle CSV")->required();
    cv->add_option("--model", model_name, "lasso|scad|mcp|laad")->required();
    add_strength(cv, strength_args, true);
    add_common(cv, common);

    auto* predict = app.add_subcommand("predict", "Predict the next calendar-year diagonal");
    predict->add_option("--triangles", triangles_path, "Triangle CSV")->required();
    predict->add_option("--actuals", actuals_path, "Validation diagonal CSV (optional)");
    predict->add_option("--model", model_name)->required();
    add_strength(predict, strength_args, false);
    add_common(predict, common);

    int S = 1000;
    auto* bootstrap = app.add_subcommand("bootstrap", "Bootstrap the unpaid-loss distribution");
    bootstrap->add_option("--triangles", triangles_path)->required();
    bootstrap->add_option("--model", model_name)->required();
    bootstrap->add_option("--S", S, "Number of replicates")->check(CLI::PositiveNumber);
    add_strength(bootstrap, strength_args, true);
    add_common(bootstrap, common);

    int sim_n = 100, sim_reps = 100;
    std::uint64_t sim_seed = 1;
    std::string sim_models;
    auto* simulate = app.add_subcommand("simulate", "Run the estimation benchmark study");
    simulate->add_option("--n", sim_n)->check(CLI::PositiveNumber);
    simulate->add_option("--reps", sim_reps)->check(CLI::PositiveNumber);
    simulate->add_option("--seed", sim_seed)->required();
    simulate->add_option("--models", sim_models, "Comma-separated subset of models");
    add_common(simulate, common);

    std::string curve_kind = "prox", curve_penalty = "laad";
    double curve_strength = 1.0, curve_z = 0.0;
    std::string z_range = "-5:5:0.01", r_range = "0.1:5:0.05";
    auto* curves = app.add_subcommand("curves", "Emit prox/region/constraint curve data");
    curves->add_option("--kind", curve_kind, "prox|region|constraint|objective");
    curves->add_option("--penalty", curve_penalty);
    curves->add_option("--r,--strength", curve_strength);
    curves->add_option("--z-range", z_range, "lo:hi:step");
    curves->add_option("--r-range", r_range, "lo:hi:step");
    curves->add_option("--z", curve_z, "Anchor point for the objective curve");
    add_common(curves, common);

    std::string regress_data, regress_response, regress_penalty = "laad", regress_exempt;
    bool regress_intercept = false;
    auto* regress = app.add_subcommand("regress", "Penalized regression on a generic CSV");
    regress->add_option("--data", regress_data)->required();
    regress->add_option("--response", regress_response)->required();
    regress->add_option("--penalty", regress_penalty, "none|ridge|lasso|scad|mcp|laad");
    regress->add_flag("--intercept", regress_intercept, "Add an unpenalized intercept");
    regress->add_option("--exempt", regress_exempt, "Comma-separated unpenalized columns");
    add_strength(regress, strength_args, false);
    add_common(regress, common);

    CLI11_PARSE(app, argc, argv);

    try {
        if (fit->parsed()) return run_fit(triangles_path, model_name, strength_args, common);
        if (cv->parsed()) return run_cv(triangles_path, model_name, strength_args, common);
        if (predict->parsed())
            return run_predict(triangles_path, actuals_path, model_name, strength_args, common);
        if (bootstrap->parsed())
            return run_bootstrap(triangles_path, model_name, strength_args, S, common);
        if (simulate->parsed())
            return run_simulate(sim_n, sim_reps, sim_seed, sim_models, common);
        if (curves->parsed())
            return run_curves(curve_kind, curve_penalty, curve_strength, z_range, r_range,
                              curve_z, common);
        if (regress->parsed())
            return run_regress(regress_data, regress_response, regress_penalty, strength_args,
                               regress_intercept, regress_exempt, common);
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

#include "laad/report_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "vendor_json.hpp"

namespace laad {

namespace {

std::ostringstream make_stream() {
    std::ostringstream out;
    out << std::setprecision(10);
    return out;
}

}  // namespace

std::string provenance_comment(std::uint64_t seed, long long draws) {
    std::ostringstream out;
    out << "# seed=" << seed << " draws=" << draws << " version=" << kVersion << "\n";
    return out.str();
}

std::string dev_factors_csv(const DevFactorTable& table) {
    auto out = make_stream();
    out << "lag";
    for (const auto& id : table.line_ids) out << "," << id;
    out << "\n";
    for (int lag = 2; lag <= table.max_lag; ++lag) {
        out << lag;
        for (std::size_t t = 0; t < table.line_ids.size(); ++t)
            out << "," << table.factor(static_cast<int>(t) + 1, lag);
        out << "\n";
    }
    out << "sigma2," << table.sigma2_hat;
    for (std::size_t t = 1; t < table.line_ids.size(); ++t) out << ",";
    out << "\n";
    return out.str();
}

std::string cross_classified_csv(const std::vector<std::string>& line_ids,
                                 const std::vector<CrossClassifiedFit>& fits) {
    auto out = make_stream();
    out << "parameter";
    for (const auto& id : line_ids) out << "," << id;
    out << "\n";
    const auto emit = [&](const std::string& name, auto getter) {
        out << name;
        for (const auto& fit : fits) out << "," << getter(fit);
        out << "\n";
    };
    emit("gamma", [](const CrossClassifiedFit& f) { return f.gamma; });
    if (fits.empty()) return out.str();
    for (std::size_t j = 1; j < fits[0].delta.size(); ++j)
        emit("delta" + std::to_string(j + 1),
             [j](const CrossClassifiedFit& f) { return f.delta[j]; });
    for (std::size_t i = 1; i < fits[0].alpha.size(); ++i)
        emit("alpha" + std::to_string(i + 1),
             [i](const CrossClassifiedFit& f) { return f.alpha[i]; });
    return out.str();
}

std::string predictions_csv(const PredictionTable& table,
                            const std::map<std::string, std::map<int, double>>* actuals) {
    auto out = make_stream();
    out << "line,accident_year,latest_cumulative,predicted_incremental";
    if (actuals) out << ",actual_incremental";
    out << "\n";
    for (const auto& row : table.rows) {
        out << row.line_id << "," << row.accident_year << "," << row.latest_cumulative << ","
            << row.predicted_incremental;
        if (actuals) out << "," << actuals->at(row.line_id).at(row.accident_year);
        out << "\n";
    }
    for (const auto& [line, total] : table.line_totals) {
        out << line << ",total,," << total;
        if (actuals) {
            double t = 0.0;
            for (const auto& [ay, v] : actuals->at(line)) {
                (void)ay;
                t += v;
            }
            out << "," << t;
        }
        out << "\n";
    }
    return out.str();
}

std::string validation_csv(const std::map<std::string, ValidationMetrics>& metrics) {
    auto out = make_stream();
    out << "line,rmse,mae\n";
    for (const auto& [line, m] : metrics) out << line << "," << m.rmse << "," << m.mae << "\n";
    return out.str();
}

std::string bootstrap_summary_csv(const std::vector<BootstrapSummary>& summaries,
                                  ReserveModel model, std::uint64_t seed) {
    auto out = make_stream();
    out << provenance_comment(seed, summaries.empty()
                                        ? 0
                                        : static_cast<long long>(summaries[0].replicates.size()));
    out << "model,line,mean,lower95,upper95,replicates\n";
    for (const auto& s : summaries)
        out << to_string(model) << "," << s.line_id << "," << s.mean << "," << s.lower95 << ","
            << s.upper95 << "," << s.replicates.size() << "\n";
    return out.str();
}

std::string bootstrap_replicates_csv(const std::vector<BootstrapSummary>& summaries,
                                     std::uint64_t seed) {
    auto out = make_stream();
    out << provenance_comment(seed, summaries.empty()
                                        ? 0
                                        : static_cast<long long>(summaries[0].replicates.size()));
    out << "line,replicate,unpaid_loss\n";
    for (const auto& s : summaries)
        for (std::size_t i = 0; i < s.replicates.size(); ++i)
            out << s.line_id << "," << (i + 1) << "," << s.replicates[i] << "\n";
    return out.str();
}

std::string cv_grid_csv(const CvResult& cv, std::uint64_t seed) {
    auto out = make_stream();
    out << provenance_comment(seed, static_cast<long long>(cv.grid.size()));
    out << "strength,cv_rmse_mean,cv_rmse_se\n";
    for (std::size_t g = 0; g < cv.grid.size(); ++g)
        out << cv.grid[g] << "," << cv.cv_rmse_mean[g] << "," << cv.cv_rmse_se[g] << "\n";
    out << "# r_min=" << cv.r_min << " r_1se=" << cv.r_1se << " r_selected=" << cv.r_selected
        << "\n";
    return out.str();
}

std::string sim_estimates_csv(const SimReport& report) {
    auto out = make_stream();
    out << provenance_comment(report.config.seed, report.config.reps);
    out << "coefficient";
    for (const auto& m : report.models) out << ",bias_" << to_string(m.model);
    for (const auto& m : report.models) out << ",rmse_" << to_string(m.model);
    out << "\n";
    for (std::size_t j = 0; j < report.coef_names.size(); ++j) {
        out << report.coef_names[j];
        for (const auto& m : report.models) out << "," << m.bias[j];
        for (const auto& m : report.models) out << "," << m.rmse[j];
        out << "\n";
    }
    return out.str();
}

std::string sim_norms_csv(const SimReport& report) {
    auto out = make_stream();
    out << provenance_comment(report.config.seed, report.config.reps);
    out << "model,mean_l1_diff,mean_l0_diff,avg_runtime_seconds,failures\n";
    for (const auto& m : report.models)
        out << to_string(m.model) << "," << m.mean_l1_diff << "," << m.mean_l0_diff << ","
            << m.avg_runtime_seconds << "," << m.failures << "\n";
    return out.str();
}

std::string reserving_summary_json(ReserveModel model, double strength,
                                   const DevFactorTable& factors,
                                   const PredictionTable* predictions,
                                   const std::map<std::string, ValidationMetrics>* metrics) {
    nlohmann::json j;
    j["schema_version"] = kJsonSchemaVersion;
    j["version"] = kVersion;
    j["model"] = to_string(model);
    j["strength"] = strength;
    j["sigma2_hat"] = factors.sigma2_hat;
    nlohmann::json jf = nlohmann::json::object();
    for (std::size_t t = 0; t < factors.line_ids.size(); ++t) {
        nlohmann::json lags = nlohmann::json::object();
        for (int lag = 2; lag <= factors.max_lag; ++lag)
            lags[std::to_string(lag)] = factors.factor(static_cast<int>(t) + 1, lag);
        jf[factors.line_ids[t]] = lags;
    }
    j["factors"] = jf;
    if (predictions) {
        nlohmann::json jp = nlohmann::json::array();
        for (const auto& row : predictions->rows)
            jp.push_back({{"line", row.line_id},
                          {"accident_year", row.accident_year},
                          {"latest_cumulative", row.latest_cumulative},
                          {"predicted_incremental", row.predicted_incremental}});
        j["predictions"] = jp;
        nlohmann::json jt = nlohmann::json::object();
        for (const auto& [line, total] : predictions->line_totals) jt[line] = total;
        j["line_totals"] = jt;
    }
    if (metrics) {
        nlohmann::json jm = nlohmann::json::object();
        for (const auto& [line, m] : *metrics) jm[line] = {{"rmse", m.rmse}, {"mae", m.mae}};
        j["validation"] = jm;
    }
    return j.dump(2);
}

std::string bootstrap_summary_json(const std::vector<BootstrapSummary>& summaries,
                                   ReserveModel model, double strength, std::uint64_t seed) {
    nlohmann::json j;
    j["schema_version"] = kJsonSchemaVersion;
    j["version"] = kVersion;
    j["model"] = to_string(model);
    j["strength"] = strength;
    j["seed"] = seed;
    j["replicates"] = summaries.empty() ? 0 : summaries[0].replicates.size();
    nlohmann::json lines = nlohmann::json::object();
    for (const auto& s : summaries)
        lines[s.line_id] = {{"mean", s.mean}, {"lower95", s.lower95}, {"upper95", s.upper95}};
    j["lines"] = lines;
    return j.dump(2);
}

std::string cv_result_json(const CvResult& cv, std::uint64_t seed) {
    nlohmann::json j;
    j["schema_version"] = kJsonSchemaVersion;
    j["version"] = kVersion;
    j["seed"] = seed;
    j["grid_size"] = cv.grid.size();
    j["r_min"] = cv.r_min;
    j["r_1se"] = cv.r_1se;
    j["r_selected"] = cv.r_selected;
    return j.dump(2);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace laad

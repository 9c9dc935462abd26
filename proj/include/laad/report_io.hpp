#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "laad/bootstrap.hpp"
#include "laad/model_select.hpp"
#include "laad/reserving.hpp"
#include "laad/simulation.hpp"

namespace laad {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kJsonSchemaVersion = 1;

/// Leading comment line stamped on stochastic outputs.
std::string provenance_comment(std::uint64_t seed, long long draws);

std::string dev_factors_csv(const DevFactorTable& table);
std::string cross_classified_csv(const std::vector<std::string>& line_ids,
                                 const std::vector<CrossClassifiedFit>& fits);
std::string predictions_csv(const PredictionTable& table,
                            const std::map<std::string, std::map<int, double>>* actuals);
std::string validation_csv(const std::map<std::string, ValidationMetrics>& metrics);
std::string bootstrap_summary_csv(const std::vector<BootstrapSummary>& summaries,
                                  ReserveModel model, std::uint64_t seed);
std::string bootstrap_replicates_csv(const std::vector<BootstrapSummary>& summaries,
                                     std::uint64_t seed);
std::string cv_grid_csv(const CvResult& cv, std::uint64_t seed);
std::string sim_estimates_csv(const SimReport& report);
std::string sim_norms_csv(const SimReport& report);

/// JSON summary of a reserving run (model, factors, predictions, metrics).
std::string reserving_summary_json(ReserveModel model, double strength,
                                   const DevFactorTable& factors,
                                   const PredictionTable* predictions,
                                   const std::map<std::string, ValidationMetrics>* metrics);

std::string bootstrap_summary_json(const std::vector<BootstrapSummary>& summaries,
                                   ReserveModel model, double strength, std::uint64_t seed);
std::string cv_result_json(const CvResult& cv, std::uint64_t seed);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace laad

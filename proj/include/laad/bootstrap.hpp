#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "laad/reserving.hpp"

namespace laad {

struct BootstrapSummary {
    std::string line_id;
    std::vector<double> replicates;  // unpaid-loss draws, one per replicate
    double mean = 0.0;
    double lower95 = 0.0;  // 2.5th percentile
    double upper95 = 0.0;  // 97.5th percentile
    std::uint64_t seed = 0;
};

struct BootstrapOptions {
    ReserveFitOptions fit;
    double max_failure_fraction = 0.05;  // abort above this
};

/// Parametric bootstrap of next-calendar-year unpaid loss. Per replicate:
/// simulate log c ~ N(zeta_hat, sigma2_hat) at every training index, refit the
/// same model spec, and predict sum_i (exp(zeta*_{I+2-i} + sigma2*/2) - 1) *
/// y_{i,I+1-i} per line. Replicate streams derive from (seed, replicate), so
/// the sequence is reproducible and order-independent. Failed replicate fits
/// are skipped; more than max_failure_fraction of them aborts.
std::vector<BootstrapSummary> bootstrap_reserve(const ReserveDesign& design,
                                                const std::vector<LossTriangle>& triangles,
                                                ReserveModel model, double strength, int S,
                                                std::uint64_t seed,
                                                const BootstrapOptions& opts = {});

}  // namespace laad

#include "laad/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "laad/rng.hpp"

namespace laad {

namespace {

double percentile(std::vector<double> sorted, double q) {
    // Linear interpolation between order statistics.
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double pos = q * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, n - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

std::vector<BootstrapSummary> bootstrap_reserve(const ReserveDesign& design,
                                                const std::vector<LossTriangle>& triangles,
                                                ReserveModel model, double strength, int S,
                                                std::uint64_t seed, const BootstrapOptions& opts) {
    if (S < 1) throw std::invalid_argument("bootstrap: need S >= 1");
    if (static_cast<int>(triangles.size()) != design.n_lines)
        throw std::invalid_argument("bootstrap: triangle count and design line count differ");

    const DevFactorTable base = fit_reserving(design, model, strength, opts.fit);
    const double sigma = std::sqrt(std::max(base.sigma2_hat, 0.0));

    // Known last-diagonal cumulatives y_{i, I+1-i} per line.
    std::vector<std::vector<std::pair<int, double>>> bases;
    for (const auto& tri : triangles) bases.push_back(tri.latest_diagonal());

    const auto n_rows = design.dataset.n_rows();
    std::vector<std::vector<double>> draws(triangles.size());
    int failures = 0;
    const int max_failures =
        static_cast<int>(std::floor(opts.max_failure_fraction * static_cast<double>(S)));

    for (int s = 0; s < S; ++s) {
        Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(s));
        Dataset sim = design.dataset;
        for (Eigen::Index r = 0; r < n_rows; ++r) {
            const auto& obs = design.rows[static_cast<std::size_t>(r)];
            const double mean = base.zeta_at(obs.line, obs.target_lag);
            sim.response[r] = mean + sigma * rng.next_normal();
        }
        ReserveDesign sim_design = design;
        sim_design.dataset = std::move(sim);
        try {
            const DevFactorTable refit = fit_reserving(sim_design, model, strength, opts.fit);
            for (std::size_t t = 0; t < triangles.size(); ++t) {
                const int line = static_cast<int>(t) + 1;
                const auto& tri = triangles[t];
                double unpaid = 0.0;
                for (const auto& [i, y] : bases[t]) {
                    const int next = std::min(tri.max_lag, tri.origin_count + 1 - i) + 1;
                    unpaid +=
                        (std::exp(refit.zeta_at(line, next) + 0.5 * refit.sigma2_hat) - 1.0) * y;
                }
                draws[t].push_back(unpaid);
            }
        } catch (const std::exception&) {
            ++failures;
            if (failures > max_failures) {
                std::ostringstream msg;
                msg << "bootstrap: " << failures << " of " << (s + 1)
                    << " replicate fits failed (limit "
                    << opts.max_failure_fraction * 100.0 << "%)";
                throw std::runtime_error(msg.str());
            }
        }
    }

    std::vector<BootstrapSummary> out;
    for (std::size_t t = 0; t < triangles.size(); ++t) {
        BootstrapSummary s;
        s.line_id = triangles[t].line_id;
        s.replicates = draws[t];
        s.seed = seed;
        double sum = 0.0;
        for (double v : s.replicates) sum += v;
        s.mean = sum / static_cast<double>(s.replicates.size());
        std::vector<double> sorted = s.replicates;
        std::sort(sorted.begin(), sorted.end());
        s.lower95 = percentile(sorted, 0.025);
        s.upper95 = percentile(std::move(sorted), 0.975);
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace laad

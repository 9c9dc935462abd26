#include "laad/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace laad {

void Dataset::validate() const {
    if (design.rows() < 1 || design.cols() < 1)
        throw std::invalid_argument("dataset: need at least one row and one column");
    if (design.rows() != response.size())
        throw std::invalid_argument("dataset: design rows and response length differ");
    if (!column_names.empty() &&
        static_cast<Eigen::Index>(column_names.size()) != design.cols())
        throw std::invalid_argument("dataset: column_names length and design columns differ");
    if (!design.allFinite() || !response.allFinite())
        throw std::invalid_argument("dataset: non-finite entries");
}

std::string Dataset::column_label(Eigen::Index j) const {
    if (!column_names.empty()) return column_names[static_cast<std::size_t>(j)];
    return "col" + std::to_string(j);
}

int FitResult::nonzero_count() const {
    int k = 0;
    for (bool b : nonzero_mask) k += b ? 1 : 0;
    return k;
}

std::pair<Dataset, Eigen::VectorXd> normalize_columns(const Dataset& data) {
    data.validate();
    Dataset out = data;
    Eigen::VectorXd scales(data.n_cols());
    for (Eigen::Index j = 0; j < data.n_cols(); ++j) {
        const double norm = data.design.col(j).norm();
        if (!(norm > 0.0))
            throw std::invalid_argument("normalize_columns: zero-norm column " +
                                        data.column_label(j));
        scales[j] = norm;
        out.design.col(j) /= norm;
    }
    return {std::move(out), std::move(scales)};
}

namespace {

double finish_sigma2(double rss, Eigen::Index n, int k, Sigma2Estimator kind) {
    if (kind == Sigma2Estimator::DfAdjusted && n > k)
        return rss / static_cast<double>(n - k);
    return rss / static_cast<double>(n);
}

void fill_mask(FitResult& fit) {
    fit.nonzero_mask.assign(static_cast<std::size_t>(fit.coefficients.size()), false);
    for (Eigen::Index j = 0; j < fit.coefficients.size(); ++j)
        fit.nonzero_mask[static_cast<std::size_t>(j)] = fit.coefficients[j] != 0.0;
}

}  // namespace

FitResult coordinate_descent(const Dataset& data, const PenaltySpec& spec,
                             const Eigen::VectorXd& weights, const CdOptions& opts) {
    data.validate();
    spec.validate();
    const Eigen::Index n = data.n_rows();
    const Eigen::Index p = data.n_cols();
    if (weights.size() != p)
        throw std::invalid_argument("coordinate_descent: weights length must equal column count");
    if (weights.minCoeff() < 0.0)
        throw std::invalid_argument("coordinate_descent: weights must be nonnegative");
    if (!(opts.tol > 0.0)) throw std::invalid_argument("coordinate_descent: tol must be positive");

    // Normalize internally; zero-norm columns stay out of the sweep with a
    // pinned zero coefficient (they cannot be identified).
    Eigen::MatrixXd X = data.design;
    Eigen::VectorXd scale(p);
    std::vector<bool> dead(static_cast<std::size_t>(p), false);
    for (Eigen::Index j = 0; j < p; ++j) {
        const double norm = X.col(j).norm();
        if (norm > 0.0) {
            scale[j] = norm;
            X.col(j) /= norm;
        } else {
            scale[j] = 1.0;
            dead[static_cast<std::size_t>(j)] = true;
        }
    }
    const Eigen::VectorXd& y = data.response;

    // Normalized-scale coefficients.
    Eigen::VectorXd beta(p);
    if (opts.init) {
        if (opts.init->size() != p)
            throw std::invalid_argument("coordinate_descent: init length must equal column count");
        beta = opts.init->cwiseProduct(scale);
    } else {
        // Least-squares start (Algorithm 1's OLS initializer); QR handles
        // rank-deficient designs by leaving redundant directions at zero.
        beta = X.colPivHouseholderQr().solve(y);
    }
    for (Eigen::Index j = 0; j < p; ++j)
        if (dead[static_cast<std::size_t>(j)]) beta[j] = 0.0;

    FitResult fit;
    bool warn = false;
    for (Eigen::Index j = 0; j < p; ++j) {
        if (dead[static_cast<std::size_t>(j)] || weights[j] == 0.0) continue;
        const double eff = opts.penalize_original_scale
                               ? spec.strength * weights[j] / (scale[j] * scale[j])
                               : spec.strength * weights[j];
        if (spec.kind == PenaltyKind::Laad && eff > 1.0) warn = true;
    }
    fit.laad_strength_warning = warn;

    Eigen::VectorXd resid = y - X * beta;
    const auto objective = [&](void) {
        double pen = 0.0;
        for (Eigen::Index j = 0; j < p; ++j) {
            if (weights[j] == 0.0) continue;
            const double coef = opts.penalize_original_scale ? beta[j] / scale[j] : beta[j];
            pen += weights[j] * penalty_value_single(coef, spec);
        }
        return 0.5 * resid.squaredNorm() + pen;
    };

    int sweep = 0;
    bool converged = false;
    for (; sweep < opts.max_sweeps; ++sweep) {
        double max_change = 0.0;
        for (Eigen::Index j = 0; j < p; ++j) {
            if (dead[static_cast<std::size_t>(j)]) continue;
            const double old = beta[j];
            if (old != 0.0) resid += X.col(j) * old;
            const double z = X.col(j).dot(resid);
            double next;
            if (weights[j] == 0.0) {
                next = z;  // exempt coordinate: plain least-squares update
            } else if (opts.penalize_original_scale) {
                // Penalty on beta_j / scale_j; same problem in rescaled
                // coordinates: s * prox(z/s, strength*w/s^2).
                const double s = scale[j];
                next = s * prox(z / s, spec.scaled(weights[j] / (s * s)));
            } else {
                next = prox(z, spec.scaled(weights[j]));
            }
            if (!std::isfinite(next)) {
                std::ostringstream msg;
                msg << "coordinate_descent: non-finite update for column "
                    << data.column_label(j) << " at sweep " << sweep;
                throw std::runtime_error(msg.str());
            }
            beta[j] = next;
            if (next != 0.0) resid -= X.col(j) * next;
            max_change = std::max(max_change, std::abs(next - old));
        }
        fit.objective_trace.push_back(objective());
        if (max_change <= opts.tol) {
            converged = true;
            ++sweep;
            break;
        }
    }

    fit.n_iter = sweep;
    fit.converged = converged;
    fit.coefficients = beta.cwiseQuotient(scale);
    fill_mask(fit);
    fit.sigma2_hat = finish_sigma2(resid.squaredNorm(), n, fit.nonzero_count(), opts.sigma2);
    return fit;
}

FitResult ols_fit(const Dataset& data, Sigma2Estimator sigma2) {
    data.validate();
    const Eigen::Index n = data.n_rows();
    const Eigen::Index p = data.n_cols();

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(data.design);
    qr.setThreshold(1e-10);
    if (qr.rank() < p) {
        // The permutation's tail names the columns that add no new direction.
        std::ostringstream msg;
        msg << "ols_fit: rank-deficient design (rank " << qr.rank() << " of " << p
            << "); dependent columns:";
        const auto perm = qr.colsPermutation().indices();
        for (Eigen::Index k = qr.rank(); k < p; ++k)
            msg << " " << data.column_label(perm[k]);
        throw std::invalid_argument(msg.str());
    }

    FitResult fit;
    fit.coefficients = qr.solve(data.response);
    fit.converged = true;
    fit.n_iter = 1;
    fill_mask(fit);
    const double rss = (data.response - data.design * fit.coefficients).squaredNorm();
    fit.sigma2_hat = finish_sigma2(rss, n, static_cast<int>(p), sigma2);
    return fit;
}

FitResult forward_bic(const Dataset& data, const std::vector<Eigen::Index>& always_in,
                      Sigma2Estimator sigma2) {
    data.validate();
    const Eigen::Index n = data.n_rows();
    const Eigen::Index p = data.n_cols();
    for (Eigen::Index j : always_in)
        if (j < 0 || j >= p) throw std::invalid_argument("forward_bic: always_in index out of range");

    std::vector<bool> in(static_cast<std::size_t>(p), false);
    std::vector<Eigen::Index> selected;
    for (Eigen::Index j : always_in) {
        if (!in[static_cast<std::size_t>(j)]) {
            in[static_cast<std::size_t>(j)] = true;
            selected.push_back(j);
        }
    }

    const auto rss_for = [&](const std::vector<Eigen::Index>& cols) {
        if (cols.empty()) return data.response.squaredNorm();
        Eigen::MatrixXd sub(n, static_cast<Eigen::Index>(cols.size()));
        for (std::size_t c = 0; c < cols.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = data.design.col(cols[c]);
        const Eigen::VectorXd b = sub.colPivHouseholderQr().solve(data.response);
        return (data.response - sub * b).squaredNorm();
    };
    const auto bic = [&](double rss, std::size_t k) {
        return static_cast<double>(n) *
                   std::log(std::max(rss, 1e-300) / static_cast<double>(n)) +
               static_cast<double>(k) * std::log(static_cast<double>(n));
    };

    double best_bic = bic(rss_for(selected), selected.size());
    while (static_cast<Eigen::Index>(selected.size()) < p) {
        Eigen::Index best_j = -1;
        double best_rss = 0.0;
        for (Eigen::Index j = 0; j < p; ++j) {
            if (in[static_cast<std::size_t>(j)]) continue;
            auto trial = selected;
            trial.push_back(j);
            const double rss = rss_for(trial);
            if (best_j < 0 || rss < best_rss) {
                best_j = j;
                best_rss = rss;
            }
        }
        if (best_j < 0) break;
        const double cand = bic(best_rss, selected.size() + 1);
        if (cand >= best_bic) break;
        selected.push_back(best_j);
        in[static_cast<std::size_t>(best_j)] = true;
        best_bic = cand;
    }

    FitResult fit;
    fit.coefficients = Eigen::VectorXd::Zero(p);
    if (!selected.empty()) {  // refit by OLS on the selected set
        Eigen::MatrixXd sub(n, static_cast<Eigen::Index>(selected.size()));
        std::vector<std::string> sub_names;
        for (std::size_t c = 0; c < selected.size(); ++c) {
            sub.col(static_cast<Eigen::Index>(c)) = data.design.col(selected[c]);
            sub_names.push_back(data.column_label(selected[c]));
        }
        Dataset subset{std::move(sub), data.response, std::move(sub_names)};
        const FitResult refit = ols_fit(subset, sigma2);
        for (std::size_t c = 0; c < selected.size(); ++c)
            fit.coefficients[selected[c]] = refit.coefficients[static_cast<Eigen::Index>(c)];
    }
    fit.converged = true;
    fit.n_iter = static_cast<int>(selected.size());
    fill_mask(fit);
    const double rss = (data.response - data.design * fit.coefficients).squaredNorm();
    fit.sigma2_hat = finish_sigma2(rss, n, fit.nonzero_count(), sigma2);
    return fit;
}

}  // namespace laad

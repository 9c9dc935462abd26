#pragma once

#include <limits>
#include <span>
#include <string>

namespace laad {

enum class PenaltyKind { None, Ridge, Lasso, Scad, Mcp, Laad };

std::string to_string(PenaltyKind kind);
PenaltyKind penalty_kind_from_string(const std::string& name);

/// Penalty family plus its tuning parameters. `strength` is the LAAD r or
/// the lambda of the other families; ignored for kind None.
struct PenaltySpec {
    PenaltyKind kind = PenaltyKind::None;
    double strength = 0.0;
    double scad_a = 3.7;
    double mcp_gamma = 3.0;

    void validate() const;  // throws std::invalid_argument on bad parameters

    static PenaltySpec none() { return {PenaltyKind::None, 0.0}; }
    static PenaltySpec ridge(double lambda) { return {PenaltyKind::Ridge, lambda}; }
    static PenaltySpec lasso(double lambda) { return {PenaltyKind::Lasso, lambda}; }
    static PenaltySpec scad(double lambda, double a = 3.7) { return {PenaltyKind::Scad, lambda, a}; }
    static PenaltySpec mcp(double lambda, double gamma = 3.0) { return {PenaltyKind::Mcp, lambda, 3.7, gamma}; }
    static PenaltySpec laad(double r) { return {PenaltyKind::Laad, r}; }

    /// Same spec with strength multiplied by w (per-coordinate weighting).
    PenaltySpec scaled(double w) const {
        PenaltySpec s = *this;
        s.strength *= w;
        return s;
    }
};

/// Outcome of the univariate LAAD minimization. `delta_value` holds the
/// objective gap between the interior stationary point and zero whenever the
/// case analysis had to evaluate it (r > 1 bracket region); otherwise NaN.
struct ProxResult {
    double theta_hat = 0.0;
    bool interior_stationary = false;
    double delta_value = std::numeric_limits<double>::quiet_NaN();

    bool delta_evaluated() const { return delta_value == delta_value; }
};

/// argmin over theta of 0.5*(z-theta)^2 + r*log(1+|theta|), in closed form.
ProxResult laad_prox(double z, double r);

/// Objective gap Delta(z|r) = 0.5*theta*^2 - theta*|z| + r*log(1+theta*),
/// theta* being the interior stationary point at |z|. Requires
/// (|z|+1)^2 >= 4r so theta* is real; throws std::domain_error otherwise.
double laad_delta(double z, double r);

/// Selection threshold z*(r): unique root of Delta(z|r)=0 for r > 1, found by
/// bisection on [2*sqrt(r)-1, r]; collapses to r itself when r <= 1.
double laad_threshold(double r);

/// Univariate penalized least-squares minimizer for any PenaltySpec
/// (unit curvature: argmin 0.5*(z-theta)^2 + p(theta; spec)).
double prox(double z, const PenaltySpec& spec);

/// Penalty value p(theta; spec) for a single coefficient.
double penalty_value_single(double theta, const PenaltySpec& spec);

/// Weighted total penalty: sum_j weights[j] * p(beta[j]; spec).
/// Weight zero encodes an exemption. Lengths must match.
double penalty_value(std::span<const double> beta, const PenaltySpec& spec,
                     std::span<const double> weights);

/// 0.5*(z-theta)^2 + p(theta; spec); the objective both prox and the
/// brute-force oracle minimize.
double prox_objective(double z, double theta, const PenaltySpec& spec);

/// Brute-force grid argmin of prox_objective over [lo, hi] with the given
/// step. Test oracle only; never called by the solver.
double oracle_prox(double z, const PenaltySpec& spec, double lo, double hi, double step);

}  // namespace laad

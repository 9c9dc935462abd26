#include "laad/penalty.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace laad {

std::string to_string(PenaltyKind kind) {
    switch (kind) {
        case PenaltyKind::None: return "none";
        case PenaltyKind::Ridge: return "ridge";
        case PenaltyKind::Lasso: return "lasso";
        case PenaltyKind::Scad: return "scad";
        case PenaltyKind::Mcp: return "mcp";
        case PenaltyKind::Laad: return "laad";
    }
    return "?";
}

PenaltyKind penalty_kind_from_string(const std::string& name) {
    if (name == "none") return PenaltyKind::None;
    if (name == "ridge") return PenaltyKind::Ridge;
    if (name == "lasso") return PenaltyKind::Lasso;
    if (name == "scad") return PenaltyKind::Scad;
    if (name == "mcp") return PenaltyKind::Mcp;
    if (name == "laad") return PenaltyKind::Laad;
    throw std::invalid_argument("unknown penalty kind: " + name);
}

void PenaltySpec::validate() const {
    if (!(strength >= 0.0) || !std::isfinite(strength))
        throw std::invalid_argument("penalty strength must be finite and nonnegative");
    if (kind == PenaltyKind::Scad && !(scad_a > 2.0))
        throw std::invalid_argument("SCAD requires a > 2");
    if (kind == PenaltyKind::Mcp && !(mcp_gamma > 1.0))
        throw std::invalid_argument("MCP requires gamma > 1");
}

namespace {

inline double sgn(double x) { return x < 0.0 ? -1.0 : 1.0; }

inline double soft_threshold(double z, double lambda) {
    double az = std::abs(z);
    return az <= lambda ? 0.0 : sgn(z) * (az - lambda);
}

// Interior stationary point of the LAAD objective at |z|, i.e. the larger
// root of (theta - az) + r/(1+theta) = 0. Requires (az+1)^2 >= 4r.
inline double laad_theta_star(double az, double r) {
    return 0.5 * (az - 1.0 + std::sqrt((az + 1.0) * (az + 1.0) - 4.0 * r));
}

}  // namespace

ProxResult laad_prox(double z, double r) {
    if (!std::isfinite(z)) throw std::invalid_argument("laad_prox: z must be finite");
    if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("laad_prox: r must be positive");

    const double az = std::abs(z);
    ProxResult out;

    const double disc = (az + 1.0) * (az + 1.0) - 4.0 * r;
    if (disc < 0.0) return out;  // no real stationary point, minimizer is 0

    const double theta = laad_theta_star(az, r);

    if (r <= 1.0) {
        // z*(r) v r collapses to r: the bracket region is empty.
        if (az >= r) {
            out.theta_hat = sgn(z) * theta;
            out.interior_stationary = true;
        }
        return out;
    }

    if (az >= r) {  // interior point always wins
        out.theta_hat = sgn(z) * theta;
        out.interior_stationary = true;
        return out;
    }
    if (az < 1.0) return out;  // objective increasing on [0, inf)

    // 1 <= az < r with a real stationary point: compare against 0 directly.
    const double delta = 0.5 * theta * theta - theta * az + r * std::log1p(theta);
    out.delta_value = delta;
    if (delta <= 0.0) {  // ties resolve to the nonzero side
        out.theta_hat = sgn(z) * theta;
        out.interior_stationary = true;
    }
    return out;
}

double laad_delta(double z, double r) {
    if (!std::isfinite(z)) throw std::invalid_argument("laad_delta: z must be finite");
    if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("laad_delta: r must be positive");
    const double az = std::abs(z);
    const double lead = (az + 1.0) * (az + 1.0);
    double disc = lead - 4.0 * r;
    if (disc < 0.0) {
        // Rounding at the tangency boundary (|z|+1)^2 == 4r can leave a tiny
        // negative value; only a genuinely negative discriminant is an error.
        if (disc < -16.0 * std::numeric_limits<double>::epsilon() * lead)
            throw std::domain_error("laad_delta: stationary point not real; (|z|+1)^2 < 4r");
        disc = 0.0;
    }
    const double theta = 0.5 * (az - 1.0 + std::sqrt(disc));
    return 0.5 * theta * theta - theta * az + r * std::log1p(theta);
}

double laad_threshold(double r) {
    if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("laad_threshold: r must be positive");
    if (r <= 1.0) return r;

    // Delta is strictly decreasing in z on the bracket: Delta(2*sqrt(r)-1|r) > 0,
    // Delta(r|r) < 0.
    double lo = 2.0 * std::sqrt(r) - 1.0;
    double hi = r;
    double mid = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        mid = 0.5 * (lo + hi);
        const double d = laad_delta(mid, r);
        if (std::abs(d) <= 1e-12 || mid == lo || mid == hi) return mid;
        if (d > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return mid;
}

double prox(double z, const PenaltySpec& spec) {
    spec.validate();
    if (!std::isfinite(z)) throw std::invalid_argument("prox: z must be finite");
    if (spec.kind == PenaltyKind::None || spec.strength == 0.0) return z;

    const double lambda = spec.strength;
    const double az = std::abs(z);
    switch (spec.kind) {
        case PenaltyKind::None:
            return z;
        case PenaltyKind::Ridge:
            return z / (1.0 + lambda);
        case PenaltyKind::Lasso:
            return soft_threshold(z, lambda);
        case PenaltyKind::Scad: {
            const double a = spec.scad_a;
            if (az <= 2.0 * lambda) return soft_threshold(z, lambda);
            if (az <= a * lambda) return ((a - 1.0) * z - sgn(z) * a * lambda) / (a - 2.0);
            return z;
        }
        case PenaltyKind::Mcp: {
            const double gamma = spec.mcp_gamma;
            if (az <= gamma * lambda) return soft_threshold(z, lambda) / (1.0 - 1.0 / gamma);
            return z;
        }
        case PenaltyKind::Laad:
            return laad_prox(z, lambda).theta_hat;
    }
    return z;
}

double penalty_value_single(double theta, const PenaltySpec& spec) {
    spec.validate();
    const double lambda = spec.strength;
    const double at = std::abs(theta);
    switch (spec.kind) {
        case PenaltyKind::None:
            return 0.0;
        case PenaltyKind::Ridge:
            return 0.5 * lambda * theta * theta;
        case PenaltyKind::Lasso:
            return lambda * at;
        case PenaltyKind::Scad: {
            const double a = spec.scad_a;
            if (at <= lambda) return lambda * at;
            if (at <= a * lambda)
                return (2.0 * a * lambda * at - at * at - lambda * lambda) / (2.0 * (a - 1.0));
            return 0.5 * lambda * lambda * (a + 1.0);
        }
        case PenaltyKind::Mcp: {
            const double gamma = spec.mcp_gamma;
            if (at <= gamma * lambda) return lambda * at - 0.5 * at * at / gamma;
            return 0.5 * gamma * lambda * lambda;
        }
        case PenaltyKind::Laad:
            return lambda * std::log1p(at);
    }
    return 0.0;
}

double penalty_value(std::span<const double> beta, const PenaltySpec& spec,
                     std::span<const double> weights) {
    if (beta.size() != weights.size())
        throw std::invalid_argument("penalty_value: beta and weights lengths differ");
    double total = 0.0;
    for (std::size_t j = 0; j < beta.size(); ++j) {
        if (weights[j] == 0.0) continue;
        total += weights[j] * penalty_value_single(beta[j], spec);
    }
    return total;
}

double prox_objective(double z, double theta, const PenaltySpec& spec) {
    const double d = z - theta;
    return 0.5 * d * d + penalty_value_single(theta, spec);
}

double oracle_prox(double z, const PenaltySpec& spec, double lo, double hi, double step) {
    if (!(lo < hi)) throw std::invalid_argument("oracle_prox: need lo < hi");
    if (!(step > 0.0)) throw std::invalid_argument("oracle_prox: need step > 0");
    const auto count = static_cast<long long>(std::floor((hi - lo) / step)) + 1;
    if (count <= 0) throw std::invalid_argument("oracle_prox: empty grid");

    double best_theta = lo;
    double best_obj = prox_objective(z, lo, spec);
    for (long long i = 1; i < count; ++i) {
        const double theta = lo + static_cast<double>(i) * step;
        const double obj = prox_objective(z, theta, spec);
        if (obj < best_obj) {
            best_obj = obj;
            best_theta = theta;
        }
    }
    return best_theta;
}

}  // namespace laad

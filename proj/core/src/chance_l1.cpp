#include <algorithm>
#include <cmath>
#include <numeric>

#include "stratcls/complete_info.hpp"
#include "stratcls/errors.hpp"
#include "stratcls/incomplete_info.hpp"
#include "stratcls/numerics.hpp"

// Weighted-l1 chance-constrained best response and the budget-bisection
// oracle that certifies every chance-constrained solution.

namespace stratcls {

namespace {

void require_delta_l1(double delta) {
    if (!(delta > 0.0 && delta <= 0.5))
        throw DomainError("delta must lie in (0, 0.5]; the chance constraint is only convex there");
}

double margin_value(const Vector& mu, const Matrix& sigma, double p_delta, const Vector& e,
                    double alpha) {
    const double variance = std::max(quadratic_form(sigma, e), 0.0);
    return alpha - dot(mu, e) - p_delta * std::sqrt(variance);
}

// ---------------------------------------------------------------------------
// Projections onto { e : Cost(e) <= budget } for the oracle's inner loop.
// ---------------------------------------------------------------------------

// Weighted l1 ball: exact breakpoint solve of
//   min ||u - x||^2  s.t.  sum_f w_f |u_f| <= budget.
Vector project_l1(const Vector& x, const Vector& w, double budget) {
    double total = 0.0;
    for (std::size_t f = 0; f < x.size(); ++f) total += w[f] * std::fabs(x[f]);
    if (total <= budget) return x;

    // Soft threshold u_f = sign(x_f) max(|x_f| - nu w_f, 0); the active set
    // only changes at the breakpoints |x_f| / w_f.
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::fabs(x[a]) / w[a] > std::fabs(x[b]) / w[b];
    });
    double sum_wx = 0.0;
    double sum_w2 = 0.0;
    double nu = 0.0;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const std::size_t f = order[k];
        sum_wx += w[f] * std::fabs(x[f]);
        sum_w2 += w[f] * w[f];
        const double candidate = (sum_wx - budget) / sum_w2;
        const double next_break =
            k + 1 < order.size() ? std::fabs(x[order[k + 1]]) / w[order[k + 1]] : 0.0;
        if (candidate >= next_break) {
            nu = candidate;
            break;
        }
    }
    Vector u(x.size());
    for (std::size_t f = 0; f < x.size(); ++f) {
        const double mag = std::fabs(x[f]) - nu * w[f];
        u[f] = mag > 0.0 ? (x[f] > 0.0 ? mag : -mag) : 0.0;
    }
    return u;
}

// Coordinate solve of y + nu w p y^(p-1) = a, y >= 0, for the lp-ball
// projection. Closed forms for the exponents the toolkit exercises.
double coordinate_shrink(double a, double nu_wp, double p) {
    if (a <= 0.0) return 0.0;
    if (p == 2.0) return a / (1.0 + nu_wp);
    if (p == 3.0) {
        // y + k y^2 = a  =>  y = (-1 + sqrt(1 + 4 k a)) / (2 k)
        const double k = nu_wp;
        if (k == 0.0) return a;
        return 2.0 * a / (1.0 + std::sqrt(1.0 + 4.0 * k * a));
    }
    if (p == 1.5) {
        // y + k sqrt(y) = a  =>  sqrt(y) = (-k + sqrt(k^2 + 4a)) / 2
        const double k = nu_wp;
        const double root = 0.5 * (-k + std::sqrt(k * k + 4.0 * a));
        return root * root;
    }
    // Generic monotone solve by bisection on y in [0, a].
    double lo = 0.0, hi = a;
    for (int it = 0; it < 90; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double val = mid + nu_wp * std::pow(mid, p - 1.0) - a;
        if (val > 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

// Weighted lp ball, p > 1: bisection on the multiplier nu.
Vector project_lp(const Vector& x, const Vector& w, double p, double budget) {
    double m = 0.0;
    for (std::size_t f = 0; f < x.size(); ++f) m = std::max(m, std::fabs(x[f]));
    if (m == 0.0) return x;
    const double budget_p = std::pow(budget, p);
    auto excess = [&](double nu) {
        double acc = 0.0;
        for (std::size_t f = 0; f < x.size(); ++f) {
            const double y = coordinate_shrink(std::fabs(x[f]), nu * w[f] * p, p);
            acc += w[f] * std::pow(y, p);
        }
        return acc - budget_p;
    };
    if (excess(0.0) <= 0.0) return x;

    double lo = 0.0, hi = 1.0;
    int guard = 0;
    while (excess(hi) > 0.0 && guard++ < 200) hi *= 2.0;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (excess(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    const double nu = hi;
    Vector u(x.size());
    for (std::size_t f = 0; f < x.size(); ++f) {
        const double y = coordinate_shrink(std::fabs(x[f]), nu * w[f] * p, p);
        u[f] = x[f] >= 0.0 ? y : -y;
    }
    return u;
}

Vector project_cost_ball(const Vector& x, const CostModel& model, double budget) {
    if (budget <= 0.0) return Vector(x.size(), 0.0);
    if (model.p == 1.0) return project_l1(x, model.weights, budget);
    if (model.p == 2.0) {
        bool uniform = true;
        for (double w : model.weights) uniform = uniform && w == 1.0;
        if (uniform) {
            const double n = norm2(x);
            return n <= budget ? x : scaled(x, budget / n);
        }
    }
    return project_lp(x, model.weights, model.p, budget);
}

// Projected-subgradient minimization of the margin over the cost-budget
// ball: diminishing steps 1/sqrt(k), best-iterate tracking, 5000-iteration
// cap with a stagnation cut-off. Warm starts come from the outer bisection.
struct InnerResult {
    double best_margin = 0.0;
    Vector best_point;
};

InnerResult minimize_margin_on_ball(const Vector& mu, const Matrix& sigma, double p_delta,
                                    double alpha, const CostModel& model, double budget,
                                    const Vector& warm) {
    const std::size_t d = mu.size();
    Vector e = project_cost_ball(warm, model, budget);
    InnerResult best{margin_value(mu, sigma, p_delta, e, alpha), e};

    Vector grad(d);
    int stale = 0;
    for (int k = 1; k <= 5000 && stale < 800; ++k) {
        const Vector sig_e = mat_vec(sigma, e);
        const double sig_norm = std::sqrt(std::max(dot(e, sig_e), 0.0));
        for (std::size_t f = 0; f < d; ++f) {
            const double unc = sig_norm > 0.0 ? p_delta * sig_e[f] / sig_norm : 0.0;
            grad[f] = -mu[f] - unc;
        }
        const double step = 1.0 / std::sqrt(static_cast<double>(k));
        for (std::size_t f = 0; f < d; ++f) e[f] -= step * grad[f];
        e = project_cost_ball(e, model, budget);
        const double g = margin_value(mu, sigma, p_delta, e, alpha);
        if (g < best.best_margin - 1e-14) {
            best.best_margin = g;
            best.best_point = e;
            stale = 0;
        } else {
            ++stale;
        }
    }
    return best;
}

}  // namespace

EffortProfile budget_bisection_oracle(const ContributionBelief& belief, const CostModel& model,
                                      double alpha, double delta, double tol) {
    require_delta_l1(delta);
    model.validate();
    require_same_size(belief.mu, model.weights, "budget_bisection_oracle");
    if (!(tol > 0.0)) throw DomainError("budget_bisection_oracle: tol must be positive");
    const std::size_t d = belief.mu.size();
    if (alpha <= 0.0) return EffortProfile{Vector(d, 0.0)};

    const double threshold = chance_feasibility_threshold(belief);
    if (!(delta > threshold))
        throw Infeasible("budget_bisection_oracle: delta <= feasibility threshold " +
                             std::to_string(threshold),
                         threshold);
    const double p_delta = delta == 0.5 ? 0.0 : std_normal_quantile(delta);
    const Matrix sigma = symmetrized(belief.sigma);

    // Initial budget guess: cheapest single-feature profile that can clear
    // the constraint on its own, when one exists.
    double hi = 0.0;
    for (std::size_t f = 0; f < d; ++f) {
        const double denom = std::fabs(belief.mu[f]) + p_delta * std::sqrt(std::max(sigma(f, f), 0.0));
        if (denom > 0.0) {
            const double budget = std::pow(model.weights[f], 1.0 / model.p) * alpha / denom;
            hi = hi == 0.0 ? budget : std::min(hi, budget);
        }
    }
    if (hi == 0.0) hi = 1.0;

    Vector warm = scaled(belief.mu, 1.0 / std::max(norm2(belief.mu), 1e-30));
    InnerResult at_hi = minimize_margin_on_ball(belief.mu, sigma, p_delta, alpha, model, hi, warm);
    int guard = 0;
    while (at_hi.best_margin > 0.0) {
        if (++guard > 200)
            throw IterationLimit("budget_bisection_oracle: no feasible budget found");
        hi *= 2.0;
        at_hi = minimize_margin_on_ball(belief.mu, sigma, p_delta, alpha, model, hi,
                                        at_hi.best_point);
    }

    double lo = 0.0;
    Vector warm_point = at_hi.best_point;
    while (hi - lo > tol * std::max(hi, 1.0)) {
        const double mid = 0.5 * (lo + hi);
        const InnerResult at_mid =
            minimize_margin_on_ball(belief.mu, sigma, p_delta, alpha, model, mid, warm_point);
        if (at_mid.best_margin <= 0.0) {
            hi = mid;
            at_hi = at_mid;
            warm_point = at_mid.best_point;
        } else {
            lo = mid;
            warm_point = at_mid.best_point;
        }
    }
    return EffortProfile{at_hi.best_point};
}

EffortProfile best_response_chance_l1(const ContributionBelief& belief,
                                      const Vector& cost_weights, double alpha, double delta) {
    require_delta_l1(delta);
    require_same_size(belief.mu, cost_weights, "best_response_chance_l1");
    for (double c : cost_weights)
        if (!(c > 0.0)) throw DomainError("best_response_chance_l1: weights must be positive");
    const std::size_t d = belief.mu.size();
    if (alpha <= 0.0) return EffortProfile{Vector(d, 0.0)};
    if (d > 14)
        throw DomainError(
            "best_response_chance_l1: support enumeration targets small feature "
            "counts (d <= 14)");

    const Matrix sigma = symmetrized(belief.sigma);
    const double p_delta = delta == 0.5 ? 0.0 : std_normal_quantile(delta);

    // Certain world (no variance term): single-feature corner response.
    if (p_delta == 0.0 || sigma.max_abs() < 1e-14)
        return best_response_l1(belief.mu, cost_weights, alpha);

    const double threshold = chance_feasibility_threshold(belief);
    if (!(delta > threshold))
        throw Infeasible("best_response_chance_l1: delta <= feasibility threshold " +
                             std::to_string(threshold),
                         threshold);

    double best_cost = -1.0;
    Vector best_e;
    auto consider = [&](const Vector& e) {
        if (margin_value(belief.mu, sigma, p_delta, e, alpha) > 1e-8 * (1.0 + alpha)) return;
        double c = 0.0;
        for (std::size_t f = 0; f < d; ++f) c += cost_weights[f] * std::fabs(e[f]);
        if (best_cost < 0.0 || c < best_cost) {
            best_cost = c;
            best_e = e;
        }
    };

    // Corner candidates; these also cover certain features (zero variance)
    // that the KKT enumeration below skips when the support block is
    // singular.
    for (std::size_t f = 0; f < d; ++f) {
        const double denom =
            std::fabs(belief.mu[f]) + p_delta * std::sqrt(std::max(sigma(f, f), 0.0));
        if (denom <= 0.0) continue;
        Vector e(d, 0.0);
        e[f] = (belief.mu[f] >= 0.0 ? 1.0 : -1.0) * alpha / denom;
        consider(e);
    }

    // KKT enumeration over support/sign patterns. On support S with signs
    // sgn, stationarity pins u = e / ||Sigma^{1/2} e|| through
    //   p_delta (Sigma_SS u_S) = nu (c sgn)_S - mu_S,  u_S' Sigma_SS u_S = 1,
    // leaving a quadratic in the reciprocal multiplier nu.
    std::vector<std::size_t> support;
    std::vector<int> sgn(d, 0);
    auto try_pattern = [&]() {
        const std::size_t k = support.size();
        Matrix sig_ss(k, k);
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = 0; b < k; ++b) sig_ss(a, b) = sigma(support[a], support[b]);
        // Skip singular support blocks; corners and other supports cover
        // their optima, and the oracle certification below guards the rest.
        Vector cs(k), mu_s(k);
        for (std::size_t a = 0; a < k; ++a) {
            cs[a] = cost_weights[support[a]] * sgn[support[a]];
            mu_s[a] = belief.mu[support[a]];
        }
        Vector a_vec, b_vec;
        try {
            a_vec = linear_solve(sig_ss, cs);
            b_vec = linear_solve(sig_ss, mu_s);
        } catch (const SingularMatrix&) {
            return;
        }
        for (double& v : a_vec) v /= p_delta;
        for (double& v : b_vec) v /= -p_delta;

        // (A nu + B)' Sigma (A nu + B) = 1
        auto sig_quad = [&](const Vector& x, const Vector& y) {
            double acc = 0.0;
            for (std::size_t r = 0; r < k; ++r)
                for (std::size_t c = 0; c < k; ++c) acc += x[r] * sig_ss(r, c) * y[c];
            return acc;
        };
        const double qa = sig_quad(a_vec, a_vec);
        const double qb = 2.0 * sig_quad(a_vec, b_vec);
        const double qc = sig_quad(b_vec, b_vec) - 1.0;
        const double disc = qb * qb - 4.0 * qa * qc;
        if (disc < 0.0) return;
        const double sq = std::sqrt(disc);
        for (const double nu : {qa != 0.0 ? (-qb - sq) / (2.0 * qa) : -qc / qb,
                                qa != 0.0 ? (-qb + sq) / (2.0 * qa) : -qc / qb}) {
            if (!(nu > 0.0) || !std::isfinite(nu)) continue;
            Vector u(d, 0.0);
            bool sign_ok = true;
            for (std::size_t a = 0; a < k; ++a) {
                u[support[a]] = a_vec[a] * nu + b_vec[a];
                if (u[support[a]] * sgn[support[a]] < 0.0) sign_ok = false;
            }
            if (!sign_ok) continue;
            // Dual feasibility off the support.
            const Vector sig_u = mat_vec(sigma, u);
            bool dual_ok = true;
            for (std::size_t f = 0; f < d && dual_ok; ++f) {
                if (sgn[f] != 0) continue;
                if (std::fabs(belief.mu[f] + p_delta * sig_u[f]) >
                    nu * cost_weights[f] + 1e-9 * (1.0 + nu))
                    dual_ok = false;
            }
            if (!dual_ok) continue;
            const double phi = dot(belief.mu, u) + p_delta;  // ||Sigma^{1/2} u|| == 1
            if (!(phi > 1e-14)) continue;
            consider(scaled(u, alpha / phi));
        }
    };
    auto enumerate = [&](auto&& self, std::size_t f) -> void {
        if (f == d) {
            if (!support.empty()) try_pattern();
            return;
        }
        sgn[f] = 0;
        self(self, f + 1);
        support.push_back(f);
        sgn[f] = 1;
        self(self, f + 1);
        sgn[f] = -1;
        self(self, f + 1);
        sgn[f] = 0;
        support.pop_back();
    };
    enumerate(enumerate, 0);

    if (best_cost < 0.0)
        throw NumericalFailure("best_response_chance_l1: no KKT candidate survived");

    // Dual-route certification against the independent oracle.
    const CostModel l1_model{1.0, cost_weights};
    const EffortProfile oracle = budget_bisection_oracle(belief, l1_model, alpha, delta, 1e-5);
    const double oracle_cost = cost(l1_model, oracle.e);
    if (std::fabs(best_cost - oracle_cost) > 1e-4 * (1.0 + std::min(best_cost, oracle_cost)))
        throw NumericalFailure(
            "best_response_chance_l1: enumeration and budget-bisection oracle disagree "
            "beyond 1e-4 relative (" +
            std::to_string(best_cost) + " vs " + std::to_string(oracle_cost) + ")");
    return EffortProfile{best_e};
}

}  // namespace stratcls

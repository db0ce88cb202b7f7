#include "stratcls/incomplete_info.hpp"

#include <algorithm>
#include <cmath>

#include "stratcls/complete_info.hpp"
#include "stratcls/errors.hpp"
#include "stratcls/numerics.hpp"
#include "stratcls/rng.hpp"

namespace stratcls {

namespace {

void require_delta(double delta) {
    if (!(delta > 0.0 && delta <= 0.5))
        throw DomainError("delta must lie in (0, 0.5]; the chance constraint is only convex there");
}

void require_belief(const ContributionBelief& belief) {
    if (belief.sigma.rows() != belief.mu.size() || belief.sigma.cols() != belief.mu.size())
        throw DimensionMismatch("belief: sigma dimensions differ from mu");
    if (!is_symmetric(belief.sigma, 1e-10 * (1.0 + belief.sigma.max_abs())))
        throw DomainError("belief: sigma is not symmetric");
}

// Spectral view of a belief: sigma = V diag(lambda) V', eigenvalues clamped
// to [0, inf), plus mu expressed in the eigenbasis.
struct Spectral {
    Vector lambda;
    Matrix vectors;      // empty when the basis is the standard one
    Vector mu_basis;     // V' mu
    double lambda_max = 0.0;
    double null_tol = 0.0;

    Vector to_ambient(const Vector& coeffs) const {
        if (vectors.rows() == 0) return coeffs;
        return mat_vec(vectors, coeffs);
    }
};

Spectral spectral_of(const ContributionBelief& belief) {
    Spectral s;
    EigenSym eig = eigen_sym(belief.sigma);
    for (double& v : eig.values) {
        if (v < -1e-8) throw NotPsd("belief sigma has eigenvalue below -1e-8");
        if (v < 0.0) v = 0.0;
    }
    s.lambda = std::move(eig.values);
    s.mu_basis = mat_transpose_vec(eig.vectors, belief.mu);
    s.vectors = std::move(eig.vectors);
    s.lambda_max = s.lambda.empty() ? 0.0 : s.lambda.back();
    s.null_tol = std::max(s.lambda_max, 1.0) * 1e-12;
    return s;
}

Spectral spectral_of_diagonal(const ContributionBelief& belief) {
    Spectral s;
    const std::size_t n = belief.mu.size();
    s.lambda.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double v = belief.sigma(i, i);
        if (v < -1e-8) throw NotPsd("belief sigma has diagonal entry below -1e-8");
        s.lambda[i] = std::max(v, 0.0);
        s.lambda_max = std::max(s.lambda_max, s.lambda[i]);
    }
    s.mu_basis = belief.mu;
    s.null_tol = std::max(s.lambda_max, 1.0) * 1e-12;
    return s;
}

// Range/null decomposition of mu relative to sigma's spectrum.
struct FeasibilityParts {
    double range_norm = 0.0;  // ||Sigma^{+1/2} mu||_2
    double null_norm = 0.0;   // ||P_null mu||_2
};

FeasibilityParts feasibility_parts(const Spectral& s) {
    FeasibilityParts parts;
    double q2 = 0.0;
    double n2 = 0.0;
    for (std::size_t i = 0; i < s.lambda.size(); ++i) {
        const double m = s.mu_basis[i];
        if (s.lambda[i] > s.null_tol)
            q2 += m * m / s.lambda[i];
        else
            n2 += m * m;
    }
    parts.range_norm = std::sqrt(q2);
    parts.null_norm = std::sqrt(n2);
    return parts;
}

double threshold_of(const Spectral& s, double mu_norm) {
    const FeasibilityParts parts = feasibility_parts(s);
    if (parts.null_norm > 1e-10 * std::max(mu_norm, 1.0)) return 0.0;
    return std_normal_cdf(-parts.range_norm);
}

// Shared l2 solver over a spectral belief. See the header notes on
// best_response_chance_l2 for the derivation of the residual.
EffortProfile solve_chance_l2(const Spectral& s, double alpha, double delta) {
    require_delta(delta);
    const std::size_t n = s.mu_basis.size();
    EffortProfile profile{Vector(n, 0.0)};
    if (alpha <= 0.0) return profile;

    const double mu_norm = norm2(s.mu_basis);
    const double threshold = threshold_of(s, mu_norm);
    if (!(delta > threshold))
        throw Infeasible("chance-constrained program infeasible: delta <= threshold " +
                             std::to_string(threshold),
                         threshold);
    if (mu_norm == 0.0)
        throw Infeasible("chance-constrained program infeasible: mu = 0", 0.5);

    const double p_delta = delta == 0.5 ? 0.0 : std_normal_quantile(delta);

    // Direction family in the eigenbasis: d(t)_i = mu_i / (1 + t lambda_i).
    auto direction = [&](double t, Vector& d) {
        for (std::size_t i = 0; i < n; ++i) d[i] = s.mu_basis[i] / (1.0 + t * s.lambda[i]);
    };
    auto sigma_half_norm = [&](const Vector& d) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += s.lambda[i] * d[i] * d[i];
        return std::sqrt(std::max(acc, 0.0));
    };
    // Root of the residual picks the t where the scaled direction satisfies
    // the stationarity condition; negative at t=0, positive iff strictly
    // feasible as t grows.
    auto residual = [&](double t, Vector& d) {
        direction(t, d);
        const double sn = sigma_half_norm(d);
        const double phi = dot(s.mu_basis, d) + p_delta * sn;
        return t * phi * sn + p_delta * dot(d, d);
    };

    Vector d(n);
    double t_star = 0.0;
    if (p_delta == 0.0 || s.lambda_max * alpha == 0.0 || s.lambda_max < s.null_tol) {
        t_star = 0.0;  // mean-only decision: complete-info closed form
    } else {
        const FeasibilityParts parts = feasibility_parts(s);
        if (parts.null_norm > 1e-10 * std::max(mu_norm, 1.0) &&
            parts.range_norm <= -p_delta) {
            // The uncertain block alone cannot clear the constraint; the
            // optimum rides the certain (null-space) component of mu.
            double n2 = 0.0;
            Vector coeffs(n, 0.0);
            for (std::size_t i = 0; i < n; ++i)
                if (s.lambda[i] <= s.null_tol) {
                    coeffs[i] = s.mu_basis[i];
                    n2 += s.mu_basis[i] * s.mu_basis[i];
                }
            profile.e = s.to_ambient(scaled(coeffs, alpha / n2));
            return profile;
        }

        double lo = 0.0;
        double hi = 1e6 / s.lambda_max;
        bool bracketed = residual(hi, d) > 0.0;
        for (int expand = 0; expand < 3 && !bracketed; ++expand) {
            hi *= 10.0;
            bracketed = residual(hi, d) > 0.0;
        }
        if (!bracketed)
            throw NumericalFailure("chance l2 solver: stationarity residual never changes sign");
        while (hi - lo > 1e-12 * std::max(hi, 1.0)) {
            const double mid = 0.5 * (lo + hi);
            if (residual(mid, d) > 0.0)
                hi = mid;
            else
                lo = mid;
        }
        t_star = 0.5 * (lo + hi);
    }

    direction(t_star, d);
    const double sn = sigma_half_norm(d);
    const double phi = dot(s.mu_basis, d) + p_delta * sn;
    if (!(phi > 0.0))
        throw NumericalFailure("chance l2 solver: selected direction cannot activate constraint");
    const Vector coeffs = scaled(d, alpha / phi);
    profile.e = s.to_ambient(coeffs);

    // KKT self-checks: active constraint and stationarity.
    const double g = alpha - dot(s.mu_basis, coeffs) - p_delta * sigma_half_norm(coeffs);
    if (std::fabs(g) > 1e-8 * (1.0 + std::fabs(alpha)))
        throw NumericalFailure("chance l2 solver: constraint not active at solution");
    const double e_norm = norm2(coeffs);
    const double sig_norm = sigma_half_norm(coeffs);
    const double lambda_mult = e_norm / alpha;
    double res2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double sig_term = sig_norm > 0.0 ? p_delta * s.lambda[i] * coeffs[i] / sig_norm : 0.0;
        const double r = coeffs[i] / e_norm - lambda_mult * (s.mu_basis[i] + sig_term);
        res2 += r * r;
    }
    if (std::sqrt(res2) > 1e-6)
        throw NumericalFailure("chance l2 solver: KKT stationarity residual above 1e-6");
    return profile;
}

}  // namespace

ContributionBelief belief_model1(const Matrix& contribution_matrix,
                                 const GaussianPrior& prior_h) {
    if (contribution_matrix.cols() != prior_h.mean.size())
        throw DimensionMismatch("belief_model1: classifier prior length differs from C");
    if (prior_h.cov.rows() != prior_h.mean.size() || prior_h.cov.cols() != prior_h.mean.size())
        throw DimensionMismatch("belief_model1: prior covariance dimensions differ");
    ContributionBelief belief;
    belief.mu = mat_vec(contribution_matrix, prior_h.mean);
    belief.sigma =
        symmetrized(contribution_matrix * prior_h.cov * contribution_matrix.transposed());
    belief.provenance = BeliefProvenance::Model1;
    return belief;
}

ContributionBelief belief_model2_linear(const CausalGraph& graph, const Vector& h0,
                                        const GaussianPrior& prior_w) {
    if (h0.size() != graph.size())
        throw DimensionMismatch("belief_model2_linear: classifier length differs from graph");
    const std::size_t n_edges = graph.edges().size();
    if (prior_w.mean.size() != n_edges || prior_w.cov.rows() != n_edges ||
        prior_w.cov.cols() != n_edges)
        throw DimensionMismatch("belief_model2_linear: weight prior size differs from edge count");
    if (!is_bipartite_causal(graph))
        throw DepthExceeded(
            "belief_model2_linear: an influence path of length >= 2 exists; the "
            "contribution map is not affine in the edge weights");

    const std::size_t d = graph.size();
    // (Ch)_f = h0_f + sum_{e in out(f)} w_e h0_{dst(e)}: affine map T w + h0.
    Matrix t(d, n_edges);
    for (std::size_t e = 0; e < n_edges; ++e)
        t(graph.edges()[e].src, e) = h0[graph.edges()[e].dst];

    ContributionBelief belief;
    belief.mu = vec_add(h0, mat_vec(t, prior_w.mean));
    belief.sigma = t * prior_w.cov * t.transposed();
    belief.provenance = BeliefProvenance::Model2Linear;
    return belief;
}

ContributionBelief belief_monte_carlo(const McBeliefSpec& spec, std::size_t n,
                                      std::uint64_t seed) {
    if (spec.graph == nullptr) throw DomainError("belief_monte_carlo: missing graph");
    if (n < 1000) throw DomainError("belief_monte_carlo: need at least 1000 samples");
    const CausalGraph& graph = *spec.graph;
    const std::size_t d = graph.size();
    const std::size_t n_edges = graph.edges().size();
    if (spec.prior_h.mean.size() != d)
        throw DimensionMismatch("belief_monte_carlo: classifier prior length differs");
    if (spec.prior_w.mean.size() != n_edges)
        throw DimensionMismatch("belief_monte_carlo: weight prior length differs");

    const Matrix root_h = psd_sqrt(symmetrized(spec.prior_h.cov));
    const Matrix root_w = psd_sqrt(symmetrized(spec.prior_w.cov));
    const bool fixed_w = root_w.max_abs() == 0.0;

    Rng rng(seed);
    Vector mean(d, 0.0);
    Matrix m2(d, d);  // Welford accumulator of centered cross-products
    Vector w(n_edges), h(d), z(std::max(d, n_edges)), x(d), delta_vec(d);

    Matrix adjacency(d, d);
    Matrix contrib;
    if (fixed_w) {
        for (std::size_t e = 0; e < n_edges; ++e)
            adjacency(graph.edges()[e].src, graph.edges()[e].dst) = spec.prior_w.mean[e];
        contrib = contribution_matrix(adjacency);
    }

    for (std::size_t k = 1; k <= n; ++k) {
        if (!fixed_w) {
            for (std::size_t e = 0; e < n_edges; ++e) z[e] = rng.normal();
            for (std::size_t e = 0; e < n_edges; ++e) {
                double acc = spec.prior_w.mean[e];
                for (std::size_t j = 0; j < n_edges; ++j) acc += root_w(e, j) * z[j];
                w[e] = acc;
            }
            for (std::size_t e = 0; e < n_edges; ++e)
                adjacency(graph.edges()[e].src, graph.edges()[e].dst) = w[e];
            contrib = contribution_matrix(adjacency);
        }
        for (std::size_t i = 0; i < d; ++i) z[i] = rng.normal();
        for (std::size_t i = 0; i < d; ++i) {
            double acc = spec.prior_h.mean[i];
            for (std::size_t j = 0; j < d; ++j) acc += root_h(i, j) * z[j];
            h[i] = acc;
        }
        x = mat_vec(contrib, h);

        for (std::size_t i = 0; i < d; ++i) delta_vec[i] = x[i] - mean[i];
        const double inv_k = 1.0 / static_cast<double>(k);
        for (std::size_t i = 0; i < d; ++i) mean[i] += delta_vec[i] * inv_k;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                m2(i, j) += delta_vec[i] * (x[j] - mean[j]);
    }

    ContributionBelief belief;
    belief.mu = std::move(mean);
    belief.sigma = symmetrized((1.0 / static_cast<double>(n - 1)) * m2);
    belief.provenance = BeliefProvenance::MonteCarloApprox;
    return belief;
}

double chance_margin(const ContributionBelief& belief, const Vector& effort, double alpha,
                     double delta) {
    require_belief(belief);
    require_same_size(belief.mu, effort, "chance_margin");
    require_delta(delta);
    const double p_delta = delta == 0.5 ? 0.0 : std_normal_quantile(delta);
    const double variance = std::max(quadratic_form(belief.sigma, effort), 0.0);
    return alpha - dot(belief.mu, effort) - p_delta * std::sqrt(variance);
}

FeasibilityVerdict feasibility(const ContributionBelief& belief, double alpha, double delta) {
    require_belief(belief);
    require_delta(delta);
    if (!(alpha > 0.0)) throw DomainError("feasibility: requires alpha > 0");
    const Spectral s = spectral_of(belief);
    if (s.lambda.front() <= 1e-10)
        throw SingularCovariance("feasibility: sigma is not positive definite");
    double q2 = 0.0;
    for (std::size_t i = 0; i < s.lambda.size(); ++i)
        q2 += s.mu_basis[i] * s.mu_basis[i] / s.lambda[i];
    FeasibilityVerdict verdict;
    verdict.norm_value = std::sqrt(q2);
    verdict.threshold_delta = std_normal_cdf(-verdict.norm_value);
    verdict.feasible = delta > verdict.threshold_delta;
    return verdict;
}

double chance_feasibility_threshold(const ContributionBelief& belief) {
    require_belief(belief);
    const Spectral s = spectral_of(belief);
    return threshold_of(s, norm2(belief.mu));
}

EffortProfile best_response_chance_l2(const ContributionBelief& belief, double alpha,
                                      double delta) {
    require_belief(belief);
    return solve_chance_l2(spectral_of(belief), alpha, delta);
}

EffortProfile best_response_chance_l2_diag(const ContributionBelief& belief, double alpha,
                                           double delta) {
    require_belief(belief);
    const double scale = 1.0 + belief.sigma.max_abs();
    for (std::size_t i = 0; i < belief.sigma.rows(); ++i)
        for (std::size_t j = 0; j < belief.sigma.cols(); ++j)
            if (i != j && std::fabs(belief.sigma(i, j)) > 1e-12 * scale)
                throw PreconditionError("best_response_chance_l2_diag: sigma is not diagonal");
    return solve_chance_l2(spectral_of_diagonal(belief), alpha, delta);
}

bool check_beta_condition_diag(const ContributionBelief& belief,
                               const std::vector<bool>& desirable, double beta) {
    require_belief(belief);
    if (belief.mu.size() != desirable.size())
        throw DimensionMismatch("check_beta_condition_diag: partition size differs");
    if (!(beta > 0.0 && beta <= 1.0))
        throw DomainError("check_beta_condition_diag: beta in (0,1]");
    const double scale = 1.0 + belief.sigma.max_abs();
    double diag_min = 0.0, diag_max = 0.0;
    for (std::size_t i = 0; i < belief.sigma.rows(); ++i) {
        for (std::size_t j = 0; j < belief.sigma.cols(); ++j)
            if (i != j && std::fabs(belief.sigma(i, j)) > 1e-12 * scale)
                throw PreconditionError("check_beta_condition_diag: sigma is not diagonal");
        const double v = belief.sigma(i, i);
        if (i == 0) diag_min = diag_max = v;
        diag_min = std::min(diag_min, v);
        diag_max = std::max(diag_max, v);
    }
    if (diag_max - diag_min > 1e-9)
        throw PreconditionError(
            "check_beta_condition_diag: features carry unequal uncertainty levels");

    double d2 = 0.0, u2 = 0.0;
    for (std::size_t f = 0; f < belief.mu.size(); ++f) {
        const double sq = belief.mu[f] * belief.mu[f];
        if (desirable[f])
            d2 += sq;
        else
            u2 += sq;
    }
    if (beta == 1.0) return u2 == 0.0;
    const double k = beta / std::sqrt(1.0 - beta * beta);
    return std::sqrt(d2) >= k * std::sqrt(u2);
}

McEstimate mc_pass_probability_model3(double effort, double alpha, std::size_t n,
                                      std::uint64_t seed) {
    if (n < 100000) throw DomainError("mc_pass_probability_model3: need n >= 1e5");
    Rng rng(seed);
    std::size_t hits = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double omega = rng.normal();
        const double h = rng.normal();
        if (omega * h * effort >= alpha) ++hits;
    }
    McEstimate est;
    est.value = static_cast<double>(hits) / static_cast<double>(n);
    est.std_error = std::sqrt(est.value * (1.0 - est.value) / static_cast<double>(n));
    return est;
}

}  // namespace stratcls

#pragma once

#include <cstdint>
#include <optional>

#include "stratcls/agent_model.hpp"
#include "stratcls/causal_graph.hpp"
#include "stratcls/matrix.hpp"

namespace stratcls {

struct GaussianPrior {
    Vector mean;
    Matrix cov;  // symmetric PSD

    static GaussianPrior point_mass(Vector mean_) {
        const std::size_t n = mean_.size();
        return GaussianPrior{std::move(mean_), Matrix(n, n)};
    }
};

enum class BeliefProvenance { Model1, Model2Linear, MonteCarloApprox };

/// Gaussian belief over the contribution vector Ch.
struct ContributionBelief {
    Vector mu;
    Matrix sigma;  // symmetric PSD
    BeliefProvenance provenance = BeliefProvenance::Model1;
};

struct FeasibilityVerdict {
    bool feasible = false;
    double threshold_delta = 0.0;  // delta* = Phi(-||Sigma^{-1/2} mu||_2)
    double norm_value = 0.0;       // ||Sigma^{-1/2} mu||_2
};

/// Model 1 (uncertain classifier, known graph): Ch ~ N(C mu_h, C Sigma_h C').
ContributionBelief belief_model1(const Matrix& contribution_matrix,
                                 const GaussianPrior& prior_h);

/// Model 2 with an affine contribution map (every influence path has length
/// <= 1, i.e. the graph is bipartite-causal): (Ch)_f = h0_f + sum over edges
/// f->j of w_fj h0_j, so a Gaussian prior on edge weights maps exactly to a
/// Gaussian belief on Ch. Throws DepthExceeded when some influence path has
/// length >= 2 (products of Gaussian weights are no longer Gaussian).
/// prior_w is indexed by the graph's edge declaration order.
ContributionBelief belief_model2_linear(const CausalGraph& graph, const Vector& h0,
                                        const GaussianPrior& prior_w);

/// Joint sampling spec for the Monte-Carlo belief: degenerate (zero
/// covariance) priors encode certainty, so Model 2 is {h cov = 0} and
/// Model 3 has both covariances nonzero.
struct McBeliefSpec {
    const CausalGraph* graph = nullptr;
    GaussianPrior prior_h;  // over the classifier
    GaussianPrior prior_w;  // over edge weights, edge declaration order
};

/// Moment-matched Gaussian approximation of C(w) h from n joint draws.
/// Deterministic under a fixed seed; n >= 1000.
ContributionBelief belief_monte_carlo(const McBeliefSpec& spec, std::size_t n,
                                      std::uint64_t seed);

/// Chance-constraint margin g(e) = alpha - mu'e - p_delta ||Sigma^{1/2} e||_2
/// with p_delta = Phi^{-1}(delta). e is chance-feasible iff g(e) <= 0.
/// delta outside (0, 0.5] throws DomainError (the reformulation is only
/// convex there).
double chance_margin(const ContributionBelief& belief, const Vector& effort, double alpha,
                     double delta);

/// Feasibility classification for positive-definite sigma: the program has
/// a feasible point iff delta > Phi(-||Sigma^{-1/2} mu||_2); equality is
/// classified infeasible (the infimum is not attained for alpha > 0).
/// Throws SingularCovariance when the smallest eigenvalue is <= 1e-10.
FeasibilityVerdict feasibility(const ContributionBelief& belief, double alpha, double delta);

/// PSD generalization of the feasibility threshold, used by the solvers and
/// the sweep (Model-1 covariances built from rank-deficient priors are
/// singular). With mu entirely inside range(sigma) the threshold is
/// Phi(-||Sigma^{+1/2} mu||_2); a mu component in the null space makes the
/// program feasible for every delta in (0, 0.5], reported as threshold 0.
double chance_feasibility_threshold(const ContributionBelief& belief);

/// Minimum-norm chance-constrained best response (l2 cost):
///   min ||e||_2  s.t.  alpha - mu'e - p_delta ||Sigma^{1/2} e||_2 <= 0.
///
/// The KKT system confines the optimum to the one-parameter family
/// e(t) ∝ (I + t Sigma)^{-1} mu, t >= 0; the solver scales each direction
/// to activate the constraint and bisects the scalar stationarity residual
/// over t (bracket [0, 1e6/lambda_max], expanded x10 up to 3 times, to
/// 1e-12 relative). Throws Infeasible below the feasibility threshold and
/// NumericalFailure when no bracket exists or the KKT residual check fails.
EffortProfile best_response_chance_l2(const ContributionBelief& belief, double alpha,
                                      double delta);

/// Same program for diagonal sigma; per-feature closed form
/// e_f ∝ mu_f / (1 + t Sigma_ff) once the scalar search resolves t.
EffortProfile best_response_chance_l2_diag(const ContributionBelief& belief, double alpha,
                                           double delta);

/// Weighted-l1 chance-constrained best response:
///   min sum c_f |e_f|  s.t.  alpha - mu'e - p_delta ||Sigma^{1/2} e||_2 <= 0.
///
/// Solved by enumerating support/sign patterns of the KKT system (the
/// problem sizes here keep 3^d small) and certified against
/// budget_bisection_oracle: the returned profile satisfies g(e) <= 1e-8 and
/// matches the oracle cost within 1e-4 relative, else NumericalFailure.
EffortProfile best_response_chance_l1(const ContributionBelief& belief,
                                      const Vector& cost_weights, double alpha, double delta);

/// Solver-independent oracle: outer bisection on the cost budget t, inner
/// projected-subgradient minimization of the margin g over the cost-t ball
/// (diminishing steps 1/sqrt(k), 5000 iterations, best-iterate tracking).
/// Returns a feasible profile whose cost is within tol*(1+cost) of optimal.
EffortProfile budget_bisection_oracle(const ContributionBelief& belief, const CostModel& model,
                                      double alpha, double delta, double tol);

/// Sufficient condition for beta-desirability when sigma is diagonal
/// with equal entries (PreconditionError otherwise):
///   ||mu_D||_2 >= beta/sqrt(1-beta^2) ||mu_U||_2.
bool check_beta_condition_diag(const ContributionBelief& belief,
                               const std::vector<bool>& desirable, double beta);

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

/// Monte-Carlo estimate of P[(omega h) e >= alpha] with omega, h iid
/// standard normal: the scalar Model-3 pass probability whose non-concavity
/// in e makes the fully-uncertain program non-convex. n >= 1e5.
McEstimate mc_pass_probability_model3(double effort, double alpha, std::size_t n,
                                      std::uint64_t seed);

}  // namespace stratcls

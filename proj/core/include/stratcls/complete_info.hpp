#pragma once

#include "stratcls/agent_model.hpp"
#include "stratcls/matrix.hpp"

namespace stratcls {

/// Sign-normalized contribution vector: y = |Ch| entrywise plus the signs
/// needed to map a nonnegative solution back to the original orientation.
struct SignNormalizedContribution {
    Vector y;
    std::vector<int> signs;  // -1, 0, +1; 0 exactly when y[f] == 0
};

SignNormalizedContribution sign_normalize(const Vector& contribution);

/// Best response under weighted l1 cost and a fully known (h0, C).
///
/// alpha <= 0 returns the zero profile (no effort needed). Otherwise the
/// optimum is supported on exactly one feature: the contribution-per-cost
/// argmax, lowest index on ties, with magnitude alpha / |Ch|_f*. Throws
/// Infeasible when alpha > 0 and the contribution vector is zero.
EffortProfile best_response_l1(const Vector& contribution, const Vector& cost_weights,
                               double alpha);

/// Best response under weighted lp cost, p > 1: e_f proportional to
/// (|Ch|_f / c_f)^(1/(p-1)), scaled so the score constraint is active.
EffortProfile best_response_lp(const Vector& contribution, const CostModel& model, double alpha);

/// True iff some desirable feature's contribution-per-cost ratio strictly
/// dominates every undesirable ratio (then the l1 best response is
/// beta-desirable for every beta in (0,1]).
bool check_l1_desirability(const Vector& contribution, const Vector& cost_weights,
                           const std::vector<bool>& desirable);

/// Sufficient condition for the lp best response (p > 1) to be
/// beta-desirable:
///   [sum_D r_f^(2/(p-1))]^1/2 >= beta/sqrt(1-beta^2) [sum_U r_f^(2/(p-1))]^1/2
/// with r_f = |Ch|_f / c_f. beta == 1 degenerates to requiring zero
/// undesirable contribution.
bool check_lp_desirability(const Vector& contribution, const Vector& cost_weights, double p,
                           const std::vector<bool>& desirable, double beta);

}  // namespace stratcls

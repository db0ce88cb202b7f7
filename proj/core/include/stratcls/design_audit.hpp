#pragma once

#include <optional>
#include <string>

#include "stratcls/agent_model.hpp"
#include "stratcls/matrix.hpp"

namespace stratcls {

/// Result of auditing one classifier against the agent's best response.
struct AuditReport {
    Vector classifier;
    Vector contribution;            // C h0
    Vector effort;                  // agent best response (empty when zero-effort)
    double cost_value = 0.0;
    std::optional<double> achieved_beta;  // absent for the zero-effort case
    bool desirability_check = false;      // sufficient-condition verdict (by cost model p)
    double undesirable_norm = 0.0;        // ||(C h0)_U||_{2/(p-1)} (max-norm at p == 1)
    bool zero_effort = false;             // alpha <= 0: no response needed
    std::string witness_notes;
};

/// Solve the agent best response for (h0, C) under the given cost model and
/// report the achieved beta together with the sufficient-condition verdict.
AuditReport audit_classifier(const Vector& h0, const Matrix& contribution_matrix,
                             const CostModel& model, const std::vector<bool>& desirable,
                             double beta, double alpha);

/// Membership in the convex set of beta-desirable classifiers for the
/// single-desirable-feature case, p in [1,3]. Requires |D| == 1
/// (PartitionError otherwise); classifiers with negative contribution
/// entries are outside the set by definition.
bool membership_single_desirable(const Vector& h0, const Matrix& contribution_matrix,
                                 const Vector& cost_weights, double p,
                                 const std::vector<bool>& desirable, double beta);

/// Membership in the gamma-bounded relaxation
/// { h0 : ||(C h0)_U||_{2/(p-1)} <= gamma }, p in (1,3], gamma > 0.
/// The bound is inclusive.
bool membership_undesirable_bounded(const Vector& h0, const Matrix& contribution_matrix,
                                    double p, const std::vector<bool>& desirable, double gamma);

/// The two explicit records showing the beta-desirable classifier set is
/// non-convex, evaluated in z = C h0 space through the desirability checks.
struct WitnessRecord {
    std::string which;           // "l1" or "lp"
    Vector z_first;
    Vector z_second;
    Vector midpoint;
    bool member_first = false;
    bool member_second = false;
    bool member_midpoint = false;
    std::vector<bool> desirable;
    double p = 0.0;              // cost exponent used (1 for the l1 case)
    double beta = 0.0;           // only meaningful for the lp case
};

WitnessRecord nonconvexity_witness(const std::string& which);

}  // namespace stratcls

#include "stratcls/complete_info.hpp"

#include <cmath>

#include "stratcls/errors.hpp"

namespace stratcls {

namespace {

bool all_zero(const Vector& v) {
    for (double x : v)
        if (x != 0.0) return false;
    return true;
}

void require_positive_weights(const Vector& w) {
    for (double x : w)
        if (!(x > 0.0)) throw DomainError("cost weights must be strictly positive");
}

}  // namespace

SignNormalizedContribution sign_normalize(const Vector& contribution) {
    SignNormalizedContribution out;
    out.y.resize(contribution.size());
    out.signs.resize(contribution.size());
    for (std::size_t f = 0; f < contribution.size(); ++f) {
        const double v = contribution[f];
        out.y[f] = std::fabs(v);
        out.signs[f] = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
    }
    return out;
}

EffortProfile best_response_l1(const Vector& contribution, const Vector& cost_weights,
                               double alpha) {
    require_same_size(contribution, cost_weights, "best_response_l1");
    require_positive_weights(cost_weights);
    EffortProfile profile{Vector(contribution.size(), 0.0)};
    if (alpha <= 0.0) return profile;
    if (all_zero(contribution))
        throw Infeasible("best_response_l1: zero contribution vector, alpha > 0");

    const auto norm = sign_normalize(contribution);
    std::size_t best = 0;
    double best_ratio = -1.0;
    for (std::size_t f = 0; f < norm.y.size(); ++f) {
        const double ratio = norm.y[f] / cost_weights[f];
        if (ratio > best_ratio) {  // strict: ties keep the lowest index
            best_ratio = ratio;
            best = f;
        }
    }
    profile.e[best] = norm.signs[best] * alpha / norm.y[best];
    return profile;
}

EffortProfile best_response_lp(const Vector& contribution, const CostModel& model, double alpha) {
    model.validate();
    if (!(model.p > 1.0)) throw DomainError("best_response_lp: requires p > 1");
    require_same_size(contribution, model.weights, "best_response_lp");
    EffortProfile profile{Vector(contribution.size(), 0.0)};
    if (alpha <= 0.0) return profile;
    if (all_zero(contribution))
        throw Infeasible("best_response_lp: zero contribution vector, alpha > 0");

    const auto norm = sign_normalize(contribution);
    const double exponent = 1.0 / (model.p - 1.0);
    double ratio_max = 0.0;
    for (std::size_t f = 0; f < norm.y.size(); ++f)
        ratio_max = std::max(ratio_max, norm.y[f] / model.weights[f]);

    // Direction scaled by the largest ratio before exponentiation; for p
    // close to 1 the exponent is huge and raw ratios would overflow.
    Vector direction(norm.y.size(), 0.0);
    double activation = 0.0;
    for (std::size_t f = 0; f < norm.y.size(); ++f) {
        if (norm.y[f] == 0.0) continue;
        const double r = (norm.y[f] / model.weights[f]) / ratio_max;
        direction[f] = std::exp(exponent * std::log(r));
        activation += norm.y[f] * direction[f];
    }
    const double kappa = alpha / activation;
    for (std::size_t f = 0; f < norm.y.size(); ++f)
        profile.e[f] = norm.signs[f] * kappa * direction[f];
    return profile;
}

bool check_l1_desirability(const Vector& contribution, const Vector& cost_weights,
                           const std::vector<bool>& desirable) {
    require_same_size(contribution, cost_weights, "check_l1_desirability");
    require_positive_weights(cost_weights);
    const auto norm = sign_normalize(contribution);
    double best_desirable = 0.0;
    double best_undesirable = 0.0;
    for (std::size_t f = 0; f < norm.y.size(); ++f) {
        const double ratio = norm.y[f] / cost_weights[f];
        if (desirable[f])
            best_desirable = std::max(best_desirable, ratio);
        else
            best_undesirable = std::max(best_undesirable, ratio);
    }
    return best_desirable > 0.0 && best_desirable > best_undesirable;
}

bool check_lp_desirability(const Vector& contribution, const Vector& cost_weights, double p,
                           const std::vector<bool>& desirable, double beta) {
    require_same_size(contribution, cost_weights, "check_lp_desirability");
    require_positive_weights(cost_weights);
    if (!(p > 1.0)) throw DomainError("check_lp_desirability: requires p > 1");
    if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("check_lp_desirability: beta in (0,1]");

    const auto norm = sign_normalize(contribution);
    if (beta == 1.0) {
        // The beta/sqrt(1-beta^2) factor diverges; the inequality holds in
        // the limit only with zero undesirable contribution.
        for (std::size_t f = 0; f < norm.y.size(); ++f)
            if (!desirable[f] && norm.y[f] != 0.0) return false;
        return true;
    }

    const double exponent = 2.0 / (p - 1.0);
    double ratio_max = 0.0;
    for (std::size_t f = 0; f < norm.y.size(); ++f)
        ratio_max = std::max(ratio_max, norm.y[f] / cost_weights[f]);
    if (ratio_max == 0.0) return true;  // 0 >= k*0: the inequality holds vacuously

    double sum_desirable = 0.0;
    double sum_undesirable = 0.0;
    for (std::size_t f = 0; f < norm.y.size(); ++f) {
        if (norm.y[f] == 0.0) continue;
        const double r = (norm.y[f] / cost_weights[f]) / ratio_max;
        const double powered = std::exp(exponent * std::log(r));
        if (desirable[f])
            sum_desirable += powered;
        else
            sum_undesirable += powered;
    }
    const double k = beta / std::sqrt(1.0 - beta * beta);
    return std::sqrt(sum_desirable) >= k * std::sqrt(sum_undesirable);
}

}  // namespace stratcls

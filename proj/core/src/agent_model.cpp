#include "stratcls/agent_model.hpp"

#include <cmath>

#include "stratcls/errors.hpp"

namespace stratcls {

void CostModel::validate() const {
    if (!(p >= 1.0)) throw DomainError("cost model: p must be >= 1");
    for (double w : weights)
        if (!(w > 0.0)) throw DomainError("cost model: weights must be strictly positive");
}

double cost(const CostModel& model, const Vector& effort) {
    model.validate();
    if (model.weights.size() != effort.size())
        throw DimensionMismatch("cost: effort length differs from weight vector");
    // Factor out the largest term so e.g. p close to 1 cannot overflow the
    // intermediate powers.
    double m = 0.0;
    for (std::size_t f = 0; f < effort.size(); ++f)
        m = std::max(m, std::fabs(effort[f]));
    if (m == 0.0) return 0.0;
    double acc = 0.0;
    for (std::size_t f = 0; f < effort.size(); ++f)
        acc += model.weights[f] * std::pow(std::fabs(effort[f]) / m, model.p);
    return m * std::pow(acc, 1.0 / model.p);
}

double beta_of(const Vector& effort, const std::vector<bool>& desirable) {
    if (effort.size() != desirable.size())
        throw DimensionMismatch("beta_of: effort length differs from partition");
    double total = 0.0;
    double on_desirable = 0.0;
    for (std::size_t f = 0; f < effort.size(); ++f) {
        const double sq = effort[f] * effort[f];
        total += sq;
        if (desirable[f]) on_desirable += sq;
    }
    if (total == 0.0) throw ZeroEffort("beta_of: effort profile is zero");
    return std::sqrt(on_desirable / total);
}

bool is_beta_desirable(const Vector& effort, const std::vector<bool>& desirable, double beta) {
    return beta_of(effort, desirable) >= beta;
}

}  // namespace stratcls

#pragma once

#include "stratcls/matrix.hpp"

namespace stratcls {

/// Weighted lp effort cost: Cost(e) = (sum_f c_f |e_f|^p)^(1/p), p >= 1,
/// c_f > 0.
struct CostModel {
    double p = 2.0;
    Vector weights;

    static CostModel uniform(std::size_t dim, double p = 2.0) {
        return CostModel{p, Vector(dim, 1.0)};
    }
    void validate() const;
};

struct EffortProfile {
    Vector e;
};

/// Score shortfall and failure tolerance for one best-response instance.
struct Scenario {
    double alpha = 1.0;
    double delta = 0.5;
};

double cost(const CostModel& model, const Vector& effort);

/// Achieved desirability ratio ||e_D||_2 / ||e||_2 in [0,1].
/// Throws ZeroEffort when ||e||_2 == 0 (the ratio divides by it).
double beta_of(const Vector& effort, const std::vector<bool>& desirable);

/// True iff beta_of(e) >= beta; the bound is inclusive.
bool is_beta_desirable(const Vector& effort, const std::vector<bool>& desirable, double beta);

}  // namespace stratcls

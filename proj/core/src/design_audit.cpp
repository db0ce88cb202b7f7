#include "stratcls/design_audit.hpp"

#include <cmath>

#include "stratcls/complete_info.hpp"
#include "stratcls/errors.hpp"

namespace stratcls {

namespace {

// ||x_U||_q with q = 2/(p-1); the max norm at p == 1 (the q -> inf limit).
double undesirable_norm(const Vector& contribution, const std::vector<bool>& desirable,
                        double p) {
    double max_abs = 0.0;
    for (std::size_t f = 0; f < contribution.size(); ++f)
        if (!desirable[f]) max_abs = std::max(max_abs, std::fabs(contribution[f]));
    if (p == 1.0 || max_abs == 0.0) return max_abs;
    const double q = 2.0 / (p - 1.0);
    double acc = 0.0;
    for (std::size_t f = 0; f < contribution.size(); ++f) {
        if (desirable[f] || contribution[f] == 0.0) continue;
        acc += std::exp(q * std::log(std::fabs(contribution[f]) / max_abs));
    }
    return max_abs * std::exp(std::log(acc) / q);
}

// Row rank of C by elimination with a relative pivot threshold; the
// z-space/h0-space convexity equivalence needs full row rank.
bool full_row_rank(const Matrix& m, double tol) {
    Matrix a = m;
    const std::size_t rows = a.rows();
    const std::size_t cols = a.cols();
    const double floor = tol * std::max(a.max_abs(), 1e-300);
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t piv = rank;
        double best = std::fabs(a(rank, col));
        for (std::size_t i = rank + 1; i < rows; ++i)
            if (std::fabs(a(i, col)) > best) {
                best = std::fabs(a(i, col));
                piv = i;
            }
        if (best <= floor) continue;
        if (piv != rank)
            for (std::size_t j = 0; j < cols; ++j) std::swap(a(rank, j), a(piv, j));
        for (std::size_t i = rank + 1; i < rows; ++i) {
            const double f = a(i, col) / a(rank, col);
            for (std::size_t j = col; j < cols; ++j) a(i, j) -= f * a(rank, j);
        }
        ++rank;
    }
    return rank == rows;
}

}  // namespace

AuditReport audit_classifier(const Vector& h0, const Matrix& contribution_matrix,
                             const CostModel& model, const std::vector<bool>& desirable,
                             double beta, double alpha) {
    if (contribution_matrix.cols() != h0.size())
        throw DimensionMismatch("audit_classifier: classifier length differs from C");
    model.validate();

    AuditReport report;
    report.classifier = h0;
    report.contribution = mat_vec(contribution_matrix, h0);
    report.undesirable_norm = undesirable_norm(report.contribution, desirable, model.p);
    if (model.p == 1.0)
        report.desirability_check =
            check_l1_desirability(report.contribution, model.weights, desirable);
    else
        report.desirability_check =
            check_lp_desirability(report.contribution, model.weights, model.p, desirable, beta);

    if (!full_row_rank(contribution_matrix, 1e-10))
        report.witness_notes =
            "contribution matrix is rank-deficient; z-space membership verdicts "
            "do not transfer to convexity statements about classifier space";

    if (alpha <= 0.0) {
        report.zero_effort = true;
        return report;  // no effort needed; beta undefined on the zero profile
    }

    EffortProfile response = model.p == 1.0
                                 ? best_response_l1(report.contribution, model.weights, alpha)
                                 : best_response_lp(report.contribution, model, alpha);
    report.effort = response.e;
    report.cost_value = cost(model, response.e);
    report.achieved_beta = beta_of(response.e, desirable);
    return report;
}

bool membership_single_desirable(const Vector& h0, const Matrix& contribution_matrix,
                                 const Vector& cost_weights, double p,
                                 const std::vector<bool>& desirable, double beta) {
    if (!(p >= 1.0 && p <= 3.0))
        throw DomainError("membership_single_desirable: p must lie in [1,3]");
    if (!(beta > 0.0 && beta < 1.0))
        throw DomainError("membership_single_desirable: beta must lie in (0,1)");
    std::size_t n_desirable = 0;
    std::size_t fd = 0;
    for (std::size_t f = 0; f < desirable.size(); ++f)
        if (desirable[f]) {
            ++n_desirable;
            fd = f;
        }
    if (n_desirable != 1)
        throw PartitionError("membership_single_desirable: exactly one desirable feature required");

    const Vector z = mat_vec(contribution_matrix, h0);
    require_same_size(z, cost_weights, "membership_single_desirable");
    for (double v : z)
        if (v < 0.0) return false;  // the set lives inside C h0 >= 0

    if (p == 1.0) {
        double best_undesirable = 0.0;
        for (std::size_t f = 0; f < z.size(); ++f)
            if (!desirable[f]) best_undesirable = std::max(best_undesirable, z[f] / cost_weights[f]);
        return best_undesirable < z[fd] / cost_weights[fd];
    }

    // r(h0) = K ||B h0||_{2/(p-1)} - (C h0)_{fd} with
    // K = c_fd (beta/sqrt(1-beta^2))^(p-1); membership iff r(h0) <= 0.
    const double q = 2.0 / (p - 1.0);
    double acc = 0.0;
    double max_ratio = 0.0;
    for (std::size_t f = 0; f < z.size(); ++f)
        if (!desirable[f]) max_ratio = std::max(max_ratio, z[f] / cost_weights[f]);
    if (max_ratio > 0.0) {
        for (std::size_t f = 0; f < z.size(); ++f) {
            if (desirable[f]) continue;
            const double r = (z[f] / cost_weights[f]) / max_ratio;
            if (r > 0.0) acc += std::exp(q * std::log(r));
        }
    }
    const double norm_u = max_ratio > 0.0 ? max_ratio * std::exp(std::log(acc) / q) : 0.0;
    const double k = cost_weights[fd] * std::pow(beta / std::sqrt(1.0 - beta * beta), p - 1.0);
    return k * norm_u - z[fd] <= 0.0;
}

bool membership_undesirable_bounded(const Vector& h0, const Matrix& contribution_matrix,
                                    double p, const std::vector<bool>& desirable, double gamma) {
    if (!(p > 1.0 && p <= 3.0))
        throw DomainError("membership_undesirable_bounded: p must lie in (1,3]");
    if (!(gamma > 0.0)) throw DomainError("membership_undesirable_bounded: gamma must be > 0");
    const Vector z = mat_vec(contribution_matrix, h0);
    return undesirable_norm(z, desirable, p) <= gamma;
}

WitnessRecord nonconvexity_witness(const std::string& which) {
    WitnessRecord record;
    record.which = which;
    if (which == "l1") {
        record.z_first = {4.0, 7.0, 3.0, 6.0};
        record.z_second = {7.0, 4.0, 3.0, 6.0};
        record.desirable = {true, true, false, false};
        record.p = 1.0;
        const Vector ones(4, 1.0);
        record.midpoint.resize(4);
        for (std::size_t i = 0; i < 4; ++i)
            record.midpoint[i] = 0.5 * (record.z_first[i] + record.z_second[i]);
        record.member_first = check_l1_desirability(record.z_first, ones, record.desirable);
        record.member_second = check_l1_desirability(record.z_second, ones, record.desirable);
        record.member_midpoint = check_l1_desirability(record.midpoint, ones, record.desirable);
    } else if (which == "lp") {
        record.z_first = {0.0, 1.0, 1.0};
        record.z_second = {1.0, 0.0, 1.0};
        record.desirable = {true, true, false};
        record.p = 2.0;
        record.beta = 1.0 / std::sqrt(2.0);
        const Vector ones(3, 1.0);
        record.midpoint.resize(3);
        for (std::size_t i = 0; i < 3; ++i)
            record.midpoint[i] = 0.5 * (record.z_first[i] + record.z_second[i]);
        record.member_first =
            check_lp_desirability(record.z_first, ones, record.p, record.desirable, record.beta);
        record.member_second =
            check_lp_desirability(record.z_second, ones, record.p, record.desirable, record.beta);
        record.member_midpoint =
            check_lp_desirability(record.midpoint, ones, record.p, record.desirable, record.beta);
    } else {
        throw DomainError("nonconvexity_witness: case must be \"l1\" or \"lp\"");
    }
    return record;
}

}  // namespace stratcls

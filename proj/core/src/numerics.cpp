#include "stratcls/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stratcls {

namespace {
constexpr double kInvSqrt2 = 0.7071067811865475244008443621048490;
constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343819;
}  // namespace

double std_normal_cdf(double x) {
    if (std::isnan(x)) throw DomainError("std_normal_cdf: x is NaN");
    // erfc is accurate to a few ulp in relative terms, so the absolute
    // error stays far below 1e-12 across the whole range, tails included.
    return 0.5 * std::erfc(-x * kInvSqrt2);
}

double std_normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double std_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw DomainError("std_normal_quantile: p must lie strictly in (0,1)");

    // Acklam's rational approximation.
    static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // Two Newton steps against the high-accuracy CDF.
    for (int it = 0; it < 2; ++it) {
        const double pdf = std_normal_pdf(x);
        if (pdf <= 0.0 || !std::isfinite(pdf)) break;
        const double step = (std_normal_cdf(x) - p) / pdf;
        if (!std::isfinite(step)) break;
        x -= step;
    }
    return x;
}

EigenSym eigen_sym(const Matrix& a) {
    if (!a.is_square()) throw DimensionMismatch("eigen_sym: matrix not square");
    if (!is_symmetric(a, 0.0)) {
        // Tolerate external inputs that are symmetric only to rounding.
        if (!is_symmetric(a, 1e-12 * (1.0 + a.max_abs())))
            throw DomainError("eigen_sym: matrix not symmetric");
    }
    const std::size_t n = a.rows();
    Matrix m = symmetrized(a);
    Matrix v = Matrix::identity(n);

    auto off_norm = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += m(i, j) * m(i, j);
        return std::sqrt(2.0 * s);
    };

    const double scale = std::max(m.max_abs(), 1e-300);
    const double stop = 1e-15 * scale * static_cast<double>(n);
    for (int sweep = 0; sweep < 100 && off_norm() > stop; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = m(p, q);
                if (std::fabs(apq) <= 1e-300) {
                    m(p, q) = 0.0;
                    m(q, p) = 0.0;
                    continue;
                }
                const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double cos = 1.0 / std::sqrt(t * t + 1.0);
                const double sin = t * cos;
                const double tau = sin / (1.0 + cos);

                const double app = m(p, p);
                const double aqq = m(q, q);
                m(p, p) = app - t * apq;
                m(q, q) = aqq + t * apq;
                m(p, q) = 0.0;
                m(q, p) = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    if (r != p && r != q) {
                        const double arp = m(r, p);
                        const double arq = m(r, q);
                        m(r, p) = arp - sin * (arq + tau * arp);
                        m(p, r) = m(r, p);
                        m(r, q) = arq + sin * (arp - tau * arq);
                        m(q, r) = m(r, q);
                    }
                    const double vrp = v(r, p);
                    const double vrq = v(r, q);
                    v(r, p) = vrp - sin * (vrq + tau * vrp);
                    v(r, q) = vrq + sin * (vrp - tau * vrq);
                }
            }
        }
    }

    EigenSym result;
    result.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) result.values[i] = m(i, i);

    // Sort ascending, permuting eigenvector columns alongside.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return result.values[x] < result.values[y]; });
    Vector sorted(n);
    Matrix vs(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        sorted[k] = result.values[order[k]];
        for (std::size_t r = 0; r < n; ++r) vs(r, k) = v(r, order[k]);
    }
    result.values = std::move(sorted);
    result.vectors = std::move(vs);
    return result;
}

Matrix psd_sqrt(const Matrix& m) {
    EigenSym eig = eigen_sym(m);
    const std::size_t n = m.rows();
    Vector roots(n);
    for (std::size_t i = 0; i < n; ++i) {
        double lambda = eig.values[i];
        if (lambda < -1e-8)
            throw NotPsd("psd_sqrt: eigenvalue " + std::to_string(lambda) + " below -1e-8");
        if (lambda < 0.0) lambda = 0.0;
        roots[i] = std::sqrt(lambda);
    }
    Matrix s(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                acc += eig.vectors(i, k) * roots[k] * eig.vectors(j, k);
            s(i, j) = acc;
            s(j, i) = acc;
        }
    }
    return s;
}

Vector linear_solve(const Matrix& a, const Vector& b) {
    if (!a.is_square()) throw DimensionMismatch("linear_solve: matrix not square");
    if (a.rows() != b.size()) throw DimensionMismatch("linear_solve: rhs length differs");
    const std::size_t n = a.rows();
    Matrix lu = a;
    Vector x = b;
    const double pivot_floor = 1e-12 * std::max(a.max_abs(), 1e-300);

    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::fabs(lu(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double cand = std::fabs(lu(i, k));
            if (cand > best) {
                best = cand;
                piv = i;
            }
        }
        if (best <= pivot_floor)
            throw SingularMatrix("linear_solve: pivot below relative threshold 1e-12");
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(piv, j));
            std::swap(x[k], x[piv]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = lu(i, k) / lu(k, k);
            lu(i, k) = 0.0;
            if (f == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
            x[i] -= f * x[k];
        }
    }
    for (std::size_t ik = n; ik-- > 0;) {
        double s = x[ik];
        for (std::size_t j = ik + 1; j < n; ++j) s -= lu(ik, j) * x[j];
        x[ik] = s / lu(ik, ik);
    }
    return x;
}

}  // namespace stratcls

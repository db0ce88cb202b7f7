#pragma once

#include "stratcls/matrix.hpp"

namespace stratcls {

/// Standard normal CDF, erfc-backed. Absolute error well below 1e-12
/// everywhere; saturates to 0/1 in the far tails instead of erroring.
double std_normal_cdf(double x);

/// Standard normal density.
double std_normal_pdf(double x);

/// Inverse standard normal CDF for p in (0,1).
///
/// Rational initial guess (Acklam's approximation, |rel err| < 1.2e-9)
/// refined by two Newton steps against the erfc-backed CDF, which brings the
/// result to full double precision: std_normal_cdf(result) == p to ~1e-15.
/// Throws DomainError for p <= 0 or p >= 1.
double std_normal_quantile(double p);

/// Eigendecomposition A = V diag(values) V' of a symmetric matrix.
/// values ascending; columns of V are the matching unit eigenvectors.
struct EigenSym {
    Vector values;
    Matrix vectors;
};

/// Cyclic Jacobi rotations. Input must be square and symmetric as stored;
/// intended for the small dense matrices this toolkit works with.
EigenSym eigen_sym(const Matrix& a);

/// Symmetric PSD square root via eigendecomposition. Eigenvalues in
/// [-1e-8, 0) are clamped to zero (covariances assembled from products
/// accumulate rounding); anything below -1e-8 throws NotPsd.
Matrix psd_sqrt(const Matrix& m);

/// Solve A x = b by LU with partial pivoting. Throws SingularMatrix when a
/// pivot falls below 1e-12 relative to the largest entry of A.
Vector linear_solve(const Matrix& a, const Vector& b);

}  // namespace stratcls

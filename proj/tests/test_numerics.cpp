#include <doctest.h>

#include <cmath>

#include "stratcls/errors.hpp"
#include "stratcls/numerics.hpp"
#include "stratcls/rng.hpp"
#include "test_util.hpp"

using namespace stratcls;

TEST_SUITE_BEGIN("numerics");

TEST_CASE("cdf reference values") {
    CHECK(std_normal_cdf(0.0) == 0.5);
    // High-precision oracle values (series/continued-fraction, evaluated offline).
    CHECK(std::fabs(std_normal_cdf(1.959964) - 0.975) < 1e-6);
    CHECK(std_normal_cdf(-8.0) < 1e-14);
    CHECK(std_normal_cdf(8.0) > 1.0 - 1e-14);
}

TEST_CASE("cdf is monotone on random pairs") {
    Rng rng(1001);
    for (int i = 0; i < 500; ++i) {
        const double x = rng.uniform(-10.0, 10.0);
        const double y = rng.uniform(-10.0, 10.0);
        const double lo = std::min(x, y);
        const double hi = std::max(x, y);
        CHECK(std_normal_cdf(lo) <= std_normal_cdf(hi));
    }
}

TEST_CASE("quantile reference values and domain") {
    CHECK(std_normal_quantile(0.5) == 0.0);
    CHECK(std::fabs(std_normal_quantile(0.975) - 1.959964) < 1e-6);
    CHECK(std::fabs(std_normal_quantile(0.1) - (-1.281552)) < 1e-6);
    CHECK_THROWS_AS(std_normal_quantile(0.0), DomainError);
    CHECK_THROWS_AS(std_normal_quantile(1.0), DomainError);
    CHECK_THROWS_AS(std_normal_quantile(-0.2), DomainError);
}

TEST_CASE("quantile inverts cdf on a grid") {
    // 1000-point grid over [-6, 6].
    for (int k = 0; k < 1000; ++k) {
        const double x = -6.0 + 12.0 * k / 999.0;
        const double p = std_normal_cdf(x);
        CHECK(std::fabs(std_normal_quantile(p) - x) < 1e-8);
    }
}

TEST_CASE("cdf(quantile(p)) round trip") {
    Rng rng(1002);
    for (int i = 0; i < 200; ++i) {
        const double p = rng.uniform(1e-12, 1.0 - 1e-12);
        CHECK(std::fabs(std_normal_cdf(std_normal_quantile(p)) - p) < 1e-10);
    }
}

TEST_CASE("psd_sqrt on identity and diagonals") {
    const Matrix id3 = Matrix::identity(3);
    const Matrix root = psd_sqrt(id3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(root(i, j) == doctest::Approx(id3(i, j)).epsilon(1e-12));

    Matrix diag(2, 2);
    diag(0, 0) = 4.0;
    diag(1, 1) = 9.0;
    const Matrix droot = psd_sqrt(diag);
    CHECK(droot(0, 0) == doctest::Approx(2.0));
    CHECK(droot(1, 1) == doctest::Approx(3.0));
    CHECK(std::fabs(droot(0, 1)) < 1e-12);
}

TEST_CASE("psd_sqrt squares back to the input") {
    Rng rng(1003);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t d = 2 + rng.below(7);
        const Matrix m = testutil::random_psd(rng, d);
        const Matrix s = psd_sqrt(m);
        const Matrix back = s * s;
        const double tol = 1e-10 * (1.0 + m.max_abs());
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) CHECK(std::fabs(back(i, j) - m(i, j)) < tol);
        CHECK(is_symmetric(s, 1e-12));
    }
}

TEST_CASE("psd_sqrt of S*S recovers S") {
    Rng rng(1004);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t d = 2 + rng.below(7);  // d <= 8
        const Matrix s = testutil::random_psd(rng, d);
        const Matrix recovered = psd_sqrt(s * s);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                CHECK(std::fabs(recovered(i, j) - s(i, j)) < 1e-8 * (1.0 + s.max_abs()));
    }
}

TEST_CASE("psd_sqrt rejects indefinite input, clamps slight negatives") {
    Matrix neg(2, 2);
    neg(0, 0) = 1.0;
    neg(1, 1) = -1.0;
    CHECK_THROWS_AS(psd_sqrt(neg), NotPsd);

    Matrix slight(2, 2);
    slight(0, 0) = 1.0;
    slight(1, 1) = -5e-9;  // inside the clamp band
    const Matrix root = psd_sqrt(slight);
    CHECK(root(1, 1) == doctest::Approx(0.0));
}

TEST_CASE("eigen_sym reproduces A = V diag(l) V'") {
    Rng rng(1005);
    const Matrix a = testutil::random_psd(rng, 6);
    const EigenSym eig = eigen_sym(a);
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = 0; j < 6; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < 6; ++k)
                acc += eig.vectors(i, k) * eig.values[k] * eig.vectors(j, k);
            CHECK(std::fabs(acc - a(i, j)) < 1e-10 * (1.0 + a.max_abs()));
        }
    }
    for (std::size_t k = 0; k + 1 < 6; ++k) CHECK(eig.values[k] <= eig.values[k + 1]);
}

TEST_CASE("linear_solve basics") {
    const Matrix id = Matrix::identity(3);
    const Vector b = {1.0, -2.0, 3.0};
    const Vector x = linear_solve(id, b);
    for (std::size_t i = 0; i < 3; ++i) CHECK(x[i] == doctest::Approx(b[i]));

    Matrix diag(2, 2);
    diag(0, 0) = 2.0;
    diag(1, 1) = 4.0;
    const Vector y = linear_solve(diag, {2.0, 8.0});
    CHECK(y[0] == doctest::Approx(1.0));
    CHECK(y[1] == doctest::Approx(2.0));
}

TEST_CASE("linear_solve residual on random well-conditioned systems") {
    Rng rng(1006);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t d = 2 + rng.below(9);
        Matrix a(d, d);
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
            a(i, i) += 3.0;  // diagonal dominance keeps the system well-conditioned
        }
        const Vector b = testutil::random_vector(rng, d);
        const Vector x = linear_solve(a, b);
        Vector residual = vec_sub(mat_vec(a, x), b);
        CHECK(norm_inf(residual) <= 1e-9 * (1.0 + norm_inf(b)));
    }
}

TEST_CASE("linear_solve rejects singular systems") {
    Matrix sing(2, 2);
    sing(0, 0) = 1.0;
    sing(0, 1) = 2.0;
    sing(1, 0) = 2.0;
    sing(1, 1) = 4.0;
    CHECK_THROWS_AS(linear_solve(sing, {1.0, 1.0}), SingularMatrix);
}

TEST_SUITE_END();

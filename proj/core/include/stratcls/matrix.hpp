#pragma once

#include <cstddef>
#include <vector>

#include "stratcls/errors.hpp"

namespace stratcls {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles. Sized for the problem scale of this
/// toolkit (feature graphs of a few dozen nodes); no sparsity, no views.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }

    Matrix transposed() const;

    /// Largest absolute entry; 0 for an empty matrix.
    double max_abs() const;

    bool is_square() const { return rows_ == cols_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);

/// y = A x
Vector mat_vec(const Matrix& a, const Vector& x);
/// y = A' x
Vector mat_transpose_vec(const Matrix& a, const Vector& x);

/// (A + A')/2, exact symmetric storage for downstream eigen routines.
Matrix symmetrized(const Matrix& a);
bool is_symmetric(const Matrix& a, double tol = 0.0);

double dot(const Vector& a, const Vector& b);
double norm2(const Vector& v);
double norm1(const Vector& v);
double norm_inf(const Vector& v);
Vector scaled(const Vector& v, double s);
Vector vec_add(const Vector& a, const Vector& b);
Vector vec_sub(const Vector& a, const Vector& b);

/// x' A x, assuming A square and dimensions match.
double quadratic_form(const Matrix& a, const Vector& x);

void require_same_size(const Vector& a, const Vector& b, const char* where);

}  // namespace stratcls

#pragma once

#include <array>
#include <vector>

namespace ef::linalg {

using Vec3 = std::array<double, 3>;

/// Row-major 3x3 matrix.
struct Mat3 {
    std::array<double, 9> m{};

    double& operator()(int r, int c) { return m[size_t(3 * r + c)]; }
    double operator()(int r, int c) const { return m[size_t(3 * r + c)]; }

    static Mat3 identity();
    Mat3 transposed() const;
    Mat3 operator*(const Mat3& other) const;
    Vec3 operator*(const Vec3& v) const;
    double det() const;
    double trace() const { return m[0] + m[4] + m[8]; }
};

/// Symmetric 3x3 matrix, single storage per off-diagonal entry.
struct SymMatrix3 {
    double a = 0, b = 0, c = 0; // diagonal
    double f = 0, g = 0, h = 0; // (1,2), (0,2), (0,1)

    Mat3 full() const;
    static SymMatrix3 from_full(const Mat3& m); // averages off-diagonal pairs
    double max_diag_abs() const;
    double max_offdiag_abs() const;
};

/// Small dense row-major matrix. Sizes in this project never exceed 10
/// columns; row counts are bounded by the number of data points.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * size_t(cols), 0.0) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double& operator()(int r, int c) { return a_[size_t(r) * cols_ + c]; }
    double operator()(int r, int c) const { return a_[size_t(r) * cols_ + c]; }

    static Matrix identity(int n);
    Matrix transposed() const;
    Matrix operator*(const Matrix& other) const;
    std::vector<double> operator*(const std::vector<double>& v) const;
    double max_abs() const;
    bool all_finite() const;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

struct EigenDecomposition {
    std::vector<double> values; // weakly descending
    Matrix vectors;             // orthonormal columns, same order
};

/// Symmetric eigendecomposition by cyclic Jacobi. Input must be symmetric
/// with finite entries; intended for sizes up to 10x10.
EigenDecomposition sym_eigen(const Matrix& m);
EigenDecomposition sym_eigen(const SymMatrix3& m);

/// Deterministic sign fixing: each column's largest-magnitude entry is made
/// nonnegative; if that leaves det = -1, the column with the smallest
/// largest-magnitude entry is flipped back. Input columns must be
/// orthonormal to 1e-8.
Mat3 make_proper(const Mat3& v);

/// Thin SVD a = u * diag(sigma) * v^T via one-sided Jacobi. Requires
/// rows >= cols. Singular values weakly descending.
struct Svd {
    Matrix u;
    std::vector<double> sigma;
    Matrix v;
};
Svd jacobi_svd(const Matrix& a);

/// Solves a*x = b. Falls back to the minimum-norm least-squares solution
/// when a is rank-deficient (singular values below 1e-12 relative).
std::vector<double> solve_linear(const Matrix& a, const std::vector<double>& b);

double dot(const std::vector<double>& x, const std::vector<double>& y);
double norm_inf(const std::vector<double>& x);

} // namespace ef::linalg

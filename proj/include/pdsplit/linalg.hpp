#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdsplit {

using Vec = std::vector<double>;

// Dense row-major matrix. rows = codomain dimension, cols = domain dimension.
// Zero-dimensional shapes are allowed (degenerate spaces show up in tests).
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {
        if (r < 0 || c < 0) throw std::invalid_argument("Mat: negative dimension");
    }

    double& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static Mat identity(int n);
    static Mat from_rows(const std::vector<Vec>& rows);
    static Mat from_columns(const std::vector<Vec>& cols);
    Vec column(int j) const;
    Vec row(int i) const;
};

// Thrown by operator_norm when power iteration gives up; carries the best
// estimate seen so far.
struct NormConvergenceError : std::runtime_error {
    double best_estimate;
    explicit NormConvergenceError(double best)
        : std::runtime_error("operator_norm: power iteration did not converge"),
          best_estimate(best) {}
};

// ---- vector helpers ----
double dot(const Vec& x, const Vec& y);
double norm(const Vec& x);
double norm_inf(const Vec& x);
Vec add(const Vec& x, const Vec& y);
Vec sub(const Vec& x, const Vec& y);
Vec scaled(const Vec& x, double s);
Vec concat(const Vec& x, const Vec& y);
Vec zeros(int n);
bool all_finite(const Vec& x);
void check_finite(const Vec& x, const char* what);

// ---- matrix operations ----
Mat adjoint(const Mat& m);
Vec matvec(const Mat& m, const Vec& x);
Mat matmul(const Mat& A, const Mat& B);
Mat mat_add(const Mat& A, const Mat& B);
Mat mat_scaled(const Mat& A, double s);
Mat negated(const Mat& A);
double frobenius(const Mat& A);
Mat hcat(const Mat& A, const Mat& B);
Mat vcat(const Mat& A, const Mat& B);

// Largest singular value via power iteration on M*M. Deterministic start
// (1,...,1)/sqrt(n), seeded random restart on stagnation.
double operator_norm(const Mat& m, double tol = 1e-10);

// Symmetric eigendecomposition by cyclic Jacobi (desk scale, n <= ~200).
// S = vectors * diag(values) * vectors^T, eigenvalues ascending.
struct EigSym {
    Vec values;
    Mat vectors;
};
EigSym jacobi_eigensym(const Mat& S, double tol = 1e-13);

// Principal square root of a symmetric PSD matrix. Eigenvalues in
// [-tol, 0) are clamped to zero; beyond that the matrix is rejected.
Mat principal_sqrt_psd(const Mat& S, double tol = 1e-10);

// Lower-triangular R with R R^T = S, clamping ~zero pivots for singular
// PSD input.
Mat cholesky_psd(const Mat& S, double tol = 1e-10);

// Square solve with partial pivoting.
Vec solve(Mat A, Vec b);

// Minimum-norm least squares via eigendecomposition of A^T A.
struct LstsqResult {
    Vec x;
    double residual;  // ||A x - b||
};
LstsqResult lstsq(const Mat& A, const Vec& b, double rcond = 1e-12);

// Orthonormal basis of ker(A) (columns). Empty (n x 0) when trivial.
Mat nullspace(const Mat& A, double tol = 1e-10);

// Orthonormalize the columns of A (modified Gram-Schmidt, rank-revealing).
Mat orthonormal_columns(const Mat& A, double tol = 1e-12);

// Orthonormal basis of the orthogonal complement of span(columns of V) in
// R^dim. V may have zero columns.
Mat complement_basis(const Mat& V, int dim, double tol = 1e-10);

}  // namespace pdsplit

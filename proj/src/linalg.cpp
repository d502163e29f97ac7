#include "pdsplit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace pdsplit {

Mat Mat::identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Mat Mat::from_rows(const std::vector<Vec>& rows) {
    if (rows.empty()) return Mat(0, 0);
    Mat m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (int i = 0; i < m.rows; ++i) {
        if (static_cast<int>(rows[i].size()) != m.cols)
            throw std::invalid_argument("Mat::from_rows: ragged rows");
        for (int j = 0; j < m.cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

Mat Mat::from_columns(const std::vector<Vec>& cols) {
    if (cols.empty()) return Mat(0, 0);
    Mat m(static_cast<int>(cols[0].size()), static_cast<int>(cols.size()));
    for (int j = 0; j < m.cols; ++j) {
        if (static_cast<int>(cols[j].size()) != m.rows)
            throw std::invalid_argument("Mat::from_columns: ragged columns");
        for (int i = 0; i < m.rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
}

Vec Mat::column(int j) const {
    Vec c(rows);
    for (int i = 0; i < rows; ++i) c[i] = (*this)(i, j);
    return c;
}

Vec Mat::row(int i) const {
    Vec r(cols);
    for (int j = 0; j < cols; ++j) r[j] = (*this)(i, j);
    return r;
}

double dot(const Vec& x, const Vec& y) {
    if (x.size() != y.size()) throw std::invalid_argument("dot: dimension mismatch");
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double norm(const Vec& x) { return std::sqrt(dot(x, x)); }

double norm_inf(const Vec& x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::fabs(v));
    return m;
}

Vec add(const Vec& x, const Vec& y) {
    if (x.size() != y.size()) throw std::invalid_argument("add: dimension mismatch");
    Vec r(x.size());
    for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] + y[i];
    return r;
}

Vec sub(const Vec& x, const Vec& y) {
    if (x.size() != y.size()) throw std::invalid_argument("sub: dimension mismatch");
    Vec r(x.size());
    for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] - y[i];
    return r;
}

Vec scaled(const Vec& x, double s) {
    Vec r(x.size());
    for (size_t i = 0; i < x.size(); ++i) r[i] = s * x[i];
    return r;
}

Vec concat(const Vec& x, const Vec& y) {
    Vec r;
    r.reserve(x.size() + y.size());
    r.insert(r.end(), x.begin(), x.end());
    r.insert(r.end(), y.begin(), y.end());
    return r;
}

Vec zeros(int n) { return Vec(static_cast<size_t>(n), 0.0); }

bool all_finite(const Vec& x) {
    for (double v : x)
        if (!std::isfinite(v)) return false;
    return true;
}

void check_finite(const Vec& x, const char* what) {
    if (!all_finite(x)) throw std::invalid_argument(std::string(what) + ": non-finite entry");
}

Mat adjoint(const Mat& m) {
    Mat t(m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
    return t;
}

Vec matvec(const Mat& m, const Vec& x) {
    if (static_cast<int>(x.size()) != m.cols)
        throw std::invalid_argument("matvec: dimension mismatch");
    Vec y(m.rows, 0.0);
    for (int i = 0; i < m.rows; ++i) {
        double s = 0.0;
        for (int j = 0; j < m.cols; ++j) s += m(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

Mat matmul(const Mat& A, const Mat& B) {
    if (A.cols != B.rows) throw std::invalid_argument("matmul: dimension mismatch");
    Mat C(A.rows, B.cols);
    for (int i = 0; i < A.rows; ++i)
        for (int k = 0; k < A.cols; ++k) {
            double aik = A(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < B.cols; ++j) C(i, j) += aik * B(k, j);
        }
    return C;
}

Mat mat_add(const Mat& A, const Mat& B) {
    if (A.rows != B.rows || A.cols != B.cols)
        throw std::invalid_argument("mat_add: dimension mismatch");
    Mat C = A;
    for (size_t i = 0; i < C.a.size(); ++i) C.a[i] += B.a[i];
    return C;
}

Mat mat_scaled(const Mat& A, double s) {
    Mat C = A;
    for (double& v : C.a) v *= s;
    return C;
}

Mat negated(const Mat& A) { return mat_scaled(A, -1.0); }

double frobenius(const Mat& A) {
    double s = 0.0;
    for (double v : A.a) s += v * v;
    return std::sqrt(s);
}

Mat hcat(const Mat& A, const Mat& B) {
    if (A.rows != B.rows) throw std::invalid_argument("hcat: row mismatch");
    Mat C(A.rows, A.cols + B.cols);
    for (int i = 0; i < A.rows; ++i) {
        for (int j = 0; j < A.cols; ++j) C(i, j) = A(i, j);
        for (int j = 0; j < B.cols; ++j) C(i, A.cols + j) = B(i, j);
    }
    return C;
}

Mat vcat(const Mat& A, const Mat& B) {
    if (A.cols != B.cols) throw std::invalid_argument("vcat: column mismatch");
    Mat C(A.rows + B.rows, A.cols);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) C(i, j) = A(i, j);
    for (int i = 0; i < B.rows; ++i)
        for (int j = 0; j < B.cols; ++j) C(A.rows + i, j) = B(i, j);
    return C;
}

double operator_norm(const Mat& m, double tol) {
    if (tol <= 0) throw std::invalid_argument("operator_norm: tol must be positive");
    const int n = m.cols;
    if (n == 0 || m.rows == 0) return 0.0;

    // S = M^T M, symmetric PSD; largest eigenvalue = ||M||^2.
    Mat S = matmul(adjoint(m), m);
    double smax = 0.0;
    for (double v : S.a) smax = std::max(smax, std::fabs(v));
    if (smax == 0.0) return 0.0;

    Vec v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    double lambda = 0.0, best = 0.0;
    const int max_iter = 500 * n + 5000;
    int restarts = 0;
    std::mt19937_64 gen(0x5eedULL);
    double last_resid = std::numeric_limits<double>::infinity();
    int stagnant = 0;

    for (int it = 0; it < max_iter; ++it) {
        Vec sv = matvec(S, v);
        double nv = norm(sv);
        if (nv <= smax * 1e-300) return 0.0;  // start landed in the kernel
        lambda = dot(v, sv);
        best = std::max(best, lambda);
        Vec resid = sub(sv, scaled(v, lambda));
        double r = norm(resid);
        if (lambda > 0 && r <= tol * lambda) return std::sqrt(lambda);
        if (r >= 0.999 * last_resid) {
            if (++stagnant > 50) {
                if (++restarts > 4) break;
                for (double& c : v)
                    c = std::uniform_real_distribution<double>(-1.0, 1.0)(gen);
                double nn = norm(v);
                for (double& c : v) c /= nn;
                stagnant = 0;
                last_resid = std::numeric_limits<double>::infinity();
                continue;
            }
        } else {
            stagnant = 0;
        }
        last_resid = r;
        for (int i = 0; i < n; ++i) v[i] = sv[i] / nv;
    }
    throw NormConvergenceError(std::sqrt(std::max(best, 0.0)));
}

EigSym jacobi_eigensym(const Mat& S, double tol) {
    if (S.rows != S.cols) throw std::invalid_argument("jacobi_eigensym: not square");
    const int n = S.rows;
    Mat A = S;
    Mat V = Mat::identity(n);
    if (n <= 1) {
        EigSym e;
        e.values = n == 1 ? Vec{A(0, 0)} : Vec{};
        e.vectors = V;
        return e;
    }

    double scale = frobenius(A);
    if (scale == 0.0) scale = 1.0;
    const int max_sweeps = 60;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
        if (std::sqrt(2.0 * off) <= tol * scale) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double apq = 0.5 * (A(p, q) + A(q, p));
                if (std::fabs(apq) <= 1e-300) continue;
                double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = A(k, p), akq = A(k, q);
                    A(k, p) = c * akp - s * akq;
                    A(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = A(p, k), aqk = A(q, k);
                    A(p, k) = c * apk - s * aqk;
                    A(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    double vkp = V(k, p), vkq = V(k, q);
                    V(k, p) = c * vkp - s * vkq;
                    V(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](int i, int j) { return A(i, i) < A(j, j); });
    EigSym e;
    e.values.resize(n);
    e.vectors = Mat(n, n);
    for (int j = 0; j < n; ++j) {
        e.values[j] = A(idx[j], idx[j]);
        for (int i = 0; i < n; ++i) e.vectors(i, j) = V(i, idx[j]);
    }
    return e;
}

static void require_symmetric(const Mat& S, double tol, const char* who) {
    double scale = 1.0 + frobenius(S);
    for (int i = 0; i < S.rows; ++i)
        for (int j = i + 1; j < S.cols; ++j)
            if (std::fabs(S(i, j) - S(j, i)) > tol * scale)
                throw std::invalid_argument(std::string(who) +
                                            ": not PSD (matrix asymmetric beyond tolerance)");
}

Mat principal_sqrt_psd(const Mat& S, double tol) {
    if (S.rows != S.cols) throw std::invalid_argument("principal_sqrt_psd: not square");
    require_symmetric(S, tol, "principal_sqrt_psd");
    EigSym e = jacobi_eigensym(S);
    double lmax = e.values.empty() ? 0.0 : std::max(0.0, e.values.back());
    double floor = tol * (1.0 + lmax);
    const int n = S.rows;
    Mat R(n, n);
    for (int k = 0; k < n; ++k) {
        double lam = e.values[k];
        if (lam < -floor)
            throw std::invalid_argument("principal_sqrt_psd: not PSD (eigenvalue " +
                                        std::to_string(lam) + ")");
        double s = std::sqrt(std::max(lam, 0.0));
        if (s == 0.0) continue;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) R(i, j) += s * e.vectors(i, k) * e.vectors(j, k);
    }
    return R;
}

Mat cholesky_psd(const Mat& S, double tol) {
    if (S.rows != S.cols) throw std::invalid_argument("cholesky_psd: not square");
    require_symmetric(S, tol, "cholesky_psd");
    const int n = S.rows;
    double scale = 1.0 + frobenius(S);
    Mat L(n, n);
    for (int j = 0; j < n; ++j) {
        double d = S(j, j);
        for (int k = 0; k < j; ++k) d -= L(j, k) * L(j, k);
        if (d < -tol * scale)
            throw std::invalid_argument("cholesky_psd: not PSD (pivot " + std::to_string(d) +
                                        ")");
        if (d <= tol * scale) {
            // Singular direction: zero pivot, zero column.
            L(j, j) = 0.0;
            continue;
        }
        L(j, j) = std::sqrt(d);
        for (int i = j + 1; i < n; ++i) {
            double s = S(i, j);
            for (int k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
            L(i, j) = s / L(j, j);
        }
    }
    return L;
}

Vec solve(Mat A, Vec b) {
    if (A.rows != A.cols || A.rows != static_cast<int>(b.size()))
        throw std::invalid_argument("solve: dimension mismatch");
    const int n = A.rows;
    std::vector<int> piv(n);
    for (int i = 0; i < n; ++i) piv[i] = i;
    for (int k = 0; k < n; ++k) {
        int p = k;
        for (int i = k + 1; i < n; ++i)
            if (std::fabs(A(i, k)) > std::fabs(A(p, k))) p = i;
        if (std::fabs(A(p, k)) < 1e-300) throw std::runtime_error("solve: singular matrix");
        if (p != k) {
            for (int j = 0; j < n; ++j) std::swap(A(k, j), A(p, j));
            std::swap(b[k], b[p]);
        }
        for (int i = k + 1; i < n; ++i) {
            double f = A(i, k) / A(k, k);
            A(i, k) = 0.0;
            for (int j = k + 1; j < n; ++j) A(i, j) -= f * A(k, j);
            b[i] -= f * b[k];
        }
    }
    Vec x(n);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= A(i, j) * x[j];
        x[i] = s / A(i, i);
    }
    return x;
}

LstsqResult lstsq(const Mat& A, const Vec& b, double rcond) {
    if (A.rows != static_cast<int>(b.size()))
        throw std::invalid_argument("lstsq: dimension mismatch");
    const int n = A.cols;
    if (n == 0) return {Vec{}, norm(b)};
    Mat At = adjoint(A);
    Mat S = matmul(At, A);
    Vec rhs = matvec(At, b);
    EigSym e = jacobi_eigensym(S);
    double lmax = e.values.empty() ? 0.0 : std::max(0.0, e.values.back());
    double cut = lmax * std::max(rcond, 1e-15);
    Vec x(n, 0.0);
    for (int k = 0; k < n; ++k) {
        double lam = e.values[k];
        if (lam <= cut) continue;
        Vec q = e.vectors.column(k);
        double c = dot(q, rhs) / lam;
        for (int i = 0; i < n; ++i) x[i] += c * q[i];
    }
    return {x, norm(sub(matvec(A, x), b))};
}

Mat nullspace(const Mat& A, double tol) {
    const int n = A.cols;
    if (n == 0) return Mat(0, 0);
    if (A.rows == 0) return Mat::identity(n);
    Mat S = matmul(adjoint(A), A);
    EigSym e = jacobi_eigensym(S);
    double lmax = e.values.empty() ? 0.0 : std::max(0.0, e.values.back());
    // cut sits above the Jacobi noise floor (~n*eps*lmax) and well below any
    // genuine eigenvalue at desk scale
    double cut = std::max({tol * tol * lmax, 1e-12 * lmax, 1e-300});
    std::vector<Vec> cols;
    for (int k = 0; k < n; ++k)
        if (e.values[k] <= cut) cols.push_back(e.vectors.column(k));
    if (cols.empty()) return Mat(n, 0);
    return Mat::from_columns(cols);
}

Mat orthonormal_columns(const Mat& A, double tol) {
    const int n = A.rows;
    double colscale = 0.0;
    for (int j = 0; j < A.cols; ++j) colscale = std::max(colscale, norm(A.column(j)));
    if (colscale == 0.0) return Mat(n, 0);
    std::vector<Vec> basis;
    for (int j = 0; j < A.cols; ++j) {
        Vec v = A.column(j);
        for (int pass = 0; pass < 2; ++pass)
            for (const Vec& q : basis) v = sub(v, scaled(q, dot(q, v)));
        double nv = norm(v);
        if (nv > tol * colscale * 1e3 && nv > 1e-12) basis.push_back(scaled(v, 1.0 / nv));
    }
    if (basis.empty()) return Mat(n, 0);
    return Mat::from_columns(basis);
}

Mat complement_basis(const Mat& V, int dim, double tol) {
    if (V.cols == 0) return Mat::identity(dim);
    if (V.rows != dim) throw std::invalid_argument("complement_basis: dimension mismatch");
    return nullspace(adjoint(V), tol);
}

}  // namespace pdsplit

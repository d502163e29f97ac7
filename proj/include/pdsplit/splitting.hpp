#pragma once

#include "pdsplit/problem.hpp"

namespace pdsplit {

// One Chambolle-Pock step:
//   x+ = J_{sigma A}(x - sigma L* y)
//   y+ = J_{tau B^{-1}}(y + tau L (2x+ - x))
std::pair<Vec, Vec> cp_step(const Triple& t, const Vec& x, const Vec& y);

// The preconditioner M = [[Id/sigma, -L*], [-L, Id/tau]] applied to (x, y).
std::pair<Vec, Vec> preconditioner_apply(const Triple& t, const Vec& x, const Vec& y);

// (A + M)^{-1} applied to (x, y). The second component inserts L in front of
// the inner resolvent output (2 tau L J_{sigma A}(sigma x) + tau y); the
// source display omits it but domains do not match otherwise, and the
// identity T = (A+M)^{-1} M is verified in the tests.
std::pair<Vec, Vec> resolvent_AM(const Triple& t, const Vec& x, const Vec& y);

// sqrt(max(0, <(x,y), M(x,y)>)).
double m_seminorm(const Triple& t, const Vec& x, const Vec& y);
// The bilinear form <a, M b> on X x Y.
double m_inner(const Triple& t, const Vec& ax, const Vec& ay, const Vec& bx, const Vec& by);

enum class FactorKind { General, GeneralCholesky, ScaledIsometry, DouglasRachford };

// C with C C* = M.
struct Factor {
    Mat C;  // (n+m) x z
    FactorKind kind;
    std::optional<Mat> R;  // the Y-block factor for the General kinds
    int reduced_dim() const { return C.cols; }
};

Factor build_factor(const Triple& t, FactorKind kind, double tol = 1e-10);

// Reduced operator step: w -> C*( (A+M)^{-1} (C w) ).
Vec reduced_step(const Triple& t, const Factor& f, const Vec& w);

struct IterateOptions {
    int max_iter = 100000;
    double tol = 1e-9;
    int window = 5;          // residuals are window-averaged before the test
    bool store_iterates = false;
    double divergence_norm = 1e8;
};

struct IterTrace {
    std::vector<Vec> iterates;  // stacked (x,y) or reduced w, when stored
    std::vector<double> residuals;
    int iterations = 0;
    bool converged = false;
    bool diverged = false;
    Vec x, y;  // final full-mode iterate
    Vec w;     // final reduced-mode iterate
};

// Fixed-point iteration of the CP operator; residual is the M-seminorm of
// successive differences.
IterTrace iterate_full(const Triple& t, Vec x0, Vec y0, const IterateOptions& opt = {});

// Fixed-point iteration of the reduced operator; residual is the norm of
// successive differences.
IterTrace iterate_reduced(const Triple& t, const Factor& f, Vec w0,
                          const IterateOptions& opt = {});

}  // namespace pdsplit

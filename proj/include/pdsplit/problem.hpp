#pragma once

#include "pdsplit/operators.hpp"

namespace pdsplit {

// A problem triple (A, L, B) with Chambolle-Pock step sizes. Encodes
// 0 in Ax + L*BLx; immutable after construction.
struct Triple {
    MonotoneOp A;
    Mat L;
    MonotoneOp B;
    double sigma = 1.0;
    double tau = 1.0;

    // cached at construction
    MonotoneOp B_inv;
    Mat Lt;
    double L_norm = 0.0;

    int primal_dim() const { return A.dim; }
    int dual_dim() const { return B.dim; }
};

// Validates dimensions and the step-size condition sigma*tau*||L||^2 <= 1.
Triple make_triple(MonotoneOp A, Mat L, MonotoneOp B, double sigma, double tau,
                   double tol = 1e-8);

// (A,L,B)* = (B^{-1}, -L*, A^{-1}) with (sigma,tau) swapped.
Triple dual(const Triple& t);

struct SaddleCandidate {
    Vec x, y;
    double residual = 0.0;
};

// max of the two fixed-point defects of the CP operator at (x, y); zero
// exactly on the saddle set.
double saddle_residual(const Triple& t, const Vec& x, const Vec& y);

struct ProductPart {
    Mat L;
    MonotoneOp B;
};

// Stacks (L_j, B_j) into a single triple on Y = Y_1 x ... x Y_n.
Triple product_triple(MonotoneOp A, std::vector<ProductPart> parts, double sigma,
                      double tau, double tol = 1e-8);

}  // namespace pdsplit

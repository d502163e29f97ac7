#pragma once

#include "pdsplit/fenchel.hpp"
#include "pdsplit/solutions.hpp"

namespace pdsplit {

// The desk-scale instances shared by the verification battery, the CLI
// bundle, and the acceptance suite.

// Skew rotation pair on R^2 (A the rotation generator, B = -A, L = Id,
// sigma = tau = 1/2). Saddle set = gra(-A), strictly smaller than Z x K.
Triple skew_instance();
Mat skew_matrix();  // [[0,-1],[1,0]]

// (Zero, Id, Zero) on R^n.
Triple zero_instance(int n = 2);

struct FeasInstance {
    Triple t;
    SetDesc U, V;
    SetDesc Z, K;  // exact descriptions
};

// Douglas-Rachford feasibility on R^4: U = span{e1,e2}, V = span{e2,e3},
// L = Id, sigma = tau = 1. Z = span{e2}, K = span{e4}.
FeasInstance dr_subspace_instance();

// Scaled-isometry feasibility: X = R^4, Y = R^2, L = 2Q with orthonormal
// rows Q, sigma = tau = 1/2 (so sigma*tau*LL* = Id). U is spanned by L*e_1
// and a kernel vector, V = span{e1}; Z = U (2-dim), K = span{e2} (1-dim).
FeasInstance iso_subspace_instance();

// LASSO with seeded data, lambda = 0.1 ||L*b||_inf.
LassoInstance lasso_desk(uint64_t seed = 42, int n = 10, int m = 5);

struct BoxProductInstance {
    Triple t;
    SetDesc U;
    std::vector<SetDesc> Vs;
    std::vector<Mat> Ls;
    SetDesc Z, K;
};

// Three box constraints on R^3 through the product space; overlapping
// interiors, so K = {0}.
BoxProductInstance box_product_instance();

struct ConstBInstance {
    Triple t;
    SetDesc Z, K;
    Vec u_perp;
};

// A = P_U (U = x-axis in R^2), L = P_U, B constant u_perp = e2.
// Z = U^perp (y-axis), K = {e2}; 0 not in K but K cap ker L* nonempty.
ConstBInstance const_b_instance();

struct AffineBInstance {
    Triple t;
    SetDesc U, Z, K;
};

// A = N_U with affine U = e3 + span{e1,e2} in R^3, L = [0 0 1], B = Id on R.
// Z = U (2-dim affine, not a subspace), K = {1}.
AffineBInstance affine_b_id_instance();

// A = Zero, B = Id on R^n with the given L (Z = ker L, K = {0}).
Triple ex_zero_id_instance(Mat L);

struct ExpPairInstance {
    Triple t;
    ConvexFn f, g;
    Mat L;
};

// The exp/exp* non-attainment pair with L = Id, sigma = tau = 1.
ExpPairInstance exp_pair_instance(double domain_band = 1e-4);

}  // namespace pdsplit

#pragma once

#include <span>
#include <utility>

#include "pdsplit/problem.hpp"

namespace pdsplit {

// K_x = (-L^{-*} A x) cap (B L x); empty iff x is not a primal solution.
SetDesc traverse_K(const Triple& t, const Vec& x, double tol = 1e-8);

// Z_y = (L^{-1} B^{-1} y) cap A^{-1}(-L* y); empty iff y is not a dual solution.
SetDesc traverse_Z(const Triple& t, const Vec& y, double tol = 1e-8);

// With A and B paramonotone, a single dual solution recovers all of Z = Z_k.
SetDesc recover_primal_set(const Triple& t, const Vec& k, double tol = 1e-8);

struct FeasibilitySets {
    SetDesc Z;
    SetDesc K;
};

// Solution sets of the feasibility problem A = N_U, B = N_V:
//   Z = U cap L^{-1}(V)
//   K = V^perp cap L^{-*}(U^perp)         (linear subspaces)
//   K = V^polar cap L^{-*}(U^polar-minus) (ray-product cones)
//   K = {0}                               (certified interior condition)
FeasibilitySets feasibility_sets(const SetDesc& U, const SetDesc& V, const Mat& L,
                                 double tol = 1e-9);
FeasibilitySets feasibility_sets(const SetDesc& U, std::span<const SetDesc> Vs,
                                 std::span<const Mat> Ls, double tol = 1e-9);

struct CommonZeroReport {
    bool zerA_cap_zerLBL = false;  // zer A cap zer L*BL nonempty
    bool K_cap_kerLstar = false;   // K cap ker L* nonempty
    bool zerA_cap_zerBL = false;   // zer L^{-*}A cap zer BL nonempty (= zer A cap zer BL)
    bool zero_in_K = false;        // 0 in K
};

// Evaluates both sides of the two common-zero equivalences independently and
// throws if either pair disagrees.
CommonZeroReport common_zero_tests(const Triple& t, const SetDesc& K, double tol = 1e-9);

// Max |<L z0 - L z1, k0 - k1>| over all pairs; each sample (z_i, k_i) must
// satisfy k_i in K_{z_i} (saddle residual <= tol), otherwise the offending
// index is reported.
double skew_check(const Triple& t, std::span<const std::pair<Vec, Vec>> samples,
                  double tol = 1e-8);

// zer A as a SetDesc (catalogue variants only).
SetDesc zero_set_of(const MonotoneOp& op);
// {x : 0 in B(Lx)} = L^{-1}(zer B).
SetDesc zero_set_BL(const MonotoneOp& B, const Mat& L, double tol = 1e-9);
// {x : 0 in L* B(L x)} for the structured cases (normal cones, constants,
// single-valued linear B).
SetDesc zero_set_LstarBL(const MonotoneOp& B, const Mat& L, double tol = 1e-9);

}  // namespace pdsplit

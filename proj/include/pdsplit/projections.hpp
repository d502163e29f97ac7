#pragma once

#include "pdsplit/splitting.hpp"

namespace pdsplit {

// Data for the closed-form projection identities on Z - rho L*K. Anchors
// (z0, k0) may be any members of Z and K; the formulas do not depend on the
// choice and the tests verify that. L*K must be representable as a SetDesc
// (point or affine image), so it is closed and no closure operator is
// applied anywhere.
struct ProjectionContext {
    SetDesc Z;
    SetDesc K;
    Mat L;
    double rho = 1.0;
    Vec z0, k0;
    MonotoneOp A;  // for the resolvent identities
    std::optional<Vec> ker_witness;  // a point of K cap ker L*, when known

    Mat Lt;
    SetDesc LtK;  // L*K (Point or Affine)
};

ProjectionContext make_projection_context(SetDesc Z, SetDesc K, Mat L, double rho, Vec z0,
                                          Vec k0, MonotoneOp A,
                                          std::optional<Vec> ker_witness = std::nullopt,
                                          double tol = 1e-8);

// P_{Z - rho L*K}(x) = P_Z(x + rho L* k0) + P_{-rho L*K}(x - z0).
Vec proj_Z_minus_rhoLK(const ProjectionContext& ctx, const Vec& x, double tol = 1e-10);

// J_{rho A} P_{Z - rho L*K}(x); asserts the identity with P_Z(x + rho L* k0),
// and with P_Z(x) when K cap ker L* is certified nonempty.
Vec resolvent_of_projection(const ProjectionContext& ctx, const Vec& x, double tol = 1e-8);

// P_{Fix T~} for the scaled-isometry factor:
// (1/sqrt(sigma)) P_{Z - sigma L*K}(sqrt(sigma) w).
Vec proj_fix_reduced(const Triple& t, const Factor& f, const ProjectionContext& ctx,
                     const Vec& w, double tol = 1e-10);

// The M-projection of (x0, y0) onto Fix T (scaled isometry, paramonotone,
// K cap ker L* nonempty).
std::pair<Vec, Vec> m_projection_onto_FixT(const Triple& t, const ProjectionContext& ctx,
                                           const Vec& x0, const Vec& y0, double tol = 1e-8);

// P_{rho L*V}(x) = rho L* P_V(L x / rho) when L L* = Id (the (sigma, tau)
// scaling folded into L).
Vec scaled_isometry_pushforward_projection(const Mat& L, double rho, const SetDesc& V,
                                           const Vec& x, double tol = 1e-8);

// True when K cap ker L* can be certified nonempty from the context
// (point/affine intersection, or a validated witness).
bool certify_K_cap_kerLstar(const ProjectionContext& ctx, double tol = 1e-8);

}  // namespace pdsplit

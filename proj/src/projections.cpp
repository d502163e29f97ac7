#include "pdsplit/projections.hpp"

#include <cmath>

namespace pdsplit {

namespace {
SetDesc lstar_image(const Mat& Lt, const SetDesc& K) {
    if (K.is_point() || K.is_affine_like()) return image(Lt, K);
    throw UnsupportedStructure("L*K is not representable for variant '" +
                               std::string(K.variant_name()) + "'");
}
}  // namespace

ProjectionContext make_projection_context(SetDesc Z, SetDesc K, Mat L, double rho, Vec z0,
                                          Vec k0, MonotoneOp A,
                                          std::optional<Vec> ker_witness, double tol) {
    ProjectionContext ctx;
    if (!Z.contains(z0, tol))
        throw std::invalid_argument("make_projection_context: z0 is not in Z");
    if (!K.contains(k0, tol))
        throw std::invalid_argument("make_projection_context: k0 is not in K");
    ctx.Lt = adjoint(L);
    ctx.LtK = lstar_image(ctx.Lt, K);
    ctx.Z = std::move(Z);
    ctx.K = std::move(K);
    ctx.L = std::move(L);
    ctx.rho = rho;
    ctx.z0 = std::move(z0);
    ctx.k0 = std::move(k0);
    ctx.A = std::move(A);
    ctx.ker_witness = std::move(ker_witness);
    return ctx;
}

Vec proj_Z_minus_rhoLK(const ProjectionContext& ctx, const Vec& x, double tol) {
    Vec shift = scaled(matvec(ctx.Lt, ctx.k0), ctx.rho);
    Vec first = ctx.Z.project(add(x, shift), tol);
    SetDesc negLtK = scale_set(ctx.LtK, -ctx.rho);
    Vec second = negLtK.project(sub(x, ctx.z0), tol);
    return add(first, second);
}

bool certify_K_cap_kerLstar(const ProjectionContext& ctx, double tol) {
    if (ctx.ker_witness) {
        const Vec& w = *ctx.ker_witness;
        return ctx.K.contains(w, tol) && norm(matvec(ctx.Lt, w)) <= tol * (1.0 + norm(w));
    }
    SetDesc ker = SetDesc::subspace(nullspace(ctx.Lt), ctx.K.dim());
    if (ctx.K.is_point() || ctx.K.is_affine_like())
        return !intersect(ctx.K, ker, tol).is_empty();
    return false;
}

Vec resolvent_of_projection(const ProjectionContext& ctx, const Vec& x, double tol) {
    if (ctx.rho <= 0.0)
        throw std::invalid_argument("resolvent_of_projection: rho must be positive");
    Vec v = proj_Z_minus_rhoLK(ctx, x);
    Vec r = ctx.A.resolve(ctx.rho, v);
    Vec expect = ctx.Z.project(add(x, scaled(matvec(ctx.Lt, ctx.k0), ctx.rho)));
    double gap = norm(sub(r, expect));
    if (gap > tol * (1.0 + norm(x)))
        throw std::runtime_error(
            "resolvent_of_projection: J_{rho A} P_{Z-rho L*K}(x) != P_Z(x + rho L*k0), gap " +
            std::to_string(gap));
    if (certify_K_cap_kerLstar(ctx, tol)) {
        Vec expect0 = ctx.Z.project(x);
        double gap0 = norm(sub(r, expect0));
        if (gap0 > tol * (1.0 + norm(x)))
            throw std::runtime_error(
                "resolvent_of_projection: K cap ker L* case, J P(x) != P_Z(x), gap " +
                std::to_string(gap0));
    }
    return r;
}

Vec proj_fix_reduced(const Triple& t, const Factor& f, const ProjectionContext& ctx,
                     const Vec& w, double tol) {
    if (f.kind != FactorKind::ScaledIsometry && f.kind != FactorKind::DouglasRachford)
        throw std::invalid_argument("proj_fix_reduced: needs a scaled-isometry factor");
    double rs = std::sqrt(t.sigma);
    ProjectionContext local = ctx;
    local.rho = t.sigma;
    Vec p = proj_Z_minus_rhoLK(local, scaled(w, rs), tol);
    return scaled(p, 1.0 / rs);
}

std::pair<Vec, Vec> m_projection_onto_FixT(const Triple& t, const ProjectionContext& ctx,
                                           const Vec& x0, const Vec& y0, double tol) {
    const double s = t.sigma, ta = t.tau;
    Mat dev = mat_add(mat_scaled(matmul(t.L, t.Lt), s * ta),
                      negated(Mat::identity(t.dual_dim())));
    if (frobenius(dev) > 1e-8 * (1.0 + frobenius(t.L)))
        throw std::invalid_argument("m_projection_onto_FixT: needs sigma*tau*LL* = Id");
    if (!t.A.paramonotone || !t.B.paramonotone)
        throw std::invalid_argument("m_projection_onto_FixT: needs paramonotone A and B");
    if (!certify_K_cap_kerLstar(ctx, tol))
        throw std::invalid_argument(
            "m_projection_onto_FixT: K cap ker L* not certified nonempty");

    double rs = std::sqrt(s);
    Vec xs = sub(x0, scaled(matvec(t.Lt, y0), s));
    Vec w0 = scaled(xs, 1.0 / rs);
    Vec pz = ctx.Z.project(xs);
    ProjectionContext local = ctx;
    local.rho = s;
    Vec pw = proj_Z_minus_rhoLK(local, scaled(w0, rs), tol);
    Vec arg = sub(scaled(matvec(t.L, pz), 2.0 * ta), scaled(matvec(t.L, pw), ta));
    Vec second = t.B_inv.resolve(ta, arg);
    return {pz, second};
}

Vec scaled_isometry_pushforward_projection(const Mat& L, double rho, const SetDesc& V,
                                           const Vec& x, double tol) {
    if (rho == 0.0)
        throw std::invalid_argument("scaled_isometry_pushforward_projection: rho == 0");
    if (V.is_empty())
        throw std::invalid_argument("scaled_isometry_pushforward_projection: V is empty");
    Mat dev = mat_add(matmul(L, adjoint(L)), negated(Mat::identity(L.rows)));
    if (frobenius(dev) > tol * (1.0 + frobenius(L)))
        throw std::invalid_argument(
            "scaled_isometry_pushforward_projection: LL* must be the identity");
    Vec py = V.project(scaled(matvec(L, x), 1.0 / rho));
    return scaled(matvec(adjoint(L), py), rho);
}

}  // namespace pdsplit

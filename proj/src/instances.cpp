#include "pdsplit/instances.hpp"

#include <cmath>

#include "pdsplit/rng.hpp"

namespace pdsplit {

Mat skew_matrix() {
    Mat A(2, 2);
    A(0, 1) = -1.0;
    A(1, 0) = 1.0;
    return A;
}

Triple skew_instance() {
    Mat A = skew_matrix();
    return make_triple(linear_monotone(A), Mat::identity(2), linear_monotone(negated(A)),
                       0.5, 0.5);
}

Triple zero_instance(int n) {
    return make_triple(zero_op(n), Mat::identity(n), zero_op(n), 1.0, 1.0);
}

FeasInstance dr_subspace_instance() {
    const int n = 4;
    Mat Ub(n, 2);
    Ub(0, 0) = 1.0;
    Ub(1, 1) = 1.0;
    Mat Vb(n, 2);
    Vb(1, 0) = 1.0;
    Vb(2, 1) = 1.0;
    SetDesc U = SetDesc::subspace(Ub, n);
    SetDesc V = SetDesc::subspace(Vb, n);
    FeasInstance inst;
    inst.t = make_triple(normal_cone_affine(U), Mat::identity(n), normal_cone_affine(V), 1.0,
                         1.0);
    inst.U = U;
    inst.V = V;
    Mat Zb(n, 1);
    Zb(1, 0) = 1.0;
    Mat Kb(n, 1);
    Kb(3, 0) = 1.0;
    inst.Z = SetDesc::subspace(Zb, n);
    inst.K = SetDesc::subspace(Kb, n);
    return inst;
}

FeasInstance iso_subspace_instance() {
    const int n = 4, m = 2;
    // Q: orthonormal rows (1,1,1,1)/2 and (1,-1,1,-1)/2; L = 2Q
    Mat L(m, n);
    for (int j = 0; j < n; ++j) {
        L(0, j) = 1.0;
        L(1, j) = (j % 2 == 0) ? 1.0 : -1.0;
    }
    const double sigma = 0.5, tau = 0.5;  // sigma*tau*LL* = Id

    // U = span{L* e1, kernel vector (1,0,-1,0)}
    Mat Ub(n, 2);
    Ub(0, 0) = Ub(1, 0) = Ub(2, 0) = Ub(3, 0) = 1.0;
    Ub(0, 1) = 1.0;
    Ub(2, 1) = -1.0;
    Mat Vb(m, 1);
    Vb(0, 0) = 1.0;
    SetDesc U = SetDesc::subspace(Ub, n);
    SetDesc V = SetDesc::subspace(Vb, m);

    FeasInstance inst;
    inst.t = make_triple(normal_cone_affine(U), L, normal_cone_affine(V), sigma, tau);
    inst.U = U;
    inst.V = V;
    inst.Z = U;  // every point of U maps into V
    Mat Kb(m, 1);
    Kb(1, 0) = 1.0;
    inst.K = SetDesc::subspace(Kb, m);
    return inst;
}

LassoInstance lasso_desk(uint64_t seed, int n, int m) {
    Rng rng(seed);
    Mat L = rng.normal_mat(m, n);
    Vec b = rng.normal_vec(m);
    double lambda = 0.1 * norm_inf(matvec(adjoint(L), b));
    return lasso_instance(L, b, lambda);
}

BoxProductInstance box_product_instance() {
    const int n = 3;
    BoxProductInstance inst;
    inst.U = SetDesc::box(Vec(n, -1.0), Vec(n, 1.0));
    inst.Vs = {SetDesc::box(Vec(n, -0.5), Vec(n, 2.0)),
               SetDesc::box(Vec(n, -2.0), Vec(n, 0.8)),
               SetDesc::box(Vec(n, -0.9), Vec(n, 0.9))};
    inst.Ls = {Mat::identity(n), Mat::identity(n), Mat::identity(n)};
    std::vector<ProductPart> parts;
    for (size_t j = 0; j < inst.Vs.size(); ++j) {
        const auto& b = std::get<SetDesc::Box>(inst.Vs[j].variant());
        parts.push_back({inst.Ls[j], normal_cone_box(b.lo, b.hi)});
    }
    double step = 0.95 / std::sqrt(3.0);  // ||stacked L|| = sqrt(3)
    const auto& ub = std::get<SetDesc::Box>(inst.U.variant());
    inst.t = product_triple(normal_cone_box(ub.lo, ub.hi), parts, step, step);
    inst.Z = SetDesc::box(Vec(n, -0.5), Vec(n, 0.8));
    inst.K = SetDesc::point(zeros(3 * n));
    return inst;
}

ConstBInstance const_b_instance() {
    const int n = 2;
    Mat Ub(n, 1);
    Ub(0, 0) = 1.0;
    Mat P(n, n);
    P(0, 0) = 1.0;  // P_U for U = x-axis
    ConstBInstance inst;
    inst.u_perp = {0.0, 1.0};
    inst.t = make_triple(projection_op(Ub, n), P, constant_op(inst.u_perp), 1.0, 1.0);
    Mat Zb(n, 1);
    Zb(1, 0) = 1.0;
    inst.Z = SetDesc::subspace(Zb, n);  // U^perp
    inst.K = SetDesc::point(inst.u_perp);
    return inst;
}

AffineBInstance affine_b_id_instance() {
    const int n = 3;
    Mat dir(n, 2);
    dir(0, 0) = 1.0;
    dir(1, 1) = 1.0;
    Vec offset = {0.0, 0.0, 1.0};
    SetDesc U = SetDesc::affine(offset, dir);
    Mat L(1, n);
    L(0, 2) = 1.0;
    AffineBInstance inst;
    inst.U = U;
    inst.t = make_triple(normal_cone_affine(U), L, scaled_identity(1, 1.0), 0.95, 0.95);
    inst.Z = U;
    inst.K = SetDesc::point({1.0});
    return inst;
}

Triple ex_zero_id_instance(Mat L) {
    int n = L.cols, m = L.rows;
    double nl = operator_norm(L, 1e-12);
    double step = nl > 0 ? 0.95 / nl : 1.0;
    return make_triple(zero_op(n), std::move(L), scaled_identity(m, 1.0), step, step);
}

ExpPairInstance exp_pair_instance(double domain_band) {
    ExpPairInstance inst;
    inst.f = exp_pair_primal(domain_band);
    inst.g = exp_pair_dual(domain_band);
    inst.L = Mat::identity(2);
    inst.t = make_triple(subdifferential_op(inst.f, "exp_pair_f"), inst.L,
                         subdifferential_op(inst.g, "exp_pair_g"), 1.0, 1.0);
    return inst;
}

}  // namespace pdsplit

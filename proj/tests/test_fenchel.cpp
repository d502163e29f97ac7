#include <doctest.h>

#include <cmath>

#include "pdsplit/instances.hpp"
#include "pdsplit/oracle.hpp"

using namespace pdsplit;

namespace {
double l1(const Vec& x) {
    double s = 0.0;
    for (double v : x) s += std::fabs(v);
    return s;
}
}  // namespace

TEST_CASE("primal and dual values") {
    // f = g = 1/2||.||^2 via quad_plus_const with b = 0, L = Id, x = 0
    ConvexFn q = quad_plus_const(zeros(2));
    CHECK(primal_value(q, q, Mat::identity(2), zeros(2)) == 0.0);

    // LASSO split: f(x) + g(Lx) = 1/2||Lx-b||^2 + lambda||x||_1 identically
    LassoInstance lasso = lasso_desk();
    Rng rng(1);
    for (int rep = 0; rep < 50; ++rep) {
        Vec x = rng.uniform_vec(10, -2.0, 2.0);
        double split = primal_value(lasso.f, lasso.g, lasso.L, x);
        double direct = 0.5 * std::pow(norm(sub(matvec(lasso.L, x), lasso.b)), 2) +
                        lasso.lambda * l1(x);
        CHECK(std::fabs(split - direct) <= 1e-12 * (1.0 + std::fabs(direct)));
    }
    // at x = 0 the value is 1/2||b||^2
    CHECK(primal_value(lasso.f, lasso.g, lasso.L, zeros(10)) ==
          doctest::Approx(0.5 * dot(lasso.b, lasso.b)).epsilon(1e-12));
}

TEST_CASE("weak duality holds on every evaluated pair") {
    LassoInstance lasso = lasso_desk();
    Rng rng(2);
    for (int rep = 0; rep < 200; ++rep) {
        Vec x = rng.uniform_vec(10, -3.0, 3.0);
        Vec y = rng.uniform_vec(5, -3.0, 3.0);
        double p = primal_value(lasso.f, lasso.g, lasso.L, x);
        double d = dual_value(lasso.f, lasso.g, lasso.L, y);
        if (std::isfinite(p) && std::isfinite(d)) CHECK(p + d >= -1e-10);
    }
}

TEST_CASE("Moreau decomposition for catalogue functions") {
    Rng rng(3);
    Vec b = rng.normal_vec(3);
    ConvexFn g = quad_plus_const(b);
    // g*(u) = 1/2||u||^2 - 1/2||b||^2; prox_{gamma g*}(u) = u/(1+gamma)
    for (int rep = 0; rep < 100; ++rep) {
        double gamma = rng.uniform(0.2, 3.0);
        Vec y = rng.uniform_vec(3, -4.0, 4.0);
        Vec conj = scaled(scaled(y, 1.0 / gamma), 1.0 / (1.0 + 1.0 / gamma));
        CHECK(norm(sub(add(g.prox(gamma, y), scaled(conj, gamma)), y)) <=
              1e-10 * (1.0 + norm(y)));
    }
    // scaled l1 with linear tilt against the box-support conjugate prox
    double lambda = 0.7;
    Vec c = rng.normal_vec(3);
    ConvexFn f = scaled_l1_with_linear(3, lambda, c);
    // f* is the indicator of the box lambda*[-1,1]^3 shifted by -c
    SetDesc C = SetDesc::box({-lambda - c[0], -lambda - c[1], -lambda - c[2]},
                             {lambda - c[0], lambda - c[1], lambda - c[2]});
    for (int rep = 0; rep < 100; ++rep) {
        double gamma = rng.uniform(0.2, 3.0);
        Vec y = rng.uniform_vec(3, -4.0, 4.0);
        Vec conj = C.project(scaled(y, 1.0 / gamma));
        CHECK(norm(sub(add(f.prox(gamma, y), scaled(conj, gamma)), y)) <=
              1e-10 * (1.0 + norm(y)));
    }
    // Fenchel-Young on samples
    for (int rep = 0; rep < 100; ++rep) {
        Vec x = rng.uniform_vec(3, -3.0, 3.0), u = rng.uniform_vec(3, -3.0, 3.0);
        double fy = f.value(x) + f.conj_value(u);
        if (std::isfinite(fy)) CHECK(fy >= dot(x, u) - 1e-10);
    }
}

TEST_CASE("total_duality_check on the LASSO desk instance") {
    LassoInstance lasso = lasso_desk();
    DualityVerdict v = total_duality_check(lasso.f, lasso.g, lasso.L, lasso.t.sigma,
                                           lasso.t.tau, 1e-9);
    CHECK(v.total);
    CHECK(std::fabs(v.gap) <= 1e-7);
    CHECK(v.primal_attained);
    CHECK(v.dual_attained);
    CHECK(v.local_min_certified);
    CHECK(v.mu == doctest::Approx(-v.mu_star).epsilon(1e-7));
}

TEST_CASE("total_duality_check on consistent feasibility") {
    // f = g = indicator of the x-axis, L = Id: total with mu = 0
    Mat e1(2, 1);
    e1(0, 0) = 1.0;
    ConvexFn ind = indicator(SetDesc::subspace(e1, 2));
    DualityVerdict v = total_duality_check(ind, ind, Mat::identity(2), 1.0, 1.0, 1e-9);
    CHECK(v.total);
    CHECK(v.mu == 0.0);
    CHECK(std::fabs(v.gap) <= 1e-10);
}

TEST_CASE("exp/exp* pair: zero gap without attainment") {
    ExpPairInstance e = exp_pair_instance();
    DualityVerdict v = total_duality_check(e.f, e.g, e.L, 1.0, 1.0, 1e-9, 30000);
    CHECK(!v.primal_attained);
    CHECK(!v.total);
    CHECK(std::fabs(v.mu) <= 1e-2);
    CHECK(std::fabs(v.gap) <= 1e-2);
    CHECK(norm(v.trace.x) >= 10.0);
}

TEST_CASE("exp conjugate and scalar proxes") {
    CHECK(exp_conjugate(0.0) == 0.0);  // 0 ln 0 = 0
    CHECK(exp_conjugate(1.0) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(std::isinf(exp_conjugate(-0.5)));
    CHECK(exp_conjugate(-1e-6, 1e-4) == 0.0);  // band snaps onto the boundary

    Rng rng(4);
    for (int rep = 0; rep < 200; ++rep) {
        double gamma = rng.uniform(0.2, 3.0);
        double w = rng.uniform(-30.0, 10.0);
        double p = prox_exp_scalar(gamma, w);
        CHECK(std::fabs(p + gamma * std::exp(p) - w) <= 1e-10 * (1.0 + std::fabs(w)));
        // Moreau for the pair
        double q = prox_exp_conj_scalar(gamma, w);
        CHECK(std::fabs(q + gamma * prox_exp_scalar(1.0 / gamma, w / gamma) - w) <= 1e-12);
        CHECK(q >= 0.0);  // range of prox of exp* is the domain [0, inf)
    }
}

TEST_CASE("lasso_instance analytic 1x1 case") {
    // L = [1], b = 2, lambda = 1: z = soft(2, 1) = 1 and k = Lz = 1
    Mat L(1, 1);
    L(0, 0) = 1.0;
    LassoInstance inst = lasso_instance(L, {2.0}, 1.0);
    IterateOptions opt;
    opt.tol = 1e-13;
    IterTrace tr = iterate_full(inst.t, zeros(1), zeros(1), opt);
    REQUIRE(tr.converged);
    CHECK(tr.x[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(tr.y[0] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("LASSO dual solution is unique across starts") {
    LassoInstance lasso = lasso_desk();
    MultistartResult ms = multistart_limits(lasso.t, 10, 11, 1e-11, 1e-6, 4.0);
    CHECK(ms.dual.cluster_count() == 1);
    CHECK(ms.dual.max_radius() <= 1e-6);
}

TEST_CASE("interior case: lambda >= ||L*b||_inf gives z = 0") {
    Rng rng(5);
    Mat L = rng.normal_mat(3, 4);
    Vec b = rng.normal_vec(3);
    double lambda = 1.5 * norm_inf(matvec(adjoint(L), b));
    LassoInstance inst = lasso_instance(L, b, lambda);
    IterateOptions opt;
    opt.tol = 1e-13;
    IterTrace tr = iterate_full(inst.t, rng.uniform_vec(4, -2.0, 2.0), zeros(3), opt);
    REQUIRE(tr.converged);
    CHECK(norm(tr.x) <= 1e-9);
    SetDesc Z = lasso_solution_set(L, b, lambda, zeros(3));
    REQUIRE(Z.is_point());
    CHECK(norm(std::get<SetDesc::Point>(Z.variant()).v) == 0.0);
}

TEST_CASE("lasso_solution_set: injective L gives the least-squares point") {
    Rng rng(6);
    Mat L = rng.normal_mat(5, 3);
    Vec b = rng.normal_vec(5);
    double lambda = 0.15 * norm_inf(matvec(adjoint(L), b));
    LassoInstance inst = lasso_instance(L, b, lambda);
    IterateOptions opt;
    opt.tol = 1e-13;
    opt.max_iter = 300000;
    IterTrace tr = iterate_full(inst.t, zeros(3), zeros(5), opt);
    REQUIRE(tr.converged);
    SetDesc Z = lasso_solution_set(L, b, lambda, tr.y);
    REQUIRE(Z.is_point());
    LstsqResult ls = lstsq(L, tr.y);
    CHECK(norm(sub(std::get<SetDesc::Point>(Z.variant()).v, ls.x)) <= 1e-9);
    CHECK(norm(sub(std::get<SetDesc::Point>(Z.variant()).v, tr.x)) <= 1e-7);

    // validation rejects a wrong dual vector
    CHECK_THROWS_WITH_AS(lasso_solution_set(L, b, lambda, add(tr.y, Vec{9., 0., 0., 0., 0.})),
                         doctest::Contains("validation"), std::invalid_argument);
}

TEST_CASE("lasso_solution_set: non-injective case against the grid argmin oracle") {
    Mat L(1, 2);
    L(0, 0) = 1.0;
    L(0, 1) = 1.0;
    Vec b{2.0};
    double lambda = 0.5;
    LassoInstance inst = lasso_instance(L, b, lambda);
    IterateOptions opt;
    opt.tol = 1e-13;
    IterTrace tr = iterate_full(inst.t, zeros(2), zeros(1), opt);
    REQUIRE(tr.converged);
    SetDesc Z = lasso_solution_set(L, b, lambda, tr.y);

    auto objective = [&](double x0, double x1) {
        double r = x0 + x1 - 2.0;
        return 0.5 * r * r + lambda * (std::fabs(x0) + std::fabs(x1));
    };
    // dense grid argmin scan
    double best = 1e300;
    for (int i = 0; i <= 400; ++i)
        for (int j = 0; j <= 400; ++j)
            best = std::min(best, objective(-2.0 + i * 0.01, -2.0 + j * 0.01));
    // grid points near the optimum must be near the set, and set members must
    // be near the optimal value
    for (int i = 0; i <= 400; ++i)
        for (int j = 0; j <= 400; ++j) {
            double x0 = -2.0 + i * 0.01, x1 = -2.0 + j * 0.01;
            bool member = Z.contains({x0, x1}, 1e-6);
            if (member) CHECK(objective(x0, x1) <= best + 1e-4);
        }
    Rng rng(7);
    for (int rep = 0; rep < 50; ++rep) {
        Vec z = Z.sample(rng, 2.0);
        CHECK(objective(z[0], z[1]) <= best + 1e-4);
    }
}

TEST_CASE("minimizer chain: the CP primal limit minimizes") {
    LassoInstance lasso = lasso_desk();
    IterateOptions opt;
    opt.tol = 1e-12;
    IterTrace tr = iterate_full(lasso.t, zeros(10), zeros(5), opt);
    REQUIRE(tr.converged);
    double ref = primal_value(lasso.f, lasso.g, lasso.L, tr.x);
    Rng rng(8);
    for (int rep = 0; rep < 1000; ++rep) {
        double scale = rep % 2 ? 1e-3 : 1e-1;
        Vec p = tr.x;
        for (double& c : p) c += scale * rng.normal();
        CHECK(primal_value(lasso.f, lasso.g, lasso.L, p) >= ref - 1e-9);
    }
}

TEST_CASE("dual-image inclusion across minimizers on a representable instance") {
    // A = N_U, B = N_V subspaces (f, g indicators); minimizers = Z and the
    // traversal sets are exact
    FeasInstance dr = dr_subspace_instance();
    Rng rng(9);
    Vec z = dr.Z.sample(rng, 2.0);  // a CP-reachable solution
    Vec x = dr.Z.sample(rng, 2.0);  // any other minimizer of iota_U + iota_V
    SetDesc LKz = image(dr.t.Lt, traverse_K(dr.t, z));
    SetDesc LKx = image(dr.t.Lt, traverse_K(dr.t, x));
    for (int rep = 0; rep < 30; ++rep) {
        Vec u = LKz.sample(rng, 2.0);
        CHECK(LKx.contains(u, 1e-9));
    }
}

TEST_CASE("support_of_box and indicator round out the catalogue") {
    Rng rng(10);
    ConvexFn sup = support_of_box({-1.0, 0.0}, {1.0, 2.0});
    CHECK(sup.value({3.0, -1.0}) == doctest::Approx(3.0).epsilon(1e-14));
    // prox via Moreau is firmly nonexpansive
    for (int rep = 0; rep < 200; ++rep) {
        double gamma = rng.uniform(0.3, 2.0);
        Vec x1 = rng.uniform_vec(2, -3.0, 3.0), x2 = rng.uniform_vec(2, -3.0, 3.0);
        Vec d = sub(sup.prox(gamma, x1), sup.prox(gamma, x2));
        CHECK(dot(d, sub(x1, x2)) >= dot(d, d) - 1e-10);
    }
    ConvexFn ind = indicator(SetDesc::box({-1.0, 0.0}, {1.0, 2.0}));
    CHECK(ind.value({0.5, 1.0}) == 0.0);
    CHECK(std::isinf(ind.value({2.0, 1.0})));
    CHECK(ind.conj_value({3.0, -1.0}) == doctest::Approx(3.0).epsilon(1e-14));
}

#pragma once

#include "pdsplit/splitting.hpp"

namespace pdsplit {

// A convex lsc proper function exposed through value, prox, and (optionally)
// the conjugate value. Values are extended reals; +inf propagates through
// sums. Domain tests on indicator-type pieces use a band (`domain_band`):
// arguments within the band of the domain are snapped onto it, which only
// decides finite-vs-infinite and never perturbs a finite value.
struct ConvexFn {
    int dim = 0;
    std::function<double(const Vec&)> value;
    std::function<Vec(double, const Vec&)> prox;
    std::function<double(const Vec&)> conj_value;  // may be null

    bool has_conjugate() const { return static_cast<bool>(conj_value); }
};

ConvexFn scaled_l1_with_linear(int dim, double lambda, Vec c);  // lambda||x||_1 - <x,c>
ConvexFn quad_plus_const(Vec b);                                // 1/2||y||^2 + 1/2||b||^2
ConvexFn indicator(SetDesc s, double domain_band = 1e-7);
ConvexFn support_of_box(Vec lo, Vec hi);
// The non-attainment demo pair on R^2: exp(x1) + exp*(x2) and
// exp(x1) + exp*(-x2); prox by safeguarded scalar Newton.
ConvexFn exp_pair_primal(double domain_band = 1e-4);
ConvexFn exp_pair_dual(double domain_band = 1e-4);

// exp*(xi) = xi ln xi - xi for xi > 0, 0 at xi = 0 (0 ln 0 = 0), +inf below
// -band; arguments in [-band, 0) evaluate at the boundary.
double exp_conjugate(double xi, double domain_band = 0.0);
double prox_exp_scalar(double gamma, double w);       // argmin p-w residual of p + g e^p = w
double prox_exp_conj_scalar(double gamma, double w);  // via the Moreau identity

double primal_value(const ConvexFn& f, const ConvexFn& g, const Mat& L, const Vec& x);
double dual_value(const ConvexFn& f, const ConvexFn& g, const Mat& L, const Vec& y);

struct DualityVerdict {
    double mu = 0.0;        // primal value at the CP primal limit
    double mu_star = 0.0;   // dual value at the CP dual limit
    double gap = 0.0;       // mu + mu_star
    bool primal_attained = false;
    bool dual_attained = false;
    bool total = false;
    bool local_min_certified = false;  // primal limit beat random perturbations
    IterTrace trace;
};

DualityVerdict total_duality_check(const ConvexFn& f, const ConvexFn& g, const Mat& L,
                                   double sigma, double tau, double tol,
                                   int max_iter = 100000);

struct LassoInstance {
    Triple t;
    ConvexFn f, g;
    Mat L;
    Vec b;
    double lambda;
};

// A = lambda d||.||_1 - L*b, B = Id, sigma = tau = 0.95/||L||.
LassoInstance lasso_instance(Mat L, Vec b, double lambda);

// Z = L^{-1}(k) cap N_C(L*(b-k)/lambda) with the face classification band.
SetDesc lasso_solution_set(const Mat& L, const Vec& b, double lambda, const Vec& k,
                           double tol = 1e-8, double band = 1e-8);

// Subdifferential operator of a ConvexFn (resolvent = prox).
MonotoneOp subdifferential_op(const ConvexFn& f, std::string kind);

}  // namespace pdsplit

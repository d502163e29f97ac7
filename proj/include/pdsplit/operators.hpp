#pragma once

#include <functional>
#include <optional>
#include <string>

#include "pdsplit/sets.hpp"

namespace pdsplit {

// A maximally monotone operator exposed through its resolvent. The set-valued
// views (value_at, the value of the inverse, zero set) are present for the
// catalogue variants where they have exact closed forms; elsewhere they are
// empty and the structured machinery errs loudly.
struct MonotoneOp {
    int dim = 0;
    bool paramonotone = false;
    bool single_valued = false;
    std::string kind;

    std::function<Vec(double, const Vec&)> resolve_fn;
    std::function<SetDesc(const Vec&)> value_fn;      // x -> op(x)
    std::function<SetDesc(const Vec&)> inv_value_fn;  // u -> op^{-1}(u)
    std::function<SetDesc()> zero_set_fn;             // zer(op)
    std::optional<Mat> linear;                        // matrix when single-valued linear

    // J_{gamma op}(x): unique p with x in p + gamma*op(p).
    Vec resolve(double gamma, const Vec& x) const;

    bool has_value_map() const { return static_cast<bool>(value_fn); }

    // u in op(x)? Uses the exact value map when present, otherwise the
    // resolvent characterization u in Ax <=> J_A(x + u) = x.
    bool contains(const Vec& x, const Vec& u, double tol = 1e-8) const;
};

SetDesc value_at(const MonotoneOp& op, const Vec& x);
SetDesc inverse_value_at(const MonotoneOp& op, const Vec& u);
SetDesc zero_set(const MonotoneOp& op);

// ---- catalogue ----
MonotoneOp zero_op(int dim);
MonotoneOp scaled_identity(int dim, double alpha);
MonotoneOp linear_monotone(Mat M);               // M + M^T must be PSD
MonotoneOp normal_cone_affine(SetDesc affine);   // Point or Affine variant
MonotoneOp normal_cone_box(Vec lo, Vec hi);
MonotoneOp projection_op(Mat subspace_basis, int dim);  // A = P_U
MonotoneOp constant_op(Vec u);                          // A: x -> {u}
MonotoneOp shifted_l1_subdiff(int dim, double lambda, Vec shift);  // lambda d||.||_1 - s

// Generic inverse via the resolvent identity
// J_{gamma A^{-1}}(x) = x - gamma J_{A/gamma}(x/gamma); value maps swap.
MonotoneOp inverse(const MonotoneOp& op);

// Blockwise product B_1 x ... x B_n.
MonotoneOp product_op(std::vector<MonotoneOp> blocks);

// Operator from a proximal map (subdifferentials are paramonotone).
MonotoneOp from_prox(int dim, std::function<Vec(double, const Vec&)> prox,
                     std::string kind, bool single_valued = false);

}  // namespace pdsplit

#include "pdsplit/operators.hpp"

#include <cmath>
#include <memory>

namespace pdsplit {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kValueBand = 1e-8;  // boundary band for set-valued evaluations

double soft_threshold(double v, double t) {
    if (v > t) return v - t;
    if (v < -t) return v + t;
    return 0.0;
}
}  // namespace

Vec MonotoneOp::resolve(double gamma, const Vec& x) const {
    if (gamma <= 0.0) throw std::invalid_argument("resolve: gamma must be positive");
    if (static_cast<int>(x.size()) != dim)
        throw std::invalid_argument("resolve: dimension mismatch");
    return resolve_fn(gamma, x);
}

bool MonotoneOp::contains(const Vec& x, const Vec& u, double tol) const {
    if (static_cast<int>(x.size()) != dim || static_cast<int>(u.size()) != dim)
        throw std::invalid_argument("contains: dimension mismatch");
    if (value_fn) {
        SetDesc v = value_fn(x);
        return !v.is_empty() && v.contains(u, tol);
    }
    Vec p = resolve(1.0, add(x, u));
    return norm(sub(p, x)) <= tol * (1.0 + norm(x));
}

SetDesc value_at(const MonotoneOp& op, const Vec& x) {
    if (!op.value_fn)
        throw UnsupportedStructure("value_at: operator '" + op.kind +
                                   "' has no exact set-valued form");
    if (static_cast<int>(x.size()) != op.dim)
        throw std::invalid_argument("value_at: dimension mismatch");
    return op.value_fn(x);
}

SetDesc inverse_value_at(const MonotoneOp& op, const Vec& u) {
    if (!op.inv_value_fn)
        throw UnsupportedStructure("inverse_value_at: operator '" + op.kind +
                                   "' has no exact inverse set-valued form");
    if (static_cast<int>(u.size()) != op.dim)
        throw std::invalid_argument("inverse_value_at: dimension mismatch");
    return op.inv_value_fn(u);
}

SetDesc zero_set(const MonotoneOp& op) {
    if (!op.zero_set_fn)
        throw UnsupportedStructure("zero_set: operator '" + op.kind +
                                   "' has no exact zero-set form");
    return op.zero_set_fn();
}

MonotoneOp zero_op(int dim) {
    MonotoneOp op;
    op.dim = dim;
    op.paramonotone = true;
    op.single_valued = true;
    op.kind = "zero";
    op.linear = Mat(dim, dim);
    op.resolve_fn = [](double, const Vec& x) { return x; };
    op.value_fn = [dim](const Vec&) { return SetDesc::point(zeros(dim)); };
    op.inv_value_fn = [dim](const Vec& u) {
        return norm(u) <= kValueBand ? SetDesc::whole(dim) : SetDesc::empty(dim);
    };
    op.zero_set_fn = [dim] { return SetDesc::whole(dim); };
    return op;
}

MonotoneOp scaled_identity(int dim, double alpha) {
    if (alpha < 0.0) throw std::invalid_argument("scaled_identity: alpha must be >= 0");
    if (alpha == 0.0) return zero_op(dim);
    MonotoneOp op;
    op.dim = dim;
    op.paramonotone = true;
    op.single_valued = true;
    op.kind = "scaled_identity";
    op.linear = mat_scaled(Mat::identity(dim), alpha);
    op.resolve_fn = [alpha](double gamma, const Vec& x) {
        return scaled(x, 1.0 / (1.0 + gamma * alpha));
    };
    op.value_fn = [alpha](const Vec& x) { return SetDesc::point(scaled(x, alpha)); };
    op.inv_value_fn = [alpha](const Vec& u) { return SetDesc::point(scaled(u, 1.0 / alpha)); };
    op.zero_set_fn = [dim] { return SetDesc::point(zeros(dim)); };
    return op;
}

MonotoneOp linear_monotone(Mat M) {
    if (M.rows != M.cols) throw std::invalid_argument("linear_monotone: not square");
    const int n = M.rows;
    // monotone <=> symmetric part PSD
    Mat sym = mat_scaled(mat_add(M, adjoint(M)), 0.5);
    EigSym e = jacobi_eigensym(sym);
    double scale = 1.0 + frobenius(M);
    if (!e.values.empty() && e.values.front() < -1e-10 * scale)
        throw std::invalid_argument("linear_monotone: symmetric part is not PSD");
    Mat skew = mat_scaled(mat_add(M, negated(adjoint(M))), 0.5);
    bool is_symmetric = frobenius(skew) <= 1e-12 * scale;

    MonotoneOp op;
    op.dim = n;
    op.paramonotone = is_symmetric;  // conservative: nonzero skew part clears the flag
    op.single_valued = true;
    op.kind = "linear";
    op.linear = M;
    op.resolve_fn = [M, n](double gamma, const Vec& x) {
        Mat A = mat_add(Mat::identity(n), mat_scaled(M, gamma));
        return solve(A, x);
    };
    op.value_fn = [M](const Vec& x) { return SetDesc::point(matvec(M, x)); };
    op.inv_value_fn = [M, n](const Vec& u) {
        LstsqResult ls = lstsq(M, u);
        if (ls.residual > 1e-9 * (1.0 + norm(u))) return SetDesc::empty(n);
        return SetDesc::affine(ls.x, nullspace(M));
    };
    op.zero_set_fn = [M, n] { return SetDesc::affine(zeros(n), nullspace(M)); };
    return op;
}

MonotoneOp normal_cone_affine(SetDesc affine) {
    if (!affine.is_affine_like())
        throw std::invalid_argument("normal_cone_affine: set must be a point or affine");
    const int n = affine.dim();
    Mat basis = affine.is_point() ? Mat(n, 0)
               : affine.is_whole()
                   ? Mat::identity(n)
                   : std::get<SetDesc::Affine>(affine.variant()).basis;
    Mat comp = complement_basis(basis, n);

    MonotoneOp op;
    op.dim = n;
    op.paramonotone = true;  // subdifferential of an indicator
    op.single_valued = false;
    op.kind = "normal_cone_affine";
    SetDesc U = affine;
    op.resolve_fn = [U](double, const Vec& x) { return U.project(x); };
    op.value_fn = [U, comp, n](const Vec& x) {
        if (!U.contains(x, kValueBand)) return SetDesc::empty(n);
        return SetDesc::affine(zeros(n), comp);  // (U-U)^perp
    };
    op.inv_value_fn = [U, comp, n](const Vec& u) {
        SetDesc perp = SetDesc::affine(zeros(n), comp);
        if (!perp.contains(u, kValueBand)) return SetDesc::empty(n);
        return U;
    };
    op.zero_set_fn = [U] { return U; };
    return op;
}

MonotoneOp normal_cone_box(Vec lo, Vec hi) {
    SetDesc box = SetDesc::box(lo, hi);
    const int n = static_cast<int>(lo.size());
    MonotoneOp op;
    op.dim = n;
    op.paramonotone = true;
    op.single_valued = false;
    op.kind = "normal_cone_box";
    op.resolve_fn = [box](double, const Vec& x) { return box.project(x); };
    op.value_fn = [lo, hi, n](const Vec& x) {
        std::vector<Ray> rays(n);
        for (int i = 0; i < n; ++i) {
            if (x[i] < lo[i] - kValueBand || x[i] > hi[i] + kValueBand)
                return SetDesc::empty(n);
            bool at_lo = std::fabs(x[i] - lo[i]) <= kValueBand;
            bool at_hi = std::fabs(x[i] - hi[i]) <= kValueBand;
            if (at_lo && at_hi)
                rays[i] = Ray::Free;
            else if (at_lo)
                rays[i] = Ray::NonPos;
            else if (at_hi)
                rays[i] = Ray::NonNeg;
            else
                rays[i] = Ray::Zero;
        }
        return SetDesc::ray_product(rays);
    };
    op.inv_value_fn = [lo, hi, n](const Vec& u) {
        Vec l(n), h(n);
        for (int i = 0; i < n; ++i) {
            if (u[i] > kValueBand) {
                l[i] = h[i] = hi[i];
            } else if (u[i] < -kValueBand) {
                l[i] = h[i] = lo[i];
            } else {
                l[i] = lo[i];
                h[i] = hi[i];
            }
            if (!std::isfinite(l[i]) || !std::isfinite(h[i])) {
                // a nonzero normal requires a finite face
                if ((u[i] > kValueBand && !std::isfinite(hi[i])) ||
                    (u[i] < -kValueBand && !std::isfinite(lo[i])))
                    return SetDesc::empty(n);
            }
        }
        return SetDesc::box(l, h);
    };
    op.zero_set_fn = [box] { return box; };
    return op;
}

MonotoneOp projection_op(Mat subspace_basis, int dim) {
    Mat B = orthonormal_columns(subspace_basis);
    if (B.rows != dim && B.cols > 0)
        throw std::invalid_argument("projection_op: basis dimension mismatch");
    Mat P = B.cols ? matmul(B, adjoint(B)) : Mat(dim, dim);
    Mat comp = complement_basis(B, dim);

    MonotoneOp op;
    op.dim = dim;
    op.paramonotone = true;  // symmetric PSD linear
    op.single_valued = true;
    op.kind = "projection";
    op.linear = P;
    op.resolve_fn = [B, dim](double gamma, const Vec& x) {
        // (I + gamma P_U)^{-1}: scale the U-component by 1/(1+gamma)
        Vec pu = B.cols ? matvec(B, matvec(adjoint(B), x)) : zeros(dim);
        return add(scaled(pu, 1.0 / (1.0 + gamma)), sub(x, pu));
    };
    op.value_fn = [P](const Vec& x) { return SetDesc::point(matvec(P, x)); };
    op.inv_value_fn = [B, comp, dim](const Vec& u) {
        // {x : P_U x = u} = u + U^perp when u in U
        SetDesc U = SetDesc::affine(zeros(dim), B);
        if (!U.contains(u, kValueBand)) return SetDesc::empty(dim);
        return SetDesc::affine(u, comp);
    };
    op.zero_set_fn = [comp, dim] { return SetDesc::affine(zeros(dim), comp); };
    return op;
}

MonotoneOp constant_op(Vec u) {
    const int n = static_cast<int>(u.size());
    MonotoneOp op;
    op.dim = n;
    op.paramonotone = true;
    op.single_valued = true;
    op.kind = "constant";
    op.resolve_fn = [u](double gamma, const Vec& x) { return sub(x, scaled(u, gamma)); };
    op.value_fn = [u](const Vec&) { return SetDesc::point(u); };
    op.inv_value_fn = [u, n](const Vec& v) {
        return norm(sub(v, u)) <= kValueBand * (1.0 + norm(u)) ? SetDesc::whole(n)
                                                               : SetDesc::empty(n);
    };
    op.zero_set_fn = [u, n] {
        return norm(u) <= kValueBand ? SetDesc::whole(n) : SetDesc::empty(n);
    };
    return op;
}

MonotoneOp shifted_l1_subdiff(int dim, double lambda, Vec shift) {
    if (lambda <= 0.0) throw std::invalid_argument("shifted_l1_subdiff: lambda must be > 0");
    if (static_cast<int>(shift.size()) != dim)
        throw std::invalid_argument("shifted_l1_subdiff: shift dimension mismatch");
    MonotoneOp op;
    op.dim = dim;
    op.paramonotone = true;  // subdifferential
    op.single_valued = false;
    op.kind = "shifted_l1";
    op.resolve_fn = [lambda, shift](double gamma, const Vec& x) {
        Vec y(x.size());
        for (size_t i = 0; i < x.size(); ++i)
            y[i] = soft_threshold(x[i] + gamma * shift[i], gamma * lambda);
        return y;
    };
    op.value_fn = [lambda, shift, dim](const Vec& x) {
        // lambda*d|x_i| - s_i per coordinate: an interval product (box)
        Vec lo(dim), hi(dim);
        for (int i = 0; i < dim; ++i) {
            if (x[i] > kValueBand) {
                lo[i] = hi[i] = lambda - shift[i];
            } else if (x[i] < -kValueBand) {
                lo[i] = hi[i] = -lambda - shift[i];
            } else {
                lo[i] = -lambda - shift[i];
                hi[i] = lambda - shift[i];
            }
        }
        return SetDesc::box(lo, hi);
    };
    op.inv_value_fn = [lambda, shift, dim](const Vec& u) {
        // x with (u+s)/lambda in d||x||_1: the normal-cone face product
        std::vector<Ray> rays(dim);
        for (int i = 0; i < dim; ++i) {
            double xi = (u[i] + shift[i]) / lambda;
            if (xi > 1.0 + kValueBand || xi < -1.0 - kValueBand) return SetDesc::empty(dim);
            if (std::fabs(xi - 1.0) <= kValueBand)
                rays[i] = Ray::NonNeg;
            else if (std::fabs(xi + 1.0) <= kValueBand)
                rays[i] = Ray::NonPos;
            else
                rays[i] = Ray::Zero;
        }
        return SetDesc::ray_product(rays);
    };
    Vec sh = shift;
    op.zero_set_fn = [lambda, sh, dim] {
        std::vector<Ray> rays(dim);
        for (int i = 0; i < dim; ++i) {
            double xi = sh[i] / lambda;
            if (xi > 1.0 + kValueBand || xi < -1.0 - kValueBand) return SetDesc::empty(dim);
            if (std::fabs(xi - 1.0) <= kValueBand)
                rays[i] = Ray::NonNeg;
            else if (std::fabs(xi + 1.0) <= kValueBand)
                rays[i] = Ray::NonPos;
            else
                rays[i] = Ray::Zero;
        }
        return SetDesc::ray_product(rays);
    };
    return op;
}

MonotoneOp inverse(const MonotoneOp& op) {
    MonotoneOp inv;
    inv.dim = op.dim;
    inv.paramonotone = op.paramonotone;  // paramonotone iff the inverse is
    inv.single_valued = false;
    inv.kind = op.kind + "_inverse";
    MonotoneOp base = op;
    inv.resolve_fn = [base](double gamma, const Vec& x) {
        // J_{gamma A^{-1}}(x) = x - gamma J_{A/gamma}(x/gamma)
        Vec inner = base.resolve_fn(1.0 / gamma, scaled(x, 1.0 / gamma));
        return sub(x, scaled(inner, gamma));
    };
    if (op.inv_value_fn) inv.value_fn = op.inv_value_fn;
    if (op.value_fn) {
        auto vf = op.value_fn;
        inv.inv_value_fn = vf;
        int dim = op.dim;
        inv.zero_set_fn = [vf, dim] { return vf(zeros(dim)); };  // zer A^{-1} = A(0)
    }
    return inv;
}

MonotoneOp product_op(std::vector<MonotoneOp> blocks) {
    int dim = 0;
    bool para = true, single = true;
    bool values = true, inv_values = true, zeroes = true;
    for (const MonotoneOp& b : blocks) {
        dim += b.dim;
        para = para && b.paramonotone;
        single = single && b.single_valued;
        values = values && static_cast<bool>(b.value_fn);
        inv_values = inv_values && static_cast<bool>(b.inv_value_fn);
        zeroes = zeroes && static_cast<bool>(b.zero_set_fn);
    }
    MonotoneOp op;
    op.dim = dim;
    op.paramonotone = para;
    op.single_valued = single;
    op.kind = "product";
    auto blks = std::make_shared<std::vector<MonotoneOp>>(std::move(blocks));
    op.resolve_fn = [blks, dim](double gamma, const Vec& x) {
        Vec y;
        y.reserve(dim);
        size_t at = 0;
        for (const MonotoneOp& b : *blks) {
            Vec xi(x.begin() + at, x.begin() + at + b.dim);
            Vec yi = b.resolve_fn(gamma, xi);
            y.insert(y.end(), yi.begin(), yi.end());
            at += b.dim;
        }
        return y;
    };
    auto blockwise = [blks](const Vec& x, bool use_inverse) {
        std::vector<SetDesc> parts;
        size_t at = 0;
        for (const MonotoneOp& b : *blks) {
            Vec xi(x.begin() + at, x.begin() + at + b.dim);
            parts.push_back(use_inverse ? b.inv_value_fn(xi) : b.value_fn(xi));
            at += b.dim;
        }
        return product_set(parts);
    };
    if (values) op.value_fn = [blockwise](const Vec& x) { return blockwise(x, false); };
    if (inv_values)
        op.inv_value_fn = [blockwise](const Vec& u) { return blockwise(u, true); };
    if (zeroes)
        op.zero_set_fn = [blks] {
            std::vector<SetDesc> parts;
            for (const MonotoneOp& b : *blks) parts.push_back(b.zero_set_fn());
            return product_set(parts);
        };
    return op;
}

MonotoneOp from_prox(int dim, std::function<Vec(double, const Vec&)> prox, std::string kind,
                     bool single_valued) {
    MonotoneOp op;
    op.dim = dim;
    op.paramonotone = true;  // subdifferential operators are paramonotone
    op.single_valued = single_valued;
    op.kind = std::move(kind);
    op.resolve_fn = std::move(prox);
    return op;
}

}  // namespace pdsplit

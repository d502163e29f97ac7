#include "pdsplit/splitting.hpp"

#include <cmath>

namespace pdsplit {

std::pair<Vec, Vec> cp_step(const Triple& t, const Vec& x, const Vec& y) {
    Vec xp = t.A.resolve(t.sigma, sub(x, scaled(matvec(t.Lt, y), t.sigma)));
    Vec arg = add(y, scaled(matvec(t.L, sub(scaled(xp, 2.0), x)), t.tau));
    Vec yp = t.B_inv.resolve(t.tau, arg);
    return {std::move(xp), std::move(yp)};
}

std::pair<Vec, Vec> preconditioner_apply(const Triple& t, const Vec& x, const Vec& y) {
    Vec top = sub(scaled(x, 1.0 / t.sigma), matvec(t.Lt, y));
    Vec bot = sub(scaled(y, 1.0 / t.tau), matvec(t.L, x));
    return {std::move(top), std::move(bot)};
}

std::pair<Vec, Vec> resolvent_AM(const Triple& t, const Vec& x, const Vec& y) {
    Vec p = t.A.resolve(t.sigma, scaled(x, t.sigma));
    Vec arg = add(scaled(matvec(t.L, p), 2.0 * t.tau), scaled(y, t.tau));
    Vec q = t.B_inv.resolve(t.tau, arg);
    return {std::move(p), std::move(q)};
}

double m_inner(const Triple& t, const Vec& ax, const Vec& ay, const Vec& bx, const Vec& by) {
    return dot(ax, bx) / t.sigma - dot(ax, matvec(t.Lt, by)) - dot(ay, matvec(t.L, bx)) +
           dot(ay, by) / t.tau;
}

double m_seminorm(const Triple& t, const Vec& x, const Vec& y) {
    double q = m_inner(t, x, y, x, y);
    return std::sqrt(std::max(0.0, q));
}

Factor build_factor(const Triple& t, FactorKind kind, double tol) {
    const int n = t.primal_dim();
    const int m = t.dual_dim();
    const double s = t.sigma, ta = t.tau;

    if (kind == FactorKind::DouglasRachford) {
        if (m != n) throw std::invalid_argument("build_factor: DR needs Y = X");
        Mat diff = mat_add(t.L, negated(Mat::identity(n)));
        if (frobenius(diff) > tol * (1.0 + frobenius(t.L)))
            throw std::invalid_argument("build_factor: DR needs L = Id");
        if (std::fabs(s - 1.0) > tol || std::fabs(ta - 1.0) > tol)
            throw std::invalid_argument("build_factor: DR needs sigma = tau = 1");
        Factor f;
        f.kind = kind;
        f.C = vcat(Mat::identity(n), negated(Mat::identity(n)));
        return f;
    }

    Mat LLt = matmul(t.L, t.Lt);
    if (kind == FactorKind::ScaledIsometry) {
        Mat dev = mat_add(mat_scaled(LLt, s * ta), negated(Mat::identity(m)));
        if (frobenius(dev) > tol * (1.0 + s * ta * frobenius(LLt)))
            throw std::invalid_argument(
                "build_factor: scaled isometry needs sigma*tau*LL* = Id");
        Factor f;
        f.kind = kind;
        f.C = vcat(mat_scaled(Mat::identity(n), 1.0 / std::sqrt(s)),
                   mat_scaled(t.L, -std::sqrt(s)));
        return f;
    }

    // General: R R* = Id_Y - sigma*tau*LL*,  C = [[Id/sqrt(s), 0], [-sqrt(s) L, R/sqrt(ta)]]
    Mat S = mat_add(Mat::identity(m), mat_scaled(LLt, -s * ta));
    Mat R = (kind == FactorKind::GeneralCholesky) ? cholesky_psd(S, tol)
                                                  : principal_sqrt_psd(S, tol);
    Factor f;
    f.kind = kind;
    f.R = R;
    Mat top = hcat(mat_scaled(Mat::identity(n), 1.0 / std::sqrt(s)), Mat(n, m));
    Mat bot = hcat(mat_scaled(t.L, -std::sqrt(s)), mat_scaled(R, 1.0 / std::sqrt(ta)));
    f.C = vcat(top, bot);
    return f;
}

Vec reduced_step(const Triple& t, const Factor& f, const Vec& w) {
    if (static_cast<int>(w.size()) != f.reduced_dim())
        throw std::invalid_argument("reduced_step: dimension mismatch");
    const int n = t.primal_dim();
    Vec u = matvec(f.C, w);
    Vec x(u.begin(), u.begin() + n);
    Vec y(u.begin() + n, u.end());
    auto [p, q] = resolvent_AM(t, x, y);
    return matvec(adjoint(f.C), concat(p, q));
}

namespace {
bool window_converged(const std::vector<double>& residuals, int window, double tol) {
    if (residuals.empty()) return false;
    int k = std::min<int>(window, static_cast<int>(residuals.size()));
    double s = 0.0;
    for (int i = 0; i < k; ++i) s += residuals[residuals.size() - 1 - i];
    return s / k <= tol;
}
}  // namespace

IterTrace iterate_full(const Triple& t, Vec x0, Vec y0, const IterateOptions& opt) {
    if (opt.tol <= 0.0) throw std::invalid_argument("iterate: tol must be positive");
    IterTrace tr;
    Vec x = std::move(x0), y = std::move(y0);
    if (opt.store_iterates) tr.iterates.push_back(concat(x, y));
    for (int k = 1; k <= opt.max_iter; ++k) {
        auto [xn, yn] = cp_step(t, x, y);
        double r = m_seminorm(t, sub(xn, x), sub(yn, y));
        tr.residuals.push_back(r);
        x = std::move(xn);
        y = std::move(yn);
        if (opt.store_iterates) tr.iterates.push_back(concat(x, y));
        if (r <= opt.tol * 1e-3) {
            // an (almost) exact fixed point needs no window smoothing;
            // a first-step hit means we started at a fixed point
            tr.iterations = k == 1 ? 0 : k;
            tr.converged = true;
            break;
        }
        tr.iterations = k;
        if (std::max(norm(x), norm(y)) > opt.divergence_norm) {
            tr.diverged = true;
            break;
        }
        if (window_converged(tr.residuals, opt.window, opt.tol)) {
            tr.converged = true;
            break;
        }
    }
    tr.x = std::move(x);
    tr.y = std::move(y);
    return tr;
}

IterTrace iterate_reduced(const Triple& t, const Factor& f, Vec w0,
                          const IterateOptions& opt) {
    if (opt.tol <= 0.0) throw std::invalid_argument("iterate: tol must be positive");
    IterTrace tr;
    Vec w = std::move(w0);
    if (opt.store_iterates) tr.iterates.push_back(w);
    for (int k = 1; k <= opt.max_iter; ++k) {
        Vec wn = reduced_step(t, f, w);
        double r = norm(sub(wn, w));
        tr.residuals.push_back(r);
        w = std::move(wn);
        if (opt.store_iterates) tr.iterates.push_back(w);
        if (r <= opt.tol * 1e-3) {
            tr.iterations = k == 1 ? 0 : k;
            tr.converged = true;
            break;
        }
        tr.iterations = k;
        if (norm(w) > opt.divergence_norm) {
            tr.diverged = true;
            break;
        }
        if (window_converged(tr.residuals, opt.window, opt.tol)) {
            tr.converged = true;
            break;
        }
    }
    tr.w = std::move(w);
    return tr;
}

}  // namespace pdsplit

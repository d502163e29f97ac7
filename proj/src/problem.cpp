#include "pdsplit/problem.hpp"

#include <cmath>

namespace pdsplit {

Triple make_triple(MonotoneOp A, Mat L, MonotoneOp B, double sigma, double tau, double tol) {
    if (L.cols != A.dim || L.rows != B.dim)
        throw std::invalid_argument("make_triple: L shape does not match operator dims");
    if (sigma <= 0.0 || tau <= 0.0)
        throw std::invalid_argument("make_triple: step sizes must be positive");
    Triple t;
    t.L_norm = operator_norm(L, 1e-12);
    if (sigma * tau * t.L_norm * t.L_norm > 1.0 + tol)
        throw std::invalid_argument("make_triple: sigma*tau*||L||^2 exceeds 1 (got " +
                                    std::to_string(sigma * tau * t.L_norm * t.L_norm) + ")");
    t.A = std::move(A);
    t.B = std::move(B);
    t.B_inv = inverse(t.B);
    t.Lt = adjoint(L);
    t.L = std::move(L);
    t.sigma = sigma;
    t.tau = tau;
    return t;
}

Triple dual(const Triple& t) {
    return make_triple(inverse(t.B), negated(t.Lt), inverse(t.A), t.tau, t.sigma);
}

double saddle_residual(const Triple& t, const Vec& x, const Vec& y) {
    if (static_cast<int>(x.size()) != t.primal_dim() ||
        static_cast<int>(y.size()) != t.dual_dim())
        throw std::invalid_argument("saddle_residual: dimension mismatch");
    Vec xp = t.A.resolve(t.sigma, sub(x, scaled(matvec(t.Lt, y), t.sigma)));
    Vec yp = t.B_inv.resolve(t.tau, add(y, scaled(matvec(t.L, x), t.tau)));
    return std::max(norm(sub(x, xp)), norm(sub(y, yp)));
}

Triple product_triple(MonotoneOp A, std::vector<ProductPart> parts, double sigma, double tau,
                      double tol) {
    if (parts.empty()) throw std::invalid_argument("product_triple: no parts");
    Mat L = parts[0].L;
    std::vector<MonotoneOp> blocks;
    blocks.push_back(parts[0].B);
    for (size_t j = 1; j < parts.size(); ++j) {
        if (parts[j].L.cols != L.cols)
            throw std::invalid_argument("product_triple: parts disagree on domain dim");
        L = vcat(L, parts[j].L);
        blocks.push_back(parts[j].B);
    }
    for (size_t j = 0; j < parts.size(); ++j)
        if (parts[j].L.rows != blocks[j].dim)
            throw std::invalid_argument("product_triple: L_j rows do not match B_j dim");
    return make_triple(std::move(A), std::move(L), product_op(std::move(blocks)), sigma, tau,
                       tol);
}

}  // namespace pdsplit

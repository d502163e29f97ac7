#include "pdsplit/sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pdsplit {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp(double x, double lo, double hi) { return std::min(std::max(x, lo), hi); }

Vec project_halfspace(const Vec& x, const Vec& c, double d) {
    double viol = dot(c, x) - d;
    if (viol <= 0.0) return x;
    double cc = dot(c, c);
    if (cc == 0.0) return x;
    return sub(x, scaled(c, viol / cc));
}

Vec project_equalities(const Vec& x, const Mat& E, const Vec& f) {
    if (E.rows == 0) return x;
    Vec r = sub(f, matvec(E, x));
    LstsqResult ls = lstsq(E, r);
    return add(x, ls.x);
}
}  // namespace

SetDesc::SetDesc(Variant v) : v_(std::move(v)) {
    // normalization: collapse degenerate variants so exact formula outputs
    // (points, subspaces) keep their exact shape through the algebra
    if (auto* a = std::get_if<Affine>(&v_)) {
        if (a->basis.cols == 0) {
            v_ = Point{a->offset};
        } else if (a->basis.cols >= static_cast<int>(a->offset.size())) {
            int n = static_cast<int>(a->offset.size());
            if (a->basis.cols == n) v_ = Whole{n};
        }
    } else if (auto* r = std::get_if<RayProduct>(&v_)) {
        bool all_zero = true, all_free = true;
        for (Ray ray : r->rays) {
            all_zero = all_zero && ray == Ray::Zero;
            all_free = all_free && ray == Ray::Free;
        }
        int n = static_cast<int>(r->rays.size());
        if (n > 0 && all_zero)
            v_ = Point{zeros(n)};
        else if (n > 0 && all_free)
            v_ = Whole{n};
    } else if (auto* b = std::get_if<Box>(&v_)) {
        bool degenerate = !b->lo.empty();
        for (size_t i = 0; i < b->lo.size(); ++i)
            if (b->lo[i] != b->hi[i]) degenerate = false;
        if (degenerate) v_ = Point{b->lo};
    } else if (auto* p = std::get_if<Polyhedron>(&v_)) {
        if (p->C.rows == 0 && p->E.rows == 0) v_ = Whole{p->C.cols};
    }
}

SetDesc SetDesc::affine(Vec offset, Mat basis) {
    if (static_cast<int>(offset.size()) != basis.rows && basis.cols > 0)
        throw std::invalid_argument("SetDesc::affine: offset/basis mismatch");
    Mat ortho = orthonormal_columns(basis);
    return SetDesc(Affine{std::move(offset), std::move(ortho)});
}

SetDesc SetDesc::subspace(Mat spanning, int dim) {
    if (spanning.cols == 0) return point(zeros(dim));
    if (spanning.rows != dim) throw std::invalid_argument("SetDesc::subspace: dim mismatch");
    return affine(zeros(dim), std::move(spanning));
}

SetDesc SetDesc::box(Vec lo, Vec hi) {
    if (lo.size() != hi.size()) throw std::invalid_argument("SetDesc::box: size mismatch");
    for (size_t i = 0; i < lo.size(); ++i)
        if (lo[i] > hi[i]) throw std::invalid_argument("SetDesc::box: lo > hi");
    return SetDesc(Box{std::move(lo), std::move(hi)});
}

SetDesc SetDesc::polyhedron(Mat C, Vec d, Mat E, Vec f) {
    int n = C.rows > 0 ? C.cols : E.cols;
    if (C.rows != static_cast<int>(d.size()) || E.rows != static_cast<int>(f.size()))
        throw std::invalid_argument("SetDesc::polyhedron: row mismatch");
    if (C.rows > 0 && E.rows > 0 && C.cols != E.cols)
        throw std::invalid_argument("SetDesc::polyhedron: column mismatch");
    if (C.rows == 0) {
        // equalities only: this is an affine set (or empty)
        if (E.rows == 0) return whole(n);
        LstsqResult ls = lstsq(E, f);
        double scale = 1.0 + norm(f) + frobenius(E);
        if (ls.residual > 1e-9 * scale) return empty(n);
        return affine(ls.x, nullspace(E));
    }
    return SetDesc(Polyhedron{std::move(C), std::move(d), std::move(E), std::move(f)});
}

int SetDesc::dim() const {
    return std::visit(
        [](const auto& s) -> int {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Empty> || std::is_same_v<T, Whole>)
                return s.dim;
            else if constexpr (std::is_same_v<T, Point>)
                return static_cast<int>(s.v.size());
            else if constexpr (std::is_same_v<T, Affine>)
                return static_cast<int>(s.offset.size());
            else if constexpr (std::is_same_v<T, Box>)
                return static_cast<int>(s.lo.size());
            else if constexpr (std::is_same_v<T, RayProduct>)
                return static_cast<int>(s.rays.size());
            else
                return s.C.rows > 0 ? s.C.cols : s.E.cols;
        },
        v_);
}

bool SetDesc::is_affine_like() const {
    return std::holds_alternative<Point>(v_) || std::holds_alternative<Affine>(v_) ||
           std::holds_alternative<Whole>(v_);
}

int SetDesc::affine_dim() const {
    if (is_point()) return 0;
    if (const auto* a = std::get_if<Affine>(&v_)) return a->basis.cols;
    if (is_whole()) return dim();
    throw UnsupportedStructure("affine_dim: not an affine-like set");
}

const char* SetDesc::variant_name() const {
    switch (v_.index()) {
        case 0: return "empty";
        case 1: return "whole";
        case 2: return "point";
        case 3: return "affine";
        case 4: return "box";
        case 5: return "ray_product";
        default: return "polyhedron";
    }
}

bool SetDesc::contains(const Vec& x, double tol) const {
    if (static_cast<int>(x.size()) != dim() && !is_empty())
        throw std::invalid_argument("SetDesc::contains: dimension mismatch");
    return std::visit(
        [&](const auto& s) -> bool {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Empty>) {
                return false;
            } else if constexpr (std::is_same_v<T, Whole>) {
                return true;
            } else if constexpr (std::is_same_v<T, Point>) {
                return norm(sub(x, s.v)) <= tol * (1.0 + norm(s.v));
            } else if constexpr (std::is_same_v<T, Affine>) {
                Vec r = sub(x, s.offset);
                Vec p = s.basis.cols ? matvec(s.basis, matvec(adjoint(s.basis), r))
                                     : zeros(static_cast<int>(r.size()));
                return norm(sub(r, p)) <= tol * (1.0 + norm(x));
            } else if constexpr (std::is_same_v<T, Box>) {
                for (size_t i = 0; i < s.lo.size(); ++i)
                    if (x[i] < s.lo[i] - tol || x[i] > s.hi[i] + tol) return false;
                return true;
            } else if constexpr (std::is_same_v<T, RayProduct>) {
                for (size_t i = 0; i < s.rays.size(); ++i) {
                    switch (s.rays[i]) {
                        case Ray::Zero:
                            if (std::fabs(x[i]) > tol) return false;
                            break;
                        case Ray::NonNeg:
                            if (x[i] < -tol) return false;
                            break;
                        case Ray::NonPos:
                            if (x[i] > tol) return false;
                            break;
                        case Ray::Free: break;
                    }
                }
                return true;
            } else {
                double scale = 1.0 + norm(x);
                for (int i = 0; i < s.C.rows; ++i)
                    if (dot(s.C.row(i), x) - s.d[i] > tol * scale) return false;
                for (int i = 0; i < s.E.rows; ++i)
                    if (std::fabs(dot(s.E.row(i), x) - s.f[i]) > tol * scale) return false;
                return true;
            }
        },
        v_);
}

Vec SetDesc::project(const Vec& x, double tol) const {
    if (is_empty()) throw std::invalid_argument("projection onto empty set");
    if (static_cast<int>(x.size()) != dim())
        throw std::invalid_argument("SetDesc::project: dimension mismatch");
    return std::visit(
        [&](const auto& s) -> Vec {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Empty>) {
                throw std::invalid_argument("projection onto empty set");
            } else if constexpr (std::is_same_v<T, Whole>) {
                return x;
            } else if constexpr (std::is_same_v<T, Point>) {
                return s.v;
            } else if constexpr (std::is_same_v<T, Affine>) {
                Vec r = sub(x, s.offset);
                Vec p = s.basis.cols ? matvec(s.basis, matvec(adjoint(s.basis), r))
                                     : zeros(static_cast<int>(r.size()));
                return add(s.offset, p);
            } else if constexpr (std::is_same_v<T, Box>) {
                Vec y(x.size());
                for (size_t i = 0; i < x.size(); ++i) y[i] = clamp(x[i], s.lo[i], s.hi[i]);
                return y;
            } else if constexpr (std::is_same_v<T, RayProduct>) {
                Vec y(x.size());
                for (size_t i = 0; i < x.size(); ++i) {
                    switch (s.rays[i]) {
                        case Ray::Zero: y[i] = 0.0; break;
                        case Ray::NonNeg: y[i] = std::max(x[i], 0.0); break;
                        case Ray::NonPos: y[i] = std::min(x[i], 0.0); break;
                        case Ray::Free: y[i] = x[i]; break;
                    }
                }
                return y;
            } else {
                // Dykstra over the equality block and each halfspace row
                const int m = s.C.rows;
                const int nfac = m + (s.E.rows > 0 ? 1 : 0);
                Vec y = x;
                std::vector<Vec> corr(nfac, zeros(static_cast<int>(x.size())));
                double stop = std::max(tol, 1e-14) * (1.0 + norm(x));
                const int max_cycles = 20000;
                for (int cycle = 0; cycle < max_cycles; ++cycle) {
                    double change = 0.0;
                    for (int k = 0; k < nfac; ++k) {
                        Vec z = add(y, corr[k]);
                        Vec ynew = (k < m) ? project_halfspace(z, s.C.row(k), s.d[k])
                                           : project_equalities(z, s.E, s.f);
                        corr[k] = sub(z, ynew);
                        change = std::max(change, norm(sub(ynew, y)));
                        y = ynew;
                    }
                    if (change <= stop) return y;
                    if (norm(y) > 1e12)
                        throw std::runtime_error(
                            "polyhedron projection diverged (set may be empty)");
                }
                throw std::runtime_error("polyhedron projection did not converge");
            }
        },
        v_);
}

Vec SetDesc::sample(Rng& rng, double radius) const {
    if (is_empty()) throw std::invalid_argument("cannot sample the empty set");
    return std::visit(
        [&](const auto& s) -> Vec {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Empty>) {
                throw std::invalid_argument("cannot sample the empty set");
            } else if constexpr (std::is_same_v<T, Whole>) {
                return rng.uniform_vec(s.dim, -radius, radius);
            } else if constexpr (std::is_same_v<T, Point>) {
                return s.v;
            } else if constexpr (std::is_same_v<T, Affine>) {
                Vec c = rng.uniform_vec(s.basis.cols, -radius, radius);
                return add(s.offset, s.basis.cols ? matvec(s.basis, c) : zeros(dim()));
            } else if constexpr (std::is_same_v<T, Box>) {
                Vec y(s.lo.size());
                for (size_t i = 0; i < y.size(); ++i) {
                    double lo = std::max(s.lo[i], -radius), hi = std::min(s.hi[i], radius);
                    if (lo > hi) lo = hi = clamp(0.0, s.lo[i], s.hi[i]);
                    y[i] = rng.uniform(lo, hi);
                }
                return y;
            } else if constexpr (std::is_same_v<T, RayProduct>) {
                Vec y(s.rays.size());
                for (size_t i = 0; i < y.size(); ++i) {
                    double u = rng.uniform(0.0, radius);
                    switch (s.rays[i]) {
                        case Ray::Zero: y[i] = 0.0; break;
                        case Ray::NonNeg: y[i] = u; break;
                        case Ray::NonPos: y[i] = -u; break;
                        case Ray::Free: y[i] = rng.uniform(-radius, radius); break;
                    }
                }
                return y;
            } else {
                Vec r = rng.uniform_vec(dim(), -radius, radius);
                return project(r, 1e-11);
            }
        },
        v_);
}

HRep to_hrep(const SetDesc& s) {
    const int n = s.dim();
    return std::visit(
        [&](const auto& v) -> HRep {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, SetDesc::Whole>) {
                return {Mat(0, n), {}, Mat(0, n), {}};
            } else if constexpr (std::is_same_v<T, SetDesc::Point>) {
                return {Mat(0, n), {}, Mat::identity(n), v.v};
            } else if constexpr (std::is_same_v<T, SetDesc::Affine>) {
                Mat D = complement_basis(v.basis, n);
                Mat E = adjoint(D);
                return {Mat(0, n), {}, E, matvec(E, v.offset)};
            } else if constexpr (std::is_same_v<T, SetDesc::Box>) {
                std::vector<Vec> rows;
                Vec d;
                for (int i = 0; i < n; ++i) {
                    if (std::isfinite(v.hi[i])) {
                        Vec r = zeros(n);
                        r[i] = 1.0;
                        rows.push_back(r);
                        d.push_back(v.hi[i]);
                    }
                    if (std::isfinite(v.lo[i])) {
                        Vec r = zeros(n);
                        r[i] = -1.0;
                        rows.push_back(r);
                        d.push_back(-v.lo[i]);
                    }
                }
                Mat C = rows.empty() ? Mat(0, n) : Mat::from_rows(rows);
                return {C, d, Mat(0, n), {}};
            } else if constexpr (std::is_same_v<T, SetDesc::RayProduct>) {
                std::vector<Vec> ineq, eq;
                for (int i = 0; i < n; ++i) {
                    Vec r = zeros(n);
                    switch (v.rays[i]) {
                        case Ray::Zero:
                            r[i] = 1.0;
                            eq.push_back(r);
                            break;
                        case Ray::NonNeg:
                            r[i] = -1.0;
                            ineq.push_back(r);
                            break;
                        case Ray::NonPos:
                            r[i] = 1.0;
                            ineq.push_back(r);
                            break;
                        case Ray::Free: break;
                    }
                }
                Mat C = ineq.empty() ? Mat(0, n) : Mat::from_rows(ineq);
                Mat E = eq.empty() ? Mat(0, n) : Mat::from_rows(eq);
                return {C, Vec(C.rows, 0.0), E, Vec(E.rows, 0.0)};
            } else if constexpr (std::is_same_v<T, SetDesc::Polyhedron>) {
                return {v.C, v.d, v.E, v.f};
            } else {
                throw UnsupportedStructure("to_hrep: empty set has no H-representation");
            }
        },
        s.variant());
}

SetDesc intersect(const SetDesc& a, const SetDesc& b, double tol) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("intersect: dimension mismatch");
    const int n = a.dim();
    if (a.is_empty() || b.is_empty()) return SetDesc::empty(n);
    if (a.is_whole()) return b;
    if (b.is_whole()) return a;
    if (a.is_point()) {
        const Vec& v = std::get<SetDesc::Point>(a.variant()).v;
        return b.contains(v, tol) ? a : SetDesc::empty(n);
    }
    if (b.is_point()) {
        const Vec& v = std::get<SetDesc::Point>(b.variant()).v;
        return a.contains(v, tol) ? b : SetDesc::empty(n);
    }

    const auto* aa = std::get_if<SetDesc::Affine>(&a.variant());
    const auto* ab = std::get_if<SetDesc::Affine>(&b.variant());
    if (aa && ab) {
        // common point by least squares over both parametrizations
        Mat M = hcat(aa->basis, negated(ab->basis));
        Vec rhs = sub(ab->offset, aa->offset);
        LstsqResult ls = lstsq(M, rhs);
        double scale = 1.0 + norm(aa->offset) + norm(ab->offset);
        if (ls.residual > tol * scale * 10.0) return SetDesc::empty(n);
        Vec coeff_a(ls.x.begin(), ls.x.begin() + aa->basis.cols);
        Vec p = add(aa->offset, aa->basis.cols ? matvec(aa->basis, coeff_a) : zeros(n));
        // direction space: span(Va) cap span(Vb) = (span Da + span Db)^perp
        Mat Da = complement_basis(aa->basis, n);
        Mat Db = complement_basis(ab->basis, n);
        Mat stacked = vcat(adjoint(Da), adjoint(Db));
        Mat dir = nullspace(stacked);
        // snap the common point onto both sets once more
        p = b.project(a.project(p));
        return SetDesc::affine(p, dir);
    }

    const auto* ba = std::get_if<SetDesc::Box>(&a.variant());
    const auto* bb = std::get_if<SetDesc::Box>(&b.variant());
    if (ba && bb) {
        Vec lo(n), hi(n);
        for (int i = 0; i < n; ++i) {
            lo[i] = std::max(ba->lo[i], bb->lo[i]);
            hi[i] = std::min(ba->hi[i], bb->hi[i]);
            if (lo[i] > hi[i] + tol) return SetDesc::empty(n);
            if (lo[i] > hi[i]) lo[i] = hi[i];
        }
        return SetDesc::box(lo, hi);
    }

    const auto* ra = std::get_if<SetDesc::RayProduct>(&a.variant());
    const auto* rb = std::get_if<SetDesc::RayProduct>(&b.variant());
    if (ra && rb) {
        std::vector<Ray> rays(n);
        for (int i = 0; i < n; ++i) {
            Ray x = ra->rays[i], y = rb->rays[i];
            if (x == y)
                rays[i] = x;
            else if (x == Ray::Free)
                rays[i] = y;
            else if (y == Ray::Free)
                rays[i] = x;
            else
                rays[i] = Ray::Zero;  // NonNeg cap NonPos, or Zero cap any
        }
        return SetDesc::ray_product(rays);
    }

    // polyhedral fallback
    HRep ha = to_hrep(a), hb = to_hrep(b);
    Mat C = ha.C.rows ? (hb.C.rows ? vcat(ha.C, hb.C) : ha.C) : hb.C;
    Vec d = concat(ha.d, hb.d);
    Mat E = ha.E.rows ? (hb.E.rows ? vcat(ha.E, hb.E) : ha.E) : hb.E;
    Vec f = concat(ha.f, hb.f);
    if (C.rows == 0) C = Mat(0, n);
    if (E.rows == 0) E = Mat(0, n);
    return SetDesc::polyhedron(C, d, E, f);
}

SetDesc negate(const SetDesc& s) { return scale_set(s, -1.0); }

SetDesc scale_set(const SetDesc& s, double alpha) {
    const int n = s.dim();
    if (alpha == 0.0) return s.is_empty() ? s : SetDesc::point(zeros(n));
    return std::visit(
        [&](const auto& v) -> SetDesc {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, SetDesc::Empty> ||
                          std::is_same_v<T, SetDesc::Whole>) {
                return s;
            } else if constexpr (std::is_same_v<T, SetDesc::Point>) {
                return SetDesc::point(scaled(v.v, alpha));
            } else if constexpr (std::is_same_v<T, SetDesc::Affine>) {
                return SetDesc::affine(scaled(v.offset, alpha), v.basis);
            } else if constexpr (std::is_same_v<T, SetDesc::Box>) {
                Vec lo(n), hi(n);
                for (int i = 0; i < n; ++i) {
                    double x = alpha * v.lo[i], y = alpha * v.hi[i];
                    lo[i] = std::min(x, y);
                    hi[i] = std::max(x, y);
                }
                return SetDesc::box(lo, hi);
            } else if constexpr (std::is_same_v<T, SetDesc::RayProduct>) {
                if (alpha > 0) return s;
                std::vector<Ray> rays = v.rays;
                for (Ray& r : rays) {
                    if (r == Ray::NonNeg)
                        r = Ray::NonPos;
                    else if (r == Ray::NonPos)
                        r = Ray::NonNeg;
                }
                return SetDesc::ray_product(rays);
            } else {
                return SetDesc::polyhedron(mat_scaled(v.C, 1.0 / alpha), v.d,
                                           mat_scaled(v.E, 1.0 / alpha), v.f);
            }
        },
        s.variant());
}

SetDesc translate(const SetDesc& s, const Vec& t) {
    const int n = s.dim();
    if (static_cast<int>(t.size()) != n)
        throw std::invalid_argument("translate: dimension mismatch");
    return std::visit(
        [&](const auto& v) -> SetDesc {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, SetDesc::Empty> ||
                          std::is_same_v<T, SetDesc::Whole>) {
                return s;
            } else if constexpr (std::is_same_v<T, SetDesc::Point>) {
                return SetDesc::point(add(v.v, t));
            } else if constexpr (std::is_same_v<T, SetDesc::Affine>) {
                return SetDesc::affine(add(v.offset, t), v.basis);
            } else if constexpr (std::is_same_v<T, SetDesc::Box>) {
                return SetDesc::box(add(v.lo, t), add(v.hi, t));
            } else if constexpr (std::is_same_v<T, SetDesc::RayProduct>) {
                HRep h = to_hrep(s);
                Vec d = h.d;
                for (int i = 0; i < h.C.rows; ++i) d[i] += dot(h.C.row(i), t);
                Vec f = h.f;
                for (int i = 0; i < h.E.rows; ++i) f[i] += dot(h.E.row(i), t);
                return SetDesc::polyhedron(h.C, d, h.E, f);
            } else {
                Vec d = v.d;
                for (int i = 0; i < v.C.rows; ++i) d[i] += dot(v.C.row(i), t);
                Vec f = v.f;
                for (int i = 0; i < v.E.rows; ++i) f[i] += dot(v.E.row(i), t);
                return SetDesc::polyhedron(v.C, d, v.E, f);
            }
        },
        s.variant());
}

SetDesc preimage(const Mat& M, const SetDesc& s, double tol) {
    if (M.rows != s.dim()) throw std::invalid_argument("preimage: dimension mismatch");
    const int n = M.cols;
    if (M.rows == M.cols) {
        bool is_id = true;
        for (int i = 0; i < M.rows && is_id; ++i)
            for (int j = 0; j < M.cols && is_id; ++j)
                if (M(i, j) != (i == j ? 1.0 : 0.0)) is_id = false;
        if (is_id) return s;
    }
    return std::visit(
        [&](const auto& v) -> SetDesc {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, SetDesc::Empty>) {
                return SetDesc::empty(n);
            } else if constexpr (std::is_same_v<T, SetDesc::Whole>) {
                return SetDesc::whole(n);
            } else if constexpr (std::is_same_v<T, SetDesc::Point>) {
                LstsqResult ls = lstsq(M, v.v);
                if (ls.residual > tol * (1.0 + norm(v.v)) * 10.0) return SetDesc::empty(n);
                return SetDesc::affine(ls.x, nullspace(M));
            } else if constexpr (std::is_same_v<T, SetDesc::Affine>) {
                // Mx in offset + span(basis)  <=>  D^T (Mx - offset) = 0
                Mat D = complement_basis(v.basis, s.dim());
                Mat A = matmul(adjoint(D), M);
                Vec rhs = matvec(adjoint(D), v.offset);
                LstsqResult ls = lstsq(A, rhs);
                if (ls.residual > tol * (1.0 + norm(rhs)) * 10.0) return SetDesc::empty(n);
                return SetDesc::affine(ls.x, nullspace(A));
            } else {
                HRep h = to_hrep(s);
                Mat C = h.C.rows ? matmul(h.C, M) : Mat(0, n);
                Mat E = h.E.rows ? matmul(h.E, M) : Mat(0, n);
                return SetDesc::polyhedron(C, h.d, E, h.f);
            }
        },
        s.variant());
}

SetDesc image(const Mat& M, const SetDesc& s, double tol) {
    if (M.cols != s.dim()) throw std::invalid_argument("image: dimension mismatch");
    const int m = M.rows;
    return std::visit(
        [&](const auto& v) -> SetDesc {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, SetDesc::Empty>) {
                return SetDesc::empty(m);
            } else if constexpr (std::is_same_v<T, SetDesc::Whole>) {
                return SetDesc::affine(zeros(m), orthonormal_columns(M, tol));
            } else if constexpr (std::is_same_v<T, SetDesc::Point>) {
                return SetDesc::point(matvec(M, v.v));
            } else if constexpr (std::is_same_v<T, SetDesc::Affine>) {
                Mat img = v.basis.cols ? matmul(M, v.basis) : Mat(m, 0);
                return SetDesc::affine(matvec(M, v.offset), orthonormal_columns(img, tol));
            } else {
                throw UnsupportedStructure(
                    std::string("image: unsupported structure (linear image of ") +
                    s.variant_name() + ")");
            }
        },
        s.variant());
}

SetDesc product_set(std::span<const SetDesc> factors, double tol) {
    int n = 0;
    for (const SetDesc& f : factors) n += f.dim();
    if (factors.empty()) return SetDesc::whole(0);
    for (const SetDesc& f : factors)
        if (f.is_empty()) return SetDesc::empty(n);

    auto all = [&](auto pred) {
        for (const SetDesc& f : factors)
            if (!pred(f)) return false;
        return true;
    };

    if (all([](const SetDesc& f) { return f.is_point(); })) {
        Vec v;
        for (const SetDesc& f : factors)
            v = concat(v, std::get<SetDesc::Point>(f.variant()).v);
        return SetDesc::point(v);
    }

    auto ray_like = [](const SetDesc& f) {
        if (std::holds_alternative<SetDesc::RayProduct>(f.variant())) return true;
        if (f.is_whole()) return true;
        if (f.is_point()) {
            const Vec& v = std::get<SetDesc::Point>(f.variant()).v;
            return norm(v) == 0.0;
        }
        return false;
    };
    if (all(ray_like)) {
        std::vector<Ray> rays;
        for (const SetDesc& f : factors) {
            if (const auto* r = std::get_if<SetDesc::RayProduct>(&f.variant()))
                rays.insert(rays.end(), r->rays.begin(), r->rays.end());
            else if (f.is_whole())
                rays.insert(rays.end(), f.dim(), Ray::Free);
            else
                rays.insert(rays.end(), f.dim(), Ray::Zero);
        }
        return SetDesc::ray_product(rays);
    }

    auto box_like = [](const SetDesc& f) {
        return std::holds_alternative<SetDesc::Box>(f.variant()) || f.is_point() ||
               f.is_whole();
    };
    if (all(box_like)) {
        Vec lo, hi;
        for (const SetDesc& f : factors) {
            if (const auto* b = std::get_if<SetDesc::Box>(&f.variant())) {
                lo.insert(lo.end(), b->lo.begin(), b->lo.end());
                hi.insert(hi.end(), b->hi.begin(), b->hi.end());
            } else if (f.is_point()) {
                const Vec& v = std::get<SetDesc::Point>(f.variant()).v;
                lo.insert(lo.end(), v.begin(), v.end());
                hi.insert(hi.end(), v.begin(), v.end());
            } else {
                lo.insert(lo.end(), f.dim(), -kInf);
                hi.insert(hi.end(), f.dim(), kInf);
            }
        }
        return SetDesc::box(lo, hi);
    }

    if (all([](const SetDesc& f) { return f.is_affine_like(); })) {
        Vec offset;
        std::vector<Vec> cols;
        int at = 0;
        for (const SetDesc& f : factors) {
            int d = f.dim();
            Vec off;
            Mat basis(d, 0);
            if (f.is_point()) {
                off = std::get<SetDesc::Point>(f.variant()).v;
            } else if (f.is_whole()) {
                off = zeros(d);
                basis = Mat::identity(d);
            } else {
                const auto& a = std::get<SetDesc::Affine>(f.variant());
                off = a.offset;
                basis = a.basis;
            }
            offset = concat(offset, off);
            for (int j = 0; j < basis.cols; ++j) {
                Vec c = zeros(n);
                Vec bc = basis.column(j);
                for (int i = 0; i < d; ++i) c[at + i] = bc[i];
                cols.push_back(c);
            }
            at += d;
        }
        Mat basis = cols.empty() ? Mat(n, 0) : Mat::from_columns(cols);
        return SetDesc::affine(offset, basis);
    }

    // mixed polyhedral factors: block H-representation
    Mat C(0, n), E(0, n);
    Vec d, f;
    int at = 0;
    for (const SetDesc& fac : factors) {
        HRep h = to_hrep(fac);
        int fd = fac.dim();
        auto widen = [&](const Mat& src) {
            Mat w(src.rows, n);
            for (int i = 0; i < src.rows; ++i)
                for (int j = 0; j < src.cols; ++j) w(i, at + j) = src(i, j);
            return w;
        };
        if (h.C.rows) {
            C = C.rows ? vcat(C, widen(h.C)) : widen(h.C);
            d = concat(d, h.d);
        }
        if (h.E.rows) {
            E = E.rows ? vcat(E, widen(h.E)) : widen(h.E);
            f = concat(f, h.f);
        }
        at += fd;
    }
    (void)tol;
    return SetDesc::polyhedron(C, d, E, f);
}

SetDesc polar_ray_cone(const SetDesc& s) {
    if (s.is_whole()) return SetDesc::point(zeros(s.dim()));
    if (s.is_point()) {
        const Vec& v = std::get<SetDesc::Point>(s.variant()).v;
        if (norm(v) == 0.0) return SetDesc::whole(s.dim());
        throw UnsupportedStructure("polar_ray_cone: not a cone");
    }
    const auto* r = std::get_if<SetDesc::RayProduct>(&s.variant());
    if (!r) throw UnsupportedStructure("polar_ray_cone: expected a ray-product cone");
    std::vector<Ray> rays = r->rays;
    for (Ray& x : rays) {
        switch (x) {
            case Ray::Zero: x = Ray::Free; break;
            case Ray::Free: x = Ray::Zero; break;
            case Ray::NonNeg: x = Ray::NonPos; break;
            case Ray::NonPos: x = Ray::NonNeg; break;
        }
    }
    return SetDesc::ray_product(rays);
}

}  // namespace pdsplit

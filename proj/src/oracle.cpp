#include "pdsplit/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace pdsplit {

size_t GridSpec::total() const {
    size_t n = 1;
    for (const Axis& a : axes) {
        if (a.steps < 2) throw std::invalid_argument("GridSpec: steps must be >= 2");
        n *= static_cast<size_t>(a.steps);
    }
    return axes.empty() ? 0 : n;
}

Vec GridSpec::point(size_t flat) const {
    Vec p(axes.size());
    for (size_t d = 0; d < axes.size(); ++d) {
        const Axis& a = axes[d];
        size_t i = flat % a.steps;
        flat /= a.steps;
        p[d] = a.lo + (a.hi - a.lo) * static_cast<double>(i) / (a.steps - 1);
    }
    return p;
}

GridSpec GridSpec::uniform(int dims, double lo, double hi, int steps) {
    GridSpec g;
    g.axes.assign(dims, {lo, hi, steps});
    return g;
}

namespace {

void check_cap(const GridSpec& gx, const GridSpec& gy) {
    size_t nx = gx.total(), ny = gy.total();
    if (nx == 0 || ny == 0) throw std::invalid_argument("grid_saddle_scan: empty grid");
    if (nx > kGridCap / ny)
        throw std::invalid_argument("grid_saddle_scan: grid exceeds the 1e7 point cap");
}

void sort_candidates(std::vector<SaddleCandidate>& hits, std::vector<size_t>& order) {
    std::vector<size_t> idx(hits.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
        if (hits[a].residual != hits[b].residual) return hits[a].residual < hits[b].residual;
        return order[a] < order[b];
    });
    std::vector<SaddleCandidate> out;
    out.reserve(hits.size());
    for (size_t i : idx) out.push_back(std::move(hits[i]));
    hits = std::move(out);
}

}  // namespace

std::vector<SaddleCandidate> grid_saddle_scan_serial(const Triple& t, const GridSpec& gx,
                                                     const GridSpec& gy, double tol) {
    check_cap(gx, gy);
    const size_t nx = gx.total(), ny = gy.total(), n = nx * ny;
    std::vector<SaddleCandidate> hits;
    std::vector<size_t> order;
    for (size_t f = 0; f < n; ++f) {
        Vec x = gx.point(f % nx);
        Vec y = gy.point(f / nx);
        double r = saddle_residual(t, x, y);
        if (r <= tol) {
            hits.push_back({std::move(x), std::move(y), r});
            order.push_back(f);
        }
    }
    sort_candidates(hits, order);
    return hits;
}

std::vector<SaddleCandidate> grid_saddle_scan(const Triple& t, const GridSpec& gx,
                                              const GridSpec& gy, double tol) {
    check_cap(gx, gy);
    const size_t nx = gx.total(), ny = gy.total();
    const long long n = static_cast<long long>(nx * ny);
    std::vector<SaddleCandidate> hits;
    std::vector<size_t> order;
#pragma omp parallel
    {
        std::vector<SaddleCandidate> local;
        std::vector<size_t> local_order;
#pragma omp for schedule(static) nowait
        for (long long f = 0; f < n; ++f) {
            Vec x = gx.point(static_cast<size_t>(f) % nx);
            Vec y = gy.point(static_cast<size_t>(f) / nx);
            double r = saddle_residual(t, x, y);
            if (r <= tol) {
                local.push_back({std::move(x), std::move(y), r});
                local_order.push_back(static_cast<size_t>(f));
            }
        }
#pragma omp critical
        {
            for (size_t i = 0; i < local.size(); ++i) {
                hits.push_back(std::move(local[i]));
                order.push_back(local_order[i]);
            }
        }
    }
    sort_candidates(hits, order);
    return hits;
}

double LimitCluster::max_radius() const {
    double r = 0.0;
    for (double v : radii) r = std::max(r, v);
    return r;
}

namespace {

LimitCluster cluster_single_linkage(const std::vector<Vec>& pts, double radius) {
    LimitCluster out;
    const int n = static_cast<int>(pts.size());
    std::vector<int> label(n, -1);
    int next = 0;
    for (int i = 0; i < n; ++i) {
        if (label[i] >= 0) continue;
        // grow a cluster from i
        label[i] = next;
        std::vector<int> frontier{i};
        while (!frontier.empty()) {
            int a = frontier.back();
            frontier.pop_back();
            for (int b = 0; b < n; ++b) {
                if (label[b] >= 0) continue;
                if (norm(sub(pts[a], pts[b])) <= radius) {
                    label[b] = next;
                    frontier.push_back(b);
                }
            }
        }
        ++next;
    }
    out.representatives.resize(next);
    out.counts.assign(next, 0);
    out.radii.assign(next, 0.0);
    for (int c = 0; c < next; ++c) {
        // representative: first member in index order (deterministic)
        for (int i = 0; i < n; ++i)
            if (label[i] == c) {
                out.representatives[c] = pts[i];
                break;
            }
    }
    for (int i = 0; i < n; ++i) out.counts[label[i]]++;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (label[i] == label[j])
                out.radii[label[i]] =
                    std::max(out.radii[label[i]], norm(sub(pts[i], pts[j])));
    return out;
}

MultistartResult multistart_impl(const Triple& t, int n_starts, uint64_t seed, double tol,
                                 double cluster_radius, double start_radius, int max_iter,
                                 bool parallel) {
    if (n_starts < 1) throw std::invalid_argument("multistart_limits: n_starts >= 1");
    std::vector<Vec> xs(n_starts), ys(n_starts);
    std::vector<char> ok(n_starts, 0);
    IterateOptions opt;
    opt.max_iter = max_iter;
    opt.tol = tol;

    auto run_one = [&](int s) {
        Rng rng(seed + 0x9E3779B97F4A7C15ULL * static_cast<uint64_t>(s + 1));
        Vec x0 = rng.uniform_vec(t.primal_dim(), -start_radius, start_radius);
        Vec y0 = rng.uniform_vec(t.dual_dim(), -start_radius, start_radius);
        IterTrace tr = iterate_full(t, std::move(x0), std::move(y0), opt);
        if (tr.converged) {
            xs[s] = std::move(tr.x);
            ys[s] = std::move(tr.y);
            ok[s] = 1;
        }
    };

    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int s = 0; s < n_starts; ++s) run_one(s);
    } else {
        for (int s = 0; s < n_starts; ++s) run_one(s);
    }

    MultistartResult res;
    res.seed = seed;
    std::vector<Vec> px, py;
    for (int s = 0; s < n_starts; ++s) {
        if (!ok[s]) {
            res.non_converged++;
            continue;
        }
        px.push_back(xs[s]);
        py.push_back(ys[s]);
    }
    res.primal = cluster_single_linkage(px, cluster_radius);
    res.dual = cluster_single_linkage(py, cluster_radius);
    return res;
}

}  // namespace

MultistartResult multistart_limits(const Triple& t, int n_starts, uint64_t seed, double tol,
                                   double cluster_radius, double start_radius, int max_iter) {
    return multistart_impl(t, n_starts, seed, tol, cluster_radius, start_radius, max_iter,
                           true);
}

MultistartResult multistart_limits_serial(const Triple& t, int n_starts, uint64_t seed,
                                          double tol, double cluster_radius,
                                          double start_radius, int max_iter) {
    return multistart_impl(t, n_starts, seed, tol, cluster_radius, start_radius, max_iter,
                           false);
}

namespace {

bool set_is_singleton(const SetDesc& s) {
    return s.is_point() || (s.is_affine_like() && !s.is_whole() && s.affine_dim() == 0);
}

Mat span_basis_of_differences(const SetDesc& s) {
    // span(S - S) for affine-like sets is the direction space
    if (s.is_point()) return Mat(s.dim(), 0);
    if (s.is_whole()) return Mat::identity(s.dim());
    return std::get<SetDesc::Affine>(s.variant()).basis;
}

Vec affine_offset(const SetDesc& s) {
    if (s.is_point()) return std::get<SetDesc::Point>(s.variant()).v;
    if (s.is_whole()) return zeros(s.dim());
    return std::get<SetDesc::Affine>(s.variant()).offset;
}

bool subspace_contained_in_kernel(const Mat& basis, const Vec& offset, const Mat& M,
                                  double tol) {
    double worst = offset.empty() ? 0.0 : norm(matvec(M, offset));
    for (int j = 0; j < basis.cols; ++j)
        worst = std::max(worst, norm(matvec(M, basis.column(j))));
    return worst <= tol * (1.0 + frobenius(M));
}

}  // namespace

std::vector<TheoremCheck> conditional_theorem_suite(const Triple& t, const SetDesc& Z,
                                                    const SetDesc& K, double tol) {
    std::vector<TheoremCheck> out;
    const int n = t.primal_dim(), m = t.dual_dim();
    if (!Z.is_affine_like() || !K.is_affine_like())
        throw UnsupportedStructure(
            "conditional_theorem_suite: needs affine-like Z and K descriptions");

    Mat Zdir = span_basis_of_differences(Z);
    Mat Kdir = span_basis_of_differences(K);
    Mat LZdir = orthonormal_columns(matmul(t.L, Zdir));
    Mat LtKdir = orthonormal_columns(matmul(t.Lt, Kdir));

    auto note_na = [](TheoremCheck& c) {
        if (!c.hypothesis_holds) c.note = "not applicable (hypothesis does not hold)";
    };

    {  // span(L*K - L*K) = X  =>  Z singleton
        TheoremCheck c{"singleton-Z-from-dual-span", LtKdir.cols == n, false, ""};
        c.conclusion_verified = set_is_singleton(Z);
        note_na(c);
        if (!c.hypothesis_holds && c.conclusion_verified)
            c.note += " [converse failure tolerated: conclusion holds anyway]";
        out.push_back(c);
    }
    {  // span(LZ - LZ) = Y  =>  K singleton
        TheoremCheck c{"singleton-K-from-primal-span", LZdir.cols == m, false, ""};
        c.conclusion_verified = set_is_singleton(K);
        note_na(c);
        if (!c.hypothesis_holds && c.conclusion_verified)
            c.note += " [converse failure tolerated: conclusion holds anyway]";
        out.push_back(c);
    }
    {  // span(K - K) = Y  =>  Z - Z subset ker L
        TheoremCheck c{"primal-spread-in-kerL", Kdir.cols == m, false, ""};
        c.conclusion_verified = subspace_contained_in_kernel(Zdir, {}, t.L, tol);
        note_na(c);
        out.push_back(c);
    }
    {  // span(Z - Z) = X  =>  K - K subset ker L*
        TheoremCheck c{"dual-spread-in-kerLstar", Zdir.cols == n, false, ""};
        c.conclusion_verified = subspace_contained_in_kernel(Kdir, {}, t.Lt, tol);
        note_na(c);
        out.push_back(c);
    }

    bool zero_in_K = K.contains(zeros(m), tol);
    {  // common zero => Z = zer A cap L^{-1} zer B and 0 in K
        TheoremCheck c{"common-zero-solution-split", zero_in_K, false, ""};
        if (c.hypothesis_holds) {
            bool eq = true;
            try {
                SetDesc rhs = intersect(zero_set_of(t.A), zero_set_BL(t.B, t.L, tol), tol);
                // two-sided membership sampling
                Rng rng(17);
                for (int i = 0; i < 50 && eq; ++i) {
                    Vec z = Z.sample(rng, 2.0);
                    if (!rhs.contains(z, 1e-6)) eq = false;
                    if (!rhs.is_empty()) {
                        Vec w = rhs.sample(rng, 2.0);
                        if (!Z.contains(w, 1e-6)) eq = false;
                    }
                }
            } catch (const UnsupportedStructure&) {
                eq = false;
                c.note = "zero sets not representable";
            }
            c.conclusion_verified = eq;
        }
        note_na(c);
        out.push_back(c);
    }
    {  // common zero => span L*K perp span(Z - Z)
        TheoremCheck c{"common-zero-orthogonality", zero_in_K, false, ""};
        if (c.hypothesis_holds) {
            Mat LtK_full = orthonormal_columns(
                hcat(matmul(t.Lt, Kdir),
                     Mat::from_columns({matvec(t.Lt, affine_offset(K))})));
            double worst = 0.0;
            for (int i = 0; i < LtK_full.cols; ++i)
                for (int j = 0; j < Zdir.cols; ++j)
                    worst = std::max(worst,
                                     std::fabs(dot(LtK_full.column(i), Zdir.column(j))));
            c.conclusion_verified = worst <= 1e-8;
        }
        note_na(c);
        out.push_back(c);
    }
    {  // common zero, A single-valued => K subset ker L*
        TheoremCheck c{"common-zero-single-valued-A", zero_in_K && t.A.single_valued, false,
                       ""};
        if (c.hypothesis_holds)
            c.conclusion_verified =
                subspace_contained_in_kernel(Kdir, affine_offset(K), t.Lt, tol);
        note_na(c);
        out.push_back(c);
    }
    {  // common zero, B single-valued => K = {0}
        TheoremCheck c{"common-zero-single-valued-B", zero_in_K && t.B.single_valued, false,
                       ""};
        if (c.hypothesis_holds)
            c.conclusion_verified = set_is_singleton(K) && K.contains(zeros(m), tol);
        note_na(c);
        out.push_back(c);
    }
    {  // common zero, int Z nonempty => K subset ker L*
        TheoremCheck c{"common-zero-interior-Z", zero_in_K && Z.is_whole(), false, ""};
        if (c.hypothesis_holds)
            c.conclusion_verified =
                subspace_contained_in_kernel(Kdir, affine_offset(K), t.Lt, tol);
        note_na(c);
        out.push_back(c);
    }
    return out;
}

}  // namespace pdsplit

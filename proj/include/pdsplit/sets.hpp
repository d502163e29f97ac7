#pragma once

#include <span>
#include <variant>
#include <vector>

#include "pdsplit/linalg.hpp"
#include "pdsplit/rng.hpp"

namespace pdsplit {

// Per-coordinate ray factors, the shape normal cones of boxes take.
enum class Ray { Zero, NonNeg, NonPos, Free };

struct UnsupportedStructure : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// An exactly representable closed convex set. Every variant supports
// membership and projection; the algebra (intersection, preimage, affine
// image, scaling) is closed over the combinations the solution-set formulas
// need and errs loudly elsewhere.
class SetDesc {
public:
    struct Empty {
        int dim;
    };
    struct Whole {
        int dim;
    };
    struct Point {
        Vec v;
    };
    struct Affine {
        Vec offset;
        Mat basis;  // dim x d, orthonormal columns spanning the direction space
    };
    struct Box {
        Vec lo, hi;  // entries may be +-inf
    };
    struct RayProduct {
        std::vector<Ray> rays;
    };
    struct Polyhedron {
        Mat C;  // C x <= d
        Vec d;
        Mat E;  // E x = f
        Vec f;
    };

    using Variant = std::variant<Empty, Whole, Point, Affine, Box, RayProduct, Polyhedron>;

    SetDesc() : v_(Empty{0}) {}
    SetDesc(Variant v);  // normalizes (orthonormal affine basis, ray/box collapse)

    static SetDesc empty(int dim) { return SetDesc(Empty{dim}); }
    static SetDesc whole(int dim) { return SetDesc(Whole{dim}); }
    static SetDesc point(Vec v) { return SetDesc(Point{std::move(v)}); }
    static SetDesc affine(Vec offset, Mat basis);
    // Linear subspace spanned by the given (not necessarily orthonormal) columns.
    static SetDesc subspace(Mat spanning, int dim);
    static SetDesc box(Vec lo, Vec hi);
    static SetDesc ray_product(std::vector<Ray> rays) {
        return SetDesc(RayProduct{std::move(rays)});
    }
    static SetDesc polyhedron(Mat C, Vec d, Mat E, Vec f);

    const Variant& variant() const { return v_; }
    int dim() const;
    bool is_empty() const { return std::holds_alternative<Empty>(v_); }
    bool is_whole() const { return std::holds_alternative<Whole>(v_); }
    bool is_point() const { return std::holds_alternative<Point>(v_); }
    bool is_affine_like() const;  // Point or Affine (affine subsets with exact bases)

    bool contains(const Vec& x, double tol = 1e-8) const;
    Vec project(const Vec& x, double tol = 1e-10) const;
    Vec sample(Rng& rng, double radius = 2.0) const;

    // Dimension of the affine hull for Point/Affine variants.
    int affine_dim() const;

    const char* variant_name() const;

private:
    Variant v_;
};

SetDesc intersect(const SetDesc& a, const SetDesc& b, double tol = 1e-10);
SetDesc negate(const SetDesc& s);
SetDesc scale_set(const SetDesc& s, double alpha);
// Minkowski translate s + t.
SetDesc translate(const SetDesc& s, const Vec& t);
// {x : M x in s}
SetDesc preimage(const Mat& M, const SetDesc& s, double tol = 1e-10);
// M * s, exact for Point/Affine/Whole.
SetDesc image(const Mat& M, const SetDesc& s, double tol = 1e-10);
// Cartesian product of factors.
SetDesc product_set(std::span<const SetDesc> factors, double tol = 1e-10);
// Polar cone of a RayProduct cone (flips NonNeg<->NonPos, Free<->Zero).
SetDesc polar_ray_cone(const SetDesc& s);

// H-representation (used by the intersection fallback and Dykstra).
struct HRep {
    Mat C;
    Vec d;
    Mat E;
    Vec f;
};
HRep to_hrep(const SetDesc& s);

}  // namespace pdsplit

#pragma once

#include <cstdint>

#include "pdsplit/solutions.hpp"
#include "pdsplit/splitting.hpp"

namespace pdsplit {

// Rectangular evaluation grid, one axis per coordinate.
struct GridSpec {
    struct Axis {
        double lo, hi;
        int steps;  // number of points (>= 2)
    };
    std::vector<Axis> axes;

    size_t total() const;
    Vec point(size_t flat_index) const;
    static GridSpec uniform(int dims, double lo, double hi, int steps);
};

inline constexpr size_t kGridCap = 10'000'000;

// All grid points (x, y) with saddle_residual <= tol, sorted by residual
// (ties by flat index, so parallel and serial runs agree exactly).
// The parallel kernel and the serial reference share the per-point
// evaluation; the traversal/reduction differ and are tested against each
// other.
std::vector<SaddleCandidate> grid_saddle_scan(const Triple& t, const GridSpec& gx,
                                              const GridSpec& gy, double tol);
std::vector<SaddleCandidate> grid_saddle_scan_serial(const Triple& t, const GridSpec& gx,
                                                     const GridSpec& gy, double tol);

struct LimitCluster {
    std::vector<Vec> representatives;  // one per cluster
    std::vector<int> counts;
    std::vector<double> radii;  // max intra-cluster pairwise distance
    int cluster_count() const { return static_cast<int>(representatives.size()); }
    double max_radius() const;
};

struct MultistartResult {
    LimitCluster primal;
    LimitCluster dual;
    uint64_t seed = 0;
    int non_converged = 0;  // flagged and excluded runs
};

// CP limits from seeded random starts, clustered by single linkage. Runs are
// independent and execute in parallel; per-start seeds are derived from
// `seed`, so results do not depend on the schedule.
MultistartResult multistart_limits(const Triple& t, int n_starts, uint64_t seed, double tol,
                                   double cluster_radius, double start_radius = 5.0,
                                   int max_iter = 200000);
MultistartResult multistart_limits_serial(const Triple& t, int n_starts, uint64_t seed,
                                          double tol, double cluster_radius,
                                          double start_radius = 5.0, int max_iter = 200000);

struct TheoremCheck {
    std::string id;
    bool hypothesis_holds = false;
    bool conclusion_verified = false;  // meaningful when the hypothesis holds
    std::string note;
};

// Evaluates the conditional statements that have no standalone operation
// (singleton criteria, kernel inclusions, common-zero consequences) on exact
// set descriptions. A false hypothesis reports "not applicable", never a
// failure.
std::vector<TheoremCheck> conditional_theorem_suite(const Triple& t, const SetDesc& Z,
                                                    const SetDesc& K, double tol = 1e-9);

}  // namespace pdsplit

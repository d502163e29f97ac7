// Benchmark: OpenMP grid scan and multistart vs their serial references.
#include <chrono>
#include <cstdio>

#include "pdsplit/instances.hpp"
#include "pdsplit/oracle.hpp"

using namespace pdsplit;

namespace {
double seconds(std::chrono::steady_clock::time_point a,
               std::chrono::steady_clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}
}  // namespace

int main() {
    Triple skew = skew_instance();
    GridSpec g = GridSpec::uniform(2, -2.0, 2.0, 41);

    auto t0 = std::chrono::steady_clock::now();
    auto ser = grid_saddle_scan_serial(skew, g, g, 0.05);
    auto t1 = std::chrono::steady_clock::now();
    auto par = grid_saddle_scan(skew, g, g, 0.05);
    auto t2 = std::chrono::steady_clock::now();

    double ts = seconds(t0, t1), tp = seconds(t1, t2);
    std::printf("grid_saddle_scan  41^4 = %zu points, %zu accepted\n", g.total() * g.total(),
                par.size());
    std::printf("  serial   %.3f s\n", ts);
    std::printf("  parallel %.3f s  (x%.2f)\n", tp, ts / tp);
    if (par.size() != ser.size()) {
        std::printf("MISMATCH: serial and parallel scans disagree\n");
        return 1;
    }

    Triple lasso = lasso_desk().t;
    t0 = std::chrono::steady_clock::now();
    auto ms_ser = multistart_limits_serial(lasso, 32, 42, 1e-11, 1e-6);
    t1 = std::chrono::steady_clock::now();
    auto ms_par = multistart_limits(lasso, 32, 42, 1e-11, 1e-6);
    t2 = std::chrono::steady_clock::now();
    ts = seconds(t0, t1);
    tp = seconds(t1, t2);
    std::printf("multistart_limits 32 starts\n");
    std::printf("  serial   %.3f s\n", ts);
    std::printf("  parallel %.3f s  (x%.2f)\n", tp, ts / tp);
    if (ms_ser.primal.cluster_count() != ms_par.primal.cluster_count()) {
        std::printf("MISMATCH: serial and parallel multistart disagree\n");
        return 1;
    }
    return 0;
}

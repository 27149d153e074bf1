// Compares the OpenMP kernels against their serial references: all-pairs
// eccentricities (exact diameter) and the exhaustive 2-HRT (*) checker.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "radionet/graph.hpp"
#include "radionet/hrt.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace radionet;
using clk = std::chrono::steady_clock;

namespace {

double ms_since(clk::time_point t0) {
    return std::chrono::duration<double, std::milli>(clk::now() - t0).count();
}

template <typename F>
double best_of(int reps, F f) {
    double best = 1e100;
    for (int i = 0; i < reps; ++i) {
        auto t0 = clk::now();
        f();
        best = std::min(best, ms_since(t0));
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    int n = argc > 1 ? std::atoi(argv[1]) : 2048;
    GraphFamilySpec spec;
    spec.family = GraphFamilySpec::Family::random_connected;
    spec.n = n;
    spec.p = std::min(1.0, 3.0 * std::log(static_cast<double>(n)) / static_cast<double>(n));
    spec.seed = 7;
    Graph g = generate(spec);
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (OpenMP disabled)\n");
#endif
    std::printf("graph: random n=%d m=%d\n", g.node_count(), g.edge_count());

    double ser = best_of(3, [&] { all_eccentricities_serial(g); });
    double par = best_of(3, [&] { all_eccentricities(g); });
    std::printf("all-pairs ecc   serial %8.2f ms   parallel %8.2f ms   speedup %.2fx\n", ser, par,
                ser / par);

    auto t = bfs_tree(g, 0);
    auto h = compute_two_heights(t);
    double ser2 = best_of(3, [&] { check_star_property_serial(g, t, h); });
    double par2 = best_of(3, [&] { check_star_property(g, t, h); });
    std::printf("star checker    serial %8.2f ms   parallel %8.2f ms   speedup %.2fx\n", ser2, par2,
                ser2 / par2);
    return 0;
}

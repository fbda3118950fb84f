// Timing comparison of the OpenMP kernels against their serial reference
// twins: Jacobian assembly, variance updates and field interpolation.

#include <chrono>
#include <cstdio>
#include <omp.h>

#include "dot/hypermodels.hpp"
#include "dot/jacobian.hpp"
#include "dot/phantom.hpp"

using clk = std::chrono::steady_clock;

template <class F>
double time_best_of(int reps, F&& body) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = clk::now();
        body();
        best = std::min(best, std::chrono::duration<double>(clk::now() - t0).count());
    }
    return best;
}

int main() {
    std::printf("threads: %d\n", omp_get_max_threads());

    // desk-scale instance
    const dot::TriMesh mesh = dot::build_disk_mesh(25.0, 2.2);
    const auto layout = dot::boundary_patches(mesh, 16, 16, 2.0, 1.0, 2e8 * 3.141592653589793);
    const dot::DotForward fwd(mesh, layout, dot::PhysicsConstants::tissue());
    const Eigen::VectorXd x =
        dot::rasterize(dot::phantom_two_inclusions(), mesh).stacked();
    const dot::ForwardState& st = fwd.solve_state(x);

    volatile double sink = 0.0;
    const double tj_ser = time_best_of(
        3, [&] { sink = sink + dot::assemble_jacobian_serial(fwd, x, st)(0, 0); });
    const double tj_par =
        time_best_of(3, [&] { sink = sink + dot::assemble_jacobian(fwd, x, st)(0, 0); });
    std::printf("jacobian  %5d x %-5d  serial %8.4fs  parallel %8.4fs  speedup %.2fx\n",
                (int)layout.data_size(), 2 * mesh.n(), tj_ser, tj_par, tj_ser / tj_par);

    const int nz = 10'000'000;
    Eigen::VectorXd z = Eigen::VectorXd::LinSpaced(nz, -1.0, 1.0);
    Eigen::VectorXd theta(nz);
    dot::HyperpriorSpec spec;
    spec.kind = dot::HyperpriorKind::StandardGamma;
    spec.eta = 1e-4;
    spec.vartheta = 6.4e-2;
    const double tt_ser = time_best_of(5, [&] { dot::update_theta_vec_serial(z, spec, theta); });
    const double tt_par = time_best_of(5, [&] { dot::update_theta_vec(z, spec, theta); });
    std::printf("theta     %9d entries  serial %8.4fs  parallel %8.4fs  speedup %.2fx\n", nz,
                tt_ser, tt_par, tt_ser / tt_par);

    const dot::TriMesh fine = dot::build_disk_mesh(25.0, 1.2);
    const Eigen::VectorXd field = Eigen::VectorXd::Random(fine.n());
    const double ti_ser = time_best_of(
        3, [&] { sink = sink + dot::interpolate_field_serial(fine, mesh, field)[0]; });
    const double ti_par =
        time_best_of(3, [&] { sink = sink + dot::interpolate_field(fine, mesh, field)[0]; });
    std::printf("interp    %5d -> %-5d nodes  serial %8.4fs  parallel %8.4fs  speedup %.2fx\n",
                fine.n(), mesh.n(), ti_ser, ti_par, ti_ser / ti_par);
    return 0;
}

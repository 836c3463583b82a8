// Times the OpenMP kernels against their serial reference implementations.

#include <chrono>
#include <iostream>

#include "orbitcone/builtin_specs.hpp"
#include "orbitcone/catalog.hpp"
#include "orbitcone/cones.hpp"
#include "orbitcone/homspace.hpp"

using namespace orbitcone;

namespace {

template <class F>
double time_ms(F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  f();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void row(const std::string& name, double serial_ms, double parallel_ms) {
  std::printf("%-28s %10.1f ms %10.1f ms   x%.2f\n", name.c_str(), serial_ms,
              parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main() {
  std::printf("%-28s %13s %13s\n", "kernel", "serial", "openmp");
  std::printf("threads: %d\n", par::max_threads());

  SpecPtr sl2 = make_sl2();
  SpecPtr sp6 = make_sp(3);

  {
    double s = time_ms([&] { semisimple_density_serial(sp6, 4000, 1); });
    double p = time_ms([&] { semisimple_density(sp6, 4000, 1); });
    row("semisimple_density sp6", s, p);
  }
  {
    InducedConeSpec ind{sl2, sl2_n_subalgebra(), {}};
    double s = time_ms([&] { sample_induced_cone_serial(ind, 40000, 2); });
    double p = time_ms([&] { sample_induced_cone(ind, 40000, 2); });
    row("sample_induced_cone sl2/n", s, p);
  }
  {
    HomogeneousSpaceSpec space{"sl2/n", sl2, sl2_n_subalgebra(), {}};
    Covector eta{sl2, (Vec(3) << 0, 0, 0.70710678).finished()};
    double s = time_ms([&] { c_omega_serial(space, eta, 0.1, 4000, 8, 3); });
    double p = time_ms([&] { c_omega(space, eta, 0.1, 4000, 8, 3); });
    row("c_omega sl2/n", s, p);
  }
  {
    Vec j3 = (Vec(3) << 0, 0, 1).finished();
    std::vector<AlgebraElement> elems = {
        {sl2, Vec(5.0 * j3)}, {sl2, Vec(-2.0 * j3)}, {sl2, Vec(-2.0 * j3)}};
    OrbitSumOptions opt;
    opt.restarts = 32;
    double s = time_ms([&] { orbit_sum_residual_serial(elems, opt, 4); });
    double p = time_ms([&] { orbit_sum_residual(elems, opt, 4); });
    row("orbit_sum_residual (32 rs)", s, p);
  }
  return 0;
}

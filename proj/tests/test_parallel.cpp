#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

// Serial reference implementations against the OpenMP kernels: the seeded
// substreams make the two produce identical bits.

#include "orbitcone/builtin_specs.hpp"
#include "orbitcone/catalog.hpp"
#include "orbitcone/cones.hpp"
#include "orbitcone/homspace.hpp"
#include "orbitcone/oscillatory.hpp"

using namespace orbitcone;

TEST_CASE("group sampler substreams are deterministic") {
  SpecPtr sl2 = make_sl2();
  GroupSampler sampler{sl2, 3, 1.5};
  for (int i = 0; i < 10; ++i) {
    Mat a = sampler.at(42, i).matrix;
    Mat b = sampler.at(42, i).matrix;
    CHECK((a - b).norm() == 0.0);
  }
}

TEST_CASE("semisimple density: parallel == serial") {
  SpecPtr sp4 = make_sp(2);
  CHECK(semisimple_density(sp4, 500, 7, ExecPolicy::Parallel) ==
        semisimple_density_serial(sp4, 500, 7));
}

TEST_CASE("induced cone sampling: parallel == serial") {
  SpecPtr sl2 = make_sl2();
  InducedConeSpec ind{sl2, sl2_n_subalgebra(), {}};
  ConeSampleSet par = sample_induced_cone(ind, 800, 21, ExecPolicy::Parallel);
  ConeSampleSet ser = sample_induced_cone_serial(ind, 800, 21);
  REQUIRE(par.samples.size() == ser.samples.size());
  for (std::size_t i = 0; i < par.samples.size(); ++i)
    CHECK((par.samples[i] - ser.samples[i]).norm() == 0.0);
  CHECK(par.zero_samples == ser.zero_samples);
}

TEST_CASE("c_omega: parallel == serial") {
  SpecPtr sl2 = make_sl2();
  HomogeneousSpaceSpec space{"sl2/n", sl2, sl2_n_subalgebra(), {}};
  Covector eta{sl2, (Vec(3) << 0, 0, 1.0 / std::sqrt(2.0)).finished()};
  COmegaResult par = c_omega(space, eta, 0.1, 200, 8, 3, ExecPolicy::Parallel);
  COmegaResult ser = c_omega_serial(space, eta, 0.1, 200, 8, 3);
  CHECK(par.value == ser.value);
  CHECK(par.worst_x_index == ser.worst_x_index);
  REQUIRE(par.per_x_values.size() == ser.per_x_values.size());
  for (std::size_t i = 0; i < par.per_x_values.size(); ++i)
    CHECK(par.per_x_values[i] == ser.per_x_values[i]);
}

TEST_CASE("condition U probe: parallel == serial") {
  SpecPtr su2 = make_su2();
  DecayProbe probe;
  probe.space = {"su2/t", su2, su2_t_subalgebra(), {}};
  GroupSampler sampler{su2, 3, 1.2};
  for (int i = 0; i < 3; ++i)
    probe.points.push_back(stabilizer_point(probe.space, sampler.at(5, i)));
  probe.rep = circle_character(su2, su2_t_subalgebra()[0], 1);
  probe.bump = build_bump(2, {"box", (Vec(1) << 0.3).finished()},
                          {"box", (Vec(1) << 0.9).finished()}, 0);
  probe.v1 = CVec::Ones(1);
  probe.v2 = CVec::Ones(1);
  probe.quad_nodes = 513;
  probe.t_grid = {20, 40, 80, 160, 320};
  probe.target_slope = -1.0;
  Rng rng(3);
  for (int i = 0; i < 3; ++i) {
    Vec c(3);
    for (int j = 0; j < 3; ++j) c[j] = rng.gauss();
    probe.xi_grid.push_back({su2, Vec(c / Covector{su2, c}.norm())});
  }
  DecayReport par = condition_u_probe(probe, ExecPolicy::Parallel);
  DecayReport ser = condition_u_probe_serial(probe);
  REQUIRE(par.rows.size() == ser.rows.size());
  for (std::size_t i = 0; i < par.rows.size(); ++i)
    CHECK(par.rows[i].abs_integral == ser.rows[i].abs_integral);
  CHECK(par.min_slope == ser.min_slope);
  CHECK(par.max_slope == ser.max_slope);
}

TEST_CASE("orbit sum: parallel == serial") {
  SpecPtr sl2 = make_sl2();
  Vec j3 = (Vec(3) << 0, 0, 1).finished();
  std::vector<AlgebraElement> elems = {{sl2, Vec(5.0 * j3)},
                                       {sl2, Vec(-2.0 * j3)},
                                       {sl2, Vec(-2.0 * j3)}};
  OrbitSumOptions opt;
  opt.restarts = 6;
  opt.max_iters = 200;
  OrbitSumResult par = orbit_sum_residual(elems, opt, 11, ExecPolicy::Parallel);
  OrbitSumResult ser = orbit_sum_residual_serial(elems, opt, 11);
  CHECK(par.residual == ser.residual);
  CHECK(par.best_restart == ser.best_restart);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "orbitcone/builtin_specs.hpp"
#include "orbitcone/cases.hpp"
#include "orbitcone/catalog.hpp"

using namespace orbitcone;

namespace {

Vec v3(double x, double y, double z) {
  Vec v(3);
  v << x, y, z;
  return v;
}

std::vector<AlgebraElement> elliptic_tuple(const SpecPtr& sl2,
                                           std::initializer_list<double> ts) {
  std::vector<AlgebraElement> out;
  for (double t : ts) out.push_back({sl2, v3(0, 0, t)});
  return out;
}

}  // namespace

TEST_CASE("sp criterion small cases") {
  SearchBudget budget;
  budget.restarts = 16;
  budget.iters = 250;
  budget.classify_samples = 2000;

  SUBCASE("(1,0): q = g contains regular elliptic elements") {
    EllipticSearchResult res = sp_regular_elliptic_search(1, 0, budget, 3);
    CHECK(res.found);
  }

  SUBCASE("(2,1): witness exists") {
    EllipticSearchResult res = sp_regular_elliptic_search(2, 1, budget, 3);
    CHECK(res.found);
    // re-verify with tightened tolerance
    ClassifyOptions tight;
    tight.sv_rel_tol = 1e-10;
    ElementClass cls = classify({make_sp(2), res.witness}, tight);
    CHECK(cls.kind == ElementKind::SemisimpleElliptic);
    CHECK(cls.regular);
  }

  SUBCASE("(3,2): exhausted, all samples non-regular") {
    EllipticSearchResult res = sp_regular_elliptic_search(3, 2, budget, 3);
    CHECK_FALSE(res.found);
    CHECK(res.samples_classified == 2000);
    CHECK(res.nonregular_fraction == 1.0);
  }

  SUBCASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(sp_regular_elliptic_search(2, 2, budget, 3), AlgebraError);
  }
}

TEST_CASE("sp block complement is the trace-form annihilator") {
  // q is orthogonal to h under the trace form and spans the annihilator.
  SpecPtr sp4 = make_sp(2);
  auto h = sp_block_subalgebra(2, 1);
  auto q = sp_block_complement(2, 1);
  CHECK(h.size() + q.size() == static_cast<std::size_t>(sp4->dim()));
  for (const Vec& a : q)
    for (const Vec& b : h)
      CHECK(std::abs((sp4->matrix(a) * sp4->matrix(b)).trace()) < 1e-12);
}

TEST_CASE("orbit sum residuals") {
  SpecPtr sl2 = make_sl2();
  OrbitSumOptions opt;
  opt.restarts = 8;
  opt.max_iters = 300;

  SUBCASE("opposite parameters cancel") {
    OrbitSumResult r = orbit_sum_residual(elliptic_tuple(sl2, {1, -1}), opt, 5);
    CHECK(r.residual <= 1e-6);
    CHECK_FALSE(r.budget_exhausted);
  }

  SUBCASE("(5,-2,-2) is feasible") {
    OrbitSumResult r =
        orbit_sum_residual(elliptic_tuple(sl2, {5, -2, -2}), opt, 5);
    CHECK(r.residual <= 1e-6);
  }

  SUBCASE("(1,1,1) is blocked by the sheet bound") {
    OrbitSumResult r =
        orbit_sum_residual(elliptic_tuple(sl2, {1, 1, 1}), opt, 5);
    CHECK(r.residual >= 2.9);
    CHECK(r.budget_exhausted);
  }

  SUBCASE("(1,-2,-2) plateaus") {
    OrbitSumResult r =
        orbit_sum_residual(elliptic_tuple(sl2, {1, -2, -2}), opt, 5);
    CHECK(r.residual >= 0.3);
  }

  SUBCASE("symmetric in the arguments") {
    OrbitSumResult a =
        orbit_sum_residual(elliptic_tuple(sl2, {5, -2, -2}), opt, 5);
    OrbitSumResult b =
        orbit_sum_residual(elliptic_tuple(sl2, {-2, 5, -2}), opt, 5);
    CHECK(a.residual == b.residual);
  }

  SUBCASE("invariant under simultaneous conjugation") {
    GroupSampler sampler{sl2, 3, 1.0};
    GroupElement g = sampler.at(77, 0);
    std::vector<AlgebraElement> base = elliptic_tuple(sl2, {5, -2, -2});
    std::vector<AlgebraElement> conj;
    for (const auto& e : base) conj.push_back(adjoint(g, e));
    OrbitSumResult ra = orbit_sum_residual(base, opt, 5);
    OrbitSumResult rb = orbit_sum_residual(conj, opt, 5);
    CHECK(std::abs(ra.residual - rb.residual) < 1e-8);
  }

  SUBCASE("fewer than two elements is an error") {
    CHECK_THROWS_AS(orbit_sum_residual(elliptic_tuple(sl2, {1}), opt, 5),
                    AlgebraError);
  }
}

TEST_CASE("tuple feasibility rule") {
  CHECK(tuple_feasible_rule({1, -1}));
  CHECK_FALSE(tuple_feasible_rule({1, -2}));
  CHECK_FALSE(tuple_feasible_rule({1, 2}));
  CHECK(tuple_feasible_rule({5, -2, -2}));
  CHECK_FALSE(tuple_feasible_rule({1, -2, -2}));
  CHECK_FALSE(tuple_feasible_rule({1, 1, 1}));
  CHECK_FALSE(tuple_feasible_rule({-1, -1, -2}));
  CHECK(tuple_feasible_rule({2, -1, -1}));   // boundary sum 0
  CHECK(tuple_feasible_rule({1, 2, -3}));    // boundary sum 0, minority -
  CHECK(tuple_feasible_rule({1, 2, -4}));    // minority sign carries the sum
  CHECK_FALSE(tuple_feasible_rule({2, 2, -1}));
  CHECK(tuple_feasible_rule({0, 1, -1}));
  CHECK_FALSE(tuple_feasible_rule({0, 1, -2}));
  CHECK_FALSE(tuple_feasible_rule({0, 0, 1}));
  CHECK(tuple_feasible_rule({0, 0, 0}));
}

TEST_CASE("pair table matches the antidiagonal rule") {
  OrbitSumOptions opt;
  opt.restarts = 6;
  opt.max_iters = 200;
  TupleTable table =
      tuple_space_support_table(2, {-2, -1, 0, 1, 2}, opt, 9);
  CHECK(table.cells.size() == 25);
  CHECK(table.agreement >= 0.95);
}

TEST_CASE("whittaker counterexample, trimmed budgets") {
  WhittakerOptions opt;
  opt.n_induced = 4000;
  opt.n_sweep_g = 500;

  SUBCASE("lambda = 0 gives equality") {
    WhittakerReport rep = whittaker_counterexample_check(0, opt, 13);
    CHECK(rep.relation == ConeRelation::Equal);
    CHECK(rep.induced_elliptic_count == 0);
  }

  SUBCASE("positive lambda gives a strict elliptic+ witness") {
    WhittakerReport rep = whittaker_counterexample_check(+1, opt, 13);
    CHECK(rep.relation == ConeRelation::StrictSubset);
    CHECK(rep.witness_kind == "semisimple-elliptic+");
    CHECK(rep.witness_distance >= 0.5);
  }
}

TEST_CASE("cartan dual lift") {
  SpecPtr sl2 = make_sl2();
  std::vector<Vec> cartan = {sl2->cartan_reps().at("t").front()};
  Vec dual(1);
  dual << 2.5;
  Covector xi = cartan_dual_lift(sl2, cartan, dual);
  // pairing with the cartan generator reproduces the dual coordinate
  CHECK(trace_pairing(xi, {sl2, cartan[0]}) == doctest::Approx(2.5));
  // pairing with [g, t] vanishes
  CHECK(std::abs(trace_pairing(xi, {sl2, v3(1, 0, 0)})) < 1e-10);
  CHECK(std::abs(trace_pairing(xi, {sl2, v3(0, 1, 0)})) < 1e-10);
}

TEST_CASE("ac of orbit families") {
  SUBCASE("builtin lattice-ray case") {
    CaseResult r = run_case(builtin_case("ac-lattice-ray"), 7);
    CHECK(r.pass);
  }
  SUBCASE("builtin sl2-n case") {
    CaseResult r = run_case(builtin_case("ac-sl2-n"), 7);
    CHECK(r.pass);
  }
}

TEST_CASE("so43 u11 search finds a regular elliptic direction") {
  Json def = builtin_case("so43-u11-search");
  def["params"]["restarts"] = 16;
  def["params"]["iters"] = 300;
  CaseResult r = run_case(def, 3);
  CHECK(r.pass);
}

TEST_CASE("builtin case definitions are well formed") {
  for (const std::string& name : builtin_case_names()) {
    CAPTURE(name);
    Json def = builtin_case(name);
    CHECK(def.at("name") == name);
    CHECK(def.contains("kind"));
    for (const auto& a : def.at("expected"))
      CHECK_FALSE(a.value("citation", "").empty());
  }
}

TEST_CASE("case reports serialize deterministically") {
  Json def = builtin_case("pair-1-m1");
  CaseResult a = run_case(def, 5);
  CaseResult b = run_case(def, 5);
  CHECK(a.to_json().dump() == b.to_json().dump());
}

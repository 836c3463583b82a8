#include "orbitcone/cases.hpp"

#include <cmath>

#include "orbitcone/builtin_specs.hpp"
#include "orbitcone/catalog.hpp"

namespace orbitcone {

Json CaseResult::to_json() const {
  Json j;
  j["name"] = name;
  j["pass"] = pass;
  Json as = Json::array();
  for (const auto& a : assertions) {
    Json aj;
    aj["name"] = a.name;
    aj["pass"] = a.pass;
    aj["expected"] = a.expected;
    aj["actual"] = a.actual;
    aj["citation"] = a.citation;
    as.push_back(aj);
  }
  j["assertions"] = as;
  j["details"] = details;
  return j;
}

namespace {

void add(CaseResult& r, const std::string& name, bool pass, Json expected,
         Json actual, const std::string& citation) {
  r.assertions.push_back({name, pass, std::move(expected), std::move(actual),
                          citation});
}

CaseResult run_sp_search(const Json& def, std::uint64_t seed,
                         ExecPolicy policy) {
  CaseResult r;
  r.name = def.at("name");
  const auto& p = def.at("params");
  SearchBudget budget;
  budget.restarts = p.value("restarts", 32);
  budget.iters = p.value("iters", 400);
  budget.classify_samples = p.value("classify_samples", 10000);
  int n = p.at("n");
  int m = p.at("m");
  EllipticSearchResult res =
      sp_regular_elliptic_search(n, m, budget, seed, policy);
  r.details["best_max_re"] = res.best_max_re;
  r.details["best_min_gap"] = res.best_min_gap;
  if (res.found) r.details["witness"] = vec_to_json(res.witness);
  for (const auto& a : def.at("expected")) {
    std::string what = a.at("assert");
    std::string cite = a.value("citation", "");
    if (what == "found") {
      bool want = a.at("value");
      add(r, "found", res.found == want, want, res.found, cite);
    } else if (what == "nonregular_fraction_at_least") {
      double want = a.at("value");
      add(r, "nonregular_fraction", res.nonregular_fraction >= want, want,
          res.nonregular_fraction, cite);
    }
  }
  return r;
}

CaseResult run_orbit_sum(const Json& def, std::uint64_t seed,
                         ExecPolicy policy) {
  CaseResult r;
  r.name = def.at("name");
  const auto& p = def.at("params");
  SpecPtr sl2 = make_sl2();
  OrbitSumOptions opt;
  opt.restarts = p.value("restarts", 32);
  opt.max_iters = p.value("max_iters", 400);
  std::vector<AlgebraElement> elems;
  Vec j3 = Vec::Zero(3);
  j3[2] = 1.0;
  for (double theta : p.at("thetas")) elems.push_back({sl2, Vec(theta * j3)});
  OrbitSumResult res = orbit_sum_residual(elems, opt, seed, policy);
  r.details["residual"] = res.residual;
  r.details["best_restart"] = res.best_restart;
  for (const auto& a : def.at("expected")) {
    std::string what = a.at("assert");
    std::string cite = a.value("citation", "");
    double want = a.at("value");
    if (what == "residual_at_most")
      add(r, "residual_at_most", res.residual <= want, want, res.residual,
          cite);
    else if (what == "residual_at_least")
      add(r, "residual_at_least", res.residual >= want, want, res.residual,
          cite);
  }
  return r;
}

CaseResult run_tuple_table(const Json& def, std::uint64_t seed,
                           ExecPolicy policy) {
  CaseResult r;
  r.name = def.at("name");
  const auto& p = def.at("params");
  int n = p.at("n");
  std::vector<double> grid;
  for (double v : p.at("grid")) grid.push_back(v);
  OrbitSumOptions opt;
  opt.restarts = p.value("restarts", 24);
  opt.max_iters = p.value("max_iters", 300);
  TupleTable table =
      tuple_space_support_table(n, grid, opt, seed, policy);
  r.details["agreement"] = table.agreement;
  r.details["cells"] = static_cast<int>(table.cells.size());
  Json disagreements = Json::array();
  for (const auto& c : table.cells)
    if (!c.agree) {
      Json cj;
      cj["thetas"] = c.thetas;
      cj["residual"] = c.residual;
      cj["expected_feasible"] = c.expected;
      disagreements.push_back(cj);
    }
  r.details["disagreements"] = disagreements;
  for (const auto& a : def.at("expected")) {
    std::string what = a.at("assert");
    std::string cite = a.value("citation", "");
    if (what == "agreement_at_least") {
      double want = a.at("value");
      add(r, "agreement_at_least", table.agreement >= want, want,
          table.agreement, cite);
    }
  }
  return r;
}

CaseResult run_whittaker(const Json& def, std::uint64_t seed,
                         ExecPolicy policy) {
  CaseResult r;
  r.name = def.at("name");
  const auto& p = def.at("params");
  WhittakerOptions opt;
  opt.n_induced = p.value("n_induced", 20000);
  opt.n_sweep_g = p.value("n_sweep_g", 1500);
  int sign = p.at("lambda_sign");
  WhittakerReport rep = whittaker_counterexample_check(sign, opt, seed, policy);
  r.details["relation"] = to_string(rep.relation);
  r.details["witness_kind"] = rep.witness_kind;
  r.details["witness_distance"] = rep.witness_distance;
  r.details["induced_elliptic_count"] = rep.induced_elliptic_count;
  if (rep.witness.size()) r.details["witness"] = vec_to_json(rep.witness);
  for (const auto& a : def.at("expected")) {
    std::string what = a.at("assert");
    std::string cite = a.value("citation", "");
    if (what == "relation") {
      std::string want = a.at("value");
      add(r, "relation", to_string(rep.relation) == want, want,
          to_string(rep.relation), cite);
    } else if (what == "witness_kind") {
      std::string want = a.at("value");
      add(r, "witness_kind", rep.witness_kind == want, want, rep.witness_kind,
          cite);
    } else if (what == "witness_distance_at_least") {
      double want = a.at("value");
      add(r, "witness_distance", rep.witness_distance >= want, want,
          rep.witness_distance, cite);
    } else if (what == "induced_elliptic_count") {
      int want = a.at("value");
      add(r, "induced_elliptic_count", rep.induced_elliptic_count == want,
          want, rep.induced_elliptic_count, cite);
    }
  }
  return r;
}

CaseResult run_ac_cartan(const Json& def, std::uint64_t seed,
                         ExecPolicy policy) {
  (void)policy;
  CaseResult r;
  r.name = def.at("name");
  const auto& p = def.at("params");
  SpecPtr sl2 = make_sl2();
  std::string variant = p.at("variant");

  if (variant == "lattice-ray") {
    // Discrete-series style lattice {n e} in a rank-one dual: AC is the ray.
    Vec e = Vec::Zero(1);
    e[0] = 1.0;
    OrbitFamily fam{sl2, {sl2->cartan_reps().at("t").front()},
                    std::make_shared<RayLatticeFamily>(e, 1.0, 1e7)};
    Vec plus = e, minus = -e;
    AcVerdict v_plus = ac_membership(*fam.params, plus, 0.1, 1e5);
    AcVerdict v_minus = ac_membership(*fam.params, minus, 0.1, 1e5);
    add(r, "ray_in", v_plus == AcVerdict::In, "in", to_string(v_plus),
        "single-ray lattice has the ray as asymptotic cone");
    add(r, "opposite_out", v_minus == AcVerdict::Out, "out",
        to_string(v_minus), "single-ray lattice has the ray as asymptotic cone");
  } else if (variant == "sl2-n") {
    // Compact-Cartan support of L^2(SL2/N): the discrete-series family is
    // empty and no sampled stabilizer annihilates a t-regular direction.
    HomogeneousSpaceSpec space{"sl2/n", sl2, sl2_n_subalgebra(), {}};
    OrbitFamily fam{sl2, {sl2->cartan_reps().at("t").front()},
                    std::make_shared<ExplicitFamily>(std::vector<Vec>{}, 1e9)};
    std::vector<Vec> dirs;
    Vec e(1);
    e[0] = 1.0;
    dirs.push_back(e);
    dirs.push_back(-e);
    AcFamilyTable table =
        ac_of_orbit_family(fam, space, dirs, 0.1, 1e5, 200, seed);
    bool all_agree = table.agree == static_cast<int>(dirs.size());
    bool no_ann = true;
    for (const auto& row : table.rows)
      if (row.annihilator_side) no_ann = false;
    add(r, "no_regular_elliptic_direction", no_ann && all_agree, true,
        no_ann && all_agree,
        "Whittaker-Plancherel support of L^2(SL(2,R)/N) is purely principal"
        " (Harish-Chandra; Wallach 1992)");
    r.details["agree"] = table.agree;
    r.details["undecided"] = table.undecided;
  } else {
    throw Error("unknown ac_cartan variant '" + variant + "'");
  }
  return r;
}

CaseResult run_elliptic_search(const Json& def, std::uint64_t seed,
                               ExecPolicy policy) {
  CaseResult r;
  r.name = def.at("name");
  const auto& p = def.at("params");
  SpecPtr spec = builtin_spec(p.at("spec"));
  std::vector<Vec> sub = builtin_subalgebra(spec, p.at("subalgebra"));
  // Search the trace-form complement of the subalgebra.
  InducedConeSpec ind{spec, sub, {}};
  std::vector<Covector> ann = annihilator(ind);
  std::vector<Vec> subspace;
  for (const auto& a : ann) subspace.push_back(a.coords);
  SearchBudget budget;
  budget.restarts = p.value("restarts", 32);
  budget.iters = p.value("iters", 400);
  EllipticSearchResult res =
      regular_elliptic_search(spec, subspace, budget, seed, policy);
  r.details["best_max_re"] = res.best_max_re;
  r.details["best_min_gap"] = res.best_min_gap;
  if (res.found) r.details["witness"] = vec_to_json(res.witness);
  for (const auto& a : def.at("expected")) {
    std::string what = a.at("assert");
    std::string cite = a.value("citation", "");
    if (what == "found") {
      bool want = a.at("value");
      add(r, "found", res.found == want, want, res.found, cite);
    }
  }
  return r;
}

}  // namespace

CaseResult run_case(const Json& def, std::uint64_t seed, ExecPolicy policy) {
  std::string kind = def.at("kind");
  CaseResult r;
  if (kind == "sp_search")
    r = run_sp_search(def, seed, policy);
  else if (kind == "orbit_sum")
    r = run_orbit_sum(def, seed, policy);
  else if (kind == "tuple_table")
    r = run_tuple_table(def, seed, policy);
  else if (kind == "whittaker")
    r = run_whittaker(def, seed, policy);
  else if (kind == "ac_cartan")
    r = run_ac_cartan(def, seed, policy);
  else if (kind == "elliptic_search")
    r = run_elliptic_search(def, seed, policy);
  else
    throw Error("unknown case kind '" + kind + "'");
  r.pass = !r.assertions.empty();
  for (const auto& a : r.assertions) r.pass = r.pass && a.pass;
  return r;
}

namespace {

Json sp_case(int n, int m, bool expect_found) {
  Json c;
  c["name"] = "sp-criterion-" + std::to_string(n) + "-" + std::to_string(m);
  c["kind"] = "sp_search";
  c["params"] = Json{{"n", n}, {"m", m}};
  Json expected = Json::array();
  Json found;
  found["assert"] = "found";
  found["value"] = expect_found;
  found["citation"] =
      "discrete series of Sp(2n,R) exist on regular elliptic coadjoint"
      " parameters (Harish-Chandra)";
  expected.push_back(found);
  if (!expect_found) {
    Json frac;
    frac["assert"] = "nonregular_fraction_at_least";
    frac["value"] = 1.0;
    frac["citation"] =
        "the complementary block of sp(2m) in sp(2n) has no regular elements"
        " when 2m > n";
    expected.push_back(frac);
  }
  c["expected"] = expected;
  return c;
}

Json orbit_sum_case(const std::string& name, std::vector<double> thetas,
                    const std::string& what, double value,
                    const std::string& cite) {
  Json c;
  c["name"] = name;
  c["kind"] = "orbit_sum";
  c["params"] = Json{{"thetas", thetas}};
  Json a;
  a["assert"] = what;
  a["value"] = value;
  a["citation"] = cite;
  c["expected"] = Json::array({a});
  return c;
}

Json whittaker_case(int sign) {
  Json c;
  std::string suffix = sign > 0 ? "plus" : (sign < 0 ? "minus" : "zero");
  c["name"] = "whittaker-" + suffix;
  c["kind"] = "whittaker";
  c["params"] = Json{{"lambda_sign", sign}};
  Json expected = Json::array();
  const std::string cite =
      "Whittaker-Plancherel spectrum of L^2(SL(2,R)/N, L_lambda): principal"
      " series plus one signed discrete series family (Kostant 1978;"
      " Matumoto 1992; Harish-Chandra / Wallach 1992)";
  if (sign == 0) {
    Json a;
    a["assert"] = "relation";
    a["value"] = "equal";
    a["citation"] = cite;
    expected.push_back(a);
  } else {
    Json a;
    a["assert"] = "relation";
    a["value"] = "strict_subset";
    a["citation"] = cite;
    expected.push_back(a);
    Json b;
    b["assert"] = "witness_kind";
    b["value"] = std::string("semisimple-elliptic") + (sign > 0 ? "+" : "-");
    b["citation"] = cite;
    expected.push_back(b);
    Json d;
    d["assert"] = "witness_distance_at_least";
    d["value"] = 0.5;
    d["citation"] = "nearest hyperbolic-or-nilpotent direction to an elliptic"
                    " axis lies 45 degrees away";
    expected.push_back(d);
    Json e;
    e["assert"] = "induced_elliptic_count";
    e["value"] = 0;
    e["citation"] = "conjugates of the annihilator of n are hyperbolic or"
                    " nilpotent";
    expected.push_back(e);
  }
  c["expected"] = expected;
  return c;
}

}  // namespace

std::vector<std::string> builtin_case_names() {
  return {"sp-criterion-1-0", "sp-criterion-2-1", "sp-criterion-3-1",
          "sp-criterion-3-2", "sp-criterion-4-2", "sp-criterion-4-3",
          "triple-5-m2-m2",   "pair-1-m1",        "triple-1-1-1",
          "triple-1-m2-m2",   "tuple-table-3",    "tuple-table-2",
          "whittaker-plus",   "whittaker-minus",  "whittaker-zero",
          "ac-lattice-ray",   "ac-sl2-n",         "so43-u11-search"};
}

Json builtin_case(const std::string& name) {
  if (name == "sp-criterion-1-0") return sp_case(1, 0, true);
  if (name == "sp-criterion-2-1") return sp_case(2, 1, true);
  if (name == "sp-criterion-3-1") return sp_case(3, 1, true);
  if (name == "sp-criterion-3-2") return sp_case(3, 2, false);
  if (name == "sp-criterion-4-2") return sp_case(4, 2, true);
  if (name == "sp-criterion-4-3") return sp_case(4, 3, false);
  if (name == "triple-5-m2-m2")
    return orbit_sum_case("triple-5-m2-m2", {5, -2, -2}, "residual_at_most",
                          1e-6,
                          "triple products of holomorphic and antiholomorphic"
                          " discrete series pair exactly when the signed"
                          " parameter sum stays on the majority side");
  if (name == "pair-1-m1")
    return orbit_sum_case("pair-1-m1", {1, -1}, "residual_at_most", 1e-6,
                          "opposite elliptic parameters cancel at the"
                          " identity");
  if (name == "triple-1-1-1")
    return orbit_sum_case("triple-1-1-1", {1, 1, 1}, "residual_at_least", 2.9,
                          "upper-sheet elliptic orbits have height at least"
                          " the parameter, so three positive parameters"
                          " cannot cancel");
  if (name == "triple-1-m2-m2")
    return orbit_sum_case("triple-1-m2-m2", {1, -2, -2}, "residual_at_least",
                          0.3,
                          "the signed parameter sum -3 violates the sheet"
                          " rule, so the sum stays away from zero");
  if (name == "tuple-table-3") {
    Json c;
    c["name"] = "tuple-table-3";
    c["kind"] = "tuple_table";
    c["params"] = Json{{"n", 3}, {"grid", {-2.0, -1.0, 0.0, 1.0, 2.0}}};
    Json a;
    a["assert"] = "agreement_at_least";
    a["value"] = 0.95;
    a["citation"] =
        "feasibility octants of triple elliptic parameter sums over"
        " SL(2,R) (coadjoint orbit geometry)";
    c["expected"] = Json::array({a});
    return c;
  }
  if (name == "tuple-table-2") {
    Json c;
    c["name"] = "tuple-table-2";
    c["kind"] = "tuple_table";
    c["params"] = Json{{"n", 2}, {"grid", {-2.0, -1.0, 0.0, 1.0, 2.0}}};
    Json a;
    a["assert"] = "agreement_at_least";
    a["value"] = 0.95;
    a["citation"] = "pair cancellation requires opposite sheets with equal"
                    " parameter (group case Plancherel symmetry)";
    c["expected"] = Json::array({a});
    return c;
  }
  if (name == "whittaker-plus") return whittaker_case(+1);
  if (name == "whittaker-minus") return whittaker_case(-1);
  if (name == "whittaker-zero") return whittaker_case(0);
  if (name == "ac-lattice-ray") {
    Json c;
    c["name"] = "ac-lattice-ray";
    c["kind"] = "ac_cartan";
    c["params"] = Json{{"variant", "lattice-ray"}};
    c["expected"] = Json::array();
    return c;
  }
  if (name == "ac-sl2-n") {
    Json c;
    c["name"] = "ac-sl2-n";
    c["kind"] = "ac_cartan";
    c["params"] = Json{{"variant", "sl2-n"}};
    c["expected"] = Json::array();
    return c;
  }
  if (name == "so43-u11-search") {
    Json c;
    c["name"] = "so43-u11-search";
    c["kind"] = "elliptic_search";
    c["params"] = Json{{"spec", "so43"}, {"subalgebra", "u11"}};
    Json a;
    a["assert"] = "found";
    a["value"] = true;
    a["citation"] =
        "regular elliptic directions in the orthogonal complement predict"
        " infinitely many discrete series in L^2(SO(4,3)/U(1,1))"
        " (compare Kobayashi 1998 discrete decomposability constructions)";
    c["expected"] = Json::array({a});
    return c;
  }
  throw Error("unknown builtin case '" + name + "'");
}

}  // namespace orbitcone

// Batch front-end: load algebra specs, run classifications, cone builds,
// decay probes, and catalog cases; emit deterministic JSON/CSV reports.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "orbitcone/builtin_specs.hpp"
#include "orbitcone/cases.hpp"
#include "orbitcone/catalog.hpp"
#include "orbitcone/cones.hpp"
#include "orbitcone/homspace.hpp"
#include "orbitcone/json_io.hpp"
#include "orbitcone/oscillatory.hpp"

using namespace orbitcone;

namespace {

Vec parse_coords(const std::string& s) {
  std::vector<double> vals;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
  Vec v(static_cast<long>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i) v[static_cast<long>(i)] = vals[i];
  return v;
}

struct CommonOpts {
  std::string spec = "builtin:sl2";
  std::uint64_t seed = 0;
  std::string out;
  int workers = 0;
  bool serial = false;

  ExecPolicy policy() const {
    return serial ? ExecPolicy::Serial : ExecPolicy::Parallel;
  }
  void apply_workers() const {
    if (workers > 0) par::set_threads(workers);
  }
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_seed) {
  cmd->add_option("--spec", o.spec, "spec JSON path or builtin:<name>");
  auto* seed_opt =
      cmd->add_option("--seed", o.seed, "64-bit run seed (required)");
  if (needs_seed) seed_opt->required();
  cmd->add_option("--out", o.out, "output directory for reports");
  cmd->add_option("--workers", o.workers, "worker threads (default: all)");
  cmd->add_flag("--serial", o.serial, "use the serial reference kernels");
}

std::vector<double> geometric(double lo, double hi, int n) {
  std::vector<double> t;
  for (int i = 0; i < n; ++i)
    t.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cone calculus toolkit for matrix Lie groups"};
  app.require_subcommand(1);

  // ---- classify -------------------------------------------------------------
  auto* cmd_classify = app.add_subcommand(
      "classify", "classify an algebra element (taxonomy and regularity)");
  CommonOpts classify_opts;
  std::string coords_str;
  double tol_sv = 1e-8, tol_cluster = 1e-7;
  add_common(cmd_classify, classify_opts, false);
  cmd_classify->add_option("--coords", coords_str, "element coordinates a,b,...")
      ->required();
  cmd_classify->add_option("--tol-sv", tol_sv, "singular value threshold");
  cmd_classify->add_option("--tol-cluster", tol_cluster,
                           "eigenvalue clustering threshold");

  // ---- ind-cone -------------------------------------------------------------
  auto* cmd_ind = app.add_subcommand(
      "ind-cone", "sample an induced cone and classify the samples");
  CommonOpts ind_opts;
  std::string sub_name = "n";
  std::string base_kind = "zero";
  std::string ray_dual_str;
  int n_samples = 10000;
  add_common(cmd_ind, ind_opts, true);
  cmd_ind->add_option("--sub", sub_name, "subalgebra name (n, b, diag, t, ...)");
  cmd_ind->add_option("--base", base_kind, "base cone: zero or ray");
  cmd_ind->add_option("--ray-dual", ray_dual_str,
                      "dual coordinates of the base ray on the subalgebra");
  cmd_ind->add_option("--n", n_samples, "sample count")
      ->check(CLI::PositiveNumber);

  // ---- ac -------------------------------------------------------------------
  auto* cmd_ac = app.add_subcommand(
      "ac", "asymptotic cone membership of a direction in a parameter family");
  CommonOpts ac_opts;
  std::string family_kind = "ray";
  std::string family_dir_str = "1";
  std::string probe_dir_str;
  double family_step = 1.0, family_cap = 1e7;
  double ac_width = 0.1, ac_horizon = 1e4;
  add_common(cmd_ac, ac_opts, false);
  cmd_ac->add_option("--family", family_kind,
                     "family kind: ray | diag-lattice | file:<json>");
  cmd_ac->add_option("--family-dir", family_dir_str, "ray direction");
  cmd_ac->add_option("--family-step", family_step, "ray step");
  cmd_ac->add_option("--family-cap", family_cap, "enumeration cap");
  cmd_ac->add_option("--dir", probe_dir_str, "direction to test")->required();
  cmd_ac->add_option("--width", ac_width, "cone half-angle (radians)");
  cmd_ac->add_option("--horizon", ac_horizon, "largest ladder rung");

  // ---- c-omega ---------------------------------------------------------------
  auto* cmd_comega = app.add_subcommand(
      "c-omega", "lower-bound constant C_Omega of a covector over G/H");
  CommonOpts co_opts;
  std::string co_sub = "n";
  std::string eta0_str;
  double omega_radius = 0.1;
  int co_nx = 2000, co_ndir = 8;
  add_common(cmd_comega, co_opts, true);
  cmd_comega->add_option("--sub", co_sub, "subalgebra name");
  cmd_comega->add_option("--eta0", eta0_str, "covector coordinates")->required();
  cmd_comega->add_option("--radius", omega_radius, "Omega ball radius");
  cmd_comega->add_option("--nx", co_nx, "sampled stabilizer points")
      ->check(CLI::PositiveNumber);
  cmd_comega->add_option("--ndir", co_ndir, "sampled directions per point")
      ->check(CLI::PositiveNumber);

  // ---- probe ----------------------------------------------------------------
  auto* cmd_probe = app.add_subcommand(
      "probe", "condition-U decay probe (named experiment)");
  CommonOpts probe_opts;
  std::string probe_name = "su2-t-character";
  int probe_N = 4, probe_char = 2, probe_nx = 16, probe_nxi = 8;
  double probe_t_lo = 30, probe_t_hi = 3000;
  add_common(cmd_probe, probe_opts, true);
  cmd_probe->add_option("--name", probe_name,
                        "probe name: su2-t-character | sl2-b-character");
  cmd_probe->add_option("--N", probe_N, "bump order");
  cmd_probe->add_option("--char-n", probe_char, "character parameter");
  cmd_probe->add_option("--nx", probe_nx, "sampled stabilizer points")
      ->check(CLI::PositiveNumber);
  cmd_probe->add_option("--nxi", probe_nxi, "covector grid size")
      ->check(CLI::PositiveNumber);
  cmd_probe->add_option("--t-lo", probe_t_lo, "t ladder start");
  cmd_probe->add_option("--t-hi", probe_t_hi, "t ladder end");

  // ---- nsp ------------------------------------------------------------------
  auto* cmd_nsp = app.add_subcommand(
      "nsp", "uniform non-stationary-phase decay check");
  CommonOpts nsp_opts;
  std::string nsp_sub = "n";
  std::string nsp_eta_str = "0,0,0.4";
  double nsp_z = 0.05;
  int nsp_N = 3;
  add_common(cmd_nsp, nsp_opts, true);
  cmd_nsp->add_option("--sub", nsp_sub, "subalgebra name");
  cmd_nsp->add_option("--eta", nsp_eta_str, "eta covector coordinates");
  cmd_nsp->add_option("--z-scale", nsp_z, "transverse perturbation size");
  cmd_nsp->add_option("--N", nsp_N, "bump order");

  // ---- case -----------------------------------------------------------------
  auto* cmd_case = app.add_subcommand("case", "run a catalog case");
  CommonOpts case_opts;
  std::string case_name;
  std::string case_file;
  bool case_list = false;
  int case_n = -1, case_m = -1;
  add_common(cmd_case, case_opts, true);
  cmd_case->add_option("--name", case_name, "builtin case name");
  cmd_case->add_option("--file", case_file, "case definition JSON");
  cmd_case->add_flag("--list", case_list, "list builtin cases");
  cmd_case->add_option("--n", case_n, "override case parameter n");
  cmd_case->add_option("--m", case_m, "override case parameter m");

  // ---- report ---------------------------------------------------------------
  auto* cmd_report = app.add_subcommand(
      "report", "merge report JSON files in a directory into a summary");
  std::string report_dir;
  cmd_report->add_option("--dir", report_dir, "report directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_classify) {
      classify_opts.apply_workers();
      SpecPtr spec = load_spec(classify_opts.spec);
      Vec coords = parse_coords(coords_str);
      if (coords.norm() == 0.0) {
        std::cout << "zero element\n";
        return 0;
      }
      ClassifyOptions copt;
      copt.sv_rel_tol = tol_sv;
      copt.cluster_rel_tol = tol_cluster;
      ElementClass cls = classify({spec, coords}, copt);
      std::cout << to_string(cls.kind) << ", "
                << (cls.regular ? "regular" : "not regular") << "\n";
      return 0;
    }

    if (*cmd_ind) {
      ind_opts.apply_workers();
      SpecPtr spec = load_spec(ind_opts.spec);
      InducedConeSpec ind{spec, builtin_subalgebra(spec, sub_name), {}};
      ind.base.kind = base_kind;
      if (base_kind == "ray") ind.base.ray_dual = parse_coords(ray_dual_str);
      ConeSampleSet cone =
          sample_induced_cone(ind, n_samples, ind_opts.seed, ind_opts.policy());
      std::map<std::string, int> histogram;
      for (const Vec& s : cone.samples)
        histogram[to_string(classify_matrix(*spec, spec->matrix(s)).kind)] += 1;
      if (cone.zero_samples) histogram["zero"] += cone.zero_samples;
      // Per-sample invariant: restricting Ad*(g) xi to Ad(g) h reproduces the
      // base point transported along g (for the zero base this says the
      // sample annihilates the conjugated subalgebra).
      int inv_checked = 0, inv_pass = 0;
      {
        int n_check = std::min(n_samples, 500);
        auto details = sample_induced_cone_detailed(ind, n_check, ind_opts.seed);
        for (const auto& d : details) {
          if (d.sample.squaredNorm() == 0.0) continue;
          ++inv_checked;
          GroupElement g{spec, d.g};
          Covector moved = coadjoint(g, {spec, d.pre_conjugation});
          double scale = std::max(1.0, moved.norm());
          bool ok = true;
          for (const Vec& w : ind.subalgebra) {
            double restricted = trace_pairing(moved, adjoint(g, {spec, w}));
            double base = trace_pairing({spec, d.pre_conjugation}, {spec, w});
            if (std::abs(restricted - base) > 1e-8 * scale) ok = false;
          }
          if (ok) ++inv_pass;
        }
      }
      Json config{{"command", "ind-cone"},  {"spec", ind_opts.spec},
                  {"sub", sub_name},        {"base", base_kind},
                  {"n", n_samples},         {"seed", ind_opts.seed}};
      Json out;
      out["config"] = config;
      out["config_hash"] = config_hash(config);
      out["histogram"] = histogram;
      out["invariant_checked"] = inv_checked;
      out["invariant_pass"] = inv_pass;
      out["cone"] = cone_to_json(cone);
      for (const auto& [k, v] : histogram)
        std::cout << k << ": " << v << "\n";
      if (inv_checked)
        std::cout << "invariant check pass rate: "
                  << (100.0 * inv_pass / inv_checked) << "%\n";
      if (!ind_opts.out.empty()) write_report(ind_opts.out, "ind_cone", out);
      return 0;
    }

    if (*cmd_ac) {
      Vec dir = parse_coords(probe_dir_str);
      std::shared_ptr<ParamFamily> fam;
      if (family_kind == "ray")
        fam = std::make_shared<RayLatticeFamily>(parse_coords(family_dir_str),
                                                 family_step, family_cap);
      else if (family_kind == "diag-lattice")
        fam = std::make_shared<LatticeRule2DFamily>(
            [](long a, long b) { return a == b; }, family_cap);
      else if (family_kind.rfind("file:", 0) == 0) {
        std::ifstream in(family_kind.substr(5));
        Json j = Json::parse(in);
        std::vector<Vec> pts;
        for (const auto& p : j.at("points")) pts.push_back(vec_from_json(p));
        fam = std::make_shared<ExplicitFamily>(pts, j.value("cap", 1e9));
      } else {
        throw Error("unknown family kind '" + family_kind + "'");
      }
      AcVerdict v = ac_membership(*fam, dir, ac_width, ac_horizon);
      std::cout << to_string(v) << "\n";
      return 0;
    }

    if (*cmd_comega) {
      co_opts.apply_workers();
      SpecPtr spec = load_spec(co_opts.spec);
      HomogeneousSpaceSpec space{co_opts.spec + "/" + co_sub, spec,
                                 builtin_subalgebra(spec, co_sub), {}};
      Covector eta{spec, parse_coords(eta0_str)};
      COmegaResult res = co_opts.serial
                             ? c_omega_serial(space, eta, omega_radius, co_nx,
                                              co_ndir, co_opts.seed)
                             : c_omega(space, eta, omega_radius, co_nx, co_ndir,
                                       co_opts.seed, co_opts.policy());
      Json config{{"command", "c-omega"}, {"spec", co_opts.spec},
                  {"sub", co_sub},        {"eta0", vec_to_json(eta.coords)},
                  {"radius", omega_radius}, {"nx", co_nx},
                  {"ndir", co_ndir},      {"seed", co_opts.seed}};
      Json out;
      out["config"] = config;
      out["config_hash"] = config_hash(config);
      out["c_omega"] = res.value;
      out["worst_x_index"] = res.worst_x_index;
      out["worst_projection"] = res.worst_projection;
      out["samples"] = res.n_x;
      std::cout << "c_omega = " << res.value << "\n";
      if (!co_opts.out.empty()) write_report(co_opts.out, "c_omega", out);
      return 0;
    }

    if (*cmd_probe) {
      probe_opts.apply_workers();
      DecayProbe probe;
      if (probe_name == "su2-t-character") {
        SpecPtr su2 = make_su2();
        probe.space = {"su2/t", su2, su2_t_subalgebra(), {}};
        probe.rep = circle_character(su2, su2_t_subalgebra()[0], probe_char);
      } else if (probe_name == "sl2-b-character") {
        SpecPtr sl2 = make_sl2();
        probe.space = {"sl2/n", sl2, sl2_n_subalgebra(), {}};
        probe.rep = borel_character(sl2, static_cast<double>(probe_char));
      } else {
        throw Error("unknown probe '" + probe_name + "'");
      }
      GroupSampler sampler{probe.space.algebra, 3, 1.2};
      for (int i = 0; i < probe_nx; ++i)
        probe.points.push_back(
            stabilizer_point(probe.space, sampler.at(probe_opts.seed, i)));
      probe.bump = build_bump(probe_N, {"box", (Vec(1) << 0.3).finished()},
                              {"box", (Vec(1) << 0.9).finished()}, 0);
      probe.v1 = CVec::Ones(probe.rep.dim);
      probe.v2 = CVec::Ones(probe.rep.dim);
      probe.quad_nodes = 2049;
      probe.t_grid = geometric(probe_t_lo, probe_t_hi, 14);
      probe.target_slope = -probe_N + 0.5;
      Rng rng(probe_opts.seed ^ 0x5eedULL);
      const SpecPtr& alg = probe.space.algebra;
      int added = 0;
      while (added < probe_nxi) {
        Vec c(alg->dim());
        for (int j = 0; j < alg->dim(); ++j) c[j] = rng.gauss();
        Covector xi{alg, c};
        if (xi.norm() < 1e-9) continue;
        Vec cn = c / xi.norm();
        bool away = true;
        Vec t = alg->trace_gram() * cn;
        for (const auto& pt : probe.points)
          for (int k = 0; k < pt.sub_dim(); ++k)
            if (std::abs(t.dot(pt.gx_basis.col(k))) < 0.3) away = false;
        if (!away) continue;
        probe.xi_grid.push_back({alg, cn});
        ++added;
      }
      DecayReport rep = condition_u_probe(probe, probe_opts.policy());
      std::cout << "min slope = " << rep.min_slope
                << ", max slope = " << rep.max_slope
                << ", pass = " << (rep.pass ? "yes" : "no") << "\n";
      if (!probe_opts.out.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(probe_opts.out);
        std::ofstream csv(fs::path(probe_opts.out) / "probe.csv",
                          std::ios::binary);
        rep.write_csv(csv);
        Json config{{"command", "probe"},   {"name", probe_name},
                    {"N", probe_N},         {"char_n", probe_char},
                    {"nx", probe_nx},       {"nxi", probe_nxi},
                    {"seed", probe_opts.seed}};
        Json out;
        out["config"] = config;
        out["config_hash"] = config_hash(config);
        out["min_slope"] = rep.min_slope;
        out["max_slope"] = rep.max_slope;
        out["target_slope"] = rep.target_slope;
        out["pass"] = rep.pass;
        write_report(probe_opts.out, "probe", out);
      }
      return rep.pass ? 0 : 1;
    }

    if (*cmd_nsp) {
      nsp_opts.apply_workers();
      SpecPtr spec = load_spec(nsp_opts.spec);
      HomogeneousSpaceSpec space{nsp_opts.spec + "/" + nsp_sub, spec,
                                 builtin_subalgebra(spec, nsp_sub), {}};
      StabilizerPoint pt = stabilizer_point(
          space, GroupSampler{spec, 3, 1.0}.at(nsp_opts.seed, 0));
      NspConfig cfg;
      cfg.bump = build_bump(nsp_N, {"box", (Vec(1) << 0.3).finished()},
                            {"box", (Vec(1) << 0.9).finished()}, 0);
      cfg.xi_directions = {(Vec(1) << 1.0).finished(),
                           (Vec(1) << -1.0).finished()};
      cfg.xi_scales = {2.0, 4.0, 8.0, 16.0, 32.0};
      cfg.t_grid = geometric(30.0, 3000.0, 108);
      cfg.fit.residual_threshold = 0.6;
      cfg.quad_nodes = 32769;
      cfg.target_t_slope = -nsp_N + 0.5;
      cfg.target_xi_exponent = -nsp_N + 0.5;
      Covector eta{spec, parse_coords(nsp_eta_str)};
      Vec z = nsp_z * pt.perp_basis.col(0);
      NspReport rep =
          nonstationary_phase_check(space, pt, eta, {spec, z}, cfg);
      std::cout << "t slope max = " << rep.t_decay.max_slope
                << ", xi exponent = " << rep.xi_exponent
                << ", pass = " << (rep.pass ? "yes" : "no") << "\n";
      if (!nsp_opts.out.empty()) {
        Json config{{"command", "nsp"},  {"spec", nsp_opts.spec},
                    {"sub", nsp_sub},    {"eta", nsp_eta_str},
                    {"z_scale", nsp_z},  {"N", nsp_N},
                    {"seed", nsp_opts.seed}};
        Json out;
        out["config"] = config;
        out["config_hash"] = config_hash(config);
        out["t_slope_max"] = rep.t_decay.max_slope;
        out["xi_exponent"] = rep.xi_exponent;
        out["pass"] = rep.pass;
        write_report(nsp_opts.out, "nsp", out);
      }
      return rep.pass ? 0 : 1;
    }

    if (*cmd_case) {
      case_opts.apply_workers();
      if (case_list) {
        for (const auto& n : builtin_case_names()) std::cout << n << "\n";
        return 0;
      }
      Json def;
      if (!case_file.empty()) {
        std::ifstream in(case_file);
        if (!in) throw Error("cannot open case file '" + case_file + "'");
        def = Json::parse(in);
      } else if (case_name == "sp-criterion" && case_n >= 0 && case_m >= 0) {
        def = builtin_case("sp-criterion-" + std::to_string(case_n) + "-" +
                           std::to_string(case_m));
      } else if (!case_name.empty()) {
        def = builtin_case(case_name);
      } else {
        throw Error("case needs --name or --file");
      }
      if (case_n >= 0) def["params"]["n"] = case_n;
      if (case_m >= 0) def["params"]["m"] = case_m;
      CaseResult res = run_case(def, case_opts.seed, case_opts.policy());
      for (const auto& a : res.assertions)
        std::cout << (a.pass ? "ok   " : "FAIL ") << res.name << "."
                  << a.name << " expected=" << a.expected.dump()
                  << " actual=" << a.actual.dump() << "\n";
      if (res.details.contains("witness"))
        std::cout << "witness: " << res.details["witness"].dump() << "\n";
      if (!case_opts.out.empty()) {
        Json out = res.to_json();
        Json config{{"command", "case"}, {"definition", def},
                    {"seed", case_opts.seed}};
        out["config"] = config;
        out["config_hash"] = config_hash(config);
        write_report(case_opts.out, "case_" + res.name, out);
      }
      return res.pass ? 0 : 1;
    }

    if (*cmd_report) {
      namespace fs = std::filesystem;
      int files = 0, passes = 0, fails = 0;
      if (fs::exists(report_dir))
        for (const auto& entry : fs::directory_iterator(report_dir)) {
          std::string name = entry.path().filename().string();
          if (entry.path().extension() != ".json") continue;
          if (name.size() > 10 &&
              name.substr(name.size() - 10) == ".meta.json")
            continue;
          std::ifstream in(entry.path());
          Json j = Json::parse(in, nullptr, false);
          if (j.is_discarded()) continue;
          ++files;
          if (j.contains("pass")) (j["pass"].get<bool>() ? passes : fails) += 1;
        }
      std::cout << "reports: " << files << ", pass: " << passes
                << ", fail: " << fails << "\n";
      return 0;
    }
  } catch (const UnclassifiableError& e) {
    std::cerr << "unclassifiable: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

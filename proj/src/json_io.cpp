#include "orbitcone/json_io.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>

#include "orbitcone/builtin_specs.hpp"

namespace orbitcone {

Json vec_to_json(const Vec& v) {
  Json a = Json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vec vec_from_json(const Json& j) {
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<long>(i)] = j[i];
  return v;
}

Json mat_to_json(const Mat& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

Mat mat_from_json(const Json& j) {
  const int r = static_cast<int>(j.size());
  const int c = r ? static_cast<int>(j[0].size()) : 0;
  Mat m(r, c);
  for (int i = 0; i < r; ++i)
    for (int k = 0; k < c; ++k) m(i, k) = j[i][k];
  return m;
}

SpecPtr spec_from_json(const Json& j) {
  std::string name = j.at("name");
  int ambient = j.at("ambient_dim");
  int rank = j.at("rank");
  std::vector<Mat> basis;
  for (const auto& bj : j.at("basis")) {
    // row-major flat list
    Vec flat = vec_from_json(bj);
    if (flat.size() != ambient * ambient)
      throw AlgebraError("spec json: basis entry has wrong size");
    Mat m(ambient, ambient);
    for (int r = 0; r < ambient; ++r)
      for (int c = 0; c < ambient; ++c) m(r, c) = flat[r * ambient + c];
    basis.push_back(m);
  }
  std::map<std::string, std::vector<Vec>> cartans;
  if (j.contains("cartan_reps"))
    for (auto it = j.at("cartan_reps").begin(); it != j.at("cartan_reps").end();
         ++it) {
      std::vector<Vec> gens;
      for (const auto& g : it.value()) gens.push_back(vec_from_json(g));
      cartans[it.key()] = gens;
    }
  std::optional<GroupConstraint> constraint;
  if (j.contains("constraint") && !j.at("constraint").is_null()) {
    GroupConstraint c;
    c.type = j.at("constraint").at("type");
    c.form = mat_from_json(j.at("constraint").at("form"));
    constraint = c;
  }
  auto spec = std::make_shared<LieAlgebraSpec>(name, ambient, std::move(basis),
                                               rank, std::move(cartans),
                                               std::move(constraint));
  spec->validate();
  return spec;
}

Json spec_to_json(const LieAlgebraSpec& spec) {
  Json j;
  j["name"] = spec.name();
  j["ambient_dim"] = spec.ambient_dim();
  j["rank"] = spec.rank();
  Json basis = Json::array();
  for (const Mat& b : spec.basis()) {
    Json flat = Json::array();
    for (int r = 0; r < b.rows(); ++r)
      for (int c = 0; c < b.cols(); ++c) flat.push_back(b(r, c));
    basis.push_back(flat);
  }
  j["basis"] = basis;
  Json cartans = Json::object();
  for (const auto& [name, gens] : spec.cartan_reps()) {
    Json list = Json::array();
    for (const Vec& g : gens) list.push_back(vec_to_json(g));
    cartans[name] = list;
  }
  j["cartan_reps"] = cartans;
  if (spec.constraint()) {
    j["constraint"] = Json{{"type", spec.constraint()->type},
                           {"form", mat_to_json(spec.constraint()->form)}};
  }
  j["inner_product"] = spec.inner_product_name();
  return j;
}

SpecPtr load_spec(const std::string& path_or_builtin) {
  if (path_or_builtin.rfind("builtin:", 0) == 0)
    return builtin_spec(path_or_builtin.substr(8));
  std::ifstream in(path_or_builtin);
  if (!in) throw Error("cannot open spec file '" + path_or_builtin + "'");
  Json j = Json::parse(in);
  return spec_from_json(j);
}

Json cone_to_json(const ConeSampleSet& cone) {
  Json j;
  j["algebra"] = cone.algebra->name();
  j["seed"] = cone.generator.seed;
  j["n"] = cone.generator.requested;
  j["description"] = cone.generator.description;
  j["symmetry_tags"] = cone.generator.symmetry_tags;
  j["zero_samples"] = cone.zero_samples;
  Json samples = Json::array();
  for (const Vec& s : cone.samples) samples.push_back(vec_to_json(s));
  j["samples"] = samples;
  return j;
}

ConeSampleSet cone_from_json(const Json& j, const SpecPtr& algebra) {
  ConeSampleSet cone{algebra, {}, {}, 0};
  cone.generator.seed = j.at("seed");
  cone.generator.requested = j.at("n");
  cone.generator.description = j.value("description", "");
  if (j.contains("symmetry_tags"))
    for (const auto& t : j.at("symmetry_tags"))
      cone.generator.symmetry_tags.push_back(t);
  cone.zero_samples = j.value("zero_samples", 0);
  for (const auto& s : j.at("samples")) cone.samples.push_back(vec_from_json(s));
  return cone;
}

std::string config_hash(const Json& config) {
  std::string dump = config.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_report(const std::string& dir, const std::string& name,
                  const Json& payload) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  {
    std::ofstream out(fs::path(dir) / (name + ".json"), std::ios::binary);
    out << payload.dump(2) << "\n";
  }
  {
    Json meta;
    auto now = std::chrono::system_clock::now().time_since_epoch();
    meta["written_unix_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
    std::ofstream out(fs::path(dir) / (name + ".meta.json"), std::ios::binary);
    out << meta.dump(2) << "\n";
  }
}

}  // namespace orbitcone

#ifndef ORBITCONE_JSON_IO_HPP
#define ORBITCONE_JSON_IO_HPP

#include <string>

#include <json.hpp>

#include "orbitcone/algebra.hpp"
#include "orbitcone/cones.hpp"

namespace orbitcone {

using Json = nlohmann::ordered_json;

/// Schema: schema/v1/lie_algebra_spec.schema.json
SpecPtr spec_from_json(const Json& j);
Json spec_to_json(const LieAlgebraSpec& spec);

/// Accepts a file path or "builtin:<name>".
SpecPtr load_spec(const std::string& path_or_builtin);

/// Schema: schema/v1/cone_sample_set.schema.json
Json cone_to_json(const ConeSampleSet& cone);
ConeSampleSet cone_from_json(const Json& j, const SpecPtr& algebra);

Json vec_to_json(const Vec& v);
Vec vec_from_json(const Json& j);
Json mat_to_json(const Mat& m);
Mat mat_from_json(const Json& j);

/// FNV-1a hash of the canonical dump, as fixed-width hex.
std::string config_hash(const Json& config);

/// Writes dir/name.json (deterministic bytes) and dir/name.meta.json
/// (timestamp and environment, excluded from the deterministic payload).
void write_report(const std::string& dir, const std::string& name,
                  const Json& payload);

}  // namespace orbitcone

#endif

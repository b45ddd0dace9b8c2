#pragma once

// Serialization of reports to JSON, CSV and gnuplot data files, and the run
// manifest listing every emitted file.

#include <string>
#include <vector>

#include "json.hpp"
#include "slat/algebra_suite.hpp"
#include "slat/spectral.hpp"

namespace slat::report {

using json = nlohmann::json;

/// Finite values as numbers, infinities as the strings "inf" and "-inf".
json number(double x);
json number(ExtReal x);

json to_json(const Diagnostics& d);
json to_json(const HvzReport& r);
json to_json(const ThresholdReport& r);
json to_json(const RefinementGate& g);
json to_json(const BoundStates& b);
json to_json(const MourreReport& r);
json to_json(const std::vector<VirialEntry>& v);
json to_json(const IdentityCheck& c);
json to_json(const SuiteReport& r);
json to_json(const ModelReport& r);

/// "index,value" rows.
std::string eigenvalues_csv(const std::vector<double>& values);
/// "identity,instance,rank_a,rank_b,rank_joint,passed" rows.
std::string checks_csv(const std::vector<IdentityCheck>& checks);

/// Lowercase hex SHA-256.
std::string sha256_hex(const std::string& bytes);

struct RunManifest {
  std::string config_path;
  std::string config_sha256;
  std::string command;
  std::string tool_version;
  double wall_seconds = 0.0;
  std::vector<std::string> outputs;
};
json to_json(const RunManifest& m);

/// Writes text to dir/name, creating dir, and returns the path written.
std::string write_file(const std::string& dir, const std::string& name, const std::string& text);
/// Pretty-printed JSON with a trailing newline.
std::string dump(const json& j);

}  // namespace slat::report

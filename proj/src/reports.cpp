#include "slat/reports.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "slat/errors.hpp"

namespace slat::report {

json number(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

json number(ExtReal x) { return number(x.value); }

json to_json(const Diagnostics& d) {
  json out = json::array();
  for (const auto& e : d) out.push_back({{"path", e.path}, {"reason", e.reason}});
  return out;
}

json to_json(const HvzReport& r) {
  json atoms = json::object();
  for (const auto& [x, v] : r.per_atom) atoms[x] = number(v);
  return {{"tau_hvz", number(r.tau)}, {"per_atom", atoms}};
}

json to_json(const ThresholdReport& r) {
  json ev = json::object(), tau = json::object(), flagged = json::array();
  for (const auto& [x, s] : r.ev) ev[x] = s.points();
  for (const auto& [x, t] : r.tau_sub) tau[x] = number(t);
  for (const auto& f : r.flagged)
    flagged.push_back({{"element", f.element}, {"value", f.value}, {"tau", number(f.tau)}});
  return {{"eps", r.eps},
          {"thresholds", r.thresholds.points()},
          {"ev", ev},
          {"tau_sub", tau},
          {"dropped_near_threshold", flagged}};
}

json to_json(const RefinementGate& g) {
  json coarse = json::object(), fine = json::object();
  for (const auto& [k, v] : g.coarse_values) coarse[k] = v;
  for (const auto& [k, v] : g.fine_values) fine[k] = v;
  return {{"coarse_n", g.coarse.n},
          {"fine_n", g.fine.n},
          {"coarse_lowest", coarse},
          {"fine_lowest", fine},
          {"max_relative_drift", g.max_relative_drift},
          {"max_absolute_drift", g.max_absolute_drift},
          {"passed", g.passed}};
}

json to_json(const BoundStates& b) {
  return {{"tau", number(b.tau)},
          {"eps", b.eps},
          {"count", b.values.size()},
          {"values", b.values},
          {"isolated", b.isolated}};
}

json to_json(const MourreReport& r) {
  return {{"lambda", r.lambda},
          {"delta", r.delta},
          {"subspace_dim", r.subspace_dim},
          {"window_eigenvalues", r.window_eigenvalues},
          {"min_compressed", number(r.min_compressed)},
          {"min_compressed_literal", number(r.min_compressed_literal)},
          {"rho_hat_at_lambda", number(r.rho_hat_at_lambda)},
          {"margin", r.margin},
          {"boundary_error", r.boundary_error},
          {"threshold_in_window", r.threshold_in_window},
          {"status", to_string(r.status)}};
}

json to_json(const std::vector<VirialEntry>& v) {
  json out = json::array();
  for (const auto& e : v)
    out.push_back({{"eigenvalue", e.eigenvalue},
                   {"residual", e.residual},
                   {"relative", e.relative},
                   {"bulk", e.bulk},
                   {"boundary_mass", e.boundary_mass},
                   {"skipped", e.skipped},
                   {"passed", e.passed}});
  return out;
}

json to_json(const IdentityCheck& c) {
  return {{"identity", c.identity},
          {"instance", c.instance},
          {"ranks", {c.ranks.a, c.ranks.b, c.ranks.joint}},
          {"passed", c.passed}};
}

namespace {

json tally_json(const std::map<std::string, IdentityTally>& t) {
  json out = json::object();
  for (const auto& [k, v] : t) out[k] = {{"passed", v.passed}, {"total", v.total}};
  return out;
}

json failures_json(const std::vector<IdentityCheck>& checks) {
  json out = json::array();
  for (const auto& c : checks)
    if (!c.passed) out.push_back(to_json(c));
  return out;
}

}  // namespace

json to_json(const SuiteReport& r) {
  return {{"group", r.group}, {"passed", r.passed()}, {"tally", tally_json(r.tally())}, {"failures", failures_json(r.checks)}};
}

json to_json(const ModelReport& r) {
  json overlaps = json::array();
  for (const auto& o : r.overlaps)
    overlaps.push_back({{"z1", o.z1}, {"z2", o.z2}, {"ranks", {o.ranks.a, o.ranks.b, o.ranks.joint}}});
  return {{"passed", r.passed()},
          {"tally", tally_json(r.tally())},
          {"failures", failures_json(r.checks)},
          {"component_overlaps", overlaps}};
}

std::string eigenvalues_csv(const std::vector<double>& values) {
  std::string out = "index,value\n";
  for (std::size_t i = 0; i < values.size(); ++i) out += std::to_string(i) + "," + format_double(values[i]) + "\n";
  return out;
}

std::string checks_csv(const std::vector<IdentityCheck>& checks) {
  std::string out = "identity,instance,rank_a,rank_b,rank_joint,passed\n";
  for (const auto& c : checks)
    out += c.identity + ",\"" + c.instance + "\"," + std::to_string(c.ranks.a) + "," + std::to_string(c.ranks.b) + "," +
           std::to_string(c.ranks.joint) + "," + (c.passed ? "true" : "false") + "\n";
  return out;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw InternalError("sha256: digest failed");
  std::ostringstream ss;
  for (unsigned int i = 0; i < len; ++i) ss << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return ss.str();
}

json to_json(const RunManifest& m) {
  return {{"schema_version", 1},
          {"config", {{"path", m.config_path}, {"sha256", m.config_sha256}}},
          {"command", m.command},
          {"tool_version", m.tool_version},
          {"wall_seconds", m.wall_seconds},
          {"outputs", m.outputs}};
}

std::string write_file(const std::string& dir, const std::string& name, const std::string& text) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InputError("cannot create " + dir + ": " + ec.message());
  const auto path = (std::filesystem::path(dir) / name).string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
  return path;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace slat::report

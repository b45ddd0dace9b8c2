#include "slat/cli.hpp"

#include <chrono>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "slat/config.hpp"
#include "slat/errors.hpp"
#include "slat/reports.hpp"
#include "slat/spectral.hpp"

namespace slat::cli {

namespace {

using report::json;

struct Options {
  std::string command;
  std::string config;
  std::string out = "slat-out";
  std::optional<double> eps;
  double lambda = 1.0;
  double delta = 0.1;
};

// Failure carried to the top level as a JSON error object.
struct Failure {
  int code;
  std::string type;
  std::string message;
  Diagnostics diagnostics;
};

json header(const std::string& command) { return {{"schema_version", kSchemaVersion}, {"command", command}}; }

class Run {
 public:
  Run(const Options& o, std::ostream& out) : o_(o), out_(out) {}

  int go() {
    const auto start = std::chrono::steady_clock::now();
    ParseResult parsed = load_config(o_.config, bytes_);
    int code = 0;
    if (o_.command == "validate") {
      json j = header("validate");
      j["valid"] = parsed.ok();
      j["diagnostics"] = report::to_json(parsed.diagnostics);
      emit("validate.json", j);
      code = parsed.ok() ? 0 : 1;
    } else {
      if (!parsed.ok()) throw Failure{1, "invalid_config", "configuration failed validation", parsed.diagnostics};
      if (o_.command == "algebra-verify") {
        auto* g = std::get_if<GroupConfig>(&*parsed.config);
        if (!g) throw Failure{1, "invalid_config", "algebra-verify needs a group configuration", {}};
        code = algebra(*g);
      } else {
        auto* e = std::get_if<EuclidConfig>(&*parsed.config);
        if (!e) throw Failure{1, "invalid_config", o_.command + " needs a euclid configuration", {}};
        euclid(e->model);
      }
    }
    report::RunManifest m{o_.config,
                          report::sha256_hex(bytes_),
                          o_.command,
                          kToolVersion,
                          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(),
                          outputs_};
    report::write_file(o_.out, "manifest.json", report::dump(report::to_json(m)));
    return code;
  }

 private:
  void emit(const std::string& name, const json& j, bool print = true) {
    const auto text = report::dump(j);
    outputs_.push_back(report::write_file(o_.out, name, text));
    if (print) out_ << text;
  }

  void emit_text(const std::string& name, const std::string& text) {
    outputs_.push_back(report::write_file(o_.out, name, text));
  }

  // eps from the flag, else 10x the refinement drift
  double eps(const ModelSpec& m, json& j) {
    if (o_.eps) {
      if (!(*o_.eps >= 0.0)) throw Failure{1, "invalid_argument", "--eps must be nonnegative", {}};
      j["eps_source"] = "flag";
      return *o_.eps;
    }
    const RefinementGate g = refinement_gate(m);
    j["refinement_gate"] = report::to_json(g);
    j["eps_source"] = "refinement_gate";
    return std::max(g.suggested_eps(), 1e-12);
  }

  void rho_files(const RhoComparison& rho) {
    emit_text("rho_hat.csv", rho_profile_csv(rho.direct));
    emit_text("rho_hat.dat", rho_profile_dat(rho.direct));
  }

  void euclid(const ModelSpec& m) {
    const Hamiltonian h = assemble(m);
    json j = header(o_.command);
    j["total_dim"] = h.total_dim();
    if (o_.command == "hvz") {
      const HvzReport r = hvz_tau(h);
      j.update(report::to_json(r));
      json bottoms = json::object();
      for (const auto& [x, t] : r.per_atom) {
        const double bottom = lowest_eigenvalues(project_geq(h, x).matrix(), 1)(0);
        const double lap = lowest_eigenvalues(build_laplacian(h.axes.at(x), h.grid, h.scheme), 1)(0);
        bottoms[x] = {{"bottom", bottom}, {"laplacian_min", lap}, {"tensor_sum_residual", bottom - lap - t}};
      }
      j["filter_bottoms"] = bottoms;
      emit("hvz.json", j);
    } else if (o_.command == "thresholds") {
      const ThresholdReport t = threshold_set_numeric(h, eps(m, j));
      const RhoComparison rho = rho_hat_numeric(t, h.lattice, default_lambda_grid(t.thresholds));
      j.update(report::to_json(t));
      j["rho_hat_max_discrepancy"] = rho.max_discrepancy;
      emit("thresholds.json", j);
      rho_files(rho);
    } else if (o_.command == "spectrum") {
      const double e = eps(m, j);
      const HvzReport hv = hvz_tau(h);
      const ThresholdReport t = threshold_set_numeric(h, e);
      const RhoComparison rho = rho_hat_numeric(t, h.lattice, default_lambda_grid(t.thresholds));
      const bool dense = h.total_dim() <= kDenseCap;
      const EigenSystem all = eigenpairs_below(h.matrix(), dense ? std::numeric_limits<double>::infinity() : hv.tau);
      std::vector<double> values(all.values.data(), all.values.data() + all.values.size());
      j["hvz"] = report::to_json(hv);
      j["thresholds"] = report::to_json(t);
      if (std::isfinite(hv.tau)) j["bound_states"] = report::to_json(bound_states(h, hv.tau, e, t.thresholds));
      j["eigenvalues_scope"] = dense ? "all" : "below_tau_hvz";
      j["eigenvalue_count"] = values.size();
      j["rho_hat_max_discrepancy"] = rho.max_discrepancy;
      emit("spectrum.json", j);
      emit_text("eigenvalues.csv", report::eigenvalues_csv(values));
      rho_files(rho);
    } else if (o_.command == "mourre") {
      const double e = eps(m, j);
      const ThresholdReport t = threshold_set_numeric(h, e);
      const MourreReport r = mourre_check(h, t.thresholds, o_.lambda, o_.delta);
      j["thresholds"] = t.thresholds.points();
      j.update(report::to_json(r));
      const HvzReport hv = hvz_tau(h);
      if (std::isfinite(hv.tau)) j["virial"] = report::to_json(virial_check(h, eigenpairs_below(h.matrix(), hv.tau)));
      emit("mourre.json", j);
    } else {
      throw Failure{2, "usage", "unknown command '" + o_.command + "'", {}};
    }
  }

  int algebra(const GroupConfig& g) {
    json j = header("algebra-verify");
    const SuiteReport suite = verify_group_identities(g.group, g.suite);
    j["group"] = report::to_json(suite);
    std::vector<IdentityCheck> checks = suite.checks;
    bool ok = suite.passed();
    if (g.model) {
      const ModelReport mr = verify_model(*g.model, g.model_options);
      j["model"] = report::to_json(mr);
      checks.insert(checks.end(), mr.checks.begin(), mr.checks.end());
      ok = ok && mr.passed();
    }
    j["passed"] = ok;
    emit("algebra.json", j);
    emit_text("checks.csv", report::checks_csv(checks));
    return ok ? 0 : 1;
  }

  const Options& o_;
  std::ostream& out_;
  std::string bytes_;
  std::vector<std::string> outputs_;
};

void print_error(std::ostream& err, const Failure& f) {
  json j = {{"schema_version", kSchemaVersion}, {"error", {{"type", f.type}, {"message", f.message}}}};
  if (!f.diagnostics.empty()) j["error"]["diagnostics"] = report::to_json(f.diagnostics);
  err << j.dump() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Semilattice-graded many-body Hamiltonians", "slat"};
  app.add_option("command", o.command, "validate|spectrum|hvz|thresholds|mourre|algebra-verify")
      ->required()
      ->check(CLI::IsMember({"validate", "spectrum", "hvz", "thresholds", "mourre", "algebra-verify"}));
  app.add_option("config", o.config, "JSON configuration")->required();
  app.add_option("--out", o.out, "output directory");
  app.add_option("--eps", o.eps, "bound-state separation; default 10x the refinement drift");
  app.add_option("--lambda", o.lambda, "Mourre window center");
  app.add_option("--delta", o.delta, "Mourre window half-width");
  app.add_flag_function("--version", [&](std::int64_t) {
    out << kToolVersion << "\n";
    throw CLI::Success();
  });

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::Success&) {
    return 0;
  } catch (const CLI::ParseError& e) {
    print_error(err, {2, "usage", e.what(), {}});
    return 2;
  }

  try {
    return Run(o, out).go();
  } catch (const Failure& f) {
    print_error(err, f);
    return f.code;
  } catch (const InputError& e) {
    print_error(err, {2, "input_error", e.what(), {}});
    return 2;
  } catch (const ModelNotNR& e) {
    print_error(err, {1, "model_not_nr", e.what(), {}});
  } catch (const InternalError& e) {
    print_error(err, {1, "internal_error", e.what(), {}});
  } catch (const PreconditionViolation& e) {
    print_error(err, {1, "precondition_violation", e.what(), {}});
  } catch (const InvalidArgument& e) {
    print_error(err, {1, "invalid_argument", e.what(), {}});
  } catch (const std::exception& e) {
    print_error(err, {1, "error", e.what(), {}});
  }
  return 1;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace slat::cli

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "config.h"
#include "experiments.h"
#include "manifest.h"
#include "roughwave/errors.h"

#ifndef ROUGHWAVE_VERSION
#define ROUGHWAVE_VERSION "unknown"
#endif

namespace rc = roughwave::cli;

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::optional<long long> seed;
  std::optional<int> resolution;
  std::optional<int> jobs;
  bool strict_paper = false;
};

// Command-line overrides land in the user config so they are hashed and
// echoed like any other setting.
nlohmann::json UserConfig(const Flags& f) {
  nlohmann::json user = f.config.empty() ? nlohmann::json::object() : rc::LoadConfig(f.config);
  if (!user.is_object()) throw rc::ConfigError("config must be an object of sections");
  if (f.seed) user["experiment"]["seed"] = *f.seed;
  if (f.jobs) user["experiment"]["jobs"] = *f.jobs;
  if (f.resolution) user["numerics"]["resolution"] = *f.resolution;
  return user;
}

int Run(const std::string& kind, const Flags& flags) {
  const bool selftest = kind == "selftest";
  const nlohmann::json config = rc::Resolve(UserConfig(flags), kind);
  const int jobs = config["experiment"]["jobs"];
  if (jobs < 1) throw rc::ConfigError("[experiment] jobs must be >= 1");
  if (flags.out.empty() && !selftest) throw rc::ConfigError("--out is required");

  std::optional<rc::OutputWriter> out;
  if (!flags.out.empty()) {
    out.emplace(flags.out, rc::Provenance{ROUGHWAVE_VERSION, rc::ConfigHash(config),
                                          config["experiment"]["seed"].get<long long>(), kind});
  }
  auto finish = [&](int code, const std::string& status) {
    if (out) out->Finish({{"status", status}, {"exit_code", code}});
    return code;
  };
  try {
    if (selftest) {
      const int code = rc::RunSelftest(jobs, out ? &*out : nullptr);
      return finish(code, code ? "acceptance failure" : "ok");
    }
    const int code = rc::RunExperiment({config, jobs, flags.strict_paper}, *out);
    return finish(code, code ? "numeric failure" : "ok");
  } catch (const rc::ConfigError& e) {
    finish(rc::kConfigError, e.what());
    throw;
  } catch (const roughwave::NumericError& e) {
    finish(rc::kNumericError, e.what());
    throw;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wave equations with rough coefficients: observability experiments"};
  app.set_version_flag("--version", std::string("roughwave ") + ROUGHWAVE_VERSION);
  app.require_subcommand(1);
  Flags flags;
  const char* kinds[][2] = {
      {"simulate", "evolve one datum and record traces and energies"},
      {"quasimode", "solve the per-interval quasimodes of a counterexample density"},
      {"modulus", "moduli of continuity, total variation and dyadic blocks"},
      {"counterexample", "observability quotients along the quasimode sequence"},
      {"observability", "ensemble estimates of the observability constant"},
      {"control", "HUM boundary control by conjugate gradients"},
      {"report", "aggregate the manifests below [report] input"},
      {"selftest", "reduced acceptance suite"},
  };
  for (const auto& [name, help] : kinds) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", flags.config, "INI or JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--out", flags.out, "output directory");
    sub->add_option("--seed", flags.seed, "ensemble and data seed");
    sub->add_option("--resolution", flags.resolution, "spatial resolution (power of two)");
    sub->add_option("--jobs", flags.jobs, "worker threads");
    sub->add_flag("--strict-paper", flags.strict_paper, "validate cond-N on paper-strict sequences");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? rc::kOk : rc::kConfigError;
  }

  const std::string kind = app.get_subcommands().front()->get_name();
  try {
    return Run(kind, flags);
  } catch (const rc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return rc::kConfigError;
  } catch (const roughwave::ScaleOutOfReach& e) {
    std::cerr << "scale out of reach: " << e.what() << "\n";
    return rc::kNumericError;
  } catch (const roughwave::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return rc::kNumericError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return rc::kFailure;
  }
}

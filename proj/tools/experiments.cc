#include "experiments.h"

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <tuple>

#include "acceptance.h"
#include "config.h"
#include "roughwave/coeff.h"
#include "roughwave/errors.h"
#include "roughwave/modulus.h"
#include "roughwave/numerics.h"
#include "roughwave/observability.h"
#include "roughwave/quasimodes.h"
#include "roughwave/sequences.h"
#include "roughwave/wavesim.h"
#include "svg.h"

namespace roughwave {
namespace cli {
namespace {

using nlohmann::json;

bool PowerOfTwo(long long n) { return n > 0 && (n & (n - 1)) == 0; }

std::vector<double> Grid(size_t count, double step, double offset = 0.0) {
  std::vector<double> x(count);
  for (size_t i = 0; i < count; ++i) x[i] = offset + i * step;
  return x;
}

// Library argument checks surface as config errors: the run never started.
template <typename F>
auto Validated(const std::string& what, F&& build) {
  try {
    return build();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(what + ": " + e.what());
  } catch (const std::domain_error& e) {
    throw ConfigError(what + ": " + e.what());
  } catch (const std::out_of_range& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

struct Counterexample {
  coeff::CounterexampleParams params;
  coeff::PairMap pairs;
  coeff::Coefficient omega;
};

coeff::CounterexampleParams Sequences(const json& cfg, coeff::SequenceMode mode) {
  const auto& s = cfg["sequence"];
  return Validated("[sequence]", [&] {
    return coeff::MakeSequences(coeff::DescriptorFromName(s["descriptor"]), s["N"], s["j_lo"],
                                s["j_hi"], mode, coeff::ReferenceM(), s["j0"]);
  });
}

Counterexample BuildCounterexample(const json& cfg) {
  const auto mode = Validated("[sequence] mode", [&] {
    return coeff::SequenceModeFromString(cfg["sequence"]["mode"]);
  });
  auto params = Sequences(cfg, mode);
  for (const auto& r : params.records) {
    if (!std::isfinite(r.h) || r.h > double(cfg["counterexample"]["max_resolution"].get<int>())) {
      throw ScaleOutOfReach("h_" + std::to_string(r.j) + " = exp(" + std::to_string(r.log_h) +
                            ") is beyond any grid; paper-strict scales can only be validated");
    }
  }
  auto pairs = Validated("[sequence]", [&] { return coeff::BuildPairs(params); });
  auto omega = coeff::MakeCounterexampleDensity(params, pairs);
  return {std::move(params), std::move(pairs), std::move(omega)};
}

coeff::Coefficient BuildCoefficient(const json& cfg) {
  const auto& c = cfg["coefficient"];
  const std::string family = c["family"];
  if (family == "counterexample") return BuildCounterexample(cfg).omega;
  coeff::BaselineParams p;
  p.value = c["value"];
  p.base = c["base"];
  p.amplitude = c["amplitude"];
  p.center = c["center"];
  p.exponent = c["exponent"];
  p.n_max = c["n_max"];
  p.weight_power = c["weight_power"];
  p.frequency = c["frequency"];
  p.phase = c["phase"];
  return Validated("[coefficient]", [&] {
    auto omega = coeff::MakeBaseline(family, p);
    omega.CheckHyperbolicity();
    return omega;
  });
}

int Resolution(const json& cfg, const char* section = "numerics") {
  const int n = cfg[section]["resolution"];
  if (!PowerOfTwo(n) || n < 16) {
    throw ConfigError(std::string("[") + section + "] resolution must be a power of two >= 16");
  }
  return n;
}

double Cfl(const json& cfg) {
  const double cfl = cfg["numerics"]["cfl"];
  if (!(cfl > 0 && cfl <= 1)) throw ConfigError("[numerics] cfl must lie in (0, 1]");
  return cfl;
}

struct Horizon {
  double T = 0.0;
  double T_omega = 0.0;
  bool admissible = false;
};

// T = 0 selects 2 T_omega + 0.5.
Horizon TimeHorizon(const json& cfg, const coeff::Coefficient& omega) {
  Horizon h;
  h.T_omega = coeff::ComputeTravelTime(omega).value;
  const double T = cfg["numerics"]["T"];
  if (T < 0) throw ConfigError("[numerics] T must be positive (0 selects 2 T_omega + 0.5)");
  h.T = T > 0 ? T : 2 * h.T_omega + 0.5;
  h.admissible = h.T > 2 * h.T_omega;
  if (!h.admissible) {
    std::cerr << "warning: T = " << h.T << " does not exceed 2 T_omega = " << 2 * h.T_omega << "\n";
  }
  return h;
}

observability::Datum MakeDatum(const json& cfg, int n) {
  const auto& d = cfg["data"];
  const std::string profile = d["profile"];
  if (profile == "sine") {
    return observability::SineMode(n, d["k"], d["amplitude"], d["velocity"]);
  }
  if (profile == "packet") return observability::Packet(n, d["center"], d["width"], d["k"]);
  if (profile == "random") {
    return observability::RandomMixture(n, d["cutoff"], cfg["experiment"]["seed"].get<std::uint64_t>());
  }
  throw ConfigError("[data] unknown profile '" + profile + "' (sine, packet, random)");
}

void MaybePlot(const json& cfg, OutputWriter& out, const std::string& name, const Plot& plot) {
  if (cfg["experiment"]["plots"]) out.Svg(name, RenderSvg(plot));
}

Plot CoefficientPlot(const coeff::Coefficient& omega) {
  const int n = 2048;
  const auto x = Grid(n + 1, 1.0 / n);
  return {"coefficient", "x", "omega", false, false, {{coeff::ToString(omega.kind()), x, omega.Sample(n)}}};
}

// Paper-strict sequences for the configured descriptor and N; fails the run
// when any cond-N inequality does not hold.
void ValidateStrict(const json& cfg, OutputWriter& out) {
  const auto strict = Sequences(cfg, coeff::SequenceMode::kPaperStrict);
  std::ostringstream csv;
  csv.precision(12);
  csv << "j,log_h,log_eps,eps_small,tail,head,log_margin_eps,log_margin_tail,log_margin_head\n";
  bool all = true;
  for (size_t i = 0; i < strict.flags.size(); ++i) {
    const auto& f = strict.flags[i];
    const auto& r = strict.record(f.j);
    csv << f.j << ',' << r.log_h << ',' << r.log_eps << ',' << f.eps_small << ',' << f.tail << ','
        << f.head << ',' << f.log_margin_eps << ',' << f.log_margin_tail << ',' << f.log_margin_head
        << '\n';
    all = all && f.all();
  }
  out.Csv("cond_n.csv", csv.str());
  out.Json("strict_sequences.json", coeff::ToJson(strict));
  if (!all) {
    throw ConfigError("paper-strict sequences violate cond-N for N = " +
                      std::to_string(cfg["sequence"]["N"].get<int>()) + "; see cond_n.csv");
  }
}

int Simulate(const RunContext& ctx, OutputWriter& out) {
  const auto& cfg = ctx.config;
  const auto omega = BuildCoefficient(cfg);
  const int n = Resolution(cfg);
  const auto horizon = TimeHorizon(cfg, omega);
  const auto datum = MakeDatum(cfg, n);

  wavesim::EvolveOptions opts;
  opts.resolution = n;
  opts.cfl = Cfl(cfg);
  opts.energy_orders = cfg["numerics"]["energy_orders"];
  opts.snapshot_stride = cfg["numerics"]["snapshot_stride"];
  const auto traj = Validated("simulate", [&] {
    return wavesim::EvolveNodal(omega, datum.u0, datum.u1, horizon.T, opts);
  });

  json summary = wavesim::Summary(traj);
  summary["omega"] = coeff::ToJson(omega);
  summary["datum"] = datum.label;
  summary["T_omega"] = horizon.T_omega;
  summary["admissible"] = horizon.admissible;
  std::vector<double> flux(traj.trace0.size());
  for (size_t l = 0; l < flux.size(); ++l) flux[l] = traj.trace0[l] * traj.trace0[l];
  summary["boundary_flux0"] = Trapezoid(flux, traj.dt);
  summary["initial_energy"] = 0.5 * observability::EnergyNorm(datum, omega);
  out.Json("summary.json", summary);
  out.Csv("traces.csv", wavesim::TracesCsv(traj));
  out.Csv("energy.csv", wavesim::EnergyCsv(traj));
  out.Csv("coefficient.csv", coeff::ToCsv(omega, std::min(n, 4096)));
  if (!traj.snapshots.empty()) out.Binary("snapshots.bin", wavesim::SnapshotBytes(traj));

  Plot traces{"boundary traces", "t", "u_x", false, false, {}};
  traces.series.push_back({"x = 0", traj.t, traj.trace0});
  traces.series.push_back({"x = 1", traj.t, traj.trace1});
  MaybePlot(cfg, out, "traces.svg", traces);
  Plot energy{"discrete energies", "t", "E_k / E_k(0)", false, false, {}};
  for (size_t k = 0; k < traj.energy.size(); ++k) {
    const auto& e = traj.energy[k];
    std::vector<double> rel(e.size());
    for (size_t l = 0; l < e.size(); ++l) rel[l] = e[l] / e.front();
    energy.series.push_back({"E_" + std::to_string(k), Grid(e.size(), traj.dt, traj.dt / 2), rel});
  }
  MaybePlot(cfg, out, "energy.svg", energy);
  MaybePlot(cfg, out, "coefficient.svg", CoefficientPlot(omega));
  return kOk;
}

int Quasimode(const RunContext& ctx, OutputWriter& out) {
  const auto& cfg = ctx.config;
  if (ctx.strict_paper) ValidateStrict(cfg, out);
  const auto ce = BuildCounterexample(cfg);
  quasimodes::SolveOptions so;
  so.tolerance = cfg["numerics"]["tolerance"];
  const auto sweep = quasimodes::BoundarySmallnessSweep(ce.params, ce.pairs, ce.omega, so, ctx.jobs);
  out.Csv("sweep.csv", quasimodes::SweepCsv(sweep));

  json modes = json::array();
  std::vector<double> h, extreme, closed, mass, b0, b1;
  for (const auto& row : sweep.rows) {
    const auto spec = quasimodes::SpecFor(ce.params, ce.pairs, row.j);
    const auto q = quasimodes::SolveQuasimode(ce.omega, spec, so);
    out.Csv("profile_" + std::to_string(row.j) + ".csv", quasimodes::ProfileCsv(q));
    json entry = quasimodes::ToJson(q);
    // Inside the active interval (Etilde) and across the flat region to x = 1 (E).
    const double in1 = q.x[q.Index(q.center)], in2 = q.x[q.Index(q.center + q.radius / 2)];
    const double out1 = q.x[q.Index(q.center + q.radius)], out2 = q.x.back();
    for (const auto& [name, a, b] : {std::tuple{"interior", in1, in2}, std::tuple{"exterior", out1, out2}}) {
      const auto g = quasimodes::EnergyGronwallCheck(q, ce.omega, a, b);
      entry["gronwall"][name] = {{"x1", g.x1},
                                 {"x2", g.x2},
                                 {"e_ratio", g.e_ratio},
                                 {"e_exponent", g.e_exponent},
                                 {"et_ratio", g.et_ratio},
                                 {"et_exponent", g.et_exponent},
                                 {"et_checked", g.et_checked}};
    }
    modes.push_back(entry);
    h.push_back(row.h);
    extreme.push_back(row.extreme_energy);
    closed.push_back(row.extreme_closed_form);
    mass.push_back(row.interior_mass);
    b0.push_back(row.boundary0);
    b1.push_back(row.boundary1);
  }
  out.Json("quasimodes.json", {{"sequences", coeff::ToJson(ce.params)},
                               {"quasimodes", modes},
                               {"truncated_at", sweep.truncated_at},
                               {"truncation_reason", sweep.truncation_reason}});
  Plot p{"quasimode energies", "h", "energy", true, true, {}};
  p.series.push_back({"extreme", h, extreme, true});
  p.series.push_back({"exp(-c eps h r)", h, closed});
  p.series.push_back({"interior mass", h, mass, true});
  p.series.push_back({"E(0)", h, b0, true});
  p.series.push_back({"E(1)", h, b1, true});
  MaybePlot(cfg, out, "quasimodes.svg", p);
  if (sweep.truncated_at) {
    std::cerr << "sweep truncated at j = " << sweep.truncated_at << ": " << sweep.truncation_reason << "\n";
    return kNumericError;
  }
  return kOk;
}

modulus::Samples ReadSamples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("[modulus] cannot read input " + path);
  modulus::Samples s;
  std::vector<double> x;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    double a, b;
    char comma;
    if (!(row >> a >> comma >> b) || comma != ',') continue;  // header row
    x.push_back(a);
    s.values.push_back(b);
  }
  const size_t n = x.size();
  if (n < 2 || !PowerOfTwo(static_cast<long long>(n) - 1)) {
    throw ConfigError("[modulus] input needs 2^p + 1 rows on a uniform grid of [0, 1]");
  }
  for (size_t i = 0; i < n; ++i) {
    if (std::abs(x[i] - double(i) / (n - 1)) > 1e-9) {
      throw ConfigError("[modulus] input grid is not x_i = i / " + std::to_string(n - 1));
    }
  }
  return s;
}

int Modulus(const RunContext& ctx, OutputWriter& out) {
  const auto& cfg = ctx.config;
  const std::string input = cfg["modulus"]["input"];
  const int intervals = cfg["modulus"]["intervals"];
  if (input.empty() && (!PowerOfTwo(intervals) || intervals < 64)) {
    throw ConfigError("[modulus] intervals must be a power of two >= 64");
  }
  json described;
  modulus::Samples samples;
  if (input.empty()) {
    const auto omega = BuildCoefficient(cfg);
    samples = modulus::SampleFunction([&omega](double x) { return omega(x); }, intervals);
    described = coeff::ToJson(omega);
    MaybePlot(cfg, out, "coefficient.svg", CoefficientPlot(omega));
  } else {
    samples = ReadSamples(input);
    described = {{"input", input}};
  }
  const int j_max = cfg["modulus"]["j_max"];
  const auto report = Validated("[modulus]", [&] { return modulus::AnalyzeModulus(samples); });
  const auto spectrum = Validated("[modulus] j_max", [&] { return modulus::DyadicBlocks(samples.values, j_max); });
  const auto cls = modulus::ClassifyModulus(report, spectrum);

  json body = modulus::ToJson(report);
  body["classification"] = modulus::ToJson(cls);
  body["coefficient"] = described;
  body["besov"] = {{"b1_inf_inf", spectrum.besov_1_inf_inf},
                   {"b1_1_inf", spectrum.besov_1_1_inf},
                   {"b1_2_inf", spectrum.besov_1_2_inf},
                   {"b1log_inf_inf", spectrum.besov_1log_inf_inf}};
  out.Json("modulus.json", body);
  out.Csv("spectrum.csv", modulus::SpectrumCsv(spectrum));
  std::ostringstream csv;
  csv.precision(17);
  csv << "x,f\n";
  for (int i = 0; i <= samples.intervals(); ++i) csv << i * samples.step() << ',' << samples.values[i] << '\n';
  out.Csv("coefficient.csv", csv.str());

  Plot p{"dyadic blocks", "j", "2^j |Delta_j f|", false, true, {}};
  std::vector<double> j, s1, s2, sinf;
  for (size_t i = 0; i < spectrum.j.size(); ++i) {
    if (spectrum.j[i] < 0) continue;
    const double w = std::ldexp(1.0, spectrum.j[i]);
    j.push_back(spectrum.j[i]);
    s1.push_back(w * spectrum.norm1[i]);
    s2.push_back(w * spectrum.norm2[i]);
    sinf.push_back(w * spectrum.norm_inf[i]);
  }
  p.series.push_back({"L1", j, s1});
  p.series.push_back({"L2", j, s2});
  p.series.push_back({"Linf", j, sinf});
  MaybePlot(cfg, out, "spectrum.svg", p);
  std::cout << "class: " << cls.label << "\n";
  return kOk;
}

int Counterexample(const RunContext& ctx, OutputWriter& out) {
  const auto& cfg = ctx.config;
  if (ctx.strict_paper) ValidateStrict(cfg, out);
  const auto ce = BuildCounterexample(cfg);
  out.Json("sequences.json", coeff::ToJson(ce.params));

  observability::SweepOptions so;
  so.T = cfg["numerics"]["T"];
  so.m_list = cfg["counterexample"]["m_list"].get<std::vector<int>>();
  so.min_resolution = cfg["counterexample"]["min_resolution"];
  so.max_resolution = cfg["counterexample"]["max_resolution"];
  so.quasimode.tolerance = cfg["numerics"]["tolerance"];
  so.jobs = ctx.jobs;
  if (so.m_list.empty()) throw ConfigError("[counterexample] m_list is empty");

  if (ce.params.descriptor.type == coeff::ModulusDescriptor::Type::kLambda) {
    const auto rows = observability::RunLambdaSweep(ce.params, ce.pairs, so);
    std::ostringstream csv;
    csv.precision(12);
    csv << "j,h,Q0,K,log_h\n";
    json list = json::array();
    for (const auto& r : rows) {
      csv << r.j << ',' << r.h << ',' << r.Q0 << ',' << r.K << ',' << r.log_h << '\n';
      list.push_back({{"j", r.j}, {"h", r.h}, {"Q0", r.Q0}, {"K", r.K}, {"log_h", r.log_h}});
    }
    out.Csv("lambda.csv", csv.str());
    out.Json("lambda.json", {{"rows", list}});
    return kOk;
  }

  const auto table = Validated("[counterexample]", [&] {
    return observability::RunCounterexampleSweep(ce.params, ce.pairs, ce.omega, so);
  });
  out.Csv("divergence.csv", observability::DivergenceCsv(table));
  json rows = json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"j", r.j},
                    {"h", r.h},
                    {"eps", r.eps},
                    {"Q", r.Q},
                    {"denominator", r.denominator},
                    {"numerator", r.numerator},
                    {"boundary_smallness", r.boundary_smallness},
                    {"denominator_bound", r.denominator_bound},
                    {"boundary_residual", r.boundary_residual},
                    {"incompatible_start", r.incompatible_start},
                    {"resolution", r.resolution}});
  }
  out.Json("divergence.json", {{"m_list", table.m_list},
                               {"T", table.T},
                               {"rows", rows},
                               {"growth", table.growth},
                               {"truncated_at", table.truncated_at},
                               {"truncation_reason", table.truncation_reason}});
  Plot p{"quotient along the sequence", "j", "Q_m", false, true, {}};
  for (size_t k = 0; k < table.m_list.size(); ++k) {
    std::vector<double> j, q;
    for (const auto& r : table.rows) {
      j.push_back(r.j);
      q.push_back(r.Q[k]);
    }
    p.series.push_back({"m = " + std::to_string(table.m_list[k]), j, q});
  }
  MaybePlot(cfg, out, "divergence.svg", p);
  MaybePlot(cfg, out, "coefficient.svg", CoefficientPlot(ce.omega));
  if (table.truncated_at) {
    std::cerr << "sweep truncated at j = " << table.truncated_at << ": " << table.truncation_reason << "\n";
    return kNumericError;
  }
  return kOk;
}

int Observability(const RunContext& ctx, OutputWriter& out) {
  const auto& cfg = ctx.config;
  const auto& o = cfg["observability"];
  const auto omega = BuildCoefficient(cfg);
  const auto horizon = TimeHorizon(cfg, omega);
  observability::ReportSpec spec;
  spec.cutoffs = o["cutoffs"].get<std::vector<int>>();
  spec.m_max = o["m_max"];
  spec.betas = o["betas"].get<std::vector<double>>();
  spec.gramian_cutoff = o["gramian_cutoff"];
  spec.ensemble.random_members = o["random_members"];
  spec.ensemble.adversarial = o["adversarial"];
  spec.ensemble.seed = cfg["experiment"]["seed"].get<std::uint64_t>();
  if (spec.cutoffs.empty()) throw ConfigError("[observability] cutoffs is empty");
  observability::QuotientOptions qo;
  qo.resolution = Resolution(cfg);
  qo.cfl = Cfl(cfg);
  for (int c : spec.cutoffs) {
    if (c < 1 || 2 * c > qo.resolution) {
      throw ConfigError("[observability] cutoffs must lie in [1, resolution / 2]");
    }
  }
  const auto report = Validated("[observability]", [&] {
    return observability::BuildReport(omega, horizon.T, spec, qo, ctx.jobs);
  });
  out.Json("report.json", observability::ToJson(report));

  std::ostringstream csv;
  csv.precision(12);
  csv << "cutoff,m,beta,c_obs,worst,members,unbounded\n";
  std::map<std::string, Series> curves;
  for (const auto& c : report.constants) {
    csv << c.cutoff << ',' << c.m << ',' << c.beta << ',' << c.c_obs << ',' << c.worst << ','
        << c.members << ',' << c.unbounded << '\n';
    const std::string name = c.beta >= 0 ? "beta = " + std::to_string(c.beta).substr(0, 4)
                                         : "m = " + std::to_string(c.m);
    curves[name].name = name;
    curves[name].x.push_back(c.cutoff);
    curves[name].y.push_back(c.c_obs);
  }
  out.Csv("constants.csv", csv.str());
  Plot p{"observability constant", "mode cutoff", "C_obs", true, true, {}};
  for (auto& [_, s] : curves) p.series.push_back(std::move(s));
  MaybePlot(cfg, out, "constants.svg", p);
  return kOk;
}

int Control(const RunContext& ctx, OutputWriter& out) {
  const auto& cfg = ctx.config;
  const auto& c = cfg["control"];
  const auto omega = BuildCoefficient(cfg);
  const auto horizon = TimeHorizon(cfg, omega);
  observability::ControlOptions co;
  co.resolution = Resolution(cfg, "control");
  co.cfl = Cfl(cfg);
  co.m = c["m"];
  co.tolerance = c["tolerance"];
  co.max_iterations = c["max_iterations"];
  if (co.m < 0) throw ConfigError("[control] m must be >= 0");
  const auto datum = MakeDatum(cfg, co.resolution);
  const auto res = Validated("[control]", [&] {
    return observability::HumControl(omega, datum.u0, datum.u1, horizon.T, co);
  });
  json body = observability::ToJson(res);
  body["omega"] = coeff::ToJson(omega);
  body["datum"] = datum.label;
  out.Json("control.json", body);
  std::ostringstream csv;
  csv.precision(17);
  csv << "t,f\n";
  for (size_t l = 0; l < res.f.size(); ++l) csv << l * res.dt << ',' << res.f[l] << '\n';
  out.Csv("control.csv", csv.str());
  out.Csv("history.csv", observability::HistoryCsv(res));
  MaybePlot(cfg, out, "control.svg",
            {"boundary control", "t", "f", false, false, {{"f", Grid(res.f.size(), res.dt), res.f}}});
  std::vector<double> it(res.residual_history.size());
  for (size_t i = 0; i < it.size(); ++i) it[i] = double(i);
  MaybePlot(cfg, out, "history.svg",
            {"conjugate gradients", "iteration", "relative residual", false, true,
             {{"residual", it, res.residual_history}}});
  if (!res.controlled) std::cerr << "warning: not controlled within " << co.max_iterations << " iterations\n";
  return kOk;
}

int Report(const RunContext& ctx, OutputWriter& out) {
  const std::string input = ctx.config["report"]["input"];
  if (input.empty()) throw ConfigError("[report] input names the directory to aggregate");
  const auto agg = Validated("[report] input", [&] { return AggregateManifests(input); });
  out.Json("report.json", agg);
  for (const auto& m : agg["manifests"]) {
    if (!m["intact"].get<bool>()) {
      std::cerr << "warning: checksum mismatch in " << m["directory"].get<std::string>() << "\n";
    }
  }
  return kOk;
}

}  // namespace

int RunExperiment(const RunContext& ctx, OutputWriter& out) {
  const std::string kind = ctx.config["experiment"]["kind"];
  out.Text("config.ini", ToText(ctx.config));
  out.Json("config.json", ctx.config);
  if (kind == "simulate") return Simulate(ctx, out);
  if (kind == "quasimode") return Quasimode(ctx, out);
  if (kind == "modulus") return Modulus(ctx, out);
  if (kind == "counterexample") return Counterexample(ctx, out);
  if (kind == "observability") return Observability(ctx, out);
  if (kind == "control") return Control(ctx, out);
  if (kind == "report") return Report(ctx, out);
  throw ConfigError("unknown experiment kind '" + kind + "'");
}

int RunSelftest(int jobs, OutputWriter* out) {
  acceptance::Options o;
  o.reduced = true;
  o.jobs = jobs;
  const auto results = acceptance::RunAll(o, [](const acceptance::CriterionResult& r) {
    std::cout << acceptance::FormatLine(r) << std::endl;
  });
  int failed = 0;
  for (const auto& r : results) failed += !r.passed;
  std::cout << results.size() - failed << "/" << results.size() << " criteria passed\n";
  if (out) out->Json("selftest.json", {{"criteria", acceptance::ToJson(results)}, {"failed", failed}});
  return failed ? kAcceptanceFailure : kOk;
}

}  // namespace cli
}  // namespace roughwave

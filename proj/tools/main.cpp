#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "cospec/report.hpp"

using namespace cospec;

namespace {

struct GlobalOpts {
  std::uint64_t seed = 1;
  long iters = 100000;
  int renorm = 10;
  double tol = 1e-9;
  std::string out;
  std::string format = "json";
  int threads = 1;
  bool force_float = false;
};

Json config_echo(const GlobalOpts& g) {
  Json j;
  j["seed"] = g.seed;
  j["iters"] = g.iters;
  j["renorm"] = g.renorm;
  j["tol"] = g.tol;
  j["format"] = g.format;
  j["threads"] = g.threads;
  j["mode"] = g.force_float ? "float" : "exact";
  return j;
}

int emit_report(const GlobalOpts& g, const std::string& command, Json config, Json results,
                std::chrono::steady_clock::time_point started, int exit_code) {
  Json j;
  j["schema"] = kReportSchema;
  j["version"] = kVersion;
  j["command"] = command;
  j["config"] = std::move(config);
  j["results"] = std::move(results);
  auto elapsed = std::chrono::steady_clock::now() - started;
  j["wall_time_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
  std::string text = j.dump(2) + "\n";
  if (g.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(g.out);
    if (!f) {
      std::cerr << "cannot write report to " << g.out << "\n";
      return 2;
    }
    f << text;
  }
  return exit_code;
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

std::vector<long> parse_long_list(const std::string& csv) {
  std::vector<long> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stol(item));
  return out;
}

std::vector<Rational> parse_rational_list(const std::string& csv) {
  std::vector<Rational> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(rational_from_string(item));
  return out;
}

CocycleSpec maybe_float(const SpecFile& file, bool force_float) {
  if (!force_float || !file.spec.exact()) return file.spec;
  std::vector<CMat> mats = file.spec.matrices();
  CocycleSpec spec(std::move(mats), file.spec.measure());
  spec.set_metric_theta(file.spec.metric_theta());
  if (file.spec.perturbation()) spec.set_perturbation(*file.spec.perturbation());
  return spec;
}

int cmd_simplicity(const GlobalOpts& g, const std::string& spec_path) {
  auto started = std::chrono::steady_clock::now();
  Json config = config_echo(g);
  config["spec"] = spec_path;
  SpecFile file = load_spec_file(spec_path);
  if (!file.periodic_word || !file.homoclinic_insert) {
    std::cerr << "spec file must provide periodic_point and homoclinic_point\n";
    return 2;
  }
  CocycleSpec spec = maybe_float(file, g.force_float);
  SimplicityVerdict verdict =
      check_simple(spec, *file.periodic_word, *file.homoclinic_insert, file.homoclinic_l);
  int code = verdict.simple ? 0 : 1;
  return emit_report(g, "simplicity", config, to_json(verdict), started, code);
}

struct ZorichArgs {
  int d = 2;
  std::string top, bottom;
  int streams = 1;
  int retries = 3;
  std::string trace_path;
  std::string orbit_trace_path;
  std::string batch_csv_path;
};

int cmd_zorich(const GlobalOpts& g, const ZorichArgs& args) {
  auto started = std::chrono::steady_clock::now();
  PermutationPair pair = args.top.empty()
                             ? PermutationPair::reversal(args.d)
                             : PermutationPair(parse_int_list(args.top), parse_int_list(args.bottom));
  if (!pair.irreducible()) {
    std::cerr << "reducible permutation pair\n";
    return 2;
  }
  Json config = config_echo(g);
  config["top"] = pair.top;
  config["bottom"] = pair.bottom;
  config["streams"] = args.streams;

  ZorichOptions opts;
  opts.renorm_period = g.renorm;
  opts.record_trace = !args.trace_path.empty();

  auto run_stream = [&](int stream) {
    for (int attempt = 0;; ++attempt) {
      try {
        return estimate_zorich_spectrum(pair, g.iters,
                                        RandomSource(g.seed, stream + 1000 * attempt), opts);
      } catch (const TieError&) {
        if (attempt >= args.retries) throw;
      }
    }
  };

  std::vector<ZorichSpectrumResult> results(args.streams);
  if (g.threads > 1 && args.streams > 1) {
    std::vector<std::future<ZorichSpectrumResult>> futures;
    for (int s = 0; s < args.streams; ++s)
      futures.push_back(std::async(std::launch::async, run_stream, s));
    for (int s = 0; s < args.streams; ++s) results[s] = futures[s].get();
  } else {
    for (int s = 0; s < args.streams; ++s) results[s] = run_stream(s);
  }

  Json out;
  out["genus"] = results[0].genus;
  Json streams = Json::array();
  for (const auto& r : results) streams.push_back(to_json(r));
  out["streams"] = streams;
  int dim = static_cast<int>(results[0].estimate.exponents.size());
  std::vector<double> pooled(dim, 0.0), pooled_se(dim, 0.0);
  for (const auto& r : results)
    for (int i = 0; i < dim; ++i) {
      pooled[i] += r.estimate.exponents[i] / args.streams;
      pooled_se[i] += r.estimate.se[i] * r.estimate.se[i];
    }
  for (int i = 0; i < dim; ++i) pooled_se[i] = std::sqrt(pooled_se[i]) / args.streams;
  out["pooled_exponents"] = pooled;
  out["pooled_se"] = pooled_se;
  bool symmetric = true;
  for (const auto& r : results) symmetric = symmetric && r.symmetric();
  out["symmetric"] = symmetric;

  if (!args.trace_path.empty()) {
    std::ofstream f(args.trace_path);
    f << zorich_trace_csv(results[0].trace);
    out["trace_csv"] = args.trace_path;
  }
  if (!args.orbit_trace_path.empty()) {
    std::ofstream f(args.orbit_trace_path);
    f << zorich_orbit_trace_csv(pair, std::min<long>(g.iters, 100000), RandomSource(g.seed, 0));
    out["orbit_trace_csv"] = args.orbit_trace_path;
  }
  if (!args.batch_csv_path.empty()) {
    std::ofstream f(args.batch_csv_path);
    f << batch_exponents_csv(results[0].estimate);
    out["batch_csv"] = args.batch_csv_path;
  }
  if (g.format == "csv") {
    // csv reports carry the per-batch exponent table
    if (g.out.empty()) {
      std::cout << batch_exponents_csv(results[0].estimate);
    } else {
      std::ofstream f(g.out);
      f << batch_exponents_csv(results[0].estimate);
    }
    return 0;
  }
  return emit_report(g, "zorich", config, out, started, 0);
}

struct DiracArgs {
  std::string spec_path;
  int zorich_d = 0;
  int ell = 1;
  int steps = 200;
  int atoms = 50;
  double threshold = 1e-6;
  std::string trace_path;
};

int cmd_dirac(const GlobalOpts& g, const DiracArgs& args) {
  auto started = std::chrono::steady_clock::now();
  Json config = config_echo(g);
  config["ell"] = args.ell;
  config["steps"] = args.steps;
  config["atoms"] = args.atoms;
  config["threshold"] = args.threshold;

  int d;
  auto make_stream = [&](std::uint64_t stream_id) -> BackwardStream {
    if (args.zorich_d > 0)
      return zorich_backward_stream(PermutationPair::reversal(args.zorich_d),
                                    RandomSource(g.seed, stream_id), args.steps);
    SpecFile file = load_spec_file(args.spec_path);
    return spec_backward_stream(maybe_float(file, g.force_float),
                                RandomSource(g.seed, stream_id));
  };
  if (args.zorich_d > 0) {
    d = args.zorich_d;
    config["zorich_d"] = args.zorich_d;
  } else {
    SpecFile file = load_spec_file(args.spec_path);
    d = file.spec.dim();
    config["spec"] = args.spec_path;
  }

  RandomSource atom_rng(g.seed, 777);
  DiracTrace dirac = dirac_convergence_experiment(make_stream(1), d, args.ell, args.steps,
                                                  args.atoms, atom_rng, args.threshold);
  EccentricityTrace ecc = eccentricity_divergence(make_stream(1), d, args.ell, args.steps);
  TrackingTrace tracking = most_expanded_tracking(make_stream(1), d, args.ell, args.steps);

  Json out;
  out["dirac"] = to_json(dirac);
  out["log_eccentricity_slope"] = ecc.slope;
  out["log_eccentricity_slope_se"] = ecc.slope_se;
  double final_increment = tracking.fs_increments.empty() ? 0.0 : tracking.fs_increments.back();
  out["tracking_final_increment"] = final_increment;
  out["tracking_matches_dirac"] =
      dirac.converged && fs_distance(tracking.points.back(), dirac.final_location) < 1e-3;
  if (!args.trace_path.empty()) {
    std::ofstream f(args.trace_path);
    f << dirac_trace_csv(dirac, ecc, tracking);
    out["trace_csv"] = args.trace_path;
  }
  if (g.format == "csv") {
    if (g.out.empty()) {
      std::cout << dirac_trace_csv(dirac, ecc, tracking);
    } else {
      std::ofstream f(g.out);
      f << dirac_trace_csv(dirac, ecc, tracking);
    }
    return 0;
  }
  return emit_report(g, "dirac", config, out, started, 0);
}

int cmd_vandermonde(const GlobalOpts& g, const std::string& m_csv, const std::string& x_csv) {
  auto started = std::chrono::steady_clock::now();
  Json config = config_echo(g);
  config["m"] = m_csv;
  config["x"] = x_csv;
  VandermondeResult res = vandermonde(parse_long_list(m_csv), parse_rational_list(x_csv));
  return emit_report(g, "vandermonde", config, to_json(res), started, 0);
}

struct InduceArgs {
  std::string spec_path;
  std::string base = "0";
  int max_return = 20;
};

int cmd_induce(const GlobalOpts& g, const InduceArgs& args) {
  auto started = std::chrono::steady_clock::now();
  Json config = config_echo(g);
  config["spec"] = args.spec_path;
  config["base"] = args.base;
  config["max_return"] = args.max_return;
  SpecFile file = load_spec_file(args.spec_path);
  CocycleSpec spec = maybe_float(file, g.force_float);
  Word base{parse_int_list(args.base)};
  InducedSystem ind = build_induced(spec.measure(), base, args.max_return);
  CocycleSpec induced = induce_cocycle(spec, ind);
  SpectrumOptions opts;
  opts.renorm_period = g.renorm;
  InducingReport rep =
      verify_inducing_rescale(spec, induced, ind, g.iters, RandomSource(g.seed, 0), opts);
  Json out;
  out["induced_system"] = to_json(ind);
  out["rescale"] = to_json(rep);
  return emit_report(g, "induce", config, out, started, 0);
}

struct HolonomyArgs {
  std::string spec_path;
  int cap = 300;
};

int cmd_holonomy(const GlobalOpts& g, const HolonomyArgs& args) {
  auto started = std::chrono::steady_clock::now();
  Json config = config_echo(g);
  config["spec"] = args.spec_path;
  config["cap"] = args.cap;
  SpecFile file = load_spec_file(args.spec_path);
  CocycleSpec spec = maybe_float(file, g.force_float);
  Json out;
  out["bunching"] = to_json(check_fiber_bunching(spec, 1, 1.0));

  // canonical stable pair: shared future, different past
  SymbolicPoint x = SymbolicPoint::periodic({0});
  SymbolicPoint y = x;
  if (spec.alphabet() > 1) y.left_cycle = {spec.alphabet() - 1, 0};
  try {
    HolonomyMap hs = stable_holonomy(spec, x, y, g.tol, args.cap);
    out["stable"] = to_json(hs);
    out["diverged"] = false;
  } catch (const HolonomyDiverged& e) {
    out["diverged"] = true;
    out["increments"] = e.increments;
  }
  return emit_report(g, "holonomy", config, out, started, 0);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cocycle-spectra: simplicity criterion and Lyapunov spectra of linear cocycles"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand

  GlobalOpts g;
  if (const char* env = std::getenv("COCYCLE_SPECTRA_THREADS")) g.threads = std::atoi(env);
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--iters", g.iters, "iteration count for estimators");
  app.add_option("--renorm", g.renorm, "re-orthonormalization period");
  app.add_option("--tol", g.tol, "tolerance for iterative limits");
  app.add_option("--out", g.out, "write the JSON report to this path");
  app.add_option("--format", g.format, "report format (json)");
  app.add_option("--threads", g.threads, "worker threads for independent streams");
  app.add_flag("--float", g.force_float, "force floating-point mode");
  bool exact_flag = false;
  app.add_flag("--exact", exact_flag, "prefer exact arithmetic (default)");

  std::string spec_path;
  auto* simp = app.add_subcommand("simplicity", "pinching + twisting verdict for a spec file");
  simp->add_option("--spec", spec_path, "cocycle spec JSON file")->required();

  ZorichArgs zargs;
  auto* zor = app.add_subcommand("zorich", "restricted Zorich cocycle spectrum");
  zor->add_option("--d", zargs.d, "alphabet size of the reversal pair");
  zor->add_option("--top", zargs.top, "top permutation, comma separated");
  zor->add_option("--bottom", zargs.bottom, "bottom permutation, comma separated");
  zor->add_option("--streams", zargs.streams, "independent seeds");
  zor->add_option("--retries", zargs.retries, "tie retries");
  zor->add_option("--trace", zargs.trace_path, "write the QR trace CSV here");
  zor->add_option("--orbit-trace", zargs.orbit_trace_path,
                  "write the per-step orbit CSV (step, type, n, log norm, lengths)");
  zor->add_option("--batch-csv", zargs.batch_csv_path, "write per-batch exponent estimates here");

  DiracArgs dargs;
  auto* dir = app.add_subcommand("dirac", "pushforward convergence experiment");
  dir->add_option("--spec", dargs.spec_path, "cocycle spec JSON file");
  dir->add_option("--zorich-d", dargs.zorich_d, "run on the Zorich reversal class instead");
  dir->add_option("--ell", dargs.ell, "Grassmannian degree");
  dir->add_option("--steps", dargs.steps, "backward orbit length");
  dir->add_option("--atoms", dargs.atoms, "atoms in the empirical measure");
  dir->add_option("--threshold", dargs.threshold, "Dirac dispersion threshold");
  dir->add_option("--trace", dargs.trace_path, "write the trace CSV here");

  std::string m_csv, x_csv;
  auto* van = app.add_subcommand("vandermonde", "exact generalized Vandermonde factorization");
  van->add_option("--m", m_csv, "exponents, comma separated")->required();
  van->add_option("--x", x_csv, "points, comma separated rationals")->required();

  InduceArgs iargs;
  auto* ind = app.add_subcommand("induce", "first-return inducing and exponent rescale");
  ind->add_option("--spec", iargs.spec_path, "cocycle spec JSON file")->required();
  ind->add_option("--base", iargs.base, "base cylinder word, comma separated");
  ind->add_option("--max-return", iargs.max_return, "return time cap");

  HolonomyArgs hargs;
  auto* hol = app.add_subcommand("holonomy", "fiber bunching and holonomy limits");
  hol->add_option("--spec", hargs.spec_path, "cocycle spec JSON file")->required();
  hol->add_option("--cap", hargs.cap, "iteration cap");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simp) return cmd_simplicity(g, spec_path);
    if (*zor) return cmd_zorich(g, zargs);
    if (*dir) {
      if (dargs.spec_path.empty() && dargs.zorich_d == 0) {
        std::cerr << "dirac: provide --spec or --zorich-d\n";
        return 2;
      }
      return cmd_dirac(g, dargs);
    }
    if (*van) return cmd_vandermonde(g, m_csv, x_csv);
    if (*ind) return cmd_induce(g, iargs);
    if (*hol) return cmd_holonomy(g, hargs);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

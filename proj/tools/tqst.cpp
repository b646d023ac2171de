// tqst: command-line front end for threshold tomography.
//
// Exit status: 0 success, 2 invalid input, 3 non-convergence or numerical
// failure, 1 anything else. Errors go to stderr as one JSON object.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "tqst/io.hpp"
#include "tqst/metrics.hpp"
#include "tqst/pipeline.hpp"
#include "tqst/projectors.hpp"

namespace {

using nlohmann::json;
using namespace tqst;

constexpr int kExitInvalid = 2;
constexpr int kExitNotConverged = 3;

int fail(int code, const std::string& kind, const std::string& message) {
  std::cerr << json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump() << '\n';
  return code;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("TQST_SEED")) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("TQST_SEED must be a non-negative integer");
  }
  return 0;
}

struct StateOptions {
  std::string state;
  int n = 0;
  double filling = 0.5;
  double lambda = 0.0;
  std::int64_t shots = 8192;
  bool exact = false;

  void attach(CLI::App* app) {
    app->add_option("--state", state, "w, ghz, colorcode0, colorcode1 or random");
    app->add_option("--n", n, "Qubit count");
    app->add_option("--filling", filling, "Diagonal filling for random states");
    app->add_option("--lambda", lambda, "Depolarizing strength");
    app->add_option("--shots", shots, "Shots per projector");
    app->add_flag("--exact", exact, "Rounded expectations instead of sampled counts");
  }

  StateSpec spec() const {
    StateSpec s;
    s.kind = parse_state_kind(state);
    s.n_qubits = n;
    s.filling = filling;
    if ((s.kind == StateKind::ColorCode0 || s.kind == StateKind::ColorCode1)) {
      if (n != 0 && n != 7) throw std::invalid_argument("color-code states have 7 qubits");
      s.n_qubits = 7;
    } else if (n < 1) {
      throw std::invalid_argument("--n is required for this state");
    }
    return s;
  }
};

void print_summary(const PipelineResult& result, const std::optional<std::filesystem::path>& out) {
  json j;
  j["measurements"] = result.records.size();
  j["settings"] = result.settings.size();
  if (result.threshold) j["threshold"] = *result.threshold;
  if (result.threshold_estimate) {
    j["threshold_estimate"] = {{"t0", result.threshold_estimate->t0},
                               {"t_signal", result.threshold_estimate->t_signal},
                               {"t", result.threshold_estimate->t},
                               {"favorable", result.threshold_estimate->favorable}};
  }
  j["diagnostics"] = json::parse(io::diagnostics_to_json(result.reconstruction));
  if (result.report) j["fidelity"] = json::parse(report_to_json(*result.report));
  if (result.fidelity_bound) j["fidelity_bound"] = *result.fidelity_bound;
  if (out) j["output_dir"] = out->string();
  std::cout << j.dump(2) << '\n';
}

int run_main(int argc, char** argv) {
  CLI::App app{"Threshold quantum state tomography"};
  app.require_subcommand(1);
  std::uint64_t seed = default_seed();
  std::string param = "full";
  int max_iterations = 5000;

  // run
  auto* run = app.add_subcommand("run", "Full pipeline from a simulated state or ingested counts");
  StateOptions run_state;
  run_state.attach(run);
  std::string run_threshold;
  std::optional<double> run_multiplier;
  int run_runs = 20;
  std::string run_diag, run_counts, run_target, run_out = "tqst_out";
  run->add_option("--threshold", run_threshold, "Literal in [0, 1] or 'auto'");
  run->add_option("--noise-multiplier", run_multiplier, "Override for the automatic threshold multiplier");
  run->add_option("--runs", run_runs, "Diagonal replicas for the automatic threshold");
  run->add_option("--diag", run_diag, "Diagonal counts CSV (ingest mode)");
  run->add_option("--counts", run_counts, "Off-diagonal counts CSV (ingest mode)");
  run->add_option("--target", run_target, "Reference density JSON (ingest mode)");
  run->add_option("--out", run_out, "Output directory");
  run->add_option("--seed", seed, "Seed for every random stream");
  run->add_option("--param", param, "full or low_rank:<r>");
  run->add_option("--max-iter", max_iterations, "Optimizer iteration cap");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Sample diagonal and plan counts for a known state");
  StateOptions sim_state;
  sim_state.attach(simulate);
  std::string sim_plan, sim_threshold, sim_out = ".";
  simulate->add_option("--plan", sim_plan, "Plan CSV to measure");
  simulate->add_option("--threshold", sim_threshold, "Build the plan from the sampled diagonal instead");
  simulate->add_option("--seed", seed, "Seed");
  simulate->add_option("--out", sim_out, "Output directory");

  // plan
  auto* plan_cmd = app.add_subcommand("plan", "Measurement plan from diagonal counts");
  std::string plan_diag, plan_threshold, plan_ideal, plan_out;
  std::vector<std::string> plan_runs;
  std::optional<double> plan_multiplier;
  plan_cmd->add_option("--diag", plan_diag, "Diagonal counts CSV")->required();
  plan_cmd->add_option("--threshold", plan_threshold, "Literal in [0, 1] or 'auto'")->required();
  plan_cmd->add_option("--ideal", plan_ideal, "Ideal probabilities CSV for 'auto'");
  plan_cmd->add_option("--runs", plan_runs, "Noisy diagonal CSVs for 'auto'");
  plan_cmd->add_option("--noise-multiplier", plan_multiplier, "Override for the automatic threshold multiplier");
  plan_cmd->add_option("--out", plan_out, "Plan CSV (default stdout)");

  // reconstruct
  auto* recon = app.add_subcommand("reconstruct", "Maximum-likelihood reconstruction from count files");
  std::string rec_diag, rec_counts, rec_target, rec_out = ".";
  std::optional<double> rec_threshold;
  recon->add_option("--diag", rec_diag, "Diagonal counts CSV")->required();
  recon->add_option("--counts", rec_counts, "Off-diagonal counts CSV")->required();
  recon->add_option("--target", rec_target, "Reference density JSON");
  recon->add_option("--threshold", rec_threshold, "Threshold used for the plan, for the fidelity bound");
  recon->add_option("--seed", seed, "Seed");
  recon->add_option("--param", param, "full or low_rank:<r>");
  recon->add_option("--max-iter", max_iterations, "Optimizer iteration cap");
  recon->add_option("--out", rec_out, "Output directory");

  // fidelity
  auto* fid = app.add_subcommand("fidelity", "Compare two density-matrix JSON files");
  std::string fid_a, fid_b;
  fid->add_option("a", fid_a, "First density JSON")->required();
  fid->add_option("b", fid_b, "Second density JSON")->required();

  // bound
  auto* bound = app.add_subcommand("bound", "Worst-case fidelity for a threshold");
  std::string bound_diag;
  double bound_threshold = 0.0;
  int bound_rank = 1;
  bound->add_option("--diag", bound_diag, "Diagonal counts CSV")->required();
  bound->add_option("--threshold", bound_threshold, "Threshold")->required();
  bound->add_option("--rank", bound_rank, "Rank of the state");

  // settings
  auto* settings_cmd = app.add_subcommand("settings", "Deduplicated Pauli settings of a plan");
  std::string set_plan, set_out;
  settings_cmd->add_option("--plan", set_plan, "Plan CSV")->required();
  settings_cmd->add_option("--out", set_out, "Settings file (default stdout)");

  // completeness
  auto* complete = app.add_subcommand("completeness", "Gram-matrix check of the full projector set");
  int comp_n = 1;
  complete->add_option("--n", comp_n, "Qubit count")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(kExitInvalid, "usage", e.what());
  }

  MleOptions mle = parse_parametrization(param);
  mle.max_iterations = max_iterations;

  if (*run) {
    PipelineConfig config;
    config.seed = seed;
    config.mle = mle;
    config.shots = run_state.shots;
    config.depolarizing = run_state.lambda;
    config.sampling = run_state.exact ? Sampling::Exact : Sampling::Multinomial;
    if (!run_state.state.empty()) config.state = run_state.spec();
    if (!run_diag.empty()) config.diag_file = run_diag;
    if (!run_counts.empty()) config.counts_file = run_counts;
    if (!run_target.empty()) config.target_file = run_target;
    if (!run_threshold.empty()) {
      config.threshold = parse_threshold(run_threshold);
      config.threshold->noise_multiplier = run_multiplier;
      config.threshold->runs = run_runs;
    }
    const PipelineResult result = run_pipeline(config);
    write_artifacts(result, run_out);
    print_summary(result, std::filesystem::path(run_out));
    if (result.exit_status() != 0) return fail(kExitNotConverged, "not_converged", "optimizer did not converge");
    return 0;
  }

  if (*simulate) {
    if (sim_plan.empty() == sim_threshold.empty()) throw std::invalid_argument("provide exactly one of --plan or --threshold");
    const StateSpec spec = sim_state.spec();
    const DensityMatrix rho = make_state(spec, seed);
    const NoiseModel noise{sim_state.lambda, sim_state.exact ? Sampling::Exact : Sampling::Multinomial, seed};
    std::filesystem::create_directories(sim_out);
    MeasurementPlan plan;
    if (!sim_plan.empty()) {
      plan = io::read_plan(std::filesystem::path(sim_plan));
    } else {
      const ThresholdSpec t = parse_threshold(sim_threshold);
      if (t.automatic) throw std::invalid_argument("simulate accepts a literal threshold only");
      plan = select_offdiagonal(sample_diagonal(rho, sim_state.shots, noise), t.value);
      io::write_plan(std::filesystem::path(sim_out) / "plan.csv", plan);
    }
    const SampledCounts sampled = sample_counts(rho, plan, sim_state.shots, noise);
    std::vector<CountRecord> off;
    for (const auto& r : sampled.records) {
      if (!r.projector.is_computational()) off.push_back(r);
    }
    io::write_counts(std::filesystem::path(sim_out) / "counts.csv", off);
    io::write_diagonal(std::filesystem::path(sim_out) / "diag.csv", sampled.diagonal);
    io::write_density(std::filesystem::path(sim_out) / "target.json", rho);
    std::cout << json{{"measurements", sampled.records.size()}, {"output_dir", sim_out}}.dump(2) << '\n';
    return 0;
  }

  if (*plan_cmd) {
    const DiagonalRecord diag = io::read_diagonal(std::filesystem::path(plan_diag));
    const ThresholdSpec spec = parse_threshold(plan_threshold);
    double t = spec.value;
    if (spec.automatic) {
      if (plan_ideal.empty() || plan_runs.size() < 2) {
        throw std::invalid_argument("'auto' needs --ideal and at least two --runs files");
      }
      std::vector<DiagonalRecord> runs;
      for (const auto& f : plan_runs) runs.push_back(io::read_diagonal(std::filesystem::path(f)));
      const auto est = estimate_threshold(io::read_probabilities(plan_ideal), runs, diag.n_qubits(), plan_multiplier);
      t = std::clamp(est.t, 0.0, 1.0);
      std::cerr << json{{"t0", est.t0}, {"t_signal", est.t_signal}, {"t", est.t}, {"favorable", est.favorable}}.dump()
                << '\n';
    }
    const MeasurementPlan plan = select_offdiagonal(diag, t);
    if (plan_out.empty()) {
      io::write_plan(std::cout, plan);
    } else {
      io::write_plan(std::filesystem::path(plan_out), plan);
    }
    return 0;
  }

  if (*recon) {
    PipelineConfig config;
    config.seed = seed;
    config.mle = mle;
    config.diag_file = rec_diag;
    config.counts_file = rec_counts;
    if (!rec_target.empty()) config.target_file = rec_target;
    if (rec_threshold) config.threshold = ThresholdSpec{false, *rec_threshold, std::nullopt, 0};
    const PipelineResult result = run_pipeline(config);
    write_artifacts(result, rec_out);
    print_summary(result, std::filesystem::path(rec_out));
    if (result.exit_status() != 0) return fail(kExitNotConverged, "not_converged", "optimizer did not converge");
    return 0;
  }

  if (*fid) {
    const DensityMatrix a = io::read_density(fid_a);
    const DensityMatrix b = io::read_density(fid_b);
    std::cout << report_to_json(compare_states(a, b)) << '\n';
    return 0;
  }

  if (*bound) {
    const DiagonalRecord diag = io::read_diagonal(std::filesystem::path(bound_diag));
    const RealVector p = diag.probabilities();
    std::cout << json{{"threshold", bound_threshold},
                      {"rank", bound_rank},
                      {"below_threshold_mass", below_threshold_mass(p, bound_threshold)},
                      {"fidelity_bound", fidelity_bound({p, bound_threshold, bound_rank})}}
                     .dump(2)
              << '\n';
    return 0;
  }

  if (*settings_cmd) {
    const auto settings = settings_for_plan(io::read_plan(std::filesystem::path(set_plan)));
    if (set_out.empty()) {
      io::write_settings(std::cout, settings);
    } else {
      io::write_settings(std::filesystem::path(set_out), settings);
    }
    return 0;
  }

  if (*complete) {
    const auto report = completeness_check(comp_n);
    std::cout << json{{"n_qubits", comp_n},
                      {"projectors", std::int64_t{1} << (2 * comp_n)},
                      {"invertible", report.invertible},
                      {"min_singular_value", report.min_singular_value}}
                     .dump(2)
              << '\n';
    return 0;
  }
  return fail(kExitInvalid, "usage", "no subcommand");
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_main(argc, argv);
  } catch (const tqst::NumericalError& e) {
    return fail(kExitNotConverged, "numerical", e.what());
  } catch (const tqst::ResourceLimitError& e) {
    return fail(kExitInvalid, "resource_limit", e.what());
  } catch (const std::invalid_argument& e) {
    return fail(kExitInvalid, "invalid_input", e.what());
  } catch (const std::out_of_range& e) {
    return fail(kExitInvalid, "invalid_input", e.what());
  } catch (const std::exception& e) {
    return fail(1, "internal", e.what());
  }
}

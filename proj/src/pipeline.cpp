#include "tqst/pipeline.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "tqst/io.hpp"
#include "tqst/metrics.hpp"
#include "tqst/random.hpp"

namespace tqst {

StateKind parse_state_kind(const std::string& name) {
  if (name == "w") return StateKind::W;
  if (name == "ghz") return StateKind::Ghz;
  if (name == "colorcode0") return StateKind::ColorCode0;
  if (name == "colorcode1") return StateKind::ColorCode1;
  if (name == "random") return StateKind::Random;
  throw std::invalid_argument("unknown state '" + name + "' (use w, ghz, colorcode0, colorcode1, random)");
}

std::string to_string(StateKind kind) {
  switch (kind) {
    case StateKind::W: return "w";
    case StateKind::Ghz: return "ghz";
    case StateKind::ColorCode0: return "colorcode0";
    case StateKind::ColorCode1: return "colorcode1";
    case StateKind::Random: return "random";
  }
  throw std::logic_error("unknown state kind");
}

DensityMatrix make_state(const StateSpec& spec, std::uint64_t seed) {
  switch (spec.kind) {
    case StateKind::W: return w_state(spec.n_qubits);
    case StateKind::Ghz: return ghz_state(spec.n_qubits);
    case StateKind::ColorCode0: return color_code_state(0);
    case StateKind::ColorCode1: return color_code_state(1);
    case StateKind::Random: return random_filled_state(spec.n_qubits, spec.filling, seed);
  }
  throw std::logic_error("unknown state kind");
}

ThresholdSpec parse_threshold(const std::string& text) {
  ThresholdSpec spec;
  if (text == "auto") {
    spec.automatic = true;
    return spec;
  }
  std::size_t used = 0;
  try {
    spec.value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw std::invalid_argument("threshold must be a number or 'auto'");
  if (!(spec.value >= 0.0 && spec.value <= 1.0)) throw std::invalid_argument("threshold must lie in [0, 1]");
  return spec;
}

void PipelineConfig::validate() const {
  const bool files = diag_file.has_value() || counts_file.has_value();
  if (state.has_value() == files) throw std::invalid_argument("provide exactly one of a state or counts files");
  if (files && !(diag_file && counts_file)) throw std::invalid_argument("counts ingest needs both --diag and --counts");
  if (state && !threshold) throw std::invalid_argument("a threshold is required when simulating");
  if (files && threshold && threshold->automatic) {
    throw std::invalid_argument("an automatic threshold cannot be applied to ingested counts");
  }
  if (shots < 1) throw std::invalid_argument("shots must be at least 1");
  if (!(depolarizing >= 0.0 && depolarizing <= 1.0)) throw std::invalid_argument("lambda must lie in [0, 1]");
  if (threshold && threshold->automatic && threshold->runs < 2) {
    throw std::invalid_argument("automatic threshold needs at least 2 runs");
  }
}

FidelityReport compare_states(const DensityMatrix& target, const DensityMatrix& estimate) {
  if (target.dim() != estimate.dim()) throw std::invalid_argument("target and estimate dimensions differ");
  FidelityReport r;
  r.root_fidelity = root_fidelity(target, estimate);
  r.fidelity = fidelity(target, estimate);
  r.trace_distance = trace_distance(target, estimate);
  r.purity_target = purity(target);
  r.purity_estimate = purity(estimate);
  r.rank_target = numerical_rank(target);
  r.rank_estimate = numerical_rank(estimate);
  return r;
}

std::string report_to_json(const FidelityReport& report) {
  nlohmann::json j{{"root_fidelity", report.root_fidelity},     {"fidelity", report.fidelity},
                   {"trace_distance", report.trace_distance},   {"purity_target", report.purity_target},
                   {"purity_estimate", report.purity_estimate}, {"rank_target", report.rank_target},
                   {"rank_estimate", report.rank_estimate}};
  if (report.fidelity_bound) j["fidelity_bound"] = *report.fidelity_bound;
  return j.dump(2);
}

std::vector<CountRecord> PipelineResult::offdiagonal_records() const {
  std::vector<CountRecord> out;
  for (const auto& r : records) {
    if (!r.projector.is_computational()) out.push_back(r);
  }
  return out;
}

std::vector<CountRecord> load_records(const std::filesystem::path& diag_file, const std::filesystem::path& counts_file) {
  const DiagonalRecord diag = io::read_diagonal(diag_file);
  std::vector<CountRecord> records = io::diagonal_records(diag);
  for (auto& r : io::read_counts(counts_file)) {
    if (r.projector.size() != diag.n_qubits()) {
      throw io::FormatError(counts_file.string() + ": projector length differs from the diagonal file");
    }
    if (r.projector.is_computational()) {
      throw io::FormatError(counts_file.string() + ": computational-basis records belong in the diagonal file");
    }
    records.push_back(std::move(r));
  }
  return records;
}

namespace {

ThresholdEstimate automatic_threshold(const PipelineConfig& config, const DensityMatrix* target, const NoiseModel& noise) {
  const ThresholdSpec& spec = *config.threshold;
  if (target == nullptr) {
    if (!config.ideal_file || config.run_files.size() < 2) {
      throw std::invalid_argument("automatic threshold needs an ideal distribution and at least 2 diagonal runs");
    }
    const RealVector ideal = io::read_probabilities(*config.ideal_file);
    std::vector<DiagonalRecord> runs;
    for (const auto& f : config.run_files) runs.push_back(io::read_diagonal(f));
    return estimate_threshold(ideal, runs, runs.front().n_qubits(), spec.noise_multiplier);
  }
  std::vector<DiagonalRecord> runs;
  const std::uint64_t base = derive_seed(config.seed, kStreamThresholdRuns);
  for (int r = 0; r < spec.runs; ++r) {
    NoiseModel replica = noise;
    replica.seed = derive_seed(base, static_cast<std::uint64_t>(r));
    runs.push_back(sample_diagonal(*target, config.shots, replica));
  }
  return estimate_threshold(target->diagonal(), runs, target->n_qubits(), spec.noise_multiplier);
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config) {
  config.validate();
  MleOptions mle = config.mle;
  mle.seed = config.seed;

  if (!config.state) {
    std::vector<CountRecord> records = load_records(*config.diag_file, *config.counts_file);
    DiagonalRecord diag = io::read_diagonal(*config.diag_file);
    std::vector<PauliSetting> settings;
    for (const auto& r : records) {
      PauliSetting s = setting_of(r.projector);
      if (std::find(settings.begin(), settings.end(), s) == settings.end()) settings.push_back(std::move(s));
    }
    ReconstructionResult rec = reconstruct(records, mle);
    PipelineResult result{std::nullopt, std::move(diag), std::nullopt, std::nullopt, std::nullopt,
                          std::move(records), std::move(settings), std::move(rec), std::nullopt, std::nullopt};
    if (config.threshold) result.threshold = config.threshold->value;
    if (config.target_file) {
      result.target = io::read_density(*config.target_file, kDefaultTolerance);
      result.report = compare_states(*result.target, result.reconstruction.rho);
    }
    if (result.threshold) {
      const int rank = numerical_rank(result.reconstruction.rho);
      result.fidelity_bound = fidelity_bound({result.diagonal.probabilities(), *result.threshold, rank});
      if (result.report) result.report->fidelity_bound = result.fidelity_bound;
    }
    return result;
  }

  const DensityMatrix target = make_state(*config.state, config.seed);
  const NoiseModel noise{config.depolarizing, config.sampling, config.seed};
  DiagonalRecord diag = sample_diagonal(target, config.shots, noise);

  std::optional<ThresholdEstimate> estimate;
  double t = config.threshold->value;
  if (config.threshold->automatic) {
    estimate = automatic_threshold(config, &target, noise);
    t = std::clamp(estimate->t, 0.0, 1.0);
  }
  MeasurementPlan plan = select_offdiagonal(diag, t);
  SampledCounts sampled = sample_counts(target, plan, config.shots, noise);
  std::vector<PauliSetting> settings = settings_for_plan(plan);
  ReconstructionResult rec = reconstruct(sampled.records, mle);

  PipelineResult result{target, std::move(diag), estimate, t, std::move(plan), std::move(sampled.records),
                        std::move(settings), std::move(rec), std::nullopt, std::nullopt};
  result.report = compare_states(target, result.reconstruction.rho);
  result.fidelity_bound = fidelity_bound({result.diagonal.probabilities(), t, numerical_rank(result.reconstruction.rho)});
  result.report->fidelity_bound = result.fidelity_bound;
  return result;
}

void write_artifacts(const PipelineResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  if (result.plan) io::write_plan(dir / "plan.csv", *result.plan);
  io::write_counts(dir / "counts.csv", result.offdiagonal_records());
  io::write_diagonal(dir / "diag.csv", result.diagonal);
  io::write_density(dir / "rho.json", result.reconstruction.rho);
  io::write_settings(dir / "settings.csv", result.settings);
  {
    std::ofstream out(dir / "diagnostics.json");
    out << io::diagnostics_to_json(result.reconstruction) << '\n';
  }
  if (result.report) {
    std::ofstream out(dir / "fidelity.json");
    out << report_to_json(*result.report) << '\n';
  }
  if (result.target) io::write_density(dir / "target.json", *result.target);
}

}  // namespace tqst

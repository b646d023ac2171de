#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "tqst/core.hpp"
#include "tqst/mle.hpp"
#include "tqst/settings.hpp"
#include "tqst/threshold.hpp"

namespace tqst::io {

/// Raised on malformed input files; carries the offending path and line.
class FormatError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Density matrix JSON: {"n_qubits": n, "re": [[..]], "im": [[..]]}.
std::string density_to_json(const DensityMatrix& rho);
DensityMatrix density_from_json(const std::string& text, double tolerance = kShotNoiseTolerance);
void write_density(const std::filesystem::path& path, const DensityMatrix& rho);
DensityMatrix read_density(const std::filesystem::path& path, double tolerance = kShotNoiseTolerance);

// Plan CSV: header "i,j,part,projector", one target per line.
void write_plan(std::ostream& out, const MeasurementPlan& plan);
MeasurementPlan read_plan(std::istream& in);
void write_plan(const std::filesystem::path& path, const MeasurementPlan& plan);
MeasurementPlan read_plan(const std::filesystem::path& path);

// Diagonal CSV: "# n_s=<shots>", header "basis_index,count", 2^n lines.
void write_diagonal(std::ostream& out, const DiagonalRecord& diag);
DiagonalRecord read_diagonal(std::istream& in);
void write_diagonal(const std::filesystem::path& path, const DiagonalRecord& diag);
DiagonalRecord read_diagonal(const std::filesystem::path& path);

// Counts CSV: header "projector_word,observed,shots".
void write_counts(std::ostream& out, std::span<const CountRecord> records);
std::vector<CountRecord> read_counts(std::istream& in);
void write_counts(const std::filesystem::path& path, std::span<const CountRecord> records);
std::vector<CountRecord> read_counts(const std::filesystem::path& path);

// Ideal probabilities CSV: header "basis_index,probability".
RealVector read_probabilities(const std::filesystem::path& path);
void write_probabilities(const std::filesystem::path& path, const RealVector& p);

// Settings: one X/Y/Z word per line, no header.
void write_settings(std::ostream& out, std::span<const PauliSetting> settings);
std::vector<PauliSetting> read_settings(std::istream& in);
void write_settings(const std::filesystem::path& path, std::span<const PauliSetting> settings);

// Histogram CSV: header "outcome_index,count".
void write_histogram(std::ostream& out, const std::vector<std::int64_t>& histogram);
std::vector<std::int64_t> read_histogram(std::istream& in);

std::string diagnostics_to_json(const ReconstructionResult& result);

/// Diagonal counts as computational-basis count records, in index order.
std::vector<CountRecord> diagonal_records(const DiagonalRecord& diag);

}  // namespace tqst::io

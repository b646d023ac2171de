#include "tqst/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace tqst::io {

namespace {

using nlohmann::json;

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out.precision(17);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) {
    const auto b = f.find_first_not_of(" \t\r");
    const auto e = f.find_last_not_of(" \t\r");
    fields.push_back(b == std::string::npos ? std::string() : f.substr(b, e - b + 1));
  }
  return fields;
}

bool blank(const std::string& line) { return line.find_first_not_of(" \t\r") == std::string::npos; }

std::int64_t to_int(const std::string& s, int line_no) {
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) {
    throw FormatError("line " + std::to_string(line_no) + ": expected an integer, got '" + s + "'");
  }
  return v;
}

double to_double(const std::string& s, int line_no) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) {
    throw FormatError("line " + std::to_string(line_no) + ": expected a number, got '" + s + "'");
  }
  return v;
}

/// Reads data rows after an exact header line; skips blank lines.
template <typename Fn>
void for_rows(std::istream& in, const std::string& header, std::size_t fields, Fn&& fn, int line_no = 0) {
  std::string line;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    if (!seen_header) {
      if (split(line) != split(header)) {
        throw FormatError("line " + std::to_string(line_no) + ": expected header '" + header + "'");
      }
      seen_header = true;
      continue;
    }
    auto row = split(line);
    if (row.size() != fields) {
      throw FormatError("line " + std::to_string(line_no) + ": expected " + std::to_string(fields) + " fields");
    }
    try {
      fn(row, line_no);
    } catch (const FormatError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!seen_header) throw FormatError("missing header '" + header + "'");
}

template <typename T, typename Fn>
T parse_file(const std::filesystem::path& path, Fn&& fn) {
  auto in = open_in(path);
  try {
    return fn(in);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace

std::string density_to_json(const DensityMatrix& rho) {
  const Index d = rho.dim();
  json re = json::array(), im = json::array();
  for (Index r = 0; r < d; ++r) {
    json row_re = json::array(), row_im = json::array();
    for (Index c = 0; c < d; ++c) {
      row_re.push_back(rho(r, c).real());
      row_im.push_back(rho(r, c).imag());
    }
    re.push_back(std::move(row_re));
    im.push_back(std::move(row_im));
  }
  return json{{"n_qubits", rho.n_qubits()}, {"re", re}, {"im", im}}.dump();
}

DensityMatrix density_from_json(const std::string& text, double tolerance) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("invalid density JSON: ") + e.what());
  }
  try {
    const int n = j.at("n_qubits").get<int>();
    if (n < 1 || n > 16) throw FormatError("n_qubits out of range");
    const Index d = Index{1} << n;
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    if (!re.is_array() || !im.is_array() || Index(re.size()) != d || Index(im.size()) != d) {
      throw FormatError("density JSON arrays must be 2^n x 2^n");
    }
    Matrix m(d, d);
    for (Index r = 0; r < d; ++r) {
      const auto& rr = re.at(std::size_t(r));
      const auto& ir = im.at(std::size_t(r));
      if (Index(rr.size()) != d || Index(ir.size()) != d) throw FormatError("density JSON arrays must be 2^n x 2^n");
      for (Index c = 0; c < d; ++c) m(r, c) = Complex(rr.at(std::size_t(c)).get<double>(), ir.at(std::size_t(c)).get<double>());
    }
    return DensityMatrix(std::move(m), tolerance);
  } catch (const json::exception& e) {
    throw FormatError(std::string("invalid density JSON: ") + e.what());
  }
}

void write_density(const std::filesystem::path& path, const DensityMatrix& rho) {
  auto out = open_out(path);
  out << density_to_json(rho) << '\n';
}

DensityMatrix read_density(const std::filesystem::path& path, double tolerance) {
  return parse_file<DensityMatrix>(path, [&](std::istream& in) {
    std::stringstream ss;
    ss << in.rdbuf();
    return density_from_json(ss.str(), tolerance);
  });
}

void write_plan(std::ostream& out, const MeasurementPlan& plan) {
  out << "i,j,part,projector\n";
  for (const auto& t : plan.targets) {
    out << t.element.i << ',' << t.element.j << ',' << to_string(t.element.part) << ',' << t.projector.word() << '\n';
  }
}

MeasurementPlan read_plan(std::istream& in) {
  MeasurementPlan plan;
  for_rows(in, "i,j,part,projector", 4, [&](const std::vector<std::string>& row, int line_no) {
    PlanTarget t{MatrixElementIndex::make(to_int(row[0], line_no), to_int(row[1], line_no),
                                          element_part_from_string(row[2])),
                 ProductProjector::from_word(row[3])};
    if (plan.targets.empty()) plan.n_qubits = t.projector.size();
    if (t.projector.size() != plan.n_qubits) {
      throw FormatError("line " + std::to_string(line_no) + ": projector length differs from earlier rows");
    }
    if (t.element.j >= (Index{1} << plan.n_qubits)) {
      throw FormatError("line " + std::to_string(line_no) + ": element index exceeds 2^n");
    }
    plan.targets.push_back(std::move(t));
  });
  if (plan.targets.empty()) throw FormatError("plan has no targets");
  return plan;
}

void write_plan(const std::filesystem::path& path, const MeasurementPlan& plan) {
  auto out = open_out(path);
  write_plan(out, plan);
}

MeasurementPlan read_plan(const std::filesystem::path& path) {
  return parse_file<MeasurementPlan>(path, [](std::istream& in) { return read_plan(in); });
}

void write_diagonal(std::ostream& out, const DiagonalRecord& diag) {
  out << "# n_s=" << diag.shots() << "\nbasis_index,count\n";
  for (std::size_t k = 0; k < diag.counts().size(); ++k) out << k << ',' << diag.counts()[k] << '\n';
}

DiagonalRecord read_diagonal(std::istream& in) {
  std::string line;
  int line_no = 0;
  std::int64_t shots = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const std::string prefix = "# n_s=";
    if (line.rfind(prefix, 0) != 0) throw FormatError("line " + std::to_string(line_no) + ": expected '# n_s=<shots>'");
    shots = to_int(split(line.substr(prefix.size())).at(0), line_no);
    break;
  }
  if (shots < 0) throw FormatError("missing '# n_s=<shots>' line");
  std::vector<std::int64_t> counts;
  for_rows(
      in, "basis_index,count", 2,
      [&](const std::vector<std::string>& row, int n) {
        if (to_int(row[0], n) != std::int64_t(counts.size())) {
          throw FormatError("line " + std::to_string(n) + ": basis indices must be consecutive from 0");
        }
        counts.push_back(to_int(row[1], n));
      },
      line_no);
  return DiagonalRecord(std::move(counts), shots);
}

void write_diagonal(const std::filesystem::path& path, const DiagonalRecord& diag) {
  auto out = open_out(path);
  write_diagonal(out, diag);
}

DiagonalRecord read_diagonal(const std::filesystem::path& path) {
  return parse_file<DiagonalRecord>(path, [](std::istream& in) { return read_diagonal(in); });
}

void write_counts(std::ostream& out, std::span<const CountRecord> records) {
  out << "projector_word,observed,shots\n";
  for (const auto& r : records) out << r.projector.word() << ',' << r.observed << ',' << r.shots << '\n';
}

std::vector<CountRecord> read_counts(std::istream& in) {
  std::vector<CountRecord> records;
  for_rows(in, "projector_word,observed,shots", 3, [&](const std::vector<std::string>& row, int n) {
    records.push_back(CountRecord::make(ProductProjector::from_word(row[0]), to_int(row[1], n), to_int(row[2], n)));
  });
  return records;
}

void write_counts(const std::filesystem::path& path, std::span<const CountRecord> records) {
  auto out = open_out(path);
  write_counts(out, records);
}

std::vector<CountRecord> read_counts(const std::filesystem::path& path) {
  return parse_file<std::vector<CountRecord>>(path, [](std::istream& in) { return read_counts(in); });
}

RealVector read_probabilities(const std::filesystem::path& path) {
  return parse_file<RealVector>(path, [](std::istream& in) {
    std::vector<double> p;
    for_rows(in, "basis_index,probability", 2, [&](const std::vector<std::string>& row, int n) {
      if (to_int(row[0], n) != std::int64_t(p.size())) {
        throw FormatError("line " + std::to_string(n) + ": basis indices must be consecutive from 0");
      }
      p.push_back(to_double(row[1], n));
    });
    return RealVector(Eigen::Map<const RealVector>(p.data(), Index(p.size())));
  });
}

void write_probabilities(const std::filesystem::path& path, const RealVector& p) {
  auto out = open_out(path);
  out << "basis_index,probability\n";
  for (Index k = 0; k < p.size(); ++k) out << k << ',' << p(k) << '\n';
}

void write_settings(std::ostream& out, std::span<const PauliSetting> settings) {
  for (const auto& s : settings) out << s.word() << '\n';
}

std::vector<PauliSetting> read_settings(std::istream& in) {
  std::vector<PauliSetting> out;
  std::string line;
  while (std::getline(in, line)) {
    if (blank(line)) continue;
    out.push_back(PauliSetting::from_word(split(line).at(0)));
  }
  return out;
}

void write_settings(const std::filesystem::path& path, std::span<const PauliSetting> settings) {
  auto out = open_out(path);
  write_settings(out, settings);
}

void write_histogram(std::ostream& out, const std::vector<std::int64_t>& histogram) {
  out << "outcome_index,count\n";
  for (std::size_t k = 0; k < histogram.size(); ++k) out << k << ',' << histogram[k] << '\n';
}

std::vector<std::int64_t> read_histogram(std::istream& in) {
  std::vector<std::int64_t> h;
  for_rows(in, "outcome_index,count", 2, [&](const std::vector<std::string>& row, int n) {
    if (to_int(row[0], n) != std::int64_t(h.size())) {
      throw FormatError("line " + std::to_string(n) + ": outcome indices must be consecutive from 0");
    }
    h.push_back(to_int(row[1], n));
  });
  return h;
}

std::string diagnostics_to_json(const ReconstructionResult& result) {
  return json{{"objective", result.final_objective},
              {"iterations", result.iterations},
              {"gradient_norm", result.gradient_norm},
              {"converged", result.converged},
              {"parametrization", result.parametrization},
              {"wall_time_seconds", result.wall_time_seconds},
              {"gap_steps", result.gap_steps},
              {"optimality_gap", result.optimality_gap}}
      .dump(2);
}

std::vector<CountRecord> diagonal_records(const DiagonalRecord& diag) {
  std::vector<CountRecord> out;
  out.reserve(diag.counts().size());
  for (std::size_t k = 0; k < diag.counts().size(); ++k) {
    out.push_back(CountRecord::make(ProductProjector::basis(diag.n_qubits(), Index(k)), diag.counts()[k], diag.shots()));
  }
  return out;
}

}  // namespace tqst::io

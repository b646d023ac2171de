#include "doctest.h"

#include <filesystem>
#include <sstream>

#include "support.hpp"
#include "tqst/io.hpp"
#include "tqst/simulator.hpp"

using namespace tqst;

TEST_CASE("density JSON round trip is exact") {
  Rng rng(1);
  const DensityMatrix rho(testing::random_density(8, rng));
  const DensityMatrix back = io::density_from_json(io::density_to_json(rho));
  CHECK(back.matrix() == rho.matrix());
  CHECK_THROWS_AS(io::density_from_json("{\"n_qubits\": 1}"), io::FormatError);
  CHECK_THROWS_AS(io::density_from_json("{\"n_qubits\": 1, \"re\": [[1, 0], [0, 1]], \"im\": [[0, 0], [0, 0]]}"),
                  std::invalid_argument);
}

TEST_CASE("plan CSV round trip") {
  const MeasurementPlan plan = select_offdiagonal(w_state(3).diagonal(), 0.1);
  std::stringstream ss;
  io::write_plan(ss, plan);
  CHECK(ss.str().rfind("i,j,part,projector\n", 0) == 0);
  const MeasurementPlan back = io::read_plan(ss);
  REQUIRE(back.size() == plan.size());
  for (std::size_t k = 0; k < plan.size(); ++k) {
    CHECK(back.targets[k].element == plan.targets[k].element);
    CHECK(back.targets[k].projector == plan.targets[k].projector);
  }
  std::stringstream bad("i,j,part,projector\n0,1,re,HQ\n");
  CHECK_THROWS_AS(io::read_plan(bad), io::FormatError);
}

TEST_CASE("diagonal CSV round trip") {
  const DiagonalRecord d({5, 0, 3, 2}, 10);
  std::stringstream ss;
  io::write_diagonal(ss, d);
  CHECK(ss.str().rfind("# n_s=10\nbasis_index,count\n", 0) == 0);
  const DiagonalRecord back = io::read_diagonal(ss);
  CHECK(back.counts() == d.counts());
  CHECK(back.shots() == 10);
  std::stringstream gap("# n_s=2\nbasis_index,count\n0,1\n2,1\n");
  CHECK_THROWS_AS(io::read_diagonal(gap), io::FormatError);
  std::stringstream sum("# n_s=3\nbasis_index,count\n0,1\n1,1\n");
  CHECK_THROWS_AS(io::read_diagonal(sum), std::invalid_argument);
}

TEST_CASE("counts, settings and histogram round trips") {
  const std::vector<CountRecord> records{CountRecord::make(ProductProjector::from_word("RD"), 12, 100),
                                         CountRecord::make(ProductProjector::from_word("HV"), 0, 100)};
  std::stringstream cs;
  io::write_counts(cs, records);
  const auto back = io::read_counts(cs);
  REQUIRE(back.size() == 2);
  CHECK(back[0].projector.word() == "RD");
  CHECK(back[0].observed == 12);
  CHECK(back[1].shots == 100);
  std::stringstream over("projector_word,observed,shots\nRD,101,100\n");
  CHECK_THROWS_AS(io::read_counts(over), std::invalid_argument);

  const std::vector<PauliSetting> settings{PauliSetting::from_word("ZZ"), PauliSetting::from_word("XY")};
  std::stringstream ss;
  io::write_settings(ss, settings);
  CHECK(ss.str() == "ZZ\nXY\n");
  CHECK(io::read_settings(ss) == settings);

  const std::vector<std::int64_t> hist{3, 0, 7, 1};
  std::stringstream hs;
  io::write_histogram(hs, hist);
  CHECK(io::read_histogram(hs) == hist);
}

TEST_CASE("file helpers") {
  const auto dir = std::filesystem::temp_directory_path() / "tqst_io_test";
  std::filesystem::create_directories(dir);
  RealVector p(4);
  p << 0.1, 0.2, 0.3, 0.4;
  io::write_probabilities(dir / "p.csv", p);
  CHECK(io::read_probabilities(dir / "p.csv") == p);
  io::write_density(dir / "rho.json", w_state(2));
  CHECK(io::read_density(dir / "rho.json").matrix() == w_state(2).matrix());
  CHECK_THROWS(io::read_density(dir / "missing.json"));
  const auto recs = io::diagonal_records(DiagonalRecord({1, 2, 3, 4}, 10));
  REQUIRE(recs.size() == 4);
  CHECK(recs[2].projector.word() == "VH");
  CHECK(recs[2].observed == 3);
  std::filesystem::remove_all(dir);
}

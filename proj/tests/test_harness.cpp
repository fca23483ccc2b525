#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "rbm/harness.hpp"

using namespace rbm;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("wilson interval endpoints and independent formula") {
  auto [lo0, hi0] = wilson_interval(0, 50, 0.95);
  CHECK(lo0 == 0.0);
  auto [lon, hin] = wilson_interval(50, 50, 0.95);
  CHECK(hin == 1.0);

  auto [lo, hi] = wilson_interval(5, 100, 0.95);
  // second, independently coded evaluation of the score interval
  const double z = 1.959963984540054;
  const double n = 100.0, p = 0.05;
  const double d = 1.0 + z * z / n;
  const double c = (p + z * z / (2 * n)) / d;
  const double h = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / d;
  CHECK(std::fabs(lo - (c - h)) < 1e-12);
  CHECK(std::fabs(hi - (c + h)) < 1e-12);

  CHECK_THROWS_AS(wilson_interval(5, 0, 0.95), Error);
  CHECK_THROWS_AS(wilson_interval(5, 4, 0.95), Error);
}

TEST_CASE("normal quantile") {
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-10));
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0));
  CHECK(normal_quantile(0.025) == doctest::Approx(-1.959963984540054).epsilon(1e-10));
  CHECK_THROWS_AS(normal_quantile(0.0), Error);
}

TEST_CASE("config parsing, validation, and echo") {
  const char* text = R"({
    "experiment": "mirrorHalfplane",
    "domain": {"kind": "halfplane", "base": [0, 0], "angle": 0, "inward": [0, 1]},
    "dt": 1e-4, "horizon": 0.5, "trials": 4, "seed": 9,
    "start": {"type": "pair", "x": [0.3, 0.4], "y": [-0.3, 0.4]},
    "outputDir": "out_test"
  })";
  auto cfg = config_from_json_text(text);
  CHECK(cfg.experiment == ExperimentKind::MirrorHalfplane);
  CHECK(cfg.trials == 4);
  CHECK(cfg.dt == doctest::Approx(1e-4));
  auto echo = config_to_json_text(cfg);
  auto cfg2 = config_from_json_text(echo);
  CHECK(config_to_json_text(cfg2) == echo);

  CHECK_THROWS_AS(config_from_json_text("{"), Error);
  CHECK_THROWS_AS(config_from_json_text(R"({"experiment":"nope"})"), Error);
  CHECK_THROWS_AS(config_from_json_text(R"({"experiment":"coneCensus","trials":0})"), Error);
  CHECK_THROWS_AS(config_from_json_text(R"({"experiment":"coneCensus","dt":-1})"), Error);
}

TEST_CASE("parallel_for covers every index once") {
  std::vector<int> hits(1000, 0);
  parallel_for(1000, 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
}

TEST_CASE("experiment outputs are byte-identical across reruns and workers") {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::MirrorHalfplane;
  cfg.domain = HalfPlane{Line{{0, 0}, 0.0}, UnitVector{0, 1}};
  cfg.dt = 1e-4;
  cfg.horizon = 0.3;
  cfg.trials = 6;
  cfg.seed = 77;
  cfg.start = StartPair{{0.3, 0.4}, {-0.3, 0.4}};

  fs::path base = fs::temp_directory_path() / "rbm_harness_test";
  fs::remove_all(base);
  std::vector<std::string> sums, tabs;
  for (int rep = 0; rep < 3; ++rep) {
    ExperimentConfig c = cfg;
    c.workers = rep == 2 ? 3 : 1;
    c.outputDir = (base / ("run" + std::to_string(rep))).string();
    auto sum = run_experiment(c);
    CHECK(sum.trials == 6);
    sums.push_back(slurp(fs::path(c.outputDir) / "summary.json"));
    tabs.push_back(slurp(fs::path(c.outputDir) / "trials.csv"));
  }
  CHECK(sums[0] == sums[1]);
  CHECK(sums[0] == sums[2]);
  CHECK(tabs[0] == tabs[1]);
  CHECK(tabs[0] == tabs[2]);
  fs::remove_all(base);
}

TEST_CASE("run summary confidence interval brackets the estimate") {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::ConeCensus;
  cfg.dt = 1e-3;
  cfg.horizon = 0.5;
  cfg.trials = 20;
  cfg.seed = 3;
  cfg.outputDir = (fs::temp_directory_path() / "rbm_census_test").string();
  auto sum = run_experiment(cfg);
  CHECK(sum.wilsonLow95 <= sum.estimate);
  CHECK(sum.estimate <= sum.wilsonHigh95);
  CHECK(sum.wilsonLow95 >= 0.0);
  CHECK(sum.wilsonHigh95 <= 1.0);
  fs::remove_all(cfg.outputDir);
}

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <variant>

#include "rbm/geometry.hpp"

namespace rbm {

enum class ExperimentKind { SyncFlow, ConeCensus, SingularityTrend, MirrorHalfplane, Theorem3 };

const char* experiment_name(ExperimentKind k);
ExperimentKind experiment_from_name(const std::string& name);  // throws InvalidConfig

struct StartPair {
  Point x, y;
};
struct StartGrid {
  Point center{};
  double radius = 0.05;
  int rows = 3, cols = 3;
};
// Start pairs swept by height above the frame vertex of (hinge, beta0).
struct StartSweep {
  double hinge = 1.0;
  double beta0 = 0.0;
  std::vector<double> offsets;
};
using StartSpec = std::variant<std::monostate, StartPair, StartGrid, StartSweep>;

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::SyncFlow;
  DomainSpec domain = Disk{{0.0, 0.0}, 1.0};
  double dt = 1e-3;
  double horizon = 1.0;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  double epsBd = 0.01;
  double epsAng = 0.05;
  double delta = 0.05;
  std::size_t kMax = 10000;
  double coneAlpha = 2.0 * kPi / 3.0;
  StartSpec start = std::monostate{};
  std::string outputDir = "out";
  int workers = 1;
  bool dumpPaths = false;
  std::vector<double> overlapBins = {0.2, 0.1, 0.05, 0.025};
};

struct RunSummary {
  std::string experiment;
  std::size_t trials = 0;
  std::size_t successes = 0;
  double estimate = 0.0;
  double wilsonLow95 = 0.0;
  double wilsonHigh95 = 0.0;
  double wallClockSeconds = 0.0;  // reported on stdout; kept out of summary.json
  std::string configEcho;         // canonical config JSON text
};

double normal_quantile(double p);
std::pair<double, double> wilson_interval(std::size_t k, std::size_t n, double conf);

ExperimentConfig config_from_json_text(const std::string& text);  // throws InvalidConfig
std::string config_to_json_text(const ExperimentConfig& cfg);

// Runs all trials over a bounded worker pool, merges by trial index, and
// writes <outputDir>/summary.json and <outputDir>/trials.csv. Outputs are
// byte-identical across reruns and worker counts.
RunSummary run_experiment(const ExperimentConfig& cfg);

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace rbm

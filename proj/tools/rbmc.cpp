#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rbm/domain_json.hpp"
#include "rbm/harness.hpp"
#include "rbm/mirror.hpp"
#include "rbm/stripmap.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct Overrides {
  std::string configPath;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<double> dt, horizon;
  std::optional<std::string> out;
  std::optional<int> workers;
  bool dumpPaths = false;
};

void add_common_flags(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--config", ov.configPath, "JSON config file; flags override its fields");
  cmd->add_option("--seed", ov.seed, "master seed");
  cmd->add_option("--trials", ov.trials, "number of Monte Carlo trials");
  cmd->add_option("--dt", ov.dt, "time step");
  cmd->add_option("--horizon", ov.horizon, "time horizon");
  cmd->add_option("--out", ov.out, "output directory");
  cmd->add_option("--workers", ov.workers, "worker threads");
  cmd->add_flag("--dump-paths", ov.dumpPaths, "write per-trial path CSVs");
}

rbm::ExperimentConfig load_base(const Overrides& ov, rbm::ExperimentKind kind) {
  rbm::ExperimentConfig cfg;
  if (!ov.configPath.empty()) {
    std::ifstream f(ov.configPath);
    if (!f) rbm::raise(rbm::Errc::InvalidConfig, "cannot open config " + ov.configPath);
    std::ostringstream ss;
    ss << f.rdbuf();
    cfg = rbm::config_from_json_text(ss.str());
  } else {
    cfg.experiment = kind;
  }
  return cfg;
}

void apply_overrides(rbm::ExperimentConfig& cfg, const Overrides& ov) {
  if (ov.seed) cfg.seed = *ov.seed;
  if (ov.trials) cfg.trials = *ov.trials;
  if (ov.dt) cfg.dt = *ov.dt;
  if (ov.horizon) cfg.horizon = *ov.horizon;
  if (ov.out) cfg.outputDir = *ov.out;
  if (ov.workers) cfg.workers = *ov.workers;
  if (ov.dumpPaths) cfg.dumpPaths = true;
}

int run_and_report(const rbm::ExperimentConfig& cfg) {
  rbm::RunSummary sum = rbm::run_experiment(cfg);
  std::printf("experiment=%s trials=%zu successes=%zu estimate=%.6g wilson95=[%.6g, %.6g]\n",
              sum.experiment.c_str(), sum.trials, sum.successes, sum.estimate, sum.wilsonLow95,
              sum.wilsonHigh95);
  std::printf("wall clock: %.3f s; outputs in %s\n", sum.wallClockSeconds, cfg.outputDir.c_str());
  return 0;
}

// ---- strip-check helpers ----------------------------------------------------

rbm::MirrorTrajectory read_trajectory_csv(const std::string& path, double alpha) {
  std::ifstream f(path);
  if (!f) rbm::raise(rbm::Errc::IoError, "cannot open trajectory " + path);
  std::string line;
  if (!std::getline(f, line)) rbm::raise(rbm::Errc::IoError, "empty trajectory file");
  rbm::MirrorTrajectory tr;
  tr.domain = rbm::Wedge{alpha};
  std::vector<double> times;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ss, cell, ',')) v.push_back(std::strtod(cell.c_str(), nullptr));
    if (v.size() < 11) rbm::raise(rbm::Errc::IoError, "trajectory row with too few columns");
    times.push_back(v[0]);
    tr.X.push_back({v[1], v[2]});
    tr.Y.push_back({v[3], v[4]});
    tr.Lx.push_back(v[5]);
    tr.Ly.push_back(v[6]);
    if (std::isfinite(v[7]) && std::isfinite(v[8]))
      tr.hinge.push_back(rbm::Point{v[7], v[8]});
    else
      tr.hinge.push_back(std::nullopt);
    tr.beta.push_back(v[9]);
    tr.phaseId.push_back(static_cast<int>(v[10]));
  }
  if (tr.X.size() < 2) rbm::raise(rbm::Errc::IoError, "trajectory needs at least two rows");
  tr.grid.n = tr.X.size() - 1;
  tr.grid.dt = times.size() > 1 ? times[1] - times[0] : 1.0;
  tr.grid.dim = 2;
  // mirrors reconstructed as perpendicular bisectors of the recorded pair
  tr.mirror.resize(tr.X.size());
  for (std::size_t k = 0; k < tr.X.size(); ++k) {
    if (rbm::dist(tr.X[k], tr.Y[k]) > 1e-12)
      tr.mirror[k] = rbm::mirror_line(tr.X[k], tr.Y[k]);
    else if (!tr.coupledAt)
      tr.coupledAt = k;
  }
  tr.pushLowX.assign(tr.grid.n, 0.0);
  tr.pushHighX.assign(tr.grid.n, 0.0);
  tr.pushLowY.assign(tr.grid.n, 0.0);
  tr.pushHighY.assign(tr.grid.n, 0.0);
  return tr;
}

int run_strip_check(std::size_t frames, std::size_t points, const std::string& trajectory,
                    double alpha, const std::string& outDir, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ua(0.1, rbm::kPi / 2.0 - 0.1);
  std::uniform_real_distribution<double> uh(0.5, 1.5);
  std::uniform_real_distribution<double> uf(0.05, 0.95);
  std::uniform_real_distribution<double> ur(0.01, 3.0);

  double maxResidual = 0.0;
  double maxRelErr = 0.0;
  std::size_t negativityViolations = 0;
  for (std::size_t i = 0; i < frames; ++i) {
    double a = ua(rng);
    double beta = a + uf(rng) * (rbm::kPi / 4.0 - a / 2.0);
    auto fr = rbm::build_frame(a, uh(rng), beta);
    for (std::size_t p = 0; p < points; ++p) {
      double lo = 2.0 * fr.beta - rbm::kPi, hi = fr.alpha;
      double ang = lo + uf(rng) * (hi - lo);
      rbm::Complex z = rbm::to_complex(fr.Aprime) + std::polar(ur(rng), ang);
      maxResidual = std::max(maxResidual, rbm::symmetry_residual(fr, z));
    }
    const double db = 1e-6;
    double r = fr.A - uf(rng) * std::min(1.0, fr.A - fr.H);
    if (r > fr.H && r < fr.A) {
      double cf = rbm::dfdbeta(fr, r);
      double fd = (rbm::eval_f(rbm::build_frame(a, fr.H, beta + db), {r, 0.0}).real() -
                   rbm::eval_f(rbm::build_frame(a, fr.H, beta - db), {r, 0.0}).real()) /
                  (2.0 * db);
      maxRelErr = std::max(maxRelErr, std::fabs(fd - cf) / std::fabs(cf));
      if (cf >= 0.0) ++negativityViolations;
    }
    double rg = fr.AprimeAbs + uf(rng) * std::min(1.0, fr.HprimeAbs - fr.AprimeAbs);
    if (rg > fr.AprimeAbs && rg < fr.HprimeAbs) {
      double cf = rbm::dgdgamma(fr, rg);
      rbm::Complex zg = std::polar(rg, a);
      double fd =
          (rbm::eval_g(rbm::build_frame_from_eY(a, fr.HprimeAbs, fr.gamma + db), zg).real() -
           rbm::eval_g(rbm::build_frame_from_eY(a, fr.HprimeAbs, fr.gamma - db), zg).real()) /
          (2.0 * db);
      maxRelErr = std::max(maxRelErr, std::fabs(fd - cf) / std::fabs(cf));
      if (cf >= 0.0) ++negativityViolations;
    }
  }

  ordered_json j;
  j["frames_tested"] = frames;
  j["max_symmetry_residual"] = maxResidual;
  j["derivative_max_relerr"] = maxRelErr;
  j["negativity_violations"] = negativityViolations;

  if (!trajectory.empty()) {
    rbm::MirrorTrajectory tr = read_trajectory_csv(trajectory, alpha);
    auto frs = rbm::frames_along(tr, alpha);
    auto sp = rbm::strip_process(tr, frs);
    j["trajectory_steps"] = tr.X.size();
    j["strip_evaluated"] = sp.evaluated;
    j["strip_skipped"] = sp.skipped;
    double worst = 0.0;
    for (double v : sp.consistencyResidual)
      if (std::isfinite(v)) worst = std::max(worst, v);
    j["trajectory_max_consistency_residual"] = worst;
    if (!outDir.empty()) {
      fs::create_directories(outDir);
      std::ofstream csv(fs::path(outDir) / "strip_diagnostics.csv");
      csv << "step,ReZ,ImZ,rhoTilde,residual\n";
      char buf[200];
      for (std::size_t k = 0; k < sp.z.size(); ++k) {
        double re = sp.z[k] ? sp.z[k]->real() : std::nan("");
        double im = sp.z[k] ? sp.z[k]->imag() : std::nan("");
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,%.17g\n", k, re, im, sp.rhoTilde[k],
                      sp.consistencyResidual[k]);
        csv << buf;
      }
    }
  }

  if (!outDir.empty()) {
    fs::create_directories(outDir);
    std::ofstream js(fs::path(outDir) / "strip_check.json");
    js << j.dump(2) << "\n";
  }
  std::cout << j.dump(2) << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coupled reflected Brownian motion experiments"};
  app.require_subcommand(1);

  Overrides ovRun, ovSync, ovCone, ovOverlap, ovMirror;

  CLI::App* cRun = app.add_subcommand("run", "run an experiment described by a JSON config");
  add_common_flags(cRun, ovRun);

  CLI::App* cSync = app.add_subcommand("simulate-sync", "synchronous flow boundary experiment");
  add_common_flags(cSync, ovSync);
  double syncRadius = 0.05;
  std::vector<double> syncCenter = {0.2, 0.0};
  cSync->add_option("--grid-radius", syncRadius, "start grid ball radius");
  cSync->add_option("--grid-center", syncCenter, "start grid center")->expected(2);

  CLI::App* cCone = app.add_subcommand("detect-cones", "cone point census on Brownian paths");
  add_common_flags(cCone, ovCone);
  double coneAlpha = 2.0 * rbm::kPi / 3.0;
  cCone->add_option("--cone-alpha", coneAlpha, "cone half-angle");

  CLI::App* cOverlap = app.add_subcommand("measure-overlap", "local-time overlap trend");
  add_common_flags(cOverlap, ovOverlap);
  std::vector<double> ox = {-0.3, 0.1}, oy = {0.3, 0.1};
  cOverlap->add_option("--x0", ox, "first start")->expected(2);
  cOverlap->add_option("--y0", oy, "second start")->expected(2);

  CLI::App* cMirror = app.add_subcommand("simulate-mirror", "mirror coupling experiments");
  add_common_flags(cMirror, ovMirror);
  std::string mDomain = "halfplane";
  double mAlpha = rbm::kPi / 4.0;
  std::vector<double> mx = {0.3, 0.4}, my = {-0.3, 0.4};
  double mEps = 0.01, mDelta = 0.05, mHinge = 1.0, mBeta0 = 5.0 * rbm::kPi / 16.0;
  std::size_t mKmax = 10000;
  std::vector<double> mOffsets = {0.03, 0.04, 0.05};
  bool mPairGiven = false;
  cMirror->add_option("--domain", mDomain, "halfplane | wedge");
  cMirror->add_option("--alpha", mAlpha, "wedge angle");
  auto* ox0 = cMirror->add_option("--x0", mx, "first start")->expected(2);
  cMirror->add_option("--y0", my, "second start")->expected(2);
  cMirror->add_option("--eps-bd", mEps, "boundary band width");
  cMirror->add_option("--delta", mDelta, "event separation threshold");
  cMirror->add_option("--k-max", mKmax, "phase cap");
  cMirror->add_option("--hinge", mHinge, "initial mirror foot on the first edge");
  cMirror->add_option("--beta0", mBeta0, "initial mirror inclination");
  cMirror->add_option("--offsets", mOffsets, "sweep heights above the frame vertex");

  CLI::App* cStrip = app.add_subcommand("strip-check", "strip map identity and derivative checks");
  std::size_t sFrames = 1000, sPoints = 1000;
  std::string sTraj, sOut;
  double sAlpha = rbm::kPi / 4.0;
  std::uint64_t sSeed = 17;
  cStrip->add_option("--frames", sFrames, "random frames to test");
  cStrip->add_option("--points", sPoints, "points per frame");
  cStrip->add_option("--trajectory", sTraj, "mirror trajectory CSV for per-step diagnostics");
  cStrip->add_option("--alpha", sAlpha, "wedge angle of the trajectory");
  cStrip->add_option("--out", sOut, "output directory");
  cStrip->add_option("--seed", sSeed, "sweep seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (cRun->parsed()) {
      if (ovRun.configPath.empty())
        rbm::raise(rbm::Errc::InvalidConfig, "run requires --config");
      auto cfg = load_base(ovRun, rbm::ExperimentKind::SyncFlow);
      apply_overrides(cfg, ovRun);
      return run_and_report(cfg);
    }
    if (cSync->parsed()) {
      auto cfg = load_base(ovSync, rbm::ExperimentKind::SyncFlow);
      if (ovSync.configPath.empty()) {
        cfg.domain = rbm::Disk{{0, 0}, 1.0};
        cfg.dt = 1e-3;
        cfg.horizon = 50.0;
        cfg.trials = 200;
        cfg.start = rbm::StartGrid{{syncCenter[0], syncCenter[1]}, syncRadius, 3, 3};
        cfg.outputDir = "out_sync";
      }
      apply_overrides(cfg, ovSync);
      return run_and_report(cfg);
    }
    if (cCone->parsed()) {
      auto cfg = load_base(ovCone, rbm::ExperimentKind::ConeCensus);
      if (ovCone.configPath.empty()) {
        cfg.dt = 1e-4;
        cfg.horizon = 1.0;
        cfg.trials = 1000;
        cfg.coneAlpha = coneAlpha;
        cfg.outputDir = "out_cones";
      }
      apply_overrides(cfg, ovCone);
      return run_and_report(cfg);
    }
    if (cOverlap->parsed()) {
      auto cfg = load_base(ovOverlap, rbm::ExperimentKind::SingularityTrend);
      if (ovOverlap.configPath.empty()) {
        cfg.domain = rbm::HalfPlane{rbm::Line{{0, 0}, 0.0}, rbm::UnitVector{0, 1}};
        cfg.dt = 1e-3;
        cfg.horizon = 5.0;
        cfg.trials = 100;
        cfg.start = rbm::StartPair{{ox[0], ox[1]}, {oy[0], oy[1]}};
        cfg.outputDir = "out_overlap";
      }
      apply_overrides(cfg, ovOverlap);
      return run_and_report(cfg);
    }
    if (cMirror->parsed()) {
      mPairGiven = ox0->count() > 0;
      rbm::ExperimentKind kind = mDomain == "wedge" ? rbm::ExperimentKind::Theorem3
                                                    : rbm::ExperimentKind::MirrorHalfplane;
      auto cfg = load_base(ovMirror, kind);
      if (ovMirror.configPath.empty()) {
        cfg.epsBd = mEps;
        cfg.delta = mDelta;
        cfg.kMax = mKmax;
        if (kind == rbm::ExperimentKind::Theorem3) {
          cfg.domain = rbm::Wedge{mAlpha};
          cfg.dt = 2e-5;
          cfg.horizon = 0.2;
          cfg.trials = 1000;
          if (mPairGiven)
            cfg.start = rbm::StartPair{{mx[0], mx[1]}, {my[0], my[1]}};
          else
            cfg.start = rbm::StartSweep{mHinge, mBeta0, mOffsets};
          cfg.outputDir = "out_theorem3";
        } else {
          cfg.domain = rbm::HalfPlane{rbm::Line{{0, 0}, 0.0}, rbm::UnitVector{0, 1}};
          cfg.dt = 2.5e-4;
          cfg.horizon = 1.0;
          cfg.trials = 100;
          cfg.start = rbm::StartPair{{mx[0], mx[1]}, {my[0], my[1]}};
          cfg.outputDir = "out_mirror";
        }
      }
      apply_overrides(cfg, ovMirror);
      return run_and_report(cfg);
    }
    if (cStrip->parsed()) {
      return run_strip_check(sFrames, sPoints, sTraj, sAlpha, sOut, sSeed);
    }
  } catch (const rbm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == rbm::Errc::InvalidConfig ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

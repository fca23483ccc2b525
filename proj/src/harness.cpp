#include "rbm/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include "rbm/domain_json.hpp"
#include "rbm/ltmeasure.hpp"
#include "rbm/mirror.hpp"
#include "rbm/cone.hpp"
#include "rbm/reflect.hpp"

namespace rbm {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

nlohmann::ordered_json domain_to_json(const DomainSpec& d) {
  ordered_json j;
  if (const auto* hp = std::get_if<HalfPlane>(&d)) {
    j["kind"] = "halfplane";
    j["base"] = {hp->boundary.base.x, hp->boundary.base.y};
    j["angle"] = hp->boundary.angle;
    j["inward"] = {hp->inward.ux, hp->inward.uy};
  } else if (const auto* disk = std::get_if<Disk>(&d)) {
    j["kind"] = "disk";
    j["center"] = {disk->center.x, disk->center.y};
    j["radius"] = disk->radius;
  } else if (const auto* w = std::get_if<Wedge>(&d)) {
    j["kind"] = "wedge";
    j["alpha"] = w->alpha;
  } else {
    const auto& poly = std::get<ConvexPolygon>(d);
    j["kind"] = "polygon";
    auto arr = ordered_json::array();
    for (Point v : poly.vertices) arr.push_back({v.x, v.y});
    j["vertices"] = arr;
  }
  return j;
}

DomainSpec domain_from_json(const json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    DomainSpec d;
    if (kind == "halfplane") {
      auto base = j.at("base");
      auto inward = j.at("inward");
      d = HalfPlane{line_with_angle({base.at(0), base.at(1)}, j.at("angle").get<double>()),
                    UnitVector::of(inward.at(0), inward.at(1))};
    } else if (kind == "disk") {
      auto c = j.at("center");
      d = Disk{{c.at(0), c.at(1)}, j.at("radius").get<double>()};
    } else if (kind == "wedge") {
      d = Wedge{j.at("alpha").get<double>()};
    } else if (kind == "polygon") {
      ConvexPolygon poly;
      for (const auto& v : j.at("vertices")) poly.vertices.push_back({v.at(0), v.at(1)});
      d = poly;
    } else {
      raise(Errc::InvalidConfig, "unknown domain kind '" + kind + "'");
    }
    validate_domain(d);
    return d;
  } catch (const json::exception& e) {
    raise(Errc::InvalidConfig, std::string("bad domain object: ") + e.what());
  } catch (const Error& e) {
    raise(Errc::InvalidConfig, std::string("bad domain: ") + e.what());
  }
}

const char* experiment_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::SyncFlow: return "syncFlow";
    case ExperimentKind::ConeCensus: return "coneCensus";
    case ExperimentKind::SingularityTrend: return "singularityTrend";
    case ExperimentKind::MirrorHalfplane: return "mirrorHalfplane";
    case ExperimentKind::Theorem3: return "theorem3";
  }
  return "unknown";
}

ExperimentKind experiment_from_name(const std::string& name) {
  if (name == "syncFlow") return ExperimentKind::SyncFlow;
  if (name == "coneCensus") return ExperimentKind::ConeCensus;
  if (name == "singularityTrend") return ExperimentKind::SingularityTrend;
  if (name == "mirrorHalfplane") return ExperimentKind::MirrorHalfplane;
  if (name == "theorem3") return ExperimentKind::Theorem3;
  raise(Errc::InvalidConfig, "unknown experiment '" + name + "'");
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) raise(Errc::RangeError, "quantile argument outside (0,1)");
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double dd[] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  double q, r, x;
  if (p < 0.02425) {
    q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
  } else if (p <= 0.97575) {
    q = p - 0.5;
    r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
  }
  double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  double u = e * std::sqrt(2.0 * kPi) * std::exp(x * x / 2.0);
  x = x - u / (1.0 + x * u / 2.0);
  return x;
}

std::pair<double, double> wilson_interval(std::size_t k, std::size_t n, double conf) {
  if (n < 1 || k > n) raise(Errc::RangeError, "need 0 <= k <= n, n >= 1");
  if (!(conf > 0.0 && conf < 1.0)) raise(Errc::RangeError, "confidence outside (0,1)");
  const double z = normal_quantile(0.5 + conf / 2.0);
  const double nn = static_cast<double>(n);
  const double phat = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (phat + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  const int nw = std::min<int>(workers, static_cast<int>(count));
  pool.reserve(static_cast<std::size_t>(nw));
  for (int w = 0; w < nw; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

StartSpec start_from_json(const json& j) {
  try {
    const std::string type = j.at("type").get<std::string>();
    if (type == "pair") {
      auto x = j.at("x");
      auto y = j.at("y");
      return StartPair{{x.at(0), x.at(1)}, {y.at(0), y.at(1)}};
    }
    if (type == "grid") {
      auto c = j.at("center");
      StartGrid g;
      g.center = {c.at(0), c.at(1)};
      g.radius = j.at("radius").get<double>();
      g.rows = j.value("rows", 3);
      g.cols = j.value("cols", 3);
      return g;
    }
    if (type == "sweep") {
      StartSweep s;
      s.hinge = j.at("hinge").get<double>();
      s.beta0 = j.at("beta0").get<double>();
      for (const auto& o : j.at("offsets")) s.offsets.push_back(o.get<double>());
      return s;
    }
    raise(Errc::InvalidConfig, "unknown start type '" + type + "'");
  } catch (const json::exception& e) {
    raise(Errc::InvalidConfig, std::string("bad start object: ") + e.what());
  }
}

ordered_json start_to_json(const StartSpec& s) {
  ordered_json j;
  if (const auto* p = std::get_if<StartPair>(&s)) {
    j["type"] = "pair";
    j["x"] = {p->x.x, p->x.y};
    j["y"] = {p->y.x, p->y.y};
  } else if (const auto* g = std::get_if<StartGrid>(&s)) {
    j["type"] = "grid";
    j["center"] = {g->center.x, g->center.y};
    j["radius"] = g->radius;
    j["rows"] = g->rows;
    j["cols"] = g->cols;
  } else if (const auto* w = std::get_if<StartSweep>(&s)) {
    j["type"] = "sweep";
    j["hinge"] = w->hinge;
    j["beta0"] = w->beta0;
    j["offsets"] = w->offsets;
  } else {
    j = nullptr;
  }
  return j;
}

std::size_t steps_of(const ExperimentConfig& cfg) {
  double raw = cfg.horizon / cfg.dt;
  auto n = static_cast<std::size_t>(raw + 0.5);
  if (n < 1) raise(Errc::InvalidConfig, "horizon shorter than one step");
  return n;
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) raise(Errc::InvalidConfig, "trials must be >= 1");
  if (!(cfg.dt > 0.0)) raise(Errc::InvalidConfig, "dt must be positive");
  if (!(cfg.horizon >= cfg.dt)) raise(Errc::InvalidConfig, "horizon must be >= dt");
  if (!(cfg.epsBd > 0.0)) raise(Errc::InvalidConfig, "epsBd must be positive");
  if (cfg.workers < 1) raise(Errc::InvalidConfig, "workers must be >= 1");
  if (cfg.kMax < 1) raise(Errc::InvalidConfig, "kMax must be >= 1");
  validate_domain(cfg.domain);
}

struct TrialTable {
  std::string header;
  std::vector<std::string> rows;  // merged in trial order
  std::size_t successes = 0;
  std::size_t total = 0;  // denominator for the estimate
};

TrialTable run_sync_flow(const ExperimentConfig& cfg, const fs::path& outDir) {
  const auto* g = std::get_if<StartGrid>(&cfg.start);
  if (!g) raise(Errc::InvalidConfig, "syncFlow needs a grid start");
  std::vector<Point> starts;
  for (int i = 0; i < g->rows; ++i) {
    for (int jj = 0; jj < g->cols; ++jj) {
      double fx = g->rows == 1 ? 0.0 : (2.0 * i / (g->rows - 1) - 1.0);
      double fy = g->cols == 1 ? 0.0 : (2.0 * jj / (g->cols - 1) - 1.0);
      Point p = g->center + (g->radius / std::sqrt(2.0)) * Point{fx, fy};
      if (signed_boundary_distance(cfg.domain, p) <= 0.0)
        raise(Errc::InvalidConfig, "grid start outside the domain");
      starts.push_back(p);
    }
  }
  const std::size_t n = steps_of(cfg);
  TrialTable tab;
  tab.header = "trial,success,stepIndex";
  tab.rows.resize(cfg.trials);
  std::vector<char> ok(cfg.trials, 0);
  parallel_for(cfg.trials, cfg.workers, [&](std::size_t t) {
    IncrementStream noise =
        sample_increments(SeedSpec{cfg.seed, t, 0}, PathGrid{cfg.dt, n, 2});
    FlowState flow = simulate_flow(cfg.domain, starts, noise, cfg.epsBd);
    auto hit = detect_simultaneous_boundary(flow, cfg.epsBd);
    ok[t] = hit.has_value();
    tab.rows[t] = std::to_string(t) + "," + (hit ? "1" : "0") + "," +
                  (hit ? std::to_string(*hit) : "-1");
    if (cfg.dumpPaths && t < 20) {
      for (std::size_t m = 0; m < flow.members.size(); ++m) {
        std::ofstream f(outDir /
                        ("paths/trial_" + std::to_string(t) + "_member_" + std::to_string(m) +
                         ".csv"));
        write_csv(flow.members[m], f);
      }
    }
  });
  for (char c : ok) tab.successes += c ? 1 : 0;
  tab.total = cfg.trials;
  return tab;
}

TrialTable run_cone_census(const ExperimentConfig& cfg) {
  const std::size_t n = steps_of(cfg);
  TrialTable tab;
  tab.header = "trial,coneCount,firstConeTime";
  tab.rows.resize(cfg.trials);
  std::vector<char> ok(cfg.trials, 0);
  parallel_for(cfg.trials, cfg.workers, [&](std::size_t t) {
    IncrementStream noise =
        sample_increments(SeedSpec{cfg.seed, t, 0}, PathGrid{cfg.dt, n, 2});
    std::vector<double> flat(2 * (n + 1), 0.0);
    double px = 0.0, py = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      px += noise.at(k, 0);
      py += noise.at(k, 1);
      flat[2 * (k + 1)] = px;
      flat[2 * (k + 1) + 1] = py;
    }
    ConePointQuery q{cfg.coneAlpha, {1.0, 0.0}, ConeMode::Global};
    auto pts = find_cone_points(PathView{flat, 2}, q);
    std::size_t count = 0;
    double first = -1.0;
    for (std::size_t idx : pts) {
      if (idx >= n) continue;  // interior times only
      if (count == 0) first = cfg.dt * static_cast<double>(idx);
      ++count;
    }
    ok[t] = count > 0;
    tab.rows[t] = std::to_string(t) + "," + std::to_string(count) + "," + fmt_double(first);
  });
  for (char c : ok) tab.successes += c ? 1 : 0;
  tab.total = cfg.trials;
  return tab;
}

TrialTable run_singularity_trend(const ExperimentConfig& cfg, const fs::path& outDir) {
  if (!std::holds_alternative<HalfPlane>(cfg.domain))
    raise(Errc::InvalidConfig, "singularityTrend needs a half-plane domain");
  const auto* p = std::get_if<StartPair>(&cfg.start);
  if (!p) raise(Errc::InvalidConfig, "singularityTrend needs a pair start");
  if (cfg.overlapBins.empty()) raise(Errc::InvalidConfig, "need at least one overlap bin width");
  const std::size_t n = steps_of(cfg);
  TrialTable tab;
  tab.header = "seed,h,overlap,T_index";
  std::vector<std::string> blocks(cfg.trials);
  std::vector<char> ok(cfg.trials, 0);
  parallel_for(cfg.trials, cfg.workers, [&](std::size_t t) {
    PathGrid grid{cfg.dt, n, 2};
    auto px = simulate_reflected(cfg.domain, p->x,
                                 sample_increments(SeedSpec{cfg.seed, t, 0}, grid), cfg.epsBd);
    auto py = simulate_reflected(cfg.domain, p->y,
                                 sample_increments(SeedSpec{cfg.seed, t, 1}, grid), cfg.epsBd);
    auto T = stopping_time_T(px, py, cfg.domain, cfg.epsBd, cfg.epsAng);
    const std::size_t upTo = T ? *T : n;
    LocalTimeMeasure mx = measure_from_local_time(px.grid, px.localTime);
    LocalTimeMeasure my = measure_from_local_time(py.grid, py.localTime);
    if (cfg.dumpPaths && t < 50) {
      std::ofstream fx(outDir / ("paths/trial_" + std::to_string(t) + "_x.csv"));
      write_csv(px, fx);
      std::ofstream fy(outDir / ("paths/trial_" + std::to_string(t) + "_y.csv"));
      write_csv(py, fy);
    }
    std::string block;
    double firstBin = std::numeric_limits<double>::quiet_NaN();
    double lastBin = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t bi = 0; bi < cfg.overlapBins.size(); ++bi) {
      const double h = cfg.overlapBins[bi];
      double ov = std::numeric_limits<double>::quiet_NaN();
      if (upTo > 0) {
        try {
          ov = overlap_statistic(mx, my, h, upTo);
        } catch (const Error&) {
          // window carries no local time mass
        }
      }
      if (bi == 0) firstBin = ov;
      if (bi + 1 == cfg.overlapBins.size()) lastBin = ov;
      block += std::to_string(t) + "," + fmt_double(h) + "," + fmt_double(ov) + "," +
               (T ? std::to_string(*T) : "-1") + "\n";
    }
    ok[t] = std::isfinite(firstBin) && std::isfinite(lastBin) && firstBin > lastBin;
    blocks[t] = std::move(block);
  });
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    tab.successes += ok[t] ? 1 : 0;
    // strip the trailing newline; rows are joined uniformly later
    std::string& b = blocks[t];
    if (!b.empty() && b.back() == '\n') b.pop_back();
    tab.rows.push_back(b);
  }
  tab.total = cfg.trials;
  return tab;
}

TrialTable run_mirror_halfplane(const ExperimentConfig& cfg, const fs::path& outDir) {
  if (!std::holds_alternative<HalfPlane>(cfg.domain))
    raise(Errc::InvalidConfig, "mirrorHalfplane needs a half-plane domain");
  const auto* p = std::get_if<StartPair>(&cfg.start);
  if (!p) raise(Errc::InvalidConfig, "mirrorHalfplane needs a pair start");
  const std::size_t n = steps_of(cfg);
  TrialTable tab;
  tab.header = "trial,coupled,coupledStep";
  tab.rows.resize(cfg.trials);
  std::vector<char> ok(cfg.trials, 0);
  parallel_for(cfg.trials, cfg.workers, [&](std::size_t t) {
    MirrorTrajectory tr = simulate_halfplane_mirror(cfg.domain, p->x, p->y,
                                                    SeedSpec{cfg.seed, t, 0}, PathGrid{cfg.dt, n, 2});
    ok[t] = tr.coupledAt.has_value();
    tab.rows[t] = std::to_string(t) + "," + (tr.coupledAt ? "1" : "0") + "," +
                  (tr.coupledAt ? std::to_string(*tr.coupledAt) : "-1");
    if (cfg.dumpPaths && t < 100) {
      std::ofstream f(outDir / ("paths/trial_" + std::to_string(t) + ".csv"));
      write_csv(tr, f);
    }
  });
  for (char c : ok) tab.successes += c ? 1 : 0;
  tab.total = cfg.trials;
  return tab;
}

TrialTable run_theorem3(const ExperimentConfig& cfg, const fs::path& outDir) {
  const auto* w = std::get_if<Wedge>(&cfg.domain);
  if (!w) raise(Errc::InvalidConfig, "theorem3 needs a wedge domain");
  std::vector<WedgePair> pairs;
  if (const auto* sweep = std::get_if<StartSweep>(&cfg.start)) {
    for (double off : sweep->offsets) {
      WedgePair wp = wedge_event_pair(w->alpha, sweep->hinge, sweep->beta0, off);
      if (signed_boundary_distance(cfg.domain, wp.x) <= cfg.epsBd ||
          signed_boundary_distance(cfg.domain, wp.y) <= cfg.epsBd)
        raise(Errc::InvalidConfig, "sweep offset starts inside the boundary band");
      pairs.push_back(wp);
    }
  } else if (const auto* pr = std::get_if<StartPair>(&cfg.start)) {
    pairs.push_back(WedgePair{pr->x, pr->y});
  } else {
    raise(Errc::InvalidConfig, "theorem3 needs a sweep or pair start");
  }
  const std::size_t n = steps_of(cfg);
  const std::size_t total = pairs.size() * cfg.trials;
  TrialTable tab;
  tab.header = "pair,trial,occurred,stepIndex,radialGap";
  tab.rows.resize(total);
  std::vector<char> ok(total, 0);
  parallel_for(total, cfg.workers, [&](std::size_t i) {
    const std::size_t pairIdx = i / cfg.trials;
    const std::size_t t = i % cfg.trials;
    const WedgePair& wp = pairs[pairIdx];
    std::string row;
    try {
      MirrorTrajectory tr = simulate_polygon_mirror(cfg.domain, wp.x, wp.y, SeedSpec{cfg.seed, i, 0},
                                                    PathGrid{cfg.dt, n, 2}, cfg.kMax, cfg.epsBd);
      Theorem3Event ev = detect_theorem3_event(tr, w->alpha, cfg.epsBd, cfg.delta);
      ok[i] = ev.occurred;
      row = std::to_string(pairIdx) + "," + std::to_string(t) + "," + (ev.occurred ? "1" : "0") +
            "," + (ev.stepIndex ? std::to_string(*ev.stepIndex) : std::string("-1")) + "," +
            fmt_double(ev.radialGap);
      if (cfg.dumpPaths && i < 100) {
        std::ofstream f(outDir / ("paths/trial_" + std::to_string(i) + ".csv"));
        write_csv(tr, f);
      }
    } catch (const Error&) {
      // a degenerate trial (e.g. coincident pair) counts as a non-event
      row = std::to_string(pairIdx) + "," + std::to_string(t) + ",0,-2,0";
    }
    tab.rows[i] = row;
  });
  for (char c : ok) tab.successes += c ? 1 : 0;
  tab.total = total;
  return tab;
}

}  // namespace

ExperimentConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    raise(Errc::InvalidConfig, std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    cfg.experiment = experiment_from_name(j.at("experiment").get<std::string>());
    if (j.contains("domain")) cfg.domain = domain_from_json(j.at("domain"));
    cfg.dt = j.value("dt", cfg.dt);
    cfg.horizon = j.value("horizon", cfg.horizon);
    cfg.trials = j.value("trials", cfg.trials);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.epsBd = j.value("epsBd", cfg.epsBd);
    cfg.epsAng = j.value("epsAng", cfg.epsAng);
    cfg.delta = j.value("delta", cfg.delta);
    cfg.kMax = j.value("kMax", cfg.kMax);
    cfg.coneAlpha = j.value("coneAlpha", cfg.coneAlpha);
    if (j.contains("start") && !j.at("start").is_null()) cfg.start = start_from_json(j.at("start"));
    cfg.outputDir = j.value("outputDir", cfg.outputDir);
    cfg.workers = j.value("workers", cfg.workers);
    cfg.dumpPaths = j.value("dumpPaths", cfg.dumpPaths);
    if (j.contains("overlapBins")) {
      cfg.overlapBins.clear();
      for (const auto& b : j.at("overlapBins")) cfg.overlapBins.push_back(b.get<double>());
    }
  } catch (const json::exception& e) {
    raise(Errc::InvalidConfig, std::string("bad config field: ") + e.what());
  }
  validate_config(cfg);
  return cfg;
}

// The echo nails down the experiment definition only: execution details
// (output directory, worker count, path dumping) stay out so that reruns
// with different worker counts produce byte-identical summaries.
std::string config_to_json_text(const ExperimentConfig& cfg) {
  ordered_json j;
  j["experiment"] = experiment_name(cfg.experiment);
  j["domain"] = domain_to_json(cfg.domain);
  j["dt"] = cfg.dt;
  j["horizon"] = cfg.horizon;
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  j["epsBd"] = cfg.epsBd;
  j["epsAng"] = cfg.epsAng;
  j["delta"] = cfg.delta;
  j["kMax"] = cfg.kMax;
  j["coneAlpha"] = cfg.coneAlpha;
  j["start"] = start_to_json(cfg.start);
  j["overlapBins"] = cfg.overlapBins;
  return j.dump(2);
}

RunSummary run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path outDir(cfg.outputDir);
  std::error_code ec;
  fs::create_directories(outDir, ec);
  if (cfg.dumpPaths) fs::create_directories(outDir / "paths", ec);
  if (ec) raise(Errc::IoError, "cannot create output directory " + outDir.string());

  TrialTable tab;
  switch (cfg.experiment) {
    case ExperimentKind::SyncFlow: tab = run_sync_flow(cfg, outDir); break;
    case ExperimentKind::ConeCensus: tab = run_cone_census(cfg); break;
    case ExperimentKind::SingularityTrend: tab = run_singularity_trend(cfg, outDir); break;
    case ExperimentKind::MirrorHalfplane: tab = run_mirror_halfplane(cfg, outDir); break;
    case ExperimentKind::Theorem3: tab = run_theorem3(cfg, outDir); break;
  }

  RunSummary sum;
  sum.experiment = experiment_name(cfg.experiment);
  sum.trials = tab.total;
  sum.successes = tab.successes;
  sum.estimate = tab.total ? static_cast<double>(tab.successes) / static_cast<double>(tab.total) : 0.0;
  auto ci = wilson_interval(tab.successes, std::max<std::size_t>(1, tab.total), 0.95);
  sum.wilsonLow95 = ci.first;
  sum.wilsonHigh95 = ci.second;
  sum.configEcho = config_to_json_text(cfg);

  {
    std::ofstream csv(outDir / "trials.csv", std::ios::binary);
    if (!csv) raise(Errc::IoError, "cannot write trials.csv");
    csv << tab.header << "\n";
    for (const auto& r : tab.rows) csv << r << "\n";
  }
  {
    ordered_json j;
    j["experiment"] = sum.experiment;
    j["trials"] = sum.trials;
    j["successes"] = sum.successes;
    j["estimate"] = sum.estimate;
    j["wilsonLow95"] = sum.wilsonLow95;
    j["wilsonHigh95"] = sum.wilsonHigh95;
    j["config"] = ordered_json::parse(sum.configEcho);
    std::ofstream js(outDir / "summary.json", std::ios::binary);
    if (!js) raise(Errc::IoError, "cannot write summary.json");
    js << j.dump(2) << "\n";
  }

  sum.wallClockSeconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return sum;
}

}  // namespace rbm

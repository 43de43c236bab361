#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include "cpflow/flow.hpp"

namespace cpflow {

namespace {

LevelRun run_level(const InfiniteComplexGenerator& gen, int n, const VertexRule& targets_rule,
                   const VertexRule& init_rule, const FlowConfig& config) {
  LevelRun run;
  run.n = n;
  run.ball = gen.extract(n);
  const ComplexTopology& c = run.ball.complex;

  std::vector<double> t_hat(c.vertex_count());
  std::vector<double> u0(c.vertex_count());
  for (std::size_t i = 0; i < c.vertex_count(); ++i) {
    t_hat[i] = targets_rule(c.id(i));
    u0[i] = init_rule(c.id(i));
  }
  const std::vector<std::size_t> frozen = c.boundary_vertices();
  run.result = integrate_finite(c, TargetCurvature(std::move(t_hat)), PatternState(std::move(u0)), frozen, config);
  if (run.result.report.status == SolveStatus::guard_tripped)
    throw Error("exhaustion level " + std::to_string(n) + ": guard tripped at t = " +
                std::to_string(run.result.report.final_time));

  for (double t : config.sample_times) {
    auto it = std::find_if(run.result.trace.samples.begin(), run.result.trace.samples.end(),
                           [t](const TraceSample& s) { return s.time == t; });
    if (it == run.result.trace.samples.end())
      throw Error("exhaustion level " + std::to_string(n) + ": no trace sample at t = " + std::to_string(t));
    run.samples.push_back(it->state);
  }
  return run;
}

}  // namespace

ExhaustionReport solve_exhaustion(const InfiniteComplexGenerator& gen, const VertexRule& targets_rule,
                                  const VertexRule& init_rule, const ExhaustionSettings& settings) {
  if (!(settings.tau > 0.0)) throw Error("exhaustion: tau must be > 0");
  if (settings.levels.empty()) throw Error("exhaustion: empty level range");
  if (settings.time_samples == 0) throw Error("exhaustion: time_samples must be >= 1");
  if (!targets_rule || !init_rule) throw Error("exhaustion: target and initial-value rules are required");

  std::vector<int> levels = settings.levels;
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  if (levels.front() < 0) throw Error("exhaustion: ball radii must be >= 0");
  if (settings.window_radius < 0 || settings.window_radius >= levels.front())
    throw Error("exhaustion: window radius " + std::to_string(settings.window_radius) +
                " must be smaller than the smallest ball radius " + std::to_string(levels.front()));

  ExhaustionReport report;
  for (std::size_t k = 1; k <= settings.time_samples; ++k)
    report.sample_times.push_back(settings.tau * static_cast<double>(k) / static_cast<double>(settings.time_samples));

  FlowConfig config = settings.config;
  config.t_end = settings.tau;
  config.sample_times = report.sample_times;
  config.stop_on_converge = false;
  config.record_every = std::numeric_limits<std::size_t>::max();
  config.validate();

  if (settings.parallel) {
    std::vector<std::future<LevelRun>> jobs;
    for (int n : levels)
      jobs.push_back(std::async(std::launch::async, run_level, std::cref(gen), n, std::cref(targets_rule),
                                std::cref(init_rule), std::cref(config)));
    for (auto& j : jobs) report.levels.push_back(j.get());
  } else {
    for (int n : levels) report.levels.push_back(run_level(gen, n, targets_rule, init_rule, config));
  }

  const ExtractedBall& smallest = report.levels.front().ball;
  for (std::size_t i = 0; i < smallest.complex.vertex_count(); ++i)
    if (smallest.distance[i] <= settings.window_radius) report.window.push_back(smallest.complex.id(i));

  // Window vertex indices per level.
  std::vector<std::vector<std::size_t>> where(report.levels.size());
  for (std::size_t l = 0; l < report.levels.size(); ++l)
    for (const auto& id : report.window) where[l].push_back(report.levels[l].ball.complex.index_of(id));

  for (std::size_t l = 0; l + 1 < report.levels.size(); ++l) {
    const LevelRun& a = report.levels[l];
    const LevelRun& b = report.levels[l + 1];
    double sup = 0.0;
    for (std::size_t s = 0; s < report.sample_times.size(); ++s)
      for (std::size_t w = 0; w < report.window.size(); ++w)
        sup = std::max(sup, std::abs(a.samples[s].u[where[l][w]] - b.samples[s].u[where[l + 1][w]]));
    report.comparisons.push_back(LevelComparison{a.n, b.n, sup});
  }

  auto window_at_tau = [&](std::size_t l) {
    std::vector<double> v;
    for (std::size_t idx : where[l]) v.push_back(report.levels[l].samples.back().u[idx]);
    return v;
  };
  const std::size_t last = report.levels.size() - 1;
  report.window_state = window_at_tau(last);
  if (report.levels.size() >= 3) {
    const auto a = window_at_tau(last - 2);
    const auto b = window_at_tau(last - 1);
    double d1 = 0.0, d2 = 0.0;
    for (std::size_t w = 0; w < a.size(); ++w) {
      d1 = std::max(d1, std::abs(b[w] - a[w]));
      d2 = std::max(d2, std::abs(report.window_state[w] - b[w]));
    }
    if (d1 > 0.0 && d2 > 0.0 && d2 < d1) {
      const double ratio = d2 / d1;
      for (std::size_t w = 0; w < a.size(); ++w)
        report.window_state[w] += (report.window_state[w] - b[w]) * ratio / (1.0 - ratio);
      report.extrapolated = true;
    }
  }
  return report;
}

}  // namespace cpflow

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>

#include "cpflow/analysis.hpp"

namespace cpflow {

std::string to_string(CheckMode mode) { return mode == CheckMode::brute ? "brute" : "sampled"; }

double subset_slack(const ComplexTopology& complex, const TargetCurvature& targets,
                    std::span<const std::size_t> subset) {
  std::vector<bool> in(complex.vertex_count(), false);
  double t_sum = 0.0;
  for (std::size_t v : subset) {
    if (v >= complex.vertex_count()) throw Error("subset vertex index out of range");
    if (!in[v]) t_sum += targets[v];
    in[v] = true;
  }
  double theta_sum = 0.0;
  for (const Edge& e : complex.edges())
    if (in[e.a] || in[e.b]) theta_sum += e.theta;
  return 2.0 * theta_sum - t_sum;
}

namespace {

std::vector<std::size_t> bits_to_indices(std::uint64_t mask) {
  std::vector<std::size_t> out;
  while (mask) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(mask)));
    mask &= mask - 1;
  }
  return out;
}

// Order by size, then lexicographically on the sorted index lists.
bool precedes(std::uint64_t a, std::uint64_t b) {
  const int pa = std::popcount(a), pb = std::popcount(b);
  if (pa != pb) return pa < pb;
  const std::uint64_t diff = a ^ b;
  if (!diff) return false;
  return (a & (diff & (~diff + 1))) != 0;
}

// Same ordering for index lists (sampled mode is not limited to 64 vertices).
bool precedes(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

}  // namespace

ConditionReport check_conditions(const ComplexTopology& complex, const TargetCurvature& targets,
                                 const PatternState* state0, CheckMode mode, SampledCheckOptions sampled) {
  const std::size_t n = complex.vertex_count();
  if (targets.size() != n)
    throw Error("targets cover " + std::to_string(targets.size()) + " vertices, complex has " + std::to_string(n));
  targets.validate();

  ConditionReport report;
  report.mode = mode;

  for (std::size_t v = 0; v < n; ++v) {
    if (!(targets[v] > 0.0)) {
      report.s1_ok = false;
      report.s1_violation = v;
      break;
    }
  }

  if (mode == CheckMode::brute) {
    if (n > kBruteForceMaxVertices)
      throw Error("brute-force condition check supports at most " + std::to_string(kBruteForceMaxVertices) +
                  " vertices, complex has " + std::to_string(n));
    report.exhaustive = true;

    std::vector<std::vector<std::pair<std::size_t, double>>> nbrs(n);
    for (const Edge& e : complex.edges()) {
      nbrs[e.a].emplace_back(e.b, e.theta);
      nbrs[e.b].emplace_back(e.a, e.theta);
    }

    // Gray-code walk: each step toggles one vertex and updates both sums in O(deg).
    std::uint64_t in = 0;
    double t_sum = 0.0, theta_sum = 0.0;
    std::uint64_t first_violator = 0, min_mask = 0;
    double min_slack = std::numeric_limits<double>::infinity();
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t k = 1; k < total; ++k) {
      const std::size_t v = static_cast<std::size_t>(std::countr_zero(k));
      const std::uint64_t bit = std::uint64_t{1} << v;
      if (in & bit) {
        in &= ~bit;
        for (auto [w, th] : nbrs[v])
          if (!(in >> w & 1)) theta_sum -= th;
        t_sum -= targets[v];
      } else {
        for (auto [w, th] : nbrs[v])
          if (!(in >> w & 1)) theta_sum += th;
        t_sum += targets[v];
        in |= bit;
      }
      double slack = 2.0 * theta_sum - t_sum;
      // Running sums drift; settle near-ties exactly.
      if (std::abs(slack) < 1e-9) {
        const auto idx = bits_to_indices(in);
        slack = subset_slack(complex, targets, idx);
      }
      if (slack <= 0.0 && (first_violator == 0 || precedes(in, first_violator))) first_violator = in;
      if (slack < min_slack) {
        min_slack = slack;
        min_mask = in;
      }
    }
    report.subsets_checked = total - 1;
    const std::uint64_t chosen = first_violator ? first_violator : min_mask;
    report.s2_ok = first_violator == 0;
    if (chosen) {
      SubsetSlack s;
      s.vertices = bits_to_indices(chosen);
      s.slack = subset_slack(complex, targets, s.vertices);
      report.s2_subset = std::move(s);
    }
  } else {
    report.exhaustive = false;
    std::optional<SubsetSlack> first_violator, min_subset;
    auto consider = [&](std::vector<std::size_t> subset) {
      if (subset.empty()) return;
      std::sort(subset.begin(), subset.end());
      const double slack = subset_slack(complex, targets, subset);
      ++report.subsets_checked;
      if (slack <= 0.0 && (!first_violator || precedes(subset, first_violator->vertices)))
        first_violator = SubsetSlack{subset, slack};
      if (!min_subset || slack < min_subset->slack) min_subset = SubsetSlack{subset, slack};
    };
    for (std::size_t v = 0; v < n; ++v) consider({v});
    {
      std::vector<std::size_t> all(n);
      for (std::size_t v = 0; v < n; ++v) all[v] = v;
      consider(all);
    }
    std::mt19937_64 rng(sampled.seed);
    std::bernoulli_distribution coin(0.5);
    for (std::size_t k = 0; k < sampled.random_subsets && n > 0; ++k) {
      std::vector<std::size_t> subset;
      for (std::size_t v = 0; v < n; ++v)
        if (coin(rng)) subset.push_back(v);
      consider(std::move(subset));
    }
    report.s2_ok = !first_violator;
    report.s2_subset = first_violator ? first_violator : min_subset;
  }

  if (state0) {
    report.s3_checked = true;
    const std::vector<double> T = curvatures(*state0, complex);
    for (std::size_t v = 0; v < n; ++v) {
      if (T[v] < targets[v]) {
        report.s3_ok = false;
        report.s3_violation = v;
        break;
      }
    }
  }
  return report;
}

}  // namespace cpflow

#include <algorithm>
#include <cmath>

#include "cpflow/analysis.hpp"

namespace cpflow {

MaxPrincipleReport max_principle_sim(const MaxPrincipleSystem& sys, double dt) {
  const std::size_t n = sys.vertex_count;
  if (!(dt > 0.0)) throw Error("max principle: dt must be > 0");
  if (!(sys.horizon > 0.0)) throw Error("max principle: horizon must be > 0");
  if (!sys.weight || !sys.zeroth_order) throw Error("max principle: weight and zeroth-order functions are required");
  if (sys.initial.size() != n) throw Error("max principle: initial data size mismatch");
  for (const auto& [a, b] : sys.edges)
    if (a >= n || b >= n || a == b) throw Error("max principle: bad edge");

  std::vector<bool> held(n, false);
  for (std::size_t v : sys.held) {
    if (v >= n) throw Error("max principle: held vertex out of range");
    held[v] = true;
  }
  std::vector<double> f = sys.initial;
  for (std::size_t i = 0; i < n; ++i) {
    if (held[i]) f[i] = 0.0;
    if (f[i] > 0.0) throw Error("max principle: f(0) > 0 at vertex " + std::to_string(i));
  }

  MaxPrincipleReport rep;
  const std::size_t steps = static_cast<std::size_t>(std::ceil(sys.horizon / dt - 1e-9));
  rep.steps = steps;
  auto record_max = [&] {
    const double m = n ? *std::max_element(f.begin(), f.end()) : 0.0;
    rep.max_history.push_back(m);
    rep.max_value = rep.max_history.size() == 1 ? m : std::max(rep.max_value, m);
  };
  record_max();

  std::vector<double> w(sys.edges.size()), wsum(n), lap(n);
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double h = std::min(dt, sys.horizon - t);
    std::fill(wsum.begin(), wsum.end(), 0.0);
    std::fill(lap.begin(), lap.end(), 0.0);
    for (std::size_t e = 0; e < sys.edges.size(); ++e) {
      w[e] = sys.weight(e, t);
      if (!(w[e] >= 0.0)) throw Error("max principle: negative weight on edge " + std::to_string(e) + " at step " +
                                      std::to_string(k));
      const auto [a, b] = sys.edges[e];
      wsum[a] += w[e];
      wsum[b] += w[e];
      lap[a] += w[e] * (f[b] - f[a]);
      lap[b] += w[e] * (f[a] - f[b]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      rep.max_weight_sum = std::max(rep.max_weight_sum, wsum[i]);
      if (!(wsum[i] < sys.weight_sum_bound))
        throw Error("max principle: weight sum " + std::to_string(wsum[i]) + " >= bound " +
                    std::to_string(sys.weight_sum_bound) + " at step " + std::to_string(k) + ", vertex " +
                    std::to_string(i));
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (held[i]) continue;
      const double g = sys.zeroth_order(i, t);
      if (g > sys.zeroth_order_bound)
        throw Error("max principle: g = " + std::to_string(g) + " exceeds C0 at step " + std::to_string(k) +
                    ", vertex " + std::to_string(i));
      f[i] += h * (lap[i] + g * f[i]);
    }
    record_max();
  }
  rep.sign_preserved = rep.max_value <= rep.sign_tolerance;
  rep.final_values = std::move(f);
  return rep;
}

}  // namespace cpflow

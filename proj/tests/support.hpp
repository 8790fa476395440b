#pragma once

// Test corpus and seeded generators shared by the suites.

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "vfwalk/vfwalk.hpp"

namespace vfwalk::test {

inline Embedding cube_cover() {
  const Embedding k4 = generate_k4_planar();
  return build_cover(k4, constant_voltage(k4.rotation(), {1, 0})).cover;
}

struct Named {
  std::string name;
  Embedding emb;
};

/// The fixed corpus: K4, its cube double cover and three torus grids.
inline std::vector<Named> corpus() {
  return {{"k4", generate_k4_planar()},
          {"cube", cube_cover()},
          {"torus3", generate_torus_grid(3)},
          {"torus4", generate_torus_grid(4)},
          {"torus5", generate_torus_grid(5)}};
}

inline Embedding c3_planar() { return trace_faces(RotationSystem({{2, 1}, {0, 2}, {1, 0}})); }

inline bool connected(int n, const std::vector<std::vector<int>>& adj) {
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int w : adj[static_cast<std::size_t>(u)]) {
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        ++count;
        stack.push_back(w);
      }
    }
  }
  return count == n;
}

/// Random rotation system on a random connected graph with 4..max_n vertices
/// and minimum degree 2.
inline RotationSystem random_rotation(std::mt19937& rng, int max_n = 7) {
  std::uniform_int_distribution<int> size(4, max_n);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (;;) {
    const int n = size(rng);
    const double p = std::uniform_real_distribution<double>(0.4, 0.9)(rng);
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        if (coin(rng) < p) {
          adj[static_cast<std::size_t>(u)].push_back(v);
          adj[static_cast<std::size_t>(v)].push_back(u);
        }
      }
    }
    if (!connected(n, adj)) continue;
    if (std::any_of(adj.begin(), adj.end(), [](const auto& a) { return a.size() < 2; })) continue;
    for (auto& a : adj) std::shuffle(a.begin(), a.end(), rng);
    return RotationSystem(std::move(adj));
  }
}

inline Embedding random_circular_embedding(std::mt19937& rng, int max_n = 7) {
  for (;;) {
    Embedding e = trace_faces(random_rotation(rng, max_n));
    if (is_circular(e)) return e;
  }
}

/// Random Z_r voltages (powers of the r-cycle) with at least one nontrivial edge.
inline VoltageAssignment random_cyclic_voltage(const RotationSystem& base, int r, std::mt19937& rng) {
  std::uniform_int_distribution<int> power(0, r - 1);
  for (;;) {
    std::map<Arc, Permutation> per_edge;
    bool nontrivial = false;
    for (const auto& a : sorted_arcs(base)) {
      if (a.tail > a.head) continue;
      const int k = power(rng);
      nontrivial = nontrivial || k != 0;
      Permutation p(static_cast<std::size_t>(r));
      for (int i = 0; i < r; ++i) p[static_cast<std::size_t>(i)] = (i + k) % r;
      per_edge[a] = p;
    }
    if (nontrivial || r == 1) return make_voltage(base, r, per_edge);
  }
}

/// Random connected cover of a random circular embedding.
inline std::optional<CoverMap> random_cover(std::mt19937& rng, int r) {
  const Embedding base = random_circular_embedding(rng, 6);
  try {
    return build_cover(base, random_cyclic_voltage(base.rotation(), r, rng));
  } catch (const Error& e) {
    if (e.code() == Errc::disconnected) return std::nullopt;
    throw;
  }
}

}  // namespace vfwalk::test

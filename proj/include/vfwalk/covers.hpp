#pragma once

// Voltage covers of embedded graphs.
//
// An arc-function phi sends each arc (u,v) to a permutation of {0..r-1} with
// phi(v,u) = phi(u,v)^{-1}. The cover has vertices (u,i), indexed u*r + i,
// and the lifted rotation at (u,i) lists (w, phi(u,w)(i)) for w in rot(u).

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "vfwalk/embedding.hpp"
#include "vfwalk/hamiltonian.hpp"
#include "vfwalk/incidence.hpp"
#include "vfwalk/matkit.hpp"
#include "vfwalk/walk.hpp"

namespace vfwalk {

using Permutation = std::vector<int>;

inline Permutation identity_permutation(int r) {
  Permutation p(static_cast<std::size_t>(r));
  std::iota(p.begin(), p.end(), 0);
  return p;
}

/// Apply first, then second.
inline Permutation then(const Permutation& first, const Permutation& second) {
  Permutation out(first.size());
  for (std::size_t i = 0; i < first.size(); ++i) out[i] = second[static_cast<std::size_t>(first[i])];
  return out;
}

inline Permutation inverse(const Permutation& p) {
  Permutation out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[static_cast<std::size_t>(p[i])] = static_cast<int>(i);
  return out;
}

inline bool is_permutation_of(const Permutation& p, int r) {
  if (static_cast<int>(p.size()) != r) return false;
  std::vector<char> seen(static_cast<std::size_t>(r), 0);
  for (int x : p) {
    if (x < 0 || x >= r || seen[static_cast<std::size_t>(x)]) return false;
    seen[static_cast<std::size_t>(x)] = 1;
  }
  return true;
}

/// Order of p in the symmetric group: lcm of its cycle lengths.
inline int permutation_order(const Permutation& p) {
  std::vector<char> seen(p.size(), 0);
  long order = 1;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    long len = 0;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(p[j])) {
      seen[j] = 1;
      ++len;
    }
    order = std::lcm(order, len);
  }
  return static_cast<int>(order);
}

/// Size of the group generated by the given permutations.
inline int closure_order(const std::vector<Permutation>& generators, int r) {
  std::set<Permutation> group{identity_permutation(r)};
  std::vector<Permutation> frontier{identity_permutation(r)};
  while (!frontier.empty()) {
    std::vector<Permutation> next;
    for (const auto& g : frontier) {
      for (const auto& s : generators) {
        Permutation h = then(g, s);
        if (group.insert(h).second) next.push_back(std::move(h));
      }
    }
    frontier = std::move(next);
  }
  return static_cast<int>(group.size());
}

struct VoltageAssignment {
  int r = 1;
  std::map<Arc, Permutation> phi;  // both orientations of every edge

  const Permutation& operator()(const Arc& a) const {
    auto it = phi.find(a);
    if (it == phi.end()) throw Error(Errc::missing_edge, "no voltage for arc " + to_string(a));
    return it->second;
  }

  std::vector<Permutation> generators() const {
    std::vector<Permutation> g;
    for (const auto& [arc, p] : phi) g.push_back(p);
    return g;
  }
};

/// Validates permutations, completeness over the edges of base, and that the
/// voltages generate a group of order exactly r.
inline VoltageAssignment make_voltage(const RotationSystem& base, int r, const std::map<Arc, Permutation>& per_edge) {
  if (r < 1) throw Error(Errc::parse, "fold count r must be positive");
  VoltageAssignment v;
  v.r = r;
  for (const auto& [arc, p] : per_edge) {
    if (arc.tail < 0 || arc.tail >= base.vertex_count() || !base.adjacent(arc.tail, arc.head)) {
      throw Error(Errc::missing_edge, "voltage given for non-edge " + to_string(arc));
    }
    if (!is_permutation_of(p, r)) {
      throw Error(Errc::not_permutation, "voltage on " + to_string(arc) + " is not a permutation of 0.." +
                                             std::to_string(r - 1));
    }
    if (v.phi.count(arc) || v.phi.count(arc.reversed())) {
      throw Error(Errc::parse, "edge " + to_string(arc) + " given more than once");
    }
    v.phi[arc] = p;
    v.phi[arc.reversed()] = inverse(p);
  }
  for (const auto& a : sorted_arcs(base)) {
    if (!v.phi.count(a)) throw Error(Errc::missing_edge, "no voltage for edge " + to_string(a));
  }
  const int order = closure_order(v.generators(), r);
  if (order != r) {
    throw Error(Errc::group_order, "voltages generate a group of order " + std::to_string(order) + ", expected " +
                                       std::to_string(r));
  }
  return v;
}

inline VoltageAssignment constant_voltage(const RotationSystem& base, const Permutation& p) {
  std::map<Arc, Permutation> per_edge;
  for (const auto& a : sorted_arcs(base)) {
    if (a.tail < a.head) per_edge[a] = p;
  }
  return make_voltage(base, static_cast<int>(p.size()), per_edge);
}

// Voltage file:
//   vlt 1
//   r <count>
//   arc <u> <v>: <i0> <i1> ... <i(r-1)>     image list of phi(u,v)
// or, for r = 2, the single line "const swap".
inline VoltageAssignment parse_voltage(std::string_view text, const RotationSystem& base) {
  const auto lines = detail::significant_lines(text);
  if (lines.empty() || detail::split_ws(lines[0].second) != std::vector<std::string>{"vlt", "1"}) {
    throw Error(Errc::parse, "voltage file must start with 'vlt 1'");
  }
  if (lines.size() < 2) throw Error(Errc::parse, "missing 'r <count>' line");
  const auto header = detail::split_ws(lines[1].second);
  if (header.size() != 2 || header[0] != "r") {
    throw Error(Errc::parse, "line " + std::to_string(lines[1].first) + ": expected 'r <count>'");
  }
  const int r = static_cast<int>(detail::parse_int(header[1], lines[1].first, "fold count"));
  if (r < 1) throw Error(Errc::parse, "fold count r must be positive");

  if (lines.size() == 3 && detail::split_ws(lines[2].second) == std::vector<std::string>{"const", "swap"}) {
    if (r != 2) throw Error(Errc::parse, "'const swap' needs r = 2");
    return constant_voltage(base, {1, 0});
  }

  std::map<Arc, Permutation> per_edge;
  for (std::size_t i = 2; i < lines.size(); ++i) {
    const auto& [number, line] = lines[i];
    const auto colon = line.find(':');
    const auto head = detail::split_ws(std::string_view(line).substr(0, colon));
    if (colon == std::string::npos || head.size() != 3 || head[0] != "arc") {
      throw Error(Errc::parse, "line " + std::to_string(number) + ": expected 'arc <u> <v>: <images>'");
    }
    const Arc a{static_cast<int>(detail::parse_int(head[1], number, "tail")),
                static_cast<int>(detail::parse_int(head[2], number, "head"))};
    Permutation p;
    for (const auto& tok : detail::split_ws(std::string_view(line).substr(colon + 1))) {
      p.push_back(static_cast<int>(detail::parse_int(tok, number, "image")));
    }
    if (per_edge.count(a) || per_edge.count(a.reversed())) {
      throw Error(Errc::parse, "line " + std::to_string(number) + ": edge " + to_string(a) + " given twice");
    }
    per_edge[a] = std::move(p);
  }
  return make_voltage(base, r, per_edge);
}

inline VoltageAssignment read_voltage_file(const std::string& path, const RotationSystem& base) {
  return parse_voltage(detail::read_file(path), base);
}

struct CoverMap {
  Embedding base, cover;
  int r = 1;
  std::vector<int> fiber;  // cover vertex -> base vertex
  IntMatrix L;             // cover arc x base arc
  Matrix L_hat;
  IntMatrix K;             // cover vertex x base vertex
  Matrix K_hat;

  int cover_vertex(int u, int i) const { return u * r + i; }
  Arc project(const Arc& a) const { return {fiber[static_cast<std::size_t>(a.tail)], fiber[static_cast<std::size_t>(a.head)]}; }
};

inline CoverMap build_cover(const Embedding& base, const VoltageAssignment& volt) {
  const int r = volt.r;
  const RotationSystem& rot = base.rotation();
  std::vector<std::vector<int>> lifted(static_cast<std::size_t>(rot.vertex_count() * r));
  for (int u = 0; u < rot.vertex_count(); ++u) {
    for (int i = 0; i < r; ++i) {
      auto& out = lifted[static_cast<std::size_t>(u * r + i)];
      for (int w : rot.rotation(u)) out.push_back(w * r + volt({u, w})[static_cast<std::size_t>(i)]);
    }
  }
  CoverMap c;
  c.base = base;
  c.r = r;
  try {
    c.cover = trace_faces(RotationSystem(std::move(lifted)));
  } catch (const Error& e) {
    if (e.code() == Errc::disconnected) throw Error(Errc::disconnected, std::string("cover is disconnected: ") + e.what());
    throw;
  }
  for (int y = 0; y < c.cover.vertex_count(); ++y) c.fiber.push_back(y / r);

  c.L = IntMatrix::Zero(c.cover.arc_count(), base.arc_count());
  for (int x = 0; x < c.cover.arc_count(); ++x) {
    const auto col = base.arc_index(c.project(c.cover.arcs()[static_cast<std::size_t>(x)]));
    c.L(x, static_cast<Eigen::Index>(col)) = 1;
  }
  c.K = IntMatrix::Zero(c.cover.vertex_count(), base.vertex_count());
  for (int y = 0; y < c.cover.vertex_count(); ++y) c.K(y, c.fiber[static_cast<std::size_t>(y)]) = 1;
  c.L_hat = normalize_columns(c.L);
  c.K_hat = normalize_columns(c.K);
  return c;
}

/// The covering map restricted to each neighbourhood is a bijection onto the
/// base neighbourhood.
inline bool is_local_bijection(const CoverMap& c) {
  for (int y = 0; y < c.cover.vertex_count(); ++y) {
    std::vector<int> image;
    for (int z : c.cover.rotation().rotation(y)) image.push_back(c.fiber[static_cast<std::size_t>(z)]);
    std::vector<int> expected = c.base.rotation().rotation(c.fiber[static_cast<std::size_t>(y)]);
    std::sort(image.begin(), image.end());
    std::sort(expected.begin(), expected.end());
    if (image != expected) return false;
  }
  return true;
}

/// Every cover face projects onto a single base face, traversed a whole
/// number of times in order.
inline bool faces_are_lifts(const CoverMap& c) {
  for (const auto& face : c.cover.faces()) {
    const Arc first = c.project(face.arcs.front());
    const int f = c.base.face_of(first);
    const auto& base_walk = c.base.face(f).arcs;
    const auto start = std::find(base_walk.begin(), base_walk.end(), first) - base_walk.begin();
    if (face.degree() % base_walk.size() != 0) return false;
    for (std::size_t j = 0; j < face.degree(); ++j) {
      if (c.project(face.arcs[j]) != base_walk[(static_cast<std::size_t>(start) + j) % base_walk.size()]) return false;
    }
  }
  return true;
}

/// Voltage of a closed walk given by its vertex sequence (closing edge implied).
inline Permutation walk_voltage(const std::vector<int>& cycle, const VoltageAssignment& volt) {
  Permutation p = identity_permutation(volt.r);
  for (std::size_t j = 0; j < cycle.size(); ++j) p = then(p, volt({cycle[j], cycle[(j + 1) % cycle.size()]}));
  return p;
}

struct CycleLift {
  int order = 0;               // order of phi(C)
  int predicted_count = 0;     // r / order
  int predicted_length = 0;    // |C| * order
  int observed_count = 0;
  std::vector<int> observed_lengths;

  bool holds() const {
    return observed_count == predicted_count &&
           std::all_of(observed_lengths.begin(), observed_lengths.end(), [&](int l) { return l == predicted_length; });
  }
};

inline CycleLift cycle_lift_check(const RotationSystem& base, const std::vector<int>& cycle, const VoltageAssignment& volt) {
  const int k = static_cast<int>(cycle.size());
  if (k < 3) throw Error(Errc::not_a_cycle, "a cycle needs at least 3 vertices");
  std::vector<int> sorted = cycle;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(Errc::not_a_cycle, "cycle repeats a vertex");
  }
  for (int j = 0; j < k; ++j) {
    const int u = cycle[static_cast<std::size_t>(j)], w = cycle[static_cast<std::size_t>((j + 1) % k)];
    if (u < 0 || u >= base.vertex_count() || !base.adjacent(u, w)) {
      throw Error(Errc::not_a_cycle, "consecutive vertices " + std::to_string(u) + ", " + std::to_string(w) +
                                         " are not adjacent");
    }
  }

  CycleLift out;
  out.order = permutation_order(walk_voltage(cycle, volt));
  out.predicted_count = volt.r / out.order;
  out.predicted_length = k * out.order;

  // Follow each lifted closed walk explicitly, starting in the fiber of cycle[0].
  std::vector<char> visited(static_cast<std::size_t>(volt.r), 0);
  for (int start = 0; start < volt.r; ++start) {
    if (visited[static_cast<std::size_t>(start)]) continue;
    int sheet = start;
    int length = 0;
    do {
      visited[static_cast<std::size_t>(sheet)] = 1;
      for (int j = 0; j < k; ++j) {
        sheet = volt({cycle[static_cast<std::size_t>(j)], cycle[static_cast<std::size_t>((j + 1) % k)]})[static_cast<std::size_t>(sheet)];
        ++length;
      }
    } while (sheet != start);
    ++out.observed_count;
    out.observed_lengths.push_back(length);
  }
  return out;
}

struct QuotientReport {
  double residual = 0.0;          // max |U_X - L_hat^T U_Y L_hat|
  double projection_n = 0.0;      // max |Q_X - L_hat^T Q_Y L_hat|
  double projection_m = 0.0;      // max |P_X - L_hat^T P_Y L_hat|
  double column_equitable = 0.0;  // max |N_hat_Y K_hat - L_hat N_hat_X|
  double row_equitable = 0.0;     // max |N_hat_Y^T L_hat - K_hat N_hat_X^T|
  double commutation = 0.0;       // max |N_hat_Y K_hat K_hat^T - L_hat L_hat^T N_hat_Y|
  double symmetry = 0.0;          // asymmetry of L_hat L_hat^T N_hat_Y N_hat_Y^T

  bool holds(double tol = 1e-10) const {
    return residual <= tol && projection_n <= tol && projection_m <= tol && column_equitable <= tol &&
           row_equitable <= tol && commutation <= tol && symmetry <= tol;
  }
};

inline QuotientReport quotient_check(const CoverMap& c) {
  const IncidenceBundle bx = build_incidence(c.base);
  const IncidenceBundle by = build_incidence(c.cover);
  const WalkOperator wx = build_walk(bx);
  const WalkOperator wy = build_walk(by);
  const Matrix& L = c.L_hat;
  const Matrix& K = c.K_hat;

  QuotientReport r;
  r.residual = max_abs(Matrix(wx.U - L.transpose() * wy.U * L));
  r.projection_n = max_abs(Matrix(wx.Q - L.transpose() * wy.Q * L));
  r.projection_m = max_abs(Matrix(wx.P - L.transpose() * wy.P * L));
  r.column_equitable = max_abs(Matrix(by.N_hat * K - L * bx.N_hat));
  r.row_equitable = max_abs(Matrix(by.N_hat.transpose() * L - K * bx.N_hat.transpose()));
  r.commutation = max_abs(Matrix(by.N_hat * K * K.transpose() - L * L.transpose() * by.N_hat));
  const Matrix prod = L * L.transpose() * wy.Q;
  r.symmetry = max_abs(Matrix(prod - prod.transpose()));
  return r;
}

struct PgdLiftReport {
  bool base_pgd = false;
  std::vector<int> face_orders;     // order of phi(f) for each base face
  std::vector<int> failing_faces;   // faces whose voltage order is below r
  DesignClassification cover_design;
  bool duplicated_points = false;   // C_cover = C_base (x) 1 after matching faces

  bool hypothesis() const { return failing_faces.empty(); }
  bool holds() const {
    return hypothesis() && cover_design.kind != DesignKind::other && cover_design.pgd.has_value() && duplicated_points;
  }
};

inline PgdLiftReport pgd_lift_check(const CoverMap& c, const VoltageAssignment& volt) {
  const IncidenceBundle bx = build_incidence(c.base);
  const IncidenceBundle by = build_incidence(c.cover);
  PgdLiftReport rep;
  rep.base_pgd = classify_design(bx.C).pgd.has_value();
  for (int f = 0; f < c.base.face_count(); ++f) {
    const int ord = permutation_order(walk_voltage(c.base.face(f).vertices(), volt));
    rep.face_orders.push_back(ord);
    if (ord != c.r) rep.failing_faces.push_back(f);
  }
  rep.cover_design = classify_design(by.C);

  if (c.cover.face_count() == c.base.face_count()) {
    bool same = true;
    for (int F = 0; F < c.cover.face_count(); ++F) {
      const int f = c.base.face_of(c.project(c.cover.face(F).arcs.front()));
      for (int y = 0; y < c.cover.vertex_count(); ++y) {
        same = same && by.C(y, F) == bx.C(c.fiber[static_cast<std::size_t>(y)], f);
      }
    }
    rep.duplicated_points = same;
  }
  return rep;
}

}  // namespace vfwalk

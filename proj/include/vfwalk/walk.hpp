#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "vfwalk/embedding.hpp"
#include "vfwalk/incidence.hpp"
#include "vfwalk/matkit.hpp"

namespace vfwalk {

struct Rational {
  long num = 0;
  long den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Rational&) const = default;
};

/// Transition matrix U = (2P - I)(2Q - I) of the vertex-face walk, with P the
/// projection onto vectors constant on faces and Q onto vectors constant on
/// arcs sharing a tail.
///
/// P and Q are assembled entrywise as 1/deg so that every nonzero entry is
/// exactly the double nearest the rational it represents.
struct WalkOperator {
  Matrix U, P, Q;
  std::vector<int> arc_face;   // face of each arc
  std::vector<int> arc_tail;   // tail of each arc
  std::vector<int> face_degree, vertex_degree;

  int arc_count() const { return static_cast<int>(U.rows()); }

  Rational p_entry(int x, int y) const {
    if (arc_face[x] != arc_face[y]) return {0, 1};
    return {1, face_degree[arc_face[x]]};
  }

  Rational q_entry(int x, int y) const {
    if (arc_tail[x] != arc_tail[y]) return {0, 1};
    return {1, vertex_degree[arc_tail[x]]};
  }
};

inline WalkOperator build_walk(const IncidenceBundle& b) {
  const Embedding& emb = b.embedding;
  const int m = emb.arc_count();
  WalkOperator w;
  w.face_degree = b.face_degree;
  w.vertex_degree = b.vertex_degree;
  for (int x = 0; x < m; ++x) {
    w.arc_face.push_back(emb.face_of(static_cast<std::size_t>(x)));
    w.arc_tail.push_back(emb.arcs()[static_cast<std::size_t>(x)].tail);
  }
  w.P = Matrix::Zero(m, m);
  w.Q = Matrix::Zero(m, m);
  for (int x = 0; x < m; ++x) {
    for (int y = 0; y < m; ++y) {
      w.P(x, y) = w.p_entry(x, y).value();
      w.Q(x, y) = w.q_entry(x, y).value();
    }
  }
  const Matrix I = Matrix::Identity(m, m);
  w.U = (2.0 * w.P - I) * (2.0 * w.Q - I);
  return w;
}

inline WalkOperator build_walk(const Embedding& emb) { return build_walk(build_incidence(emb)); }

struct TraceReport {
  double direct = 0.0;
  std::optional<double> formula;  // 2(ns/l - (n+s-l)); needs X or its dual regular
};

inline TraceReport trace_U(const WalkOperator& w, const Embedding& emb) {
  TraceReport r;
  r.direct = w.U.trace();
  if (vertex_regular(emb) || face_regular(emb)) {
    const double n = emb.vertex_count();
    const double s = emb.face_count();
    const double l = emb.edge_count();
    r.formula = 2.0 * (n * s / l - (n + s - l));
  }
  return r;
}

/// Permutation matrix swapping each arc with its reverse.
inline Matrix reversal_matrix(const Embedding& emb) {
  const int m = emb.arc_count();
  Matrix R = Matrix::Zero(m, m);
  for (int x = 0; x < m; ++x) {
    const auto y = emb.arc_index(emb.arcs()[static_cast<std::size_t>(x)].reversed());
    R(static_cast<Eigen::Index>(y), x) = 1.0;
  }
  return R;
}

/// Operator for the opposite orientation, R(2P - I)R(2Q - I).
inline Matrix opposite_orientation_operator(const WalkOperator& w, const Matrix& R) {
  const Matrix I = Matrix::Identity(w.arc_count(), w.arc_count());
  return R * (2.0 * w.P - I) * R * (2.0 * w.Q - I);
}

namespace detail {

struct DisjointSets {
  std::vector<int> parent;

  explicit DisjointSets(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }

  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }

  void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }

  int classes() {
    int count = 0;
    for (int i = 0; i < static_cast<int>(parent.size()); ++i) count += find(i) == i;
    return count;
  }
};

}  // namespace detail

struct MeetJoin {
  int meet_classes = 0;
  int join_classes = 0;
};

/// Meet and join of the arc-face and arc-tail partitions.
inline MeetJoin partition_meet_join(const Embedding& emb) {
  const int m = emb.arc_count();
  std::vector<std::pair<int, int>> keys;
  for (int x = 0; x < m; ++x) keys.emplace_back(emb.face_of(static_cast<std::size_t>(x)), emb.arcs()[static_cast<std::size_t>(x)].tail);
  std::sort(keys.begin(), keys.end());
  MeetJoin r;
  r.meet_classes = static_cast<int>(std::unique(keys.begin(), keys.end()) - keys.begin());

  detail::DisjointSets sets(m);
  std::vector<int> face_rep(static_cast<std::size_t>(emb.face_count()), -1);
  std::vector<int> tail_rep(static_cast<std::size_t>(emb.vertex_count()), -1);
  for (int x = 0; x < m; ++x) {
    int& f = face_rep[static_cast<std::size_t>(emb.face_of(static_cast<std::size_t>(x)))];
    int& t = tail_rep[static_cast<std::size_t>(emb.arcs()[static_cast<std::size_t>(x)].tail)];
    if (f < 0) f = x; else sets.unite(x, f);
    if (t < 0) t = x; else sets.unite(x, t);
  }
  r.join_classes = sets.classes();
  return r;
}

struct QuotientMatrices {
  Matrix face_face;      // M_hat^T Q M_hat, s x s
  Matrix vertex_vertex;  // N_hat^T P N_hat, n x n
};

inline QuotientMatrices quotient_matrices(const IncidenceBundle& b, const WalkOperator& w) {
  return {b.M_hat.transpose() * w.Q * b.M_hat, b.N_hat.transpose() * w.P * b.N_hat};
}

struct DualityReport {
  bool supported = false;
  bool simple_dual = false;  // false: dual has parallel edges, checked on the arc map alone
  double deviation = 0.0;    // max |U^T - relabelled U_dual|
  std::string reason;

  bool holds(double tol = 1e-10) const { return supported && deviation <= tol; }
};

namespace detail {

inline double transpose_deviation(const Matrix& U, const Matrix& Ud, const std::vector<Eigen::Index>& image) {
  double dev = 0.0;
  const auto m = static_cast<std::size_t>(U.rows());
  for (std::size_t x = 0; x < m; ++x) {
    for (std::size_t y = 0; y < m; ++y) {
      dev = std::max(dev, std::abs(U(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)) - Ud(image[x], image[y])));
    }
  }
  return dev;
}

/// Walk of the dual built directly on the arcs of X: the dual arc of x has
/// tail face_of(x), and its dual-face successor is the facial successor of
/// the reverse of x.  Works when the dual has parallel edges.
inline std::optional<Matrix> arc_map_dual_walk(const Embedding& emb) {
  const int m = emb.arc_count();
  const auto next = [&](int x) {
    const Arc a = emb.arcs()[static_cast<std::size_t>(x)];
    return static_cast<int>(emb.arc_index({a.head, emb.rotation().successor(a.head, a.tail)}));
  };
  const auto rev = [&](int x) { return static_cast<int>(emb.arc_index(emb.arcs()[static_cast<std::size_t>(x)].reversed())); };

  std::vector<int> dual_face(static_cast<std::size_t>(m), -1);
  std::vector<int> dual_face_size;
  for (int start = 0; start < m; ++start) {
    if (dual_face[static_cast<std::size_t>(start)] >= 0) continue;
    const int id = static_cast<int>(dual_face_size.size());
    std::vector<int> seen_faces;
    int x = start, len = 0;
    do {
      dual_face[static_cast<std::size_t>(x)] = id;
      seen_faces.push_back(emb.face_of(static_cast<std::size_t>(x)));
      ++len;
      x = next(rev(x));
    } while (x != start);
    std::sort(seen_faces.begin(), seen_faces.end());
    if (std::adjacent_find(seen_faces.begin(), seen_faces.end()) != seen_faces.end()) return std::nullopt;
    dual_face_size.push_back(len);
  }

  Matrix P = Matrix::Zero(m, m), Q = Matrix::Zero(m, m);
  for (int x = 0; x < m; ++x) {
    for (int y = 0; y < m; ++y) {
      const int fx = dual_face[static_cast<std::size_t>(x)];
      if (fx == dual_face[static_cast<std::size_t>(y)]) P(x, y) = 1.0 / dual_face_size[static_cast<std::size_t>(fx)];
      const int gx = emb.face_of(static_cast<std::size_t>(x));
      if (gx == emb.face_of(static_cast<std::size_t>(y))) Q(x, y) = 1.0 / emb.face_degree(gx);
    }
  }
  const Matrix I = Matrix::Identity(m, m);
  return Matrix((2.0 * P - I) * (2.0 * Q - I));
}

}  // namespace detail

/// Checks that U^T is the walk of the dual embedding under the arc map
/// (u,v) -> (f_uv, f_vu).  A simple dual is built as an embedding and
/// relabelled; a dual with parallel edges is checked on the arc map.
inline DualityReport duality_check(const Embedding& emb) {
  DualityReport r;
  if (!is_circular(emb)) {
    r.reason = "embedding is not circular";
    return r;
  }
  const WalkOperator w = build_walk(emb);
  const int m = emb.arc_count();
  std::optional<Embedding> d;
  try {
    d = dual(emb);
  } catch (const Error& e) {
    if (e.code() != Errc::unsupported) throw;
    r.reason = e.what();
  }
  if (!d) {
    const auto ud = detail::arc_map_dual_walk(emb);
    if (!ud) {
      r.reason = "dual embedding is not circular";
      return r;
    }
    std::vector<Eigen::Index> identity(static_cast<std::size_t>(m));
    std::iota(identity.begin(), identity.end(), Eigen::Index{0});
    r.supported = true;
    r.deviation = detail::transpose_deviation(w.U, *ud, identity);
    return r;
  }
  if (!is_circular(*d)) {
    r.reason = "dual embedding is not circular";
    return r;
  }
  const WalkOperator wd = build_walk(*d);
  std::vector<Eigen::Index> image(static_cast<std::size_t>(m));
  for (int x = 0; x < m; ++x) {
    image[static_cast<std::size_t>(x)] =
        static_cast<Eigen::Index>(d->arc_index(dual_arc(emb, emb.arcs()[static_cast<std::size_t>(x)])));
  }
  r.supported = true;
  r.simple_dual = true;
  r.deviation = detail::transpose_deviation(w.U, wd.U, image);
  return r;
}

}  // namespace vfwalk

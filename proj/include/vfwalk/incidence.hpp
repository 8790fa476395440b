#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "vfwalk/embedding.hpp"
#include "vfwalk/matkit.hpp"

namespace vfwalk {

/// Incidence matrices of a circular embedding.
///
///   M  arc x face    1 iff the arc lies on the face
///   N  arc x vertex  1 iff the vertex is the arc's tail
///   B  vertex x edge
///   D  face x edge
///   C  vertex x face, computed as N^T M
///
/// Rows and columns follow the canonical orders of Embedding; edges are
/// (min, max) pairs in lexicographic order.
struct IncidenceBundle {
  Embedding embedding;
  std::vector<std::pair<int, int>> edges;
  IntMatrix M, N, B, D, C;
  Matrix M_hat, N_hat, C_hat;
  std::vector<int> vertex_degree, face_degree;

  int arc_count() const { return static_cast<int>(M.rows()); }
};

inline std::vector<std::pair<int, int>> sorted_edges(const Embedding& emb) {
  std::vector<std::pair<int, int>> edges;
  for (const auto& a : emb.arcs()) {
    if (a.tail < a.head) edges.emplace_back(a.tail, a.head);
  }
  return edges;  // arcs are sorted, so these are too
}

inline std::size_t edge_index(const std::vector<std::pair<int, int>>& edges, int u, int v) {
  const std::pair<int, int> key{std::min(u, v), std::max(u, v)};
  return static_cast<std::size_t>(std::lower_bound(edges.begin(), edges.end(), key) - edges.begin());
}

inline Matrix normalize_columns(const IntMatrix& a) {
  Matrix out = a.cast<double>();
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    const double s = static_cast<double>(a.col(j).sum());
    if (s > 0) out.col(j) /= std::sqrt(s);
  }
  return out;
}

inline IncidenceBundle build_incidence(const Embedding& emb) {
  require_circular(emb, "build_incidence");
  IncidenceBundle b;
  b.embedding = emb;
  b.edges = sorted_edges(emb);

  const int m = emb.arc_count();
  const int n = emb.vertex_count();
  const int s = emb.face_count();
  const int l = emb.edge_count();

  b.M = IntMatrix::Zero(m, s);
  b.N = IntMatrix::Zero(m, n);
  b.B = IntMatrix::Zero(n, l);
  b.D = IntMatrix::Zero(s, l);
  for (int x = 0; x < m; ++x) {
    const Arc& a = emb.arcs()[static_cast<std::size_t>(x)];
    const int f = emb.face_of(static_cast<std::size_t>(x));
    const auto e = static_cast<Eigen::Index>(edge_index(b.edges, a.tail, a.head));
    b.M(x, f) = 1;
    b.N(x, a.tail) = 1;
    b.D(f, e) = 1;
    if (a.tail < a.head) {
      b.B(a.tail, e) = 1;
      b.B(a.head, e) = 1;
    }
  }
  b.C = b.N.transpose() * b.M;

  b.M_hat = normalize_columns(b.M);
  b.N_hat = normalize_columns(b.N);
  b.C_hat = b.N_hat.transpose() * b.M_hat;

  for (int v = 0; v < n; ++v) b.vertex_degree.push_back(emb.vertex_degree(v));
  for (int f = 0; f < s; ++f) b.face_degree.push_back(emb.face_degree(f));
  return b;
}

/// Maximum absolute deviation of each structural identity. The integer
/// identities must all be exactly zero.
struct IdentityReport {
  long c_vs_ntm = 0;        // C - N^T M
  long c_vs_half_bdt = 0;   // 2C - B D^T
  long m_row_sums = 0;      // rows of M have a single 1
  long n_row_sums = 0;      // rows of N have a single 1
  long m_col_sums = 0;      // column sums of M are face degrees
  long n_col_sums = 0;      // column sums of N are vertex degrees
  double m_hat_orthonormal = 0.0;
  double n_hat_orthonormal = 0.0;

  bool exact() const {
    return c_vs_ntm == 0 && c_vs_half_bdt == 0 && m_row_sums == 0 && n_row_sums == 0 && m_col_sums == 0 &&
           n_col_sums == 0 && m_hat_orthonormal <= 1e-12 && n_hat_orthonormal <= 1e-12;
  }
};

inline long max_abs_int(const IntMatrix& a) {
  return a.size() == 0 ? 0L : static_cast<long>(a.cwiseAbs().maxCoeff());
}

inline IdentityReport verify_identities(const IncidenceBundle& b) {
  IdentityReport r;
  r.c_vs_ntm = max_abs_int(b.C - b.N.transpose() * b.M);
  r.c_vs_half_bdt = max_abs_int(2 * b.C - b.B * b.D.transpose());
  r.m_row_sums = max_abs_int(b.M.rowwise().sum().array() - 1);
  r.n_row_sums = max_abs_int(b.N.rowwise().sum().array() - 1);
  for (Eigen::Index f = 0; f < b.M.cols(); ++f) {
    r.m_col_sums = std::max(r.m_col_sums, static_cast<long>(std::abs(b.M.col(f).sum() - b.face_degree[f])));
  }
  for (Eigen::Index v = 0; v < b.N.cols(); ++v) {
    r.n_col_sums = std::max(r.n_col_sums, static_cast<long>(std::abs(b.N.col(v).sum() - b.vertex_degree[v])));
  }
  r.m_hat_orthonormal = max_abs(Matrix(b.M_hat.transpose() * b.M_hat - Matrix::Identity(b.M.cols(), b.M.cols())));
  r.n_hat_orthonormal = max_abs(Matrix(b.N_hat.transpose() * b.N_hat - Matrix::Identity(b.N.cols(), b.N.cols())));
  return r;
}

inline const Matrix& normalized_C(const IncidenceBundle& b) { return b.C_hat; }

// CSV dumps of M, N and C. Arc labels are written "u->v", faces "f<i>",
// vertices by index.

namespace detail {

inline void write_int_csv(std::ostream& out, const std::string& corner, const std::vector<std::string>& row_labels,
                          const std::vector<std::string>& col_labels, const IntMatrix& a) {
  out << corner;
  for (const auto& c : col_labels) out << ',' << c;
  out << '\n';
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    out << row_labels[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < a.cols(); ++j) out << ',' << a(i, j);
    out << '\n';
  }
}

}  // namespace detail

inline std::string incidence_csv(const IncidenceBundle& b) {
  std::vector<std::string> arcs, vertices, faces;
  for (const auto& a : b.embedding.arcs()) arcs.push_back(to_string(a));
  for (int v = 0; v < b.embedding.vertex_count(); ++v) vertices.push_back(std::to_string(v));
  for (int f = 0; f < b.embedding.face_count(); ++f) faces.push_back("f" + std::to_string(f));

  std::ostringstream out;
  out << "# M (arc x face)\n";
  detail::write_int_csv(out, "arc", arcs, faces, b.M);
  out << "\n# N (arc x vertex)\n";
  detail::write_int_csv(out, "arc", arcs, vertices, b.N);
  out << "\n# C (vertex x face)\n";
  detail::write_int_csv(out, "vertex", vertices, faces, b.C);
  return out.str();
}

}  // namespace vfwalk

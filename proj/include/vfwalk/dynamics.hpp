#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "vfwalk/embedding.hpp"
#include "vfwalk/hamiltonian.hpp"
#include "vfwalk/incidence.hpp"
#include "vfwalk/matkit.hpp"
#include "vfwalk/walk.hpp"

namespace vfwalk {

/// Amplitudes indexed by canonical arc order.
struct WalkState {
  CVector amplitudes;

  double norm() const { return amplitudes.norm(); }
};

inline WalkState uniform_state(int arcs) {
  return {CVector::Constant(arcs, std::complex<double>(1.0 / std::sqrt(static_cast<double>(arcs)), 0.0))};
}

inline WalkState basis_state(int arcs, int x) {
  WalkState s{CVector::Zero(arcs)};
  s.amplitudes(x) = 1.0;
  return s;
}

/// U^t applied by repeated matrix-vector products.
inline WalkState evolve(const Matrix& U, WalkState state, long t) {
  if (t < 0) throw Error(Errc::domain, "evolve: negative step count");
  const CMatrix Uc = U.cast<std::complex<double>>();
  for (long i = 0; i < t; ++i) state.amplitudes = Uc * state.amplitudes;
  return state;
}

inline WalkState evolve(const WalkOperator& w, WalkState state, long t) { return evolve(w.U, std::move(state), t); }

/// Entrywise |U^t|^2.
inline Matrix mixing_matrix(const Matrix& U, long t) {
  if (t < 1) throw Error(Errc::domain, "mixing_matrix: t must be at least 1");
  return matrix_power(U, t).array().square().matrix();
}

inline Matrix mixing_matrix(const WalkOperator& w, long t) { return mixing_matrix(w.U, t); }

/// Largest deviation of row and column sums from 1.
inline double stochastic_deviation(const Matrix& a) {
  const double rows = (a.rowwise().sum().array() - 1.0).abs().maxCoeff();
  const double cols = (a.colwise().sum().array() - 1.0).abs().maxCoeff();
  return std::max(rows, cols);
}

/// Eigenangle data for a walk whose vertex-face incidence is a 2-design.
struct TwoDesignAngle {
  int n = 0, d = 0, k = 0;
  double cos_theta = 0.0;  // 2(n-k)/(k(n-1)) - 1
};

inline std::optional<TwoDesignAngle> two_design_angle(const IncidenceBundle& b) {
  const DesignClassification cls = classify_design(b.C);
  if (cls.kind != DesignKind::two_design) return std::nullopt;
  TwoDesignAngle a;
  a.n = static_cast<int>(b.C.rows());
  a.k = cls.two_design->k;
  a.d = static_cast<int>(b.C.row(0).sum());
  a.cos_theta = 2.0 * (a.n - a.k) / (static_cast<double>(a.k) * (a.n - 1)) - 1.0;
  return a;
}

/// tr(U^t) = nd - 2(1 - cos(t theta))(n - 1).
inline double trace_power_formula(const TwoDesignAngle& a, long t) {
  const double theta = std::acos(a.cos_theta);
  return static_cast<double>(a.n) * a.d - 2.0 * (1.0 - std::cos(static_cast<double>(t) * theta)) * (a.n - 1);
}

struct TracePower {
  double direct = 0.0;
  std::optional<double> formula;
};

inline TracePower trace_power_check(const WalkOperator& w, const IncidenceBundle& b, long t) {
  TracePower r;
  r.direct = matrix_power(w.U, t).trace();
  if (const auto a = two_design_angle(b)) r.formula = trace_power_formula(*a, t);
  return r;
}

struct Sedentariness {
  double min_diagonal = 0.0;   // of the mixing matrix
  bool constant_diagonal = false;
  std::optional<double> closed_form;
};

/// Minimum return probability after t steps. When the diagonal of U^t is
/// constant and the incidence is a 2-design, each diagonal entry of U^t is
/// tr(U^t) / (nd), which for K_n embeddings (d = n - 1) is
/// 1 - 2(1 - cos(t theta)) / n.
inline Sedentariness sedentariness(const WalkOperator& w, const IncidenceBundle& b, long t, double tol = kDefaultTol) {
  const Matrix mix = mixing_matrix(w, t);
  const Vector diag = mix.diagonal();
  Sedentariness s;
  s.min_diagonal = diag.minCoeff();
  s.constant_diagonal = diag.maxCoeff() - diag.minCoeff() <= tol;
  if (s.constant_diagonal) {
    if (const auto a = two_design_angle(b)) {
      const double entry = trace_power_formula(*a, t) / (static_cast<double>(a->n) * a->d);
      s.closed_form = entry * entry;
    }
  }
  return s;
}

/// Diagonal of the search oracle: -1 on arcs leaving the marked vertex.
inline Vector oracle(const Embedding& emb, int marked) {
  if (marked < 0 || marked >= emb.vertex_count()) {
    throw Error(Errc::domain, "marked vertex " + std::to_string(marked) + " out of range");
  }
  Vector o = Vector::Ones(emb.arc_count());
  for (int x = 0; x < emb.arc_count(); ++x) {
    if (emb.arcs()[static_cast<std::size_t>(x)].tail == marked) o(x) = -1.0;
  }
  return o;
}

/// Probability of measuring each vertex as the tail of the current arc.
inline Vector vertex_probabilities(const Embedding& emb, const WalkState& s) {
  Vector p = Vector::Zero(emb.vertex_count());
  for (int x = 0; x < emb.arc_count(); ++x) p(emb.arcs()[static_cast<std::size_t>(x)].tail) += std::norm(s.amplitudes(x));
  return p;
}

struct SearchRun {
  int marked = 0;
  std::vector<double> probability;  // index t = 0..T
  double max_norm_drift = 0.0;      // max_t | ||state_t|| - 1 |
  double max_total_deviation = 0.0; // max_t | sum_v p_v(t) - 1 |

  long steps() const { return static_cast<long>(probability.size()) - 1; }

  long argmax() const {
    return static_cast<long>(std::max_element(probability.begin(), probability.end()) - probability.begin());
  }

  double max() const { return *std::max_element(probability.begin(), probability.end()); }
};

/// Applies (O U)^t to the uniform state and records the probability of the
/// marked vertex at every step.
inline SearchRun search(const Matrix& U, const Embedding& emb, int marked, long T) {
  if (T < 1) throw Error(Errc::domain, "search: step count must be at least 1");
  const Vector o = oracle(emb, marked);
  const Matrix OU = o.asDiagonal() * U;
  SearchRun run;
  run.marked = marked;
  WalkState s = uniform_state(emb.arc_count());
  const CMatrix step = OU.cast<std::complex<double>>();
  for (long t = 0; t <= T; ++t) {
    if (t > 0) s.amplitudes = step * s.amplitudes;
    const Vector p = vertex_probabilities(emb, s);
    run.probability.push_back(p(marked));
    run.max_norm_drift = std::max(run.max_norm_drift, std::abs(s.norm() - 1.0));
    run.max_total_deviation = std::max(run.max_total_deviation, std::abs(p.sum() - 1.0));
  }
  return run;
}

inline SearchRun search(const WalkOperator& w, const Embedding& emb, int marked, long T) {
  return search(w.U, emb, marked, T);
}

/// U = R(2Q - I): reflect about arcs sharing a tail, then reverse the arc.
inline Matrix arc_reversal_walk(const Embedding& emb) {
  const int m = emb.arc_count();
  Matrix Q = Matrix::Zero(m, m);
  for (int x = 0; x < m; ++x) {
    for (int y = 0; y < m; ++y) {
      const int tx = emb.arcs()[static_cast<std::size_t>(x)].tail;
      if (tx == emb.arcs()[static_cast<std::size_t>(y)].tail) Q(x, y) = 1.0 / emb.vertex_degree(tx);
    }
  }
  return reversal_matrix(emb) * (2.0 * Q - Matrix::Identity(m, m));
}

}  // namespace vfwalk

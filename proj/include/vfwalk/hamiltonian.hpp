#pragma once

// Principal Hamiltonian of U^2 via the vertex-face incidence graph, the
// H-digraph it defines, and design-theoretic classification of the
// vertex-face incidence structure.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vfwalk/embedding.hpp"
#include "vfwalk/incidence.hpp"
#include "vfwalk/matkit.hpp"
#include "vfwalk/spectra.hpp"
#include "vfwalk/walk.hpp"

namespace vfwalk {

struct LambdaClass {
  double lambda = 0.0;
  int multiplicity = 0;
  Matrix G;  // eigenprojection of A
};

/// Spectrum of A = [[0, C], [C^T, 0]], rows ordered vertices then faces.
struct IncidenceGraphSpec {
  Matrix A;
  EmbeddingType type;
  std::vector<LambdaClass> classes;  // ascending

  double sqrt_dk() const { return std::sqrt(static_cast<double>(type.d) * type.k); }
  int distinct_count() const { return static_cast<int>(classes.size()); }

  /// True for lambda outside {0, +-sqrt(dk)}.
  bool interior(double lambda, double tol = kDefaultTol) const {
    const double a = std::abs(lambda);
    return a > tol * sqrt_dk() && a < sqrt_dk() * (1.0 - tol);
  }
};

inline EmbeddingType require_type(const Embedding& emb, const char* what) {
  require_circular(emb, what);
  const auto t = embedding_type(emb);
  if (!t) throw Error(Errc::unsupported, std::string(what) + ": embedding has no type (k,d)");
  return *t;
}

inline IncidenceGraphSpec incidence_graph(const IncidenceBundle& b, double tol = kDefaultTol) {
  IncidenceGraphSpec spec;
  spec.type = require_type(b.embedding, "incidence_graph");
  const Eigen::Index n = b.C.rows(), s = b.C.cols();
  spec.A = Matrix::Zero(n + s, n + s);
  spec.A.topRightCorner(n, s) = to_real(b.C);
  spec.A.bottomLeftCorner(s, n) = to_real(b.C).transpose();

  const SymEig eig = sym_eig(spec.A, tol);
  for (const auto& cls : group_values(eig.values, tol * spec.sqrt_dk())) {
    LambdaClass lc;
    lc.lambda = cls.value;
    lc.multiplicity = static_cast<int>(cls.multiplicity());
    lc.G = projector(class_columns(eig.vectors, cls));
    spec.classes.push_back(std::move(lc));
  }
  return spec;
}

/// Largest |cos(theta_lambda) - cos(theta)| over lambda, where
/// cos^2(theta_lambda / 2) = lambda^2 / dk and theta ranges over the
/// eigenangles present in the spectral data.
inline double lambda_theta_deviation(const IncidenceGraphSpec& spec, const SpectralData& sd) {
  std::vector<double> cosines;
  if (sd.plus_one.multiplicity > 0) cosines.push_back(1.0);
  if (sd.minus_one.multiplicity > 0) cosines.push_back(-1.0);
  for (const auto& c : sd.nonreal) cosines.push_back(std::cos(c.theta));
  double worst = 0.0;
  for (const auto& lc : spec.classes) {
    const double target = 2.0 * lc.lambda * lc.lambda / (spec.sqrt_dk() * spec.sqrt_dk()) - 1.0;
    double best = 2.0;
    for (double c : cosines) best = std::min(best, std::abs(c - target));
    worst = std::max(worst, best);
  }
  return worst;
}

struct Hamiltonian {
  CMatrix H;            // Hermitian, purely imaginary entries
  Matrix skew;          // iH, real skew-symmetric
  double imag_leak = 0.0;        // max |Im(iH)|, zero up to round-off
  double exp_residual = 0.0;     // ||expm(iH) - U^2||_F
};

/// H = 4 [N  -iM] (sum_lambda c(lambda) G_lambda) [N^T; iM^T] over lambda not
/// in {0, +-sqrt(dk)}, c(lambda) = lambda arccos(|lambda|/sqrt(dk)) /
/// (|lambda| sqrt(dk - lambda^2)).  With arcs oriented so that the face
/// successor of (u,v) is (v, sigma_v(u)), this sign gives exp(iH) = U^2
/// (the opposite sign gives its transpose).  The result is checked against
/// the series exponential.
inline Hamiltonian principal_hamiltonian(const WalkOperator& w, const IncidenceBundle& b, double tol = kDefaultTol) {
  using cd = std::complex<double>;
  const IncidenceGraphSpec spec = incidence_graph(b, tol);
  const double dk = spec.sqrt_dk() * spec.sqrt_dk();
  const Eigen::Index order = spec.A.rows();

  Matrix X = Matrix::Zero(order, order);
  for (const auto& lc : spec.classes) {
    if (!spec.interior(lc.lambda, tol)) continue;
    const double a = std::abs(lc.lambda);
    const double coef = lc.lambda * std::acos(a / spec.sqrt_dk()) / (a * std::sqrt(dk - lc.lambda * lc.lambda));
    X += coef * lc.G;
  }

  const Eigen::Index m = b.M.rows();
  CMatrix left(m, order);
  left << to_real(b.N).cast<cd>(), cd(0, -1) * to_real(b.M).cast<cd>();
  CMatrix right(order, m);
  right << to_real(b.N).transpose().cast<cd>(), cd(0, 1) * to_real(b.M).transpose().cast<cd>();

  Hamiltonian h;
  h.H = 4.0 * left * X.cast<cd>() * right;
  const CMatrix iH = cd(0, 1) * h.H;
  h.skew = iH.real();
  h.imag_leak = max_abs(Matrix(iH.imag()));
  h.exp_residual = (expm(h.skew) - w.U * w.U).norm();
  return h;
}

struct DigraphEdge {
  int from = 0;
  int to = 0;
  double weight = 0.0;
};

struct HDigraph {
  int node_count = 0;
  std::vector<DigraphEdge> edges;  // sorted by (from, to)

  std::vector<int> out_degree() const {
    std::vector<int> d(static_cast<std::size_t>(node_count), 0);
    for (const auto& e : edges) ++d[static_cast<std::size_t>(e.from)];
    return d;
  }

  std::vector<int> in_degree() const {
    std::vector<int> d(static_cast<std::size_t>(node_count), 0);
    for (const auto& e : edges) ++d[static_cast<std::size_t>(e.to)];
    return d;
  }
};

/// Arc x -> y whenever (iH)_{x,y} > tol.
inline HDigraph h_digraph(const Matrix& skew, double tol = 1e-10) {
  HDigraph g;
  g.node_count = static_cast<int>(skew.rows());
  for (Eigen::Index x = 0; x < skew.rows(); ++x) {
    for (Eigen::Index y = 0; y < skew.cols(); ++y) {
      if (skew(x, y) > tol) g.edges.push_back({static_cast<int>(x), static_cast<int>(y), skew(x, y)});
    }
  }
  return g;
}

inline HDigraph h_digraph(const Hamiltonian& h, double tol = 1e-10) { return h_digraph(h.skew, tol); }

/// DOT rendering; nodes are arcs of the embedding labelled "u->v", weights
/// printed with 6 significant digits.
inline std::string to_dot(const HDigraph& g, const Embedding& emb) {
  std::ostringstream out;
  out << "digraph H {\n";
  for (int x = 0; x < g.node_count; ++x) {
    out << "  " << x << " [label=\"" << to_string(emb.arcs()[static_cast<std::size_t>(x)]) << "\"];\n";
  }
  char buf[64];
  for (const auto& e : g.edges) {
    std::snprintf(buf, sizeof buf, "%.6g", e.weight);
    out << "  " << e.from << " -> " << e.to << " [weight=" << buf << "];\n";
  }
  out << "}\n";
  return out.str();
}

struct OrientedResult {
  int distinct_eigenvalues = 0;  // of the incidence graph
  std::optional<double> gamma;   // U^2 = expm(gamma (U - U^T))
  double theta = 0.0;
  double residual = 0.0;         // ||expm(gamma (U - U^T)) - U^2||_F
};

/// U^2 = expm(gamma (U - U^T)) holds iff the incidence graph has four or
/// five distinct eigenvalues; then gamma = theta / sin(theta) for the single
/// nonreal eigenangle theta of U.
inline OrientedResult oriented_test(const WalkOperator& w, const IncidenceBundle& b, double tol = kDefaultTol) {
  const IncidenceGraphSpec spec = incidence_graph(b, tol);
  OrientedResult r;
  r.distinct_eigenvalues = spec.distinct_count();
  if (r.distinct_eigenvalues != 4 && r.distinct_eigenvalues != 5) return r;

  const double dk = spec.sqrt_dk() * spec.sqrt_dk();
  std::optional<double> theta;
  for (const auto& lc : spec.classes) {
    if (lc.lambda > 0 && spec.interior(lc.lambda, tol)) theta = std::acos(2.0 * lc.lambda * lc.lambda / dk - 1.0);
  }
  if (!theta) return r;
  r.theta = *theta;
  r.gamma = r.theta / std::sin(r.theta);
  const Matrix U2 = w.U * w.U;
  r.residual = (expm(*r.gamma * (w.U - w.U.transpose())) - U2).norm();
  return r;
}

struct SkewReport {
  IntMatrix S;                       // M M^T N N^T - N N^T M M^T
  bool entries_in_range = false;     // all in {-1, 0, 1}
  long skew_residual = 0;            // max |S + S^T|
  double scaled_residual = 0.0;      // max |S - (dk/4)(U - U^T)|
  std::vector<int> out_degree;       // number of +1 entries per row
  std::vector<int> formula_degree;   // dk - sum_{u in f_ab} beta(a,u)
  bool degrees_match = false;
};

/// Number of faces containing both a and u, counted face by face.
inline int faces_containing_both(const Embedding& emb, int a, int u) {
  int count = 0;
  for (const auto& f : emb.faces()) count += f.contains_vertex(a) && f.contains_vertex(u);
  return count;
}

inline SkewReport skew_S(const IncidenceBundle& b, const WalkOperator& w) {
  const EmbeddingType t = require_type(b.embedding, "skew_S");
  const Embedding& emb = b.embedding;
  const IntMatrix MMt = b.M * b.M.transpose();
  const IntMatrix NNt = b.N * b.N.transpose();

  SkewReport r;
  r.S = MMt * NNt - NNt * MMt;
  r.entries_in_range = r.S.size() == 0 || r.S.cwiseAbs().maxCoeff() <= 1;
  r.skew_residual = max_abs_int(r.S + IntMatrix(r.S.transpose()));
  const double dk = static_cast<double>(t.d) * t.k;
  r.scaled_residual = max_abs(Matrix(to_real(r.S) - dk / 4.0 * (w.U - w.U.transpose())));

  r.degrees_match = true;
  for (int x = 0; x < emb.arc_count(); ++x) {
    r.out_degree.push_back(static_cast<int>((r.S.row(x).array() == 1).count()));
    const Arc& arc = emb.arcs()[static_cast<std::size_t>(x)];
    int beta_sum = 0;
    for (int u : emb.face(emb.face_of(static_cast<std::size_t>(x))).vertices()) {
      beta_sum += faces_containing_both(emb, arc.tail, u);
    }
    r.formula_degree.push_back(t.d * t.k - beta_sum);
    r.degrees_match = r.degrees_match && r.out_degree.back() == r.formula_degree.back();
  }
  return r;
}

// ---------------------------------------------------------------------------
// Design classification

enum class DesignKind { two_design, partial_geometric, other };

inline std::string_view to_string(DesignKind k) {
  switch (k) {
    case DesignKind::two_design: return "two-design";
    case DesignKind::partial_geometric: return "partial-geometric";
    case DesignKind::other: return "other";
  }
  return "other";
}

struct TwoDesignParams {
  int v = 0;       // points
  int k = 0;       // points per block
  int lambda = 0;  // blocks through each pair of points
};

struct PgdParams {
  int d = 0;  // blocks through each point
  int k = 0;  // points per block
  int t = 0;  // count for non-incident (p, B)
  int c = 0;  // count for incident (p, B)
  double mu = 0.0;  // the eigenvalue of C C^T other than dk
};

struct DesignClassification {
  DesignKind kind = DesignKind::other;
  std::optional<TwoDesignParams> two_design;
  std::optional<PgdParams> pgd;
  std::vector<double> singular_values;  // distinct nonzero, descending
  bool brute_force_confirmed = false;
  std::string diagnostic;
};

/// |{(p', B') : p' in B', p' != p, B' != B, p' in B, p in B'}| for every (p, B).
inline IntMatrix incident_pair_counts(const IntMatrix& C) {
  const Eigen::Index n = C.rows(), b = C.cols();
  IntMatrix out = IntMatrix::Zero(n, b);
  for (Eigen::Index p = 0; p < n; ++p) {
    for (Eigen::Index B = 0; B < b; ++B) {
      int count = 0;
      for (Eigen::Index q = 0; q < n; ++q) {
        if (q == p || !C(q, B)) continue;
        for (Eigen::Index B2 = 0; B2 < b; ++B2) count += (B2 != B && C(p, B2) && C(q, B2));
      }
      out(p, B) = count;
    }
  }
  return out;
}

namespace detail {

inline std::optional<int> as_integer(double x, double tol = 1e-6) {
  const double r = std::round(x);
  if (std::abs(x - r) > tol) return std::nullopt;
  return static_cast<int>(r);
}

}  // namespace detail

inline DesignClassification classify_design(const IntMatrix& C, double tol = kDefaultTol) {
  DesignClassification out;
  const Eigen::Index n = C.rows(), nb = C.cols();
  if (n == 0 || nb == 0) {
    out.diagnostic = "empty incidence matrix";
    return out;
  }
  if ((C.array() != 0 && C.array() != 1).any()) {
    out.diagnostic = "incidence matrix is not 0/1";
    return out;
  }
  const int d = C.row(0).sum();
  const int k = C.col(0).sum();
  for (Eigen::Index p = 0; p < n; ++p) {
    if (C.row(p).sum() != d) {
      out.diagnostic = "row sums are not constant";
      return out;
    }
  }
  for (Eigen::Index B = 0; B < nb; ++B) {
    if (C.col(B).sum() != k) {
      out.diagnostic = "column sums are not constant";
      return out;
    }
  }

  const IntMatrix CCt = C * C.transpose();
  const double dk = static_cast<double>(d) * k;
  const SymEig eig = sym_eig(to_real(CCt), tol);
  const double scale = std::max(1.0, dk);
  std::vector<double> nonzero;
  bool invertible = true;
  for (const auto& cls : group_values(eig.values, tol * scale)) {
    if (std::abs(cls.value) <= tol * scale) {
      invertible = false;
      continue;
    }
    nonzero.push_back(cls.value);
  }
  std::sort(nonzero.rbegin(), nonzero.rend());
  for (double v : nonzero) out.singular_values.push_back(std::sqrt(v));

  if (k <= 1 || d == 0) {
    out.diagnostic = "trivial design (block size " + std::to_string(k) + ")";
    return out;
  }

  if (nonzero.size() == 2) {
    const double mu = std::abs(nonzero[0] - dk) < std::abs(nonzero[1] - dk) ? nonzero[1] : nonzero[0];
    const double t = k * (dk - mu) / static_cast<double>(n);
    const double c = t + mu + 1.0 - d - k;
    const auto ti = detail::as_integer(t);
    const auto ci = detail::as_integer(c);
    if (ti && ci) out.pgd = PgdParams{d, k, *ti, *ci, mu};
    else out.diagnostic = "two nonzero singular values but non-integral (t, c)";
  } else {
    out.diagnostic = std::to_string(nonzero.size()) + " distinct nonzero singular values";
  }

  if (invertible && n >= 2) {
    const int diag = CCt(0, 0);
    const int off = CCt(0, 1);
    bool balanced = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) balanced = balanced && CCt(i, j) == (i == j ? diag : off);
    }
    if (balanced && static_cast<long>(off) * (n - 1) == static_cast<long>(d) * (k - 1)) {
      out.two_design = TwoDesignParams{static_cast<int>(n), k, off};
    }
  }

  if (out.pgd) {
    const IntMatrix counts = incident_pair_counts(C);
    bool ok = true;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index B = 0; B < nb; ++B) ok = ok && counts(p, B) == (C(p, B) ? out.pgd->c : out.pgd->t);
    }
    if (out.two_design) {
      // Every pair of distinct points lies in exactly lambda blocks.
      for (Eigen::Index p = 0; p < n; ++p) {
        for (Eigen::Index q = p + 1; q < n; ++q) {
          int together = 0;
          for (Eigen::Index B = 0; B < nb; ++B) together += C(p, B) && C(q, B);
          ok = ok && together == out.two_design->lambda;
        }
      }
    }
    out.brute_force_confirmed = ok;
    if (ok) {
      out.kind = out.two_design ? DesignKind::two_design : DesignKind::partial_geometric;
      out.diagnostic.clear();
    } else {
      out.diagnostic = "pair counts disagree with spectral parameters";
      out.two_design.reset();
      out.pgd.reset();
    }
  }
  return out;
}

/// Parses a comma-separated integer matrix; '#' lines and blank lines skipped.
inline IntMatrix parse_matrix_csv(std::string_view text) {
  std::vector<std::vector<int>> rows;
  for (const auto& [number, line] : detail::significant_lines(text)) {
    std::vector<int> row;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) row.push_back(static_cast<int>(detail::parse_int(detail::trim(cell), number, "entry")));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(Errc::parse, "line " + std::to_string(number) + ": ragged matrix row");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(Errc::parse, "matrix file has no rows");
  IntMatrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ratio condition (heuristic)

struct RatioEntry {
  double lambda_r = 0.0, lambda_s = 0.0;
  double ratio = 0.0;
  bool rational = false;
  long num = 0, den = 1;  // best convergent found
};

struct RatioReport {
  std::vector<RatioEntry> entries;

  bool vacuous() const { return entries.empty(); }
  bool all_rational() const {
    return std::all_of(entries.begin(), entries.end(), [](const RatioEntry& e) { return e.rational; });
  }
};

/// Continued-fraction convergents of x with denominator at most max_den; the
/// value counts as rational if some convergent is within tol.
inline bool near_rational(double x, long max_den, double tol, long& num, long& den) {
  long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double rest = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(rest);
    const long ai = static_cast<long>(a);
    const long h2 = ai * h1 + h0;
    const long k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    num = h1;
    den = k1;
    if (std::abs(x - static_cast<double>(h1) / static_cast<double>(k1)) <= tol) return true;
    const double frac = rest - a;
    if (frac < 1e-15) break;
    rest = 1.0 / frac;
  }
  return false;
}

inline RatioReport ratio_condition(const IncidenceGraphSpec& spec, double tol = kDefaultTol, long max_den = 1000) {
  std::vector<double> lambdas;
  for (const auto& lc : spec.classes) {
    if (lc.lambda > 0 && spec.interior(lc.lambda, tol)) lambdas.push_back(lc.lambda);
  }
  RatioReport r;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    for (std::size_t j = i + 1; j < lambdas.size(); ++j) {
      RatioEntry e;
      e.lambda_r = lambdas[i];
      e.lambda_s = lambdas[j];
      e.ratio = std::acos(lambdas[i] / spec.sqrt_dk()) / std::acos(lambdas[j] / spec.sqrt_dk());
      e.rational = near_rational(e.ratio, max_den, tol, e.num, e.den);
      r.entries.push_back(e);
    }
  }
  return r;
}

}  // namespace vfwalk

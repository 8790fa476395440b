#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>

#include "support.hpp"
#include "vfwalk/incidence.hpp"
#include "vfwalk/walk.hpp"

using namespace vfwalk;

namespace {

// Eq. (1): arcs in lexicographic order, faces f0..f3 as printed.
IntMatrix paper_M() {
  IntMatrix m(12, 4);
  m << 1, 0, 0, 0,
       0, 0, 1, 0,
       0, 0, 0, 1,
       0, 0, 0, 1,
       1, 0, 0, 0,
       0, 1, 0, 0,
       1, 0, 0, 0,
       0, 1, 0, 0,
       0, 0, 1, 0,
       0, 0, 1, 0,
       0, 0, 0, 1,
       0, 1, 0, 0;
  return m;
}

IntMatrix paper_N() {
  IntMatrix n = IntMatrix::Zero(12, 4);
  for (int x = 0; x < 12; ++x) n(x, x / 3) = 1;
  return n;
}

// U assembled from the entry rules alone: P = 1/deg(f) on same-face pairs,
// Q = 1/deg(u) on same-tail pairs.
Matrix oracle_U(const Embedding& e) {
  const int m = e.arc_count();
  Matrix P = Matrix::Zero(m, m), Q = Matrix::Zero(m, m);
  for (const auto& f : e.faces()) {
    for (const auto& a : f.arcs)
      for (const auto& b : f.arcs) P(static_cast<Eigen::Index>(e.arc_index(a)), static_cast<Eigen::Index>(e.arc_index(b))) = 1.0 / static_cast<double>(f.degree());
  }
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y)
      if (e.arcs()[static_cast<std::size_t>(x)].tail == e.arcs()[static_cast<std::size_t>(y)].tail)
        Q(x, y) = 1.0 / e.vertex_degree(e.arcs()[static_cast<std::size_t>(x)].tail);
  const Matrix I = Matrix::Identity(m, m);
  return (2 * P - I) * (2 * Q - I);
}

}  // namespace

TEST(Incidence, K4ReproducesPrintedMatrices) {
  const IncidenceBundle b = build_incidence(generate_k4_planar());
  // Column j of ours is printed face perm[j].
  const int perm[4] = {0, 2, 3, 1};
  IntMatrix permuted(12, 4);
  for (int j = 0; j < 4; ++j) permuted.col(j) = paper_M().col(perm[j]);
  EXPECT_EQ(b.M, permuted);
  EXPECT_EQ(b.N, paper_N());
}

TEST(Incidence, K4VertexFaceMatrix) {
  const IncidenceBundle b = build_incidence(generate_k4_planar());
  // Each face misses exactly one vertex: C = J - Pi.
  const IntMatrix J = IntMatrix::Ones(4, 4);
  const IntMatrix Pi = J - b.C;
  EXPECT_TRUE((Pi.array() >= 0).all());
  EXPECT_EQ(Pi.rowwise().sum(), Eigen::VectorXi::Ones(4));
  EXPECT_EQ(Pi.colwise().sum(), Eigen::RowVectorXi::Ones(4));
  EXPECT_LE(max_abs(Matrix(normalized_C(b) - to_real(b.C) / 3.0)), 1e-15);
  // Face {0,1,2} misses 3, face {0,2,3} misses 1, {0,1,3} misses 2, {1,2,3} misses 0.
  EXPECT_EQ(Pi(3, 0), 1);
  EXPECT_EQ(Pi(1, 1), 1);
  EXPECT_EQ(Pi(2, 2), 1);
  EXPECT_EQ(Pi(0, 3), 1);
}

TEST(Incidence, C3NormalizedMatrix) {
  const IncidenceBundle b = build_incidence(test::c3_planar());
  EXPECT_EQ(b.C, IntMatrix::Ones(3, 2));
  EXPECT_LE(max_abs(Matrix(b.C_hat - Matrix::Ones(3, 2) / std::sqrt(6.0))), 1e-15);
}

TEST(Incidence, TorusShapes) {
  const IncidenceBundle b = build_incidence(generate_torus_grid(4));
  EXPECT_EQ(b.M.rows(), 64);
  EXPECT_EQ(b.M.cols(), 16);
  EXPECT_EQ(b.N.cols(), 16);
  EXPECT_EQ(b.M.colwise().sum(), Eigen::RowVectorXi::Constant(16, 4));
  EXPECT_EQ(b.N.colwise().sum(), Eigen::RowVectorXi::Constant(16, 4));
}

TEST(Incidence, RejectsNonCircular) {
  EXPECT_THROW(build_incidence(trace_faces(RotationSystem({{1}, {0}}))), Error);
}

TEST(Incidence, CsvDump) {
  const std::string csv = incidence_csv(build_incidence(generate_k4_planar()));
  EXPECT_NE(csv.find("# M (arc x face)\narc,f0,f1,f2,f3\n0->1,1,0,0,0\n"), std::string::npos);
  EXPECT_NE(csv.find("# N"), std::string::npos);
  EXPECT_NE(csv.find("# C"), std::string::npos);
}

TEST(Walk, K4EntryRules) {
  const Embedding e = generate_k4_planar();
  const WalkOperator w = build_walk(e);
  ASSERT_EQ(w.arc_count(), 12);
  EXPECT_LE(max_abs(Matrix(w.U * Vector::Ones(12) - Vector::Ones(12))), 1e-12);
  EXPECT_LE(max_abs(Matrix(w.U.transpose() * w.U - Matrix::Identity(12, 12))), 1e-12);
  // (PQ)_{(a,b),(u,v)} = 1/9 iff u lies on f_ab.
  const Matrix PQ = w.P * w.Q;
  for (int x = 0; x < 12; ++x) {
    for (int y = 0; y < 12; ++y) {
      const Arc ab = e.arcs()[static_cast<std::size_t>(x)];
      const int u = e.arcs()[static_cast<std::size_t>(y)].tail;
      const bool on = e.face(e.face_of(ab)).contains_vertex(u);
      EXPECT_NEAR(PQ(x, y), on ? 1.0 / 9.0 : 0.0, 1e-15);
    }
  }
  EXPECT_EQ(w.p_entry(0, 4), (Rational{1, 3}));
  EXPECT_EQ(w.q_entry(0, 1), (Rational{1, 3}));
  EXPECT_EQ(w.q_entry(0, 3), (Rational{0, 1}));
}

TEST(Walk, Traces) {
  const Embedding k4 = generate_k4_planar();
  const TraceReport a = trace_U(build_walk(k4), k4);
  EXPECT_NEAR(a.direct, 4.0 / 3.0, 1e-12);
  ASSERT_TRUE(a.formula);
  EXPECT_NEAR(*a.formula, 4.0 / 3.0, 1e-12);

  const Embedding t4 = generate_torus_grid(4);
  const TraceReport b = trace_U(build_walk(t4), t4);
  EXPECT_NEAR(b.direct, 16.0, 1e-10);
  EXPECT_NEAR(*b.formula, 16.0, 1e-12);

  const Embedding cube = test::cube_cover();
  const TraceReport c = trace_U(build_walk(cube), cube);
  EXPECT_NEAR(c.direct, 16.0 / 3.0, 1e-10);
  EXPECT_NEAR(*c.formula, 16.0 / 3.0, 1e-12);
}

TEST(Walk, ReversalMatrix) {
  const Matrix r1 = reversal_matrix(trace_faces(RotationSystem({{1}, {0}})));
  EXPECT_EQ(r1, (Matrix(2, 2) << 0, 1, 1, 0).finished());
  const Matrix R = reversal_matrix(generate_k4_planar());
  EXPECT_EQ(R * R, Matrix::Identity(12, 12));
  EXPECT_EQ(R, R.transpose());
  EXPECT_EQ(R.diagonal().sum(), 0.0);
}

TEST(Walk, MeetJoin) {
  const MeetJoin k4 = partition_meet_join(generate_k4_planar());
  EXPECT_EQ(k4.meet_classes, 12);
  EXPECT_EQ(k4.join_classes, 1);
  const MeetJoin t3 = partition_meet_join(generate_torus_grid(3));
  EXPECT_EQ(t3.meet_classes, 36);
  EXPECT_EQ(t3.join_classes, 1);
  const MeetJoin c3 = partition_meet_join(test::c3_planar());
  EXPECT_EQ(c3.meet_classes, 6);
  EXPECT_EQ(c3.join_classes, 1);
}

TEST(Walk, K4QuotientMatrices) {
  const IncidenceBundle b = build_incidence(generate_k4_planar());
  const QuotientMatrices q = quotient_matrices(b, build_walk(b));
  for (const Matrix* m : {&q.face_face, &q.vertex_vertex}) {
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) EXPECT_NEAR((*m)(i, j), i == j ? 1.0 / 3.0 : 2.0 / 9.0, 1e-15);
  }
}

TEST(Walk, QuotientMatrixClosedForms) {
  const Embedding e = generate_torus_grid(3);
  const IncidenceBundle b = build_incidence(e);
  const QuotientMatrices q = quotient_matrices(b, build_walk(b));
  for (int f = 0; f < e.face_count(); ++f) {
    for (int h = 0; h < e.face_count(); ++h) {
      double sum = 0.0;
      for (int u : e.face(f).vertices())
        if (e.face(h).contains_vertex(u)) sum += 1.0 / e.vertex_degree(u);
      EXPECT_NEAR(q.face_face(f, h), sum / std::sqrt(e.face_degree(f) * e.face_degree(h)), 1e-14);
    }
  }
  for (int u = 0; u < e.vertex_count(); ++u) {
    for (int v = 0; v < e.vertex_count(); ++v) {
      double sum = 0.0;
      for (const auto& f : e.faces())
        if (f.contains_vertex(u) && f.contains_vertex(v)) sum += 1.0 / static_cast<double>(f.degree());
      EXPECT_NEAR(q.vertex_vertex(u, v), sum / std::sqrt(e.vertex_degree(u) * e.vertex_degree(v)), 1e-14);
    }
  }
}

TEST(Walk, Duality) {
  EXPECT_TRUE(duality_check(generate_k4_planar()).holds());
  const DualityReport t = duality_check(generate_torus_grid(4));
  EXPECT_TRUE(t.holds());
  EXPECT_TRUE(t.simple_dual);
  // Parallel edges in the dual: checked on the arc map and flagged.
  const DualityReport c3 = duality_check(test::c3_planar());
  EXPECT_TRUE(c3.holds());
  EXPECT_FALSE(c3.simple_dual);
  EXPECT_FALSE(c3.reason.empty());
  const DualityReport cube = duality_check(test::cube_cover());
  EXPECT_TRUE(cube.holds());
  EXPECT_FALSE(cube.simple_dual);
  EXPECT_FALSE(duality_check(trace_faces(RotationSystem({{1}, {0}}))).supported);
}

TEST(Walk, ArcMapDualAgreesWithSimpleDual) {
  for (const auto& [name, e] : test::corpus()) {
    const auto ud = detail::arc_map_dual_walk(e);
    ASSERT_TRUE(ud) << name;
    EXPECT_LE(max_abs(Matrix(*ud - build_walk(e).U.transpose())), 1e-12) << name;
  }
}

TEST(WalkProperty, RandomCircularEmbeddings) {
  std::mt19937 rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    const Embedding e = test::random_circular_embedding(rng);
    const IncidenceBundle b = build_incidence(e);
    EXPECT_TRUE(verify_identities(b).exact());

    const WalkOperator w = build_walk(b);
    const int m = w.arc_count();
    const Matrix I = Matrix::Identity(m, m);
    EXPECT_LE(max_abs(Matrix(w.U - oracle_U(e))), 1e-12);
    EXPECT_LE(max_abs(Matrix(w.P * w.P - w.P)), 1e-12);
    EXPECT_LE(max_abs(Matrix(w.Q * w.Q - w.Q)), 1e-12);
    EXPECT_LE(max_abs(Matrix(w.U.transpose() * w.U - I)), 1e-10);
    EXPECT_LE(max_abs(Matrix(w.U.rowwise().sum().array() - 1.0)), 1e-10);
    EXPECT_LE(max_abs(Matrix(w.U.colwise().sum().array() - 1.0)), 1e-10);
    EXPECT_LE(max_abs(Matrix(w.P - b.M_hat * b.M_hat.transpose())), 1e-12);
    EXPECT_LE(max_abs(Matrix(w.Q - b.N_hat * b.N_hat.transpose())), 1e-12);

    const IntMatrix NtN = b.N.transpose() * b.N;
    const IntMatrix MtM = b.M.transpose() * b.M;
    for (int v = 0; v < e.vertex_count(); ++v) EXPECT_EQ(NtN(v, v), e.vertex_degree(v));
    for (int f = 0; f < e.face_count(); ++f) EXPECT_EQ(MtM(f, f), e.face_degree(f));
    EXPECT_EQ(max_abs_int(IntMatrix(NtN - IntMatrix(NtN.diagonal().asDiagonal()))), 0);
    EXPECT_EQ(max_abs_int(IntMatrix(MtM - IntMatrix(MtM.diagonal().asDiagonal()))), 0);

    // C_hat C_hat^T has eigenvalue 1 on (sqrt deg u), simply.
    Vector root(e.vertex_count());
    for (int v = 0; v < e.vertex_count(); ++v) root(v) = std::sqrt(e.vertex_degree(v));
    const Matrix CC = b.C_hat * b.C_hat.transpose();
    EXPECT_LE(max_abs(Matrix(CC * root - root)), 1e-12);
    const Vector ev = sym_eig(CC).values;
    EXPECT_GE(ev.minCoeff(), -1e-12);
    EXPECT_LE(ev.maxCoeff(), 1.0 + 1e-12);
    EXPECT_LT(ev(ev.size() - 2), 1.0 - 1e-9);

    if (const auto t = embedding_type(e)) {
      EXPECT_EQ(b.C * Eigen::VectorXi::Ones(e.face_count()), Eigen::VectorXi::Constant(e.vertex_count(), t->d));
      EXPECT_EQ(b.C.transpose() * Eigen::VectorXi::Ones(e.vertex_count()), Eigen::VectorXi::Constant(e.face_count(), t->k));
    }

    const MeetJoin mj = partition_meet_join(e);
    EXPECT_EQ(mj.meet_classes, m);
    EXPECT_EQ(mj.join_classes, 1);

    const TraceReport tr = trace_U(w, e);
    if (tr.formula) EXPECT_NEAR(tr.direct, *tr.formula, 1e-9);

    // The other orientation: equal spectra, and it is the walk of the
    // reversed embedding up to relabelling arcs by reversal.
    const Matrix R = reversal_matrix(e);
    const Matrix Uccw = opposite_orientation_operator(w, R);
    EXPECT_NEAR(Uccw.trace(), w.U.trace(), 1e-9);
    Eigen::ComplexEigenSolver<Matrix> s1(w.U), s2(Uccw);
    std::vector<double> a1, a2;
    for (int i = 0; i < m; ++i) {
      a1.push_back(s1.eigenvalues()(i).real());
      a2.push_back(s2.eigenvalues()(i).real());
    }
    // Both spectra are closed under conjugation, so the real parts decide them.
    std::sort(a1.begin(), a1.end());
    std::sort(a2.begin(), a2.end());
    for (int i = 0; i < m; ++i) EXPECT_NEAR(a1[static_cast<std::size_t>(i)], a2[static_cast<std::size_t>(i)], 1e-7);
    const Embedding rev = reverse_orientation(e);
    EXPECT_LE(max_abs(Matrix(build_walk(rev).U - R * (2 * w.P - Matrix::Identity(m, m)) * R * (2 * w.Q - Matrix::Identity(m, m)))), 1e-12);

    const DualityReport d = duality_check(e);
    EXPECT_TRUE(d.holds()) << d.reason;
  }
}

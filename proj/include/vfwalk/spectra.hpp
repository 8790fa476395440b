#pragma once

// Spectral decomposition of the vertex-face walk U, read off from the
// normalized vertex-face incidence matrix C_hat = N_hat^T M_hat.
//
//   +1 :  span{1}  (+)  ker M^T  /\  ker N^T              dim l + 2g
//   -1 :  M_hat ker(C_hat)  (+)  N_hat ker(C_hat^T)       dim n + s - 2 rk C
//   e^{+-i theta}: one pair per eigenvalue mu in (0,1) of C_hat C_hat^T,
//                  cos(theta) = 2 mu - 1                  total 2 rk C - 2

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "vfwalk/incidence.hpp"
#include "vfwalk/matkit.hpp"
#include "vfwalk/walk.hpp"

namespace vfwalk {

struct RealEigenspace {
  int multiplicity = 0;
  Matrix basis;  // orthonormal columns
};

struct NonrealClass {
  double mu = 0.0;     // eigenvalue of C_hat C_hat^T in (0,1)
  double theta = 0.0;  // in (0, pi), cos(theta) = 2 mu - 1
  int multiplicity = 0;  // per sign
  Matrix y_basis;      // orthonormal eigenvectors of C_hat C_hat^T for mu
  CMatrix vectors_plus, vectors_minus;  // unit eigenvectors of U for e^{+i theta}, e^{-i theta}
  CMatrix F_plus, F_minus;              // eigenprojections

  std::complex<double> eigenvalue(int sign) const { return std::polar(1.0, sign * theta); }
};

struct SpectralData {
  RealEigenspace plus_one, minus_one;
  std::vector<NonrealClass> nonreal;
  int rank_C = 0;
  double reconstruction_residual = 0.0;  // max |sum alpha F - U|
  double completeness_residual = 0.0;    // max |sum F - I|

  int total_multiplicity() const {
    int t = plus_one.multiplicity + minus_one.multiplicity;
    for (const auto& c : nonreal) t += 2 * c.multiplicity;
    return t;
  }
};

/// Eigenvalue classes of C_hat C_hat^T; values within tol of 0 or 1 are
/// snapped to the real classes.
struct CCtClasses {
  std::vector<ValueClass> classes;
  SymEig eig;
};

inline CCtClasses cct_classes(const IncidenceBundle& b, double tol = kDefaultTol) {
  CCtClasses out;
  out.eig = sym_eig(b.C_hat * b.C_hat.transpose(), tol);
  out.classes = group_values(out.eig.values, tol);
  return out;
}

inline int incidence_rank(const IncidenceBundle& b, double tol = kDefaultTol) {
  return static_cast<int>(numeric_rank(to_real(b.C), tol));
}

inline RealEigenspace one_eigenspace(const WalkOperator& w, const IncidenceBundle& /*b*/, double tol = kDefaultTol) {
  const int m = w.arc_count();
  Matrix stacked(2 * m, m);
  stacked << w.P, w.Q;
  const Matrix k = kernel_basis(stacked, tol);
  RealEigenspace r;
  r.basis.resize(m, k.cols() + 1);
  r.basis.col(0) = Vector::Constant(m, 1.0 / std::sqrt(static_cast<double>(m)));
  r.basis.rightCols(k.cols()) = k;
  r.multiplicity = static_cast<int>(r.basis.cols());
  return r;
}

inline RealEigenspace minus_one_eigenspace(const IncidenceBundle& b, double tol = kDefaultTol) {
  const Matrix k_face = kernel_basis(b.C_hat, tol);               // in R^s
  const Matrix k_vertex = kernel_basis(b.C_hat.transpose(), tol); // in R^n
  RealEigenspace r;
  r.basis.resize(b.arc_count(), k_face.cols() + k_vertex.cols());
  if (k_face.cols() > 0) r.basis.leftCols(k_face.cols()) = b.M_hat * k_face;
  if (k_vertex.cols() > 0) r.basis.rightCols(k_vertex.cols()) = b.N_hat * k_vertex;
  r.multiplicity = static_cast<int>(r.basis.cols());
  return r;
}

inline void require_interior(double mu) {
  if (!(mu > 0.0 && mu < 1.0)) {
    throw Error(Errc::domain, "eigenprojection needs mu in (0,1), got " + std::to_string(mu));
  }
}

/// Eigenprojection of U for e^{sign * i theta}, cos(theta) = 2 mu - 1, from
/// the orthonormal mu-eigenvectors of C_hat C_hat^T.
inline CMatrix nonreal_projection(const IncidenceBundle& b, const WalkOperator& w, double mu, const Matrix& y_basis,
                                  int sign) {
  require_interior(mu);
  using cd = std::complex<double>;
  const double theta = std::acos(2.0 * mu - 1.0);
  const double c = std::cos(theta);
  const double s2 = std::sin(theta) * std::sin(theta);
  const cd e = std::polar(1.0, sign * theta);
  const Matrix W = b.N_hat * projector(y_basis) * b.N_hat.transpose();
  const Matrix PW = w.P * W;
  const Matrix WP = W * w.P;
  const Matrix PWP = PW * w.P;
  CMatrix F = (c + 1.0) * W.cast<cd>() - (e + 1.0) * PW.cast<cd>() - (std::conj(e) + 1.0) * WP.cast<cd>() +
              2.0 * PWP.cast<cd>();
  return F / s2;
}

/// Convenience overload that finds the mu-eigenspace itself.
inline CMatrix nonreal_projection(const IncidenceBundle& b, const WalkOperator& w, double mu, int sign,
                                  double tol = kDefaultTol) {
  require_interior(mu);
  const CCtClasses cc = cct_classes(b, tol);
  for (const auto& cls : cc.classes) {
    if (std::abs(cls.value - mu) <= 1e3 * tol) return nonreal_projection(b, w, cls.value, class_columns(cc.eig.vectors, cls), sign);
  }
  throw Error(Errc::domain, "mu = " + std::to_string(mu) + " is not an eigenvalue of C_hat C_hat^T");
}

inline std::vector<NonrealClass> nonreal_eigendata(const IncidenceBundle& b, const WalkOperator& w,
                                                   double tol = kDefaultTol) {
  using cd = std::complex<double>;
  const CCtClasses cc = cct_classes(b, tol);
  std::vector<NonrealClass> out;
  for (const auto& cls : cc.classes) {
    if (cls.value <= tol || cls.value >= 1.0 - tol) continue;
    NonrealClass nc;
    nc.mu = cls.value;
    nc.theta = std::acos(2.0 * nc.mu - 1.0);
    nc.multiplicity = static_cast<int>(cls.multiplicity());
    nc.y_basis = class_columns(cc.eig.vectors, cls);

    const double c = std::cos(nc.theta);
    const Matrix Z = b.N_hat * nc.y_basis;
    const Matrix PZ = w.P * Z;
    for (int sign : {+1, -1}) {
      const cd e = std::polar(1.0, sign * nc.theta);
      CMatrix V = (c + 1.0) * Z.cast<cd>() - (e + 1.0) * PZ.cast<cd>();
      for (Eigen::Index j = 0; j < V.cols(); ++j) V.col(j).normalize();
      (sign > 0 ? nc.vectors_plus : nc.vectors_minus) = std::move(V);
    }
    nc.F_plus = nonreal_projection(b, w, nc.mu, nc.y_basis, +1);
    nc.F_minus = nonreal_projection(b, w, nc.mu, nc.y_basis, -1);
    out.push_back(std::move(nc));
  }
  return out;
}

inline SpectralData full_decomposition(const WalkOperator& w, const IncidenceBundle& b, double tol = kDefaultTol) {
  using cd = std::complex<double>;
  SpectralData sd;
  sd.plus_one = one_eigenspace(w, b, tol);
  sd.minus_one = minus_one_eigenspace(b, tol);
  sd.nonreal = nonreal_eigendata(b, w, tol);
  sd.rank_C = incidence_rank(b, tol);

  const int m = w.arc_count();
  const Matrix F1 = projector(sd.plus_one.basis);
  const Matrix Fm1 = projector(sd.minus_one.basis);
  CMatrix sum_alpha = (F1 - Fm1).cast<cd>();
  CMatrix sum_f = (F1 + Fm1).cast<cd>();
  for (const auto& c : sd.nonreal) {
    sum_alpha += c.eigenvalue(+1) * c.F_plus + c.eigenvalue(-1) * c.F_minus;
    sum_f += c.F_plus + c.F_minus;
  }
  sd.reconstruction_residual = max_abs(CMatrix(sum_alpha - w.U.cast<cd>()));
  sd.completeness_residual = max_abs(CMatrix(sum_f - CMatrix::Identity(m, m)));
  return sd;
}

}  // namespace vfwalk

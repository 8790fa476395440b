#pragma once

// Dense real-matrix kernel shared by the rest of the library.
//
// Storage and the symmetric eigensolver come from Eigen; the matrix
// exponential is a plain scaling-and-squaring Taylor series so it can serve
// as an independent check on spectrally assembled logarithms.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "vfwalk/errors.hpp"

namespace vfwalk {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using IntMatrix = Eigen::MatrixXi;

inline constexpr double kDefaultTol = 1e-9;

/// Eigenvalues in ascending order with matching orthonormal eigenvector columns.
struct SymEig {
  Vector values;
  Matrix vectors;
};

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& a) {
  return a.size() == 0 ? 0.0 : static_cast<double>(a.cwiseAbs().maxCoeff());
}

inline void require_square(const Matrix& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw Error(Errc::shape, std::string(what) + ": matrix is " + std::to_string(a.rows()) + "x" +
                                 std::to_string(a.cols()) + ", expected square");
  }
}

inline SymEig sym_eig(const Matrix& a, double tol = kDefaultTol) {
  require_square(a, "sym_eig");
  if (a.rows() == 0) return {};
  if (max_abs(a - a.transpose()) > tol * (1.0 + max_abs(a))) {
    throw Error(Errc::shape, "sym_eig: matrix is not symmetric");
  }
  // Symmetrize so round-off asymmetry does not leak into the solver.
  const Matrix sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error(Errc::domain, "sym_eig: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// Number of singular values above tol times the largest one.
inline std::size_t numeric_rank(const Matrix& a, double tol = kDefaultTol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(a);
  const Vector& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double cut = tol * sv(0);
  return static_cast<std::size_t>((sv.array() > cut).count());
}

/// Orthonormal basis (as columns) of the null space of a.
inline Matrix kernel_basis(const Matrix& a, double tol = kDefaultTol) {
  const Eigen::Index cols = a.cols();
  if (cols == 0) return Matrix(0, 0);
  if (a.rows() == 0) return Matrix::Identity(cols, cols);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  Eigen::Index rank = 0;
  if (sv.size() > 0 && sv(0) > 0.0) {
    const double cut = tol * sv(0);
    rank = (sv.array() > cut).count();
  }
  return svd.matrixV().rightCols(cols - rank);
}

/// Orthogonal projector onto the span of orthonormal columns.
inline Matrix projector(const Matrix& basis) {
  if (basis.cols() == 0) return Matrix::Zero(basis.rows(), basis.rows());
  return basis * basis.transpose();
}

inline double one_norm(const Matrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().colwise().sum().maxCoeff();
}

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
inline Matrix expm(const Matrix& a) {
  require_square(a, "expm");
  const Eigen::Index n = a.rows();
  if (n == 0) return Matrix(0, 0);

  // Scale so the series argument has 1-norm at most 1/2.
  const double norm = one_norm(a);
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Matrix x = a / std::ldexp(1.0, squarings);

  Matrix result = Matrix::Identity(n, n);
  Matrix term = Matrix::Identity(n, n);
  for (int k = 1; k <= 40; ++k) {
    term = term * x / static_cast<double>(k);
    result += term;
    if (one_norm(term) <= 1e-18 * one_norm(result)) break;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

/// Integer power by repeated squaring.
inline Matrix matrix_power(const Matrix& a, long long t) {
  require_square(a, "matrix_power");
  if (t < 0) throw Error(Errc::domain, "matrix_power: negative exponent");
  Matrix result = Matrix::Identity(a.rows(), a.cols());
  Matrix base = a;
  while (t > 0) {
    if (t & 1) result = result * base;
    t >>= 1;
    if (t > 0) base = base * base;
  }
  return result;
}

struct ValueClass {
  double value = 0.0;                 // mean of members
  std::vector<std::size_t> members;   // indices into the input sequence

  std::size_t multiplicity() const { return members.size(); }
};

/// Groups values whose sorted neighbours differ by at most tol (transitively).
/// Classes come out in ascending order of value.
inline std::vector<ValueClass> group_values(std::span<const double> xs, double tol) {
  if (!(tol > 0.0)) throw Error(Errc::domain, "group_values: tolerance must be positive");
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return xs[i] < xs[j]; });

  std::vector<ValueClass> classes;
  double prev = 0.0;
  for (std::size_t idx : order) {
    if (classes.empty() || xs[idx] - prev > tol) classes.emplace_back();
    classes.back().members.push_back(idx);
    prev = xs[idx];
  }
  for (auto& c : classes) {
    double sum = 0.0;
    for (std::size_t i : c.members) sum += xs[i];
    c.value = sum / static_cast<double>(c.members.size());
  }
  return classes;
}

inline std::vector<ValueClass> group_values(const Vector& xs, double tol) {
  return group_values(std::span<const double>(xs.data(), static_cast<std::size_t>(xs.size())), tol);
}

/// Orthonormal columns of v selected by the members of a class.
inline Matrix class_columns(const Matrix& v, const ValueClass& c) {
  Matrix out(v.rows(), static_cast<Eigen::Index>(c.members.size()));
  for (std::size_t j = 0; j < c.members.size(); ++j) {
    out.col(static_cast<Eigen::Index>(j)) = v.col(static_cast<Eigen::Index>(c.members[j]));
  }
  return out;
}

inline Matrix to_real(const IntMatrix& a) { return a.cast<double>(); }

}  // namespace vfwalk

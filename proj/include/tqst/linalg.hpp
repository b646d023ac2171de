#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace tqst::linalg {

template <typename Derived>
using PlainMatrix = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Derived>
using RealScalar = typename Eigen::NumTraits<typename Derived::Scalar>::Real;

template <typename Derived>
using RealColumn = Eigen::Matrix<RealScalar<Derived>, Eigen::Dynamic, 1>;

/// Eigenvalues of the Hermitian part of `m`, ascending.
template <typename Derived>
RealColumn<Derived> hermitian_eigenvalues(const Eigen::MatrixBase<Derived>& m) {
  const PlainMatrix<Derived> h = (m + m.adjoint()) / RealScalar<Derived>(2);
  Eigen::SelfAdjointEigenSolver<PlainMatrix<Derived>> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

/// Principal square root of a PSD matrix. Eigenvalues below `floor` are clamped to zero.
template <typename Derived>
PlainMatrix<Derived> psd_sqrt(const Eigen::MatrixBase<Derived>& m, RealScalar<Derived> floor = 1e-12) {
  const PlainMatrix<Derived> h = (m + m.adjoint()) / RealScalar<Derived>(2);
  Eigen::SelfAdjointEigenSolver<PlainMatrix<Derived>> es(h);
  RealColumn<Derived> roots = es.eigenvalues();
  for (Eigen::Index k = 0; k < roots.size(); ++k) {
    roots(k) = roots(k) > floor ? std::sqrt(roots(k)) : RealScalar<Derived>(0);
  }
  return es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().adjoint();
}

/// Tr sqrt(sqrt(rho) sigma sqrt(rho)).
template <typename DerivedA, typename DerivedB>
RealScalar<DerivedA> root_fidelity(const Eigen::MatrixBase<DerivedA>& rho, const Eigen::MatrixBase<DerivedB>& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw std::invalid_argument("fidelity of matrices with different dimensions");
  }
  const PlainMatrix<DerivedA> root = psd_sqrt(rho);
  const PlainMatrix<DerivedA> inner = root * sigma * root;
  const RealColumn<DerivedA> eig = hermitian_eigenvalues(inner);
  RealScalar<DerivedA> acc(0);
  for (Eigen::Index k = 0; k < eig.size(); ++k) acc += std::sqrt(std::max(eig(k), RealScalar<DerivedA>(0)));
  return acc;
}

/// Half the trace norm of rho - sigma.
template <typename DerivedA, typename DerivedB>
RealScalar<DerivedA> trace_distance(const Eigen::MatrixBase<DerivedA>& rho, const Eigen::MatrixBase<DerivedB>& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw std::invalid_argument("trace distance of matrices with different dimensions");
  }
  return hermitian_eigenvalues(rho - sigma).cwiseAbs().sum() / RealScalar<DerivedA>(2);
}

template <typename Derived>
RealScalar<Derived> purity(const Eigen::MatrixBase<Derived>& rho) {
  return std::real((rho * rho).trace());
}

template <typename Derived>
int numerical_rank(const Eigen::MatrixBase<Derived>& rho, RealScalar<Derived> eigen_tolerance = 1e-8) {
  const RealColumn<Derived> eig = hermitian_eigenvalues(rho);
  return static_cast<int>((eig.array() > eigen_tolerance).count());
}

}  // namespace tqst::linalg

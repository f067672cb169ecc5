#pragma once

// Dense complex kernels shared by every other header: Hermitian
// eigendecomposition, Kronecker products and partial traces over a
// factorized index space.
//
// Index convention: a space H_0 ⊗ H_1 ⊗ ... ⊗ H_{n-1} is flattened with the
// first factor varying slowest, i = ((i_0·d_1 + i_1)·d_2 + i_2)..., which is
// also the order produced by kron(a, b).

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <string>
#include <vector>

#include "qpair/errors.hpp"

namespace qpair {

using Index = Eigen::Index;

template <typename Real>
using ComplexMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using ComplexVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

/// Default tolerances. Every routine that compares against one of these also
/// accepts an explicit override.
namespace tolerance {
inline constexpr double kHermitian = 1e-9;
inline constexpr double kTrace = 1e-9;
inline constexpr double kPositivity = 1e-9;
inline constexpr double kCompleteness = 1e-9;
inline constexpr double kNorm = 1e-10;
inline constexpr double kRankCutoff = 1e-12;
inline constexpr double kIdentity = 1e-10;
inline constexpr double kInequality = 1e-9;
inline constexpr double kRouteAgreement = 1e-8;
}  // namespace tolerance

/// Ordered list of tensor-factor dimensions describing a square matrix or a
/// state vector.
class FactorShape {
 public:
  FactorShape() = default;
  explicit FactorShape(std::vector<Index> dims) : dims_(std::move(dims)) {
    for (Index d : dims_) {
      if (d < 1) throw Error(ErrorKind::ShapeMismatch, "factor dimension must be >= 1");
    }
  }
  FactorShape(std::initializer_list<Index> dims) : FactorShape(std::vector<Index>(dims)) {}

  const std::vector<Index>& dims() const noexcept { return dims_; }
  std::size_t size() const noexcept { return dims_.size(); }
  Index operator[](std::size_t k) const { return dims_.at(k); }

  Index total() const {
    return std::accumulate(dims_.begin(), dims_.end(), Index{1}, std::multiplies<>());
  }

  /// Shape of the listed factors, in the order given.
  FactorShape select(const std::vector<std::size_t>& positions) const {
    std::vector<Index> out;
    out.reserve(positions.size());
    for (std::size_t p : positions) out.push_back(dims_.at(p));
    return FactorShape(std::move(out));
  }

  bool operator==(const FactorShape&) const = default;

 private:
  std::vector<Index> dims_;
};

namespace detail {

inline std::vector<Index> strides(const FactorShape& shape) {
  std::vector<Index> s(shape.size(), 1);
  for (std::size_t k = shape.size(); k-- > 1;) s[k - 1] = s[k] * shape[k];
  return s;
}

// Global offsets of every multi-index over `positions` (first position
// slowest), with all other factor indices held at zero.
inline std::vector<Index> offsets(const FactorShape& shape,
                                  const std::vector<std::size_t>& positions) {
  const auto stride = strides(shape);
  std::vector<Index> out{0};
  for (std::size_t p : positions) {
    std::vector<Index> next;
    next.reserve(out.size() * static_cast<std::size_t>(shape[p]));
    for (Index base : out) {
      for (Index i = 0; i < shape[p]; ++i) next.push_back(base + i * stride[p]);
    }
    out = std::move(next);
  }
  return out;
}

inline std::vector<std::size_t> normalize_keep(const FactorShape& shape,
                                               std::vector<std::size_t> keep) {
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  if (!keep.empty() && keep.back() >= shape.size()) {
    throw Error(ErrorKind::ShapeMismatch,
                "factor position " + std::to_string(keep.back()) + " out of range");
  }
  return keep;
}

inline std::vector<std::size_t> complement(std::size_t n, const std::vector<std::size_t>& keep) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < n; ++k) {
    if (!std::binary_search(keep.begin(), keep.end(), k)) out.push_back(k);
  }
  return out;
}

}  // namespace detail

/// Largest entry of |m - m*|.
template <typename Derived>
typename Derived::RealScalar hermitian_defect(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// Largest entrywise modulus of a - b. Shapes must agree.
template <typename DA, typename DB>
typename DA::RealScalar max_abs_diff(const Eigen::MatrixBase<DA>& a,
                                     const Eigen::MatrixBase<DB>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::ShapeMismatch, "cannot compare matrices of different shapes");
  }
  if (a.size() == 0) return 0;
  return (a - b).cwiseAbs().maxCoeff();
}

template <typename Real>
struct EigenDecomposition {
  RealVector<Real> values;       // descending
  ComplexMatrix<Real> vectors;  // column k pairs with values[k]
};

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
/// Inside a degenerate eigenspace any orthonormal basis may be returned.
template <typename Real>
EigenDecomposition<Real> hermitian_eig(const ComplexMatrix<Real>& m,
                                       Real tol = Real(tolerance::kHermitian)) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::NotSquare, std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  const Real defect = hermitian_defect(m);
  if (!(defect <= tol)) {
    throw Error(ErrorKind::NotHermitian, "asymmetry " + std::to_string(defect));
  }
  const Index n = m.rows();
  EigenDecomposition<Real> out;
  if (n == 0) return out;
  const ComplexMatrix<Real> sym = (m + m.adjoint()) / Real(2);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix<Real>> solver(sym);
  // Eigen returns ascending order.
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

/// Eigenvalues (descending) of the Hermitian part (m + m*)/2.
template <typename Real>
RealVector<Real> hermitian_eigenvalues(const ComplexMatrix<Real>& m) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::NotSquare, "eigenvalues of non-square matrix");
  if (m.rows() == 0) return {};
  const ComplexMatrix<Real> sym = (m + m.adjoint()) / Real(2);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix<Real>> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().reverse();
}

/// Kronecker product; the left factor varies slowest.
template <typename DA, typename DB>
Eigen::Matrix<typename DA::Scalar, Eigen::Dynamic, Eigen::Dynamic> kron(
    const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  Eigen::Matrix<typename DA::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(),
                                                                         a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Reduced matrix on the factors listed in `keep`, in their original relative
/// order. An empty `keep` yields the 1x1 matrix [Tr x].
template <typename Real>
ComplexMatrix<Real> partial_trace(const ComplexMatrix<Real>& x, const FactorShape& shape,
                                  std::vector<std::size_t> keep) {
  if (x.rows() != x.cols() || x.rows() != shape.total()) {
    throw Error(ErrorKind::ShapeMismatch, "matrix " + std::to_string(x.rows()) + "x" +
                                              std::to_string(x.cols()) +
                                              " does not match factor shape of size " +
                                              std::to_string(shape.total()));
  }
  keep = detail::normalize_keep(shape, std::move(keep));
  if (keep.size() == shape.size()) return x;

  const auto kept = detail::offsets(shape, keep);
  const auto traced = detail::offsets(shape, detail::complement(shape.size(), keep));
  const Index n = static_cast<Index>(kept.size());
  ComplexMatrix<Real> out = ComplexMatrix<Real>::Zero(n, n);
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) {
      std::complex<Real> acc{0};
      for (Index t : traced) acc += x(kept[a] + t, kept[b] + t);
      out(a, b) = acc;
    }
  }
  return out;
}

/// Tr_rest |psi><psi| without forming the full projector: the amplitudes are
/// reshaped to a (kept x traced) matrix M and M M* is returned.
template <typename Real>
ComplexMatrix<Real> reduce_pure(const ComplexVector<Real>& psi, const FactorShape& shape,
                                std::vector<std::size_t> keep) {
  if (psi.size() != shape.total()) {
    throw Error(ErrorKind::ShapeMismatch, "vector length " + std::to_string(psi.size()) +
                                              " does not match factor shape of size " +
                                              std::to_string(shape.total()));
  }
  keep = detail::normalize_keep(shape, std::move(keep));
  const auto kept = detail::offsets(shape, keep);
  const auto traced = detail::offsets(shape, detail::complement(shape.size(), keep));
  ComplexMatrix<Real> m(static_cast<Index>(kept.size()), static_cast<Index>(traced.size()));
  for (std::size_t a = 0; a < kept.size(); ++a) {
    for (std::size_t t = 0; t < traced.size(); ++t) {
      m(static_cast<Index>(a), static_cast<Index>(t)) = psi(kept[a] + traced[t]);
    }
  }
  return m * m.adjoint();
}

}  // namespace qpair

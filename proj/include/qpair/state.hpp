#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "qpair/matrix_core.hpp"

namespace qpair {

/// Pseudorandom engine used for every sampled object. Streams are
/// reproducible per seed on one build; gaussians come from
/// std::normal_distribution.
using Rng = std::mt19937_64;

/// Eigenpairs of a density matrix with eigenvalues above the rank cutoff,
/// renormalized to sum to one.
template <typename Real>
struct SpectralDecomposition {
  RealVector<Real> eigenvalues;       // descending, each > rank cutoff
  ComplexMatrix<Real> eigenvectors;  // dim x rank, orthonormal columns

  Index rank() const noexcept { return eigenvalues.size(); }
};

template <typename Real>
class DensityMatrix;

template <typename Real>
DensityMatrix<Real> density_from_matrix(const ComplexMatrix<Real>& raw,
                                        Real tol = Real(tolerance::kTrace));
template <typename Real>
DensityMatrix<Real> density_from_spectral(const RealVector<Real>& values,
                                          const ComplexMatrix<Real>& vectors,
                                          Real tol = Real(tolerance::kTrace));

/// Hermitian, positive semidefinite, unit-trace matrix together with its
/// cached spectral decomposition. Only constructible through the validating
/// factories below.
template <typename Real = double>
class DensityMatrix {
 public:
  Index dim() const noexcept { return matrix_.rows(); }
  const ComplexMatrix<Real>& matrix() const noexcept { return matrix_; }
  const SpectralDecomposition<Real>& spectral() const noexcept { return spectral_; }
  Index rank() const noexcept { return spectral_.rank(); }

 private:
  DensityMatrix(ComplexMatrix<Real> m, SpectralDecomposition<Real> s)
      : matrix_(std::move(m)), spectral_(std::move(s)) {}

  friend DensityMatrix density_from_matrix<Real>(const ComplexMatrix<Real>&, Real);
  friend DensityMatrix density_from_spectral<Real>(const RealVector<Real>&,
                                                   const ComplexMatrix<Real>&, Real);

  ComplexMatrix<Real> matrix_;
  SpectralDecomposition<Real> spectral_;
};

namespace detail {

template <typename Real>
SpectralDecomposition<Real> truncate_spectrum(const RealVector<Real>& values,
                                              const ComplexMatrix<Real>& vectors) {
  std::vector<Index> keep;
  for (Index k = 0; k < values.size(); ++k) {
    if (values(k) > Real(tolerance::kRankCutoff)) keep.push_back(k);
  }
  SpectralDecomposition<Real> s;
  s.eigenvalues.resize(static_cast<Index>(keep.size()));
  s.eigenvectors.resize(vectors.rows(), static_cast<Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) {
    s.eigenvalues(static_cast<Index>(i)) = values(keep[i]);
    s.eigenvectors.col(static_cast<Index>(i)) = vectors.col(keep[i]);
  }
  s.eigenvalues /= s.eigenvalues.sum();
  return s;
}

template <typename Real>
void require_finite(const ComplexMatrix<Real>& m) {
  if (!m.allFinite()) throw Error(ErrorKind::BadParam, "matrix has non-finite entries");
}

}  // namespace detail

/// Validates `raw` as a quantum state. The stored matrix is the Hermitian part
/// divided by its trace; eigenvalues in [-tol, cutoff] are dropped from the
/// spectral cache.
template <typename Real>
DensityMatrix<Real> density_from_matrix(const ComplexMatrix<Real>& raw, Real tol) {
  detail::require_finite(raw);
  auto eig = hermitian_eig<Real>(raw, tol);
  const Real trace = eig.values.sum();
  if (raw.rows() == 0 || !(std::abs(trace - Real(1)) <= tol)) {
    throw Error(ErrorKind::TraceNotOne, "trace " + std::to_string(trace));
  }
  const Real smallest = eig.values(eig.values.size() - 1);
  if (smallest < -tol) {
    throw Error(ErrorKind::NotPositive, "eigenvalue " + std::to_string(smallest));
  }
  ComplexMatrix<Real> m = (raw + raw.adjoint()) / (Real(2) * trace);
  return DensityMatrix<Real>(std::move(m), detail::truncate_spectrum(eig.values, eig.vectors));
}

/// Builds ρ = Σ λ_k |v_k><v_k| from caller-supplied eigenpairs. The pairs are
/// stably sorted by descending eigenvalue, so the caller's basis choice inside
/// degenerate eigenspaces is kept verbatim in the spectral cache.
template <typename Real>
DensityMatrix<Real> density_from_spectral(const RealVector<Real>& values,
                                          const ComplexMatrix<Real>& vectors, Real tol) {
  if (vectors.cols() != values.size() || vectors.rows() < vectors.cols()) {
    throw Error(ErrorKind::ShapeMismatch, "eigenvector matrix does not match eigenvalue count");
  }
  const Index n = values.size();
  const ComplexMatrix<Real> gram = vectors.adjoint() * vectors;
  if (max_abs_diff(gram, ComplexMatrix<Real>::Identity(n, n)) > tol) {
    throw Error(ErrorKind::BadParam, "eigenvectors are not orthonormal");
  }
  if (n > 0 && values.minCoeff() < -tol) {
    throw Error(ErrorKind::NotPositive, "eigenvalue " + std::to_string(values.minCoeff()));
  }
  if (!(std::abs(values.sum() - Real(1)) <= tol)) {
    throw Error(ErrorKind::TraceNotOne, "eigenvalue sum " + std::to_string(values.sum()));
  }
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return values(a) > values(b); });
  RealVector<Real> sorted_values(n);
  ComplexMatrix<Real> sorted_vectors(vectors.rows(), n);
  for (Index k = 0; k < n; ++k) {
    sorted_values(k) = values(order[static_cast<std::size_t>(k)]);
    sorted_vectors.col(k) = vectors.col(order[static_cast<std::size_t>(k)]);
  }
  ComplexMatrix<Real> m = sorted_vectors * sorted_values.template cast<std::complex<Real>>()
                                               .asDiagonal() *
                          sorted_vectors.adjoint();
  m /= sorted_values.sum();
  return DensityMatrix<Real>(std::move(m),
                             detail::truncate_spectrum(sorted_values, sorted_vectors));
}

/// Matrix with independent standard complex gaussian entries.
template <typename Real = double>
ComplexMatrix<Real> random_gaussian(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<Real> normal(Real(0), Real(1));
  ComplexMatrix<Real> g(rows, cols);
  // Column-major fill keeps the stream order independent of Eigen internals.
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const Real re = normal(rng);
      const Real im = normal(rng);
      g(i, j) = {re, im};
    }
  }
  return g;
}

/// ρ = GG*/Tr(GG*) with G a dim x rank complex gaussian matrix.
template <typename Real = double>
DensityMatrix<Real> random_state(Index dim, Rng& rng, Index rank = 0) {
  if (dim < 1) throw Error(ErrorKind::BadParam, "state dimension must be >= 1");
  if (rank <= 0) rank = dim;
  if (rank > dim) throw Error(ErrorKind::BadParam, "rank exceeds dimension");
  const ComplexMatrix<Real> g = random_gaussian<Real>(dim, rank, rng);
  ComplexMatrix<Real> w = g * g.adjoint();
  w /= w.trace().real();
  return density_from_matrix<Real>(w);
}

template <typename Real = double>
DensityMatrix<Real> random_state(Index dim, std::uint64_t seed, Index rank = 0) {
  Rng rng(seed);
  return random_state<Real>(dim, rng, rank);
}

/// Haar-distributed unitary: QR of a gaussian matrix with the phases of R's
/// diagonal absorbed into Q.
template <typename Real = double>
ComplexMatrix<Real> random_unitary(Index n, Rng& rng) {
  const ComplexMatrix<Real> g = random_gaussian<Real>(n, n, rng);
  Eigen::HouseholderQR<ComplexMatrix<Real>> qr(g);
  ComplexMatrix<Real> q = qr.householderQ();
  const ComplexMatrix<Real> r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (Index k = 0; k < n; ++k) {
    const auto d = r(k, k);
    if (std::abs(d) > Real(0)) q.col(k) *= d / std::abs(d);
  }
  return q;
}

}  // namespace qpair

#pragma once

// Input transformations for the invariance properties: they change the
// representation of a state or channel but not the object itself.

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "qpair/channel.hpp"
#include "qpair/state.hpp"

namespace qpair::support {

using Matrix = ComplexMatrix<double>;
using Channel = KrausChannel<double>;
using State = DensityMatrix<double>;

/// A'_β = Σ_α U_βα A_α
inline Channel remix(const Channel& phi, const Matrix& u) {
  std::vector<Matrix> ops;
  for (Index b = 0; b < u.rows(); ++b) {
    Matrix acc = Matrix::Zero(phi.dim_out(), phi.dim_in());
    for (Index a = 0; a < phi.n_kraus(); ++a) acc += u(b, a) * phi[a];
    ops.push_back(std::move(acc));
  }
  return Channel(std::move(ops));
}

inline Channel pad_zero(const Channel& phi, int extra = 1) {
  auto ops = phi.kraus();
  for (int k = 0; k < extra; ++k) ops.push_back(Matrix::Zero(phi.dim_out(), phi.dim_in()));
  return Channel(std::move(ops));
}

/// Random state whose spectrum has repeated eigenvalues (so its eigenbasis is
/// not unique).
inline State degenerate_state(Index d, Rng& rng) {
  std::uniform_int_distribution<Index> distinct_count(1, d);
  const Index k = distinct_count(rng);
  std::uniform_real_distribution<double> level(0.05, 1.0);
  std::vector<double> levels(static_cast<std::size_t>(k));
  for (auto& l : levels) l = level(rng);
  RealVector<double> values(d);
  std::uniform_int_distribution<std::size_t> pick(0, levels.size() - 1);
  for (Index i = 0; i < d; ++i) values(i) = levels[pick(rng)];
  values /= values.sum();
  return density_from_spectral<double>(values, random_unitary<double>(d, rng));
}

/// Same matrix, different eigenvector choice: pairs are shuffled, and each
/// block of equal eigenvalues is rotated by a random unitary (which also
/// randomizes the phases of nondegenerate vectors).
inline State rebasis(const State& rho, Rng& rng) {
  const auto& s = rho.spectral();
  const Index r = s.rank();
  Matrix vectors = s.eigenvectors;
  Index start = 0;
  while (start < r) {
    Index end = start + 1;
    while (end < r && std::abs(s.eigenvalues(end) - s.eigenvalues(start)) < 1e-12) ++end;
    const Index m = end - start;
    vectors.middleCols(start, m) = (s.eigenvectors.middleCols(start, m) * random_unitary<double>(m, rng)).eval();
    start = end;
  }
  std::vector<Index> order(static_cast<std::size_t>(r));
  std::iota(order.begin(), order.end(), Index{0});
  std::shuffle(order.begin(), order.end(), rng);
  RealVector<double> values(r);
  Matrix shuffled(vectors.rows(), r);
  for (Index k = 0; k < r; ++k) {
    values(k) = s.eigenvalues(order[static_cast<std::size_t>(k)]);
    shuffled.col(k) = vectors.col(order[static_cast<std::size_t>(k)]);
  }
  return density_from_spectral<double>(values, shuffled);
}

}  // namespace qpair::support

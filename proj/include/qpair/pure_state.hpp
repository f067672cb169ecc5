#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qpair/matrix_core.hpp"
#include "qpair/state.hpp"

namespace qpair {

/// Pure state on a tensor product of named factors. Amplitudes are flattened
/// with the first label slowest.
template <typename Real = double>
class LabeledPureState {
 public:
  /// Throws NotNormalized when | ‖ψ‖ − 1 | exceeds `norm_tol`.
  LabeledPureState(std::vector<std::string> labels, FactorShape shape, ComplexVector<Real> amplitudes,
                   Real norm_tol = Real(tolerance::kNorm))
      : LabeledPureState(NoNormCheck{}, std::move(labels), std::move(shape), std::move(amplitudes)) {
    const Real n = amplitudes_.norm();
    if (!(std::abs(n - Real(1)) <= norm_tol)) {
      throw Error(ErrorKind::NotNormalized, "state norm " + std::to_string(n));
    }
  }

  /// No norm check; used when an unchecked channel feeds the construction.
  static LabeledPureState unnormalized(std::vector<std::string> labels, FactorShape shape,
                                       ComplexVector<Real> amplitudes) {
    return LabeledPureState(NoNormCheck{}, std::move(labels), std::move(shape), std::move(amplitudes));
  }

  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const FactorShape& shape() const noexcept { return shape_; }
  const ComplexVector<Real>& amplitudes() const noexcept { return amplitudes_; }
  Real norm() const { return amplitudes_.norm(); }

  Index dim(const std::string& label) const { return shape_[position(label)]; }

  std::size_t position(const std::string& label) const {
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw Error(ErrorKind::UnknownLabel, "no factor labelled '" + label + "'");
    return static_cast<std::size_t>(it - labels_.begin());
  }

  /// Factor positions of `keep`, ascending, duplicates removed.
  std::vector<std::size_t> positions(const std::vector<std::string>& keep) const {
    std::vector<std::size_t> out;
    for (const auto& l : keep) out.push_back(position(l));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  /// |ψ><ψ|
  ComplexMatrix<Real> projector() const { return amplitudes_ * amplitudes_.adjoint(); }

 private:
  struct NoNormCheck {};

  LabeledPureState(NoNormCheck, std::vector<std::string> labels, FactorShape shape,
                   ComplexVector<Real> amplitudes)
      : labels_(std::move(labels)), shape_(std::move(shape)), amplitudes_(std::move(amplitudes)) {
    if (labels_.size() != shape_.size()) {
      throw Error(ErrorKind::ShapeMismatch, "label count differs from factor count");
    }
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      for (std::size_t j = i + 1; j < labels_.size(); ++j) {
        if (labels_[i] == labels_[j]) throw Error(ErrorKind::WrongLabels, "duplicate label " + labels_[i]);
      }
    }
    if (amplitudes_.size() != shape_.total()) {
      throw Error(ErrorKind::ShapeMismatch, "amplitude count differs from product of dims");
    }
  }

  std::vector<std::string> labels_;
  FactorShape shape_;
  ComplexVector<Real> amplitudes_;
};

/// Reduced state of a labeled pure state on a subset of its factors.
template <typename Real = double>
struct MarginalState {
  std::vector<std::string> labels;  // original relative order
  FactorShape shape;
  DensityMatrix<Real> state;
};

/// Tr over the factors not in `keep`, as a raw matrix (no validation). The
/// kept factors appear in the state's own order regardless of the order of
/// `keep`.
template <typename Real>
ComplexMatrix<Real> reduced_matrix(const LabeledPureState<Real>& omega,
                                   const std::vector<std::string>& keep) {
  return reduce_pure<Real>(omega.amplitudes(), omega.shape(), omega.positions(keep));
}

template <typename Real>
MarginalState<Real> marginal(const LabeledPureState<Real>& omega, const std::vector<std::string>& keep) {
  if (keep.empty()) throw Error(ErrorKind::UnknownLabel, "marginal needs at least one label");
  const auto pos = omega.positions(keep);
  std::vector<std::string> labels;
  for (std::size_t p : pos) labels.push_back(omega.labels()[p]);
  return MarginalState<Real>{std::move(labels), omega.shape().select(pos),
                             density_from_matrix<Real>(reduce_pure<Real>(omega.amplitudes(),
                                                                         omega.shape(), pos))};
}

/// |ψ_ρ> = Σ_j √λ_j |j>_R ⊗ |e_j>_S with R of dimension rank(ρ).
template <typename Real>
LabeledPureState<Real> purify_state(const DensityMatrix<Real>& rho) {
  const auto& s = rho.spectral();
  const Index rank = s.rank();
  const Index d = rho.dim();
  ComplexVector<Real> psi(rank * d);
  for (Index j = 0; j < rank; ++j) {
    psi.segment(j * d, d) = std::sqrt(s.eigenvalues(j)) * s.eigenvectors.col(j);
  }
  return LabeledPureState<Real>({"R", "S"}, FactorShape{rank, d}, std::move(psi));
}

}  // namespace qpair

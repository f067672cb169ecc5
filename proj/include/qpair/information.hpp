#pragma once

// Entropies in bits and the information quantities of a (state, channel)
// pair. All three entropies of a pair are read off the marginals of its joint
// purification: H(ρ) = H(Ω_R), H(Φ[ρ]) = H(Ω_Q), H(ρ,Φ) = H(Ω_E).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>

#include "qpair/channel.hpp"
#include "qpair/matrix_core.hpp"
#include "qpair/pure_state.hpp"
#include "qpair/purification.hpp"
#include "qpair/state.hpp"

namespace qpair {

/// −Σ λ log₂ λ over the entries above the rank cutoff.
template <typename Real>
Real entropy_bits(const RealVector<Real>& eigenvalues) {
  Real h = 0;
  for (Index k = 0; k < eigenvalues.size(); ++k) {
    const Real l = eigenvalues(k);
    if (l > Real(tolerance::kRankCutoff)) h -= l * std::log2(l);
  }
  // An eigenvalue of 1 + ε contributes −ε; the entropy itself is never negative.
  return std::max(h, Real(0));
}

/// Entropy of an unvalidated (positive, roughly unit-trace) matrix, e.g. a
/// marginal fresh out of a partial trace.
template <typename Real>
Real matrix_entropy(const ComplexMatrix<Real>& m) {
  return entropy_bits<Real>(hermitian_eigenvalues<Real>(m));
}

template <typename Real>
Real von_neumann_entropy(const DensityMatrix<Real>& rho) {
  return entropy_bits<Real>(rho.spectral().eigenvalues);
}

template <typename Real = double>
struct InfoReport {
  Real h_in = 0;        // H(ρ)
  Real h_out = 0;       // H(Φ[ρ])
  Real h_exchange = 0;  // H(ρ,Φ)
  Real mutual = 0;      // h_in + h_out − h_exchange
  Real coherent = 0;    // h_out − h_exchange
  Index d_in = 0;
  Index d_out = 0;
  Index n_kraus = 0;
  std::optional<std::uint64_t> seed;
};

template <typename Real>
InfoReport<Real> info_report(const DensityMatrix<Real>& rho, const KrausChannel<Real>& phi,
                             std::optional<std::uint64_t> seed = std::nullopt) {
  const auto omega = purify_pair(rho, phi);
  InfoReport<Real> r;
  r.h_in = matrix_entropy<Real>(reduced_matrix(omega, {"R"}));
  r.h_out = matrix_entropy<Real>(reduced_matrix(omega, {"Q"}));
  r.h_exchange = matrix_entropy<Real>(reduced_matrix(omega, {"E"}));
  r.mutual = r.h_in + r.h_out - r.h_exchange;
  r.coherent = r.h_out - r.h_exchange;
  r.d_in = phi.dim_in();
  r.d_out = phi.dim_out();
  r.n_kraus = phi.n_kraus();
  r.seed = seed;
  return r;
}

/// H(Ω_E) of the pair purification.
template <typename Real>
Real entropy_exchange(const DensityMatrix<Real>& rho, const KrausChannel<Real>& phi) {
  return matrix_entropy<Real>(reduced_matrix(purify_pair(rho, phi), {"E"}));
}

template <typename Real>
Real mutual_information(const DensityMatrix<Real>& rho, const KrausChannel<Real>& phi) {
  return info_report(rho, phi).mutual;
}

template <typename Real>
Real coherent_information(const DensityMatrix<Real>& rho, const KrausChannel<Real>& phi) {
  return info_report(rho, phi).coherent;
}

}  // namespace qpair

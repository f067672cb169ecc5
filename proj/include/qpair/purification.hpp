#pragma once

// Joint purification of a state and a channel.
//
// For ρ = Σ_j λ_j |e_j><e_j| and Φ with Kraus operators A_α the vector
//
//   |ψ_(ρ,Φ)> = Σ_{j,α} √λ_j |j>_R ⊗ A_α|e_j>_Q ⊗ |α>_E
//
// is a unit vector on R ⊗ Q ⊗ E (dims rank ρ, d_out, N). Its marginals carry
// the input spectrum (R), the output state Φ[ρ] (Q) and the entropy exchange
// (E). The composed variant splits E into E1 ⊗ E2 for Φ₂∘Φ₁, the product
// variant splits both Q and E for Φ₁⊗Φ₂.

#include <cmath>
#include <string>
#include <vector>

#include "qpair/channel.hpp"
#include "qpair/matrix_core.hpp"
#include "qpair/pure_state.hpp"
#include "qpair/state.hpp"

namespace qpair {

namespace detail {

template <typename Real>
LabeledPureState<Real> make_purification(std::vector<std::string> labels, FactorShape shape,
                                         ComplexVector<Real> psi, bool validated) {
  if (validated) return LabeledPureState<Real>(std::move(labels), std::move(shape), std::move(psi));
  return LabeledPureState<Real>::unnormalized(std::move(labels), std::move(shape), std::move(psi));
}

template <typename Real>
void require_input_dim(const DensityMatrix<Real>& rho, const KrausChannel<Real>& phi) {
  if (rho.dim() != phi.dim_in()) {
    throw Error(ErrorKind::DimMismatch, "state dimension " + std::to_string(rho.dim()) +
                                            " vs channel input " + std::to_string(phi.dim_in()));
  }
}

}  // namespace detail

/// Factors (R, Q, E); amplitude at (j, q, α) is √λ_j ⟨q|A_α|e_j⟩.
template <typename Real>
LabeledPureState<Real> purify_pair(const DensityMatrix<Real>& rho, const KrausChannel<Real>& phi) {
  detail::require_input_dim(rho, phi);
  const auto& s = rho.spectral();
  const Index rank = s.rank(), dout = phi.dim_out(), n = phi.n_kraus();
  ComplexVector<Real> psi(rank * dout * n);
  for (Index j = 0; j < rank; ++j) {
    const ComplexVector<Real> e = std::sqrt(s.eigenvalues(j)) * s.eigenvectors.col(j);
    for (Index alpha = 0; alpha < n; ++alpha) {
      const ComplexVector<Real> v = phi[alpha] * e;
      for (Index q = 0; q < dout; ++q) psi((j * dout + q) * n + alpha) = v(q);
    }
  }
  return detail::make_purification<Real>({"R", "Q", "E"}, FactorShape{rank, dout, n}, std::move(psi),
                                         phi.validated());
}

/// Factors (R, Q2, E1, E2) for Φ₂∘Φ₁; amplitude at (j, q, α, μ) is
/// √λ_j ⟨q|B_μ A_α|e_j⟩.
template <typename Real>
LabeledPureState<Real> purify_pair_composed(const DensityMatrix<Real>& rho,
                                            const KrausChannel<Real>& phi1,
                                            const KrausChannel<Real>& phi2) {
  detail::require_input_dim(rho, phi1);
  if (phi1.dim_out() != phi2.dim_in()) {
    throw Error(ErrorKind::DimMismatch, "first channel outputs dimension " +
                                            std::to_string(phi1.dim_out()) +
                                            ", second expects " + std::to_string(phi2.dim_in()));
  }
  const auto& s = rho.spectral();
  const Index rank = s.rank(), dout = phi2.dim_out(), n1 = phi1.n_kraus(), n2 = phi2.n_kraus();
  ComplexVector<Real> psi(rank * dout * n1 * n2);
  for (Index j = 0; j < rank; ++j) {
    const ComplexVector<Real> e = std::sqrt(s.eigenvalues(j)) * s.eigenvectors.col(j);
    for (Index alpha = 0; alpha < n1; ++alpha) {
      const ComplexVector<Real> mid = phi1[alpha] * e;
      for (Index mu = 0; mu < n2; ++mu) {
        const ComplexVector<Real> v = phi2[mu] * mid;
        for (Index q = 0; q < dout; ++q) psi(((j * dout + q) * n1 + alpha) * n2 + mu) = v(q);
      }
    }
  }
  return detail::make_purification<Real>({"R", "Q2", "E1", "E2"}, FactorShape{rank, dout, n1, n2},
                                         std::move(psi), phi1.validated() && phi2.validated());
}

/// Factors (R, Q1, Q2, E1, E2) for the pair (ρ₁₂, Φ₁⊗Φ₂); amplitude at
/// (j, q₁, q₂, α, μ) is √λ_j ⟨q₁q₂|(A_α⊗B_μ)|e_j⟩.
template <typename Real>
LabeledPureState<Real> purify_pair_product(const DensityMatrix<Real>& rho12,
                                           const KrausChannel<Real>& phi1,
                                           const KrausChannel<Real>& phi2) {
  const Index d1 = phi1.dim_in(), d2 = phi2.dim_in();
  if (rho12.dim() != d1 * d2) {
    throw Error(ErrorKind::DimMismatch, "state dimension " + std::to_string(rho12.dim()) +
                                            " vs product input " + std::to_string(d1 * d2));
  }
  const auto& s = rho12.spectral();
  const Index rank = s.rank(), o1 = phi1.dim_out(), o2 = phi2.dim_out();
  const Index n1 = phi1.n_kraus(), n2 = phi2.n_kraus();
  ComplexVector<Real> psi(rank * o1 * o2 * n1 * n2);
  for (Index j = 0; j < rank; ++j) {
    // e_j reshaped to d1 x d2 so that (A⊗B)e_j becomes A E Bᵀ.
    ComplexMatrix<Real> e(d1, d2);
    for (Index i1 = 0; i1 < d1; ++i1) {
      for (Index i2 = 0; i2 < d2; ++i2) e(i1, i2) = s.eigenvectors(i1 * d2 + i2, j);
    }
    e *= std::sqrt(s.eigenvalues(j));
    for (Index alpha = 0; alpha < n1; ++alpha) {
      const ComplexMatrix<Real> left = phi1[alpha] * e;
      for (Index mu = 0; mu < n2; ++mu) {
        const ComplexMatrix<Real> v = left * phi2[mu].transpose();
        for (Index q1 = 0; q1 < o1; ++q1) {
          for (Index q2 = 0; q2 < o2; ++q2) {
            psi((((j * o1 + q1) * o2 + q2) * n1 + alpha) * n2 + mu) = v(q1, q2);
          }
        }
      }
    }
  }
  return detail::make_purification<Real>({"R", "Q1", "Q2", "E1", "E2"},
                                         FactorShape{rank, o1, o2, n1, n2}, std::move(psi),
                                         phi1.validated() && phi2.validated());
}

template <typename Real = double>
struct PartialStates {
  MarginalState<Real> reference;    // Ω_R
  MarginalState<Real> output;       // Ω_Q
  MarginalState<Real> environment;  // Ω_E
};

/// The three single-factor marginals of a (R, Q, E) purification.
template <typename Real>
PartialStates<Real> partial_states(const LabeledPureState<Real>& omega) {
  if (omega.labels() != std::vector<std::string>{"R", "Q", "E"}) {
    throw Error(ErrorKind::WrongLabels, "partial_states expects factors (R, Q, E)");
  }
  return {marginal(omega, {"R"}), marginal(omega, {"Q"}), marginal(omega, {"E"})};
}

/// (Id_R ⊗ Φ)[|ψ_ρ><ψ_ρ|] with |ψ_ρ> from purify_state; factor order (R, Q).
template <typename Real>
ComplexMatrix<Real> channel_on_purification(const DensityMatrix<Real>& rho,
                                            const KrausChannel<Real>& phi) {
  detail::require_input_dim(rho, phi);
  const auto psi = purify_state(rho);
  const auto id = named_channel<Real>(ChannelName::Identity, {}, {rho.rank()});
  return apply_to_matrix(tensor(id, phi), psi.projector());
}

/// Closed-form marginals written directly in terms of ρ's spectral data and
/// the Kraus operators. These never touch a purification vector and serve as
/// the independent side of every marginal identity check.
namespace closed_form {

/// Ω_R = diag(λ_j)
template <typename Real>
ComplexMatrix<Real> reference(const DensityMatrix<Real>& rho) {
  return rho.spectral().eigenvalues.template cast<std::complex<Real>>().asDiagonal();
}

/// Ω_Q = Φ[ρ]
template <typename Real>
ComplexMatrix<Real> output(const DensityMatrix<Real>& rho, const KrausChannel<Real>& phi) {
  return apply_to_matrix(phi, rho.matrix());
}

/// Ω_E = [Tr A_α ρ A_β*]
template <typename Real>
ComplexMatrix<Real> environment(const DensityMatrix<Real>& rho, const KrausChannel<Real>& phi) {
  detail::require_input_dim(rho, phi);
  const Index n = phi.n_kraus();
  ComplexMatrix<Real> out(n, n);
  for (Index a = 0; a < n; ++a) {
    const ComplexMatrix<Real> left = phi[a] * rho.matrix();
    for (Index b = 0; b < n; ++b) out(a, b) = (left * phi[b].adjoint()).trace();
  }
  return out;
}

namespace detail {

// [√(λ_j λ_k) <e_k| A_β* G A_α |e_j>] on R ⊗ E, row j·N + α.
template <typename Real>
ComplexMatrix<Real> reference_environment_with(const DensityMatrix<Real>& rho,
                                               const KrausChannel<Real>& phi,
                                               const ComplexMatrix<Real>& gram) {
  const auto& s = rho.spectral();
  const Index r = s.rank(), n = phi.n_kraus();
  ComplexMatrix<Real> out(r * n, r * n);
  for (Index j = 0; j < r; ++j) {
    for (Index k = 0; k < r; ++k) {
      const Real w = std::sqrt(s.eigenvalues(j) * s.eigenvalues(k));
      for (Index a = 0; a < n; ++a) {
        const ComplexVector<Real> right = gram * (phi[a] * s.eigenvectors.col(j));
        for (Index b = 0; b < n; ++b) {
          const ComplexVector<Real> left = phi[b] * s.eigenvectors.col(k);
          out(j * n + a, k * n + b) = w * left.dot(right);
        }
      }
    }
  }
  return out;
}

}  // namespace detail

/// Ω¹_{RE₁} = [√(λ_j λ_k) <e_k|A_β* A_α|e_j>]
template <typename Real>
ComplexMatrix<Real> reference_environment(const DensityMatrix<Real>& rho,
                                          const KrausChannel<Real>& phi1) {
  qpair::detail::require_input_dim(rho, phi1);
  const Index d = phi1.dim_out();
  return detail::reference_environment_with<Real>(rho, phi1, ComplexMatrix<Real>::Identity(d, d));
}

/// Ω¹²_{RE₁} = [√(λ_j λ_k) Σ_μ <e_k|A_β* B_μ* B_μ A_α|e_j>]
template <typename Real>
ComplexMatrix<Real> reference_environment_composed(const DensityMatrix<Real>& rho,
                                                   const KrausChannel<Real>& phi1,
                                                   const KrausChannel<Real>& phi2) {
  qpair::detail::require_input_dim(rho, phi1);
  if (phi1.dim_out() != phi2.dim_in()) throw Error(ErrorKind::DimMismatch, "channel chain mismatch");
  const Index d = phi2.dim_in();
  ComplexMatrix<Real> gram = ComplexMatrix<Real>::Zero(d, d);
  for (const auto& b : phi2.kraus()) gram.noalias() += b.adjoint() * b;
  return detail::reference_environment_with<Real>(rho, phi1, gram);
}

/// Ω_{QE} = [A_α ρ A_β*] on Q ⊗ E, row q·N + α.
template <typename Real>
ComplexMatrix<Real> output_environment(const ComplexMatrix<Real>& rho, const KrausChannel<Real>& phi) {
  if (rho.rows() != phi.dim_in()) throw Error(ErrorKind::DimMismatch, "state/channel dimension mismatch");
  const Index n = phi.n_kraus(), o = phi.dim_out();
  ComplexMatrix<Real> out(o * n, o * n);
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) {
      const ComplexMatrix<Real> block = phi[a] * rho * phi[b].adjoint();
      for (Index q = 0; q < o; ++q) {
        for (Index p = 0; p < o; ++p) out(q * n + a, p * n + b) = block(q, p);
      }
    }
  }
  return out;
}

/// Ω¹²_{Q₁E₁} = [Σ_μ Tr_Q₂ (A_α⊗B_μ) ρ₁₂ (A_β⊗B_μ)*] when `first` is true,
/// otherwise Ω¹²_{Q₂E₂} = [Σ_α Tr_Q₁ (A_α⊗B_μ) ρ₁₂ (A_α⊗B_ν)*].
template <typename Real>
ComplexMatrix<Real> product_output_environment(const ComplexMatrix<Real>& rho12,
                                               const KrausChannel<Real>& phi1,
                                               const KrausChannel<Real>& phi2, bool first) {
  if (rho12.rows() != phi1.dim_in() * phi2.dim_in()) {
    throw Error(ErrorKind::DimMismatch, "state/channel dimension mismatch");
  }
  const FactorShape out_shape{phi1.dim_out(), phi2.dim_out()};
  const auto& kept = first ? phi1 : phi2;
  const auto& summed = first ? phi2 : phi1;
  const Index n = kept.n_kraus(), o = kept.dim_out();
  ComplexMatrix<Real> out = ComplexMatrix<Real>::Zero(o * n, o * n);
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) {
      ComplexMatrix<Real> block = ComplexMatrix<Real>::Zero(o, o);
      for (const auto& c : summed.kraus()) {
        const ComplexMatrix<Real> ka = first ? kron(kept[a], c) : kron(c, kept[a]);
        const ComplexMatrix<Real> kb = first ? kron(kept[b], c) : kron(c, kept[b]);
        block += partial_trace<Real>(ka * rho12 * kb.adjoint(), out_shape, {first ? 0u : 1u});
      }
      for (Index q = 0; q < o; ++q) {
        for (Index p = 0; p < o; ++p) out(q * n + a, p * n + b) = block(q, p);
      }
    }
  }
  return out;
}

}  // namespace closed_form

}  // namespace qpair

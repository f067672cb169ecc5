#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qpair/matrix_core.hpp"
#include "qpair/state.hpp"

namespace qpair {

/// ‖Σ A*A − I‖_F for a list of equally shaped operators.
template <typename Real>
Real completeness_defect(const std::vector<ComplexMatrix<Real>>& ops) {
  if (ops.empty()) return Real(0);
  const Index n = ops.front().cols();
  ComplexMatrix<Real> sum = ComplexMatrix<Real>::Zero(n, n);
  for (const auto& a : ops) sum.noalias() += a.adjoint() * a;
  return (sum - ComplexMatrix<Real>::Identity(n, n)).norm();
}

/// Completely positive trace-preserving map σ ↦ Σ A_α σ A_α*, with
/// A_α : C^dim_in → C^dim_out.
template <typename Real = double>
class KrausChannel {
 public:
  /// Validating constructor; see channel_from_kraus.
  explicit KrausChannel(std::vector<ComplexMatrix<Real>> ops,
                        Real tol = Real(tolerance::kCompleteness))
      : KrausChannel(std::move(ops), true, tol) {}

  /// Skips the completeness check (shape checks still apply). Channels built
  /// this way report validated() == false and their purifications are not
  /// norm-checked. Intended for negative controls.
  static KrausChannel unchecked(std::vector<ComplexMatrix<Real>> ops) {
    return KrausChannel(std::move(ops), false, Real(0));
  }

  Index dim_in() const noexcept { return kraus_.front().cols(); }
  Index dim_out() const noexcept { return kraus_.front().rows(); }
  Index n_kraus() const noexcept { return static_cast<Index>(kraus_.size()); }
  const std::vector<ComplexMatrix<Real>>& kraus() const noexcept { return kraus_; }
  const ComplexMatrix<Real>& operator[](Index alpha) const {
    return kraus_.at(static_cast<std::size_t>(alpha));
  }
  bool validated() const noexcept { return validated_; }

 private:
  KrausChannel(std::vector<ComplexMatrix<Real>> ops, bool validate, Real tol)
      : kraus_(std::move(ops)), validated_(validate) {
    if (kraus_.empty()) throw Error(ErrorKind::EmptyKrausList, "channel needs at least one operator");
    const Index rows = kraus_.front().rows();
    const Index cols = kraus_.front().cols();
    if (rows < 1 || cols < 1) throw Error(ErrorKind::ShapeMismatch, "empty Kraus operator");
    for (const auto& a : kraus_) {
      if (a.rows() != rows || a.cols() != cols) {
        throw Error(ErrorKind::ShapeMismatch, "Kraus operators differ in shape");
      }
      detail::require_finite(a);
    }
    if (validate) {
      const Real defect = completeness_defect(kraus_);
      if (!(defect <= tol)) {
        throw Error(ErrorKind::NotTracePreserving,
                    "completeness defect ||sum A*A - I||_F = " + std::to_string(defect));
      }
    }
  }

  std::vector<ComplexMatrix<Real>> kraus_;
  bool validated_;
};

template <typename Real>
KrausChannel<Real> channel_from_kraus(std::vector<ComplexMatrix<Real>> ops,
                                      Real tol = Real(tolerance::kCompleteness)) {
  return KrausChannel<Real>(std::move(ops), tol);
}

/// Σ A σ A* on an arbitrary square matrix; no validation of the result.
template <typename Real>
ComplexMatrix<Real> apply_to_matrix(const KrausChannel<Real>& phi, const ComplexMatrix<Real>& sigma) {
  if (sigma.rows() != phi.dim_in() || sigma.cols() != phi.dim_in()) {
    throw Error(ErrorKind::DimMismatch, "channel input dimension " + std::to_string(phi.dim_in()) +
                                            " vs operand " + std::to_string(sigma.rows()));
  }
  ComplexMatrix<Real> out = ComplexMatrix<Real>::Zero(phi.dim_out(), phi.dim_out());
  for (const auto& a : phi.kraus()) out.noalias() += a * sigma * a.adjoint();
  return out;
}

template <typename Real>
DensityMatrix<Real> apply(const KrausChannel<Real>& phi, const DensityMatrix<Real>& sigma) {
  return density_from_matrix<Real>(apply_to_matrix(phi, sigma.matrix()));
}

/// Φ₂∘Φ₁ with Kraus family {B_μ A_α}; flat index α·N₂ + μ, the same layout
/// as the environment pair E₁ ⊗ E₂ of purify_pair_composed.
template <typename Real>
KrausChannel<Real> compose(const KrausChannel<Real>& phi2, const KrausChannel<Real>& phi1) {
  if (phi1.dim_out() != phi2.dim_in()) {
    throw Error(ErrorKind::DimMismatch, "first channel outputs dimension " +
                                            std::to_string(phi1.dim_out()) +
                                            ", second expects " + std::to_string(phi2.dim_in()));
  }
  std::vector<ComplexMatrix<Real>> ops;
  ops.reserve(phi1.kraus().size() * phi2.kraus().size());
  for (const auto& a : phi1.kraus()) {
    for (const auto& b : phi2.kraus()) ops.push_back(b * a);
  }
  if (phi1.validated() && phi2.validated()) return KrausChannel<Real>(std::move(ops));
  return KrausChannel<Real>::unchecked(std::move(ops));
}

/// Φ₁⊗Φ₂ with Kraus family {A_α ⊗ B_μ}; flat index α·N₂ + μ (μ fastest).
template <typename Real>
KrausChannel<Real> tensor(const KrausChannel<Real>& phi1, const KrausChannel<Real>& phi2) {
  std::vector<ComplexMatrix<Real>> ops;
  ops.reserve(phi1.kraus().size() * phi2.kraus().size());
  for (const auto& a : phi1.kraus()) {
    for (const auto& b : phi2.kraus()) ops.push_back(kron(a, b));
  }
  if (phi1.validated() && phi2.validated()) return KrausChannel<Real>(std::move(ops));
  return KrausChannel<Real>::unchecked(std::move(ops));
}

enum class ChannelName { Identity, Depolarizing, Dephasing, AmplitudeDamping, IsometryEmbed };

inline std::optional<ChannelName> channel_name_from_string(std::string_view s) {
  if (s == "identity") return ChannelName::Identity;
  if (s == "depolarizing") return ChannelName::Depolarizing;
  if (s == "dephasing") return ChannelName::Dephasing;
  if (s == "amplitude_damping") return ChannelName::AmplitudeDamping;
  if (s == "isometry_embed") return ChannelName::IsometryEmbed;
  return std::nullopt;
}

namespace detail {

template <typename Real>
ComplexMatrix<Real> shift_operator(Index d) {
  ComplexMatrix<Real> x = ComplexMatrix<Real>::Zero(d, d);
  for (Index k = 0; k < d; ++k) x((k + 1) % d, k) = 1;
  return x;
}

template <typename Real>
ComplexMatrix<Real> clock_operator(Index d) {
  ComplexMatrix<Real> z = ComplexMatrix<Real>::Zero(d, d);
  const Real two_pi = Real(2) * std::acos(Real(-1));
  for (Index k = 0; k < d; ++k) z(k, k) = std::polar(Real(1), two_pi * Real(k) / Real(d));
  return z;
}

template <typename Real>
void require_param_count(const std::vector<Real>& params, std::size_t n, const char* name) {
  if (params.size() != n) {
    throw Error(ErrorKind::BadParam, std::string(name) + " takes " + std::to_string(n) +
                                         " parameter(s), got " + std::to_string(params.size()));
  }
}

template <typename Real>
Real require_probability(Real p, const char* name) {
  if (!(p >= Real(0) && p <= Real(1))) {
    throw Error(ErrorKind::BadParam, std::string(name) + " parameter must lie in [0,1]");
  }
  return p;
}

inline Index single_dim(const std::vector<Index>& dims, const char* name) {
  if (dims.empty()) return 2;
  if (dims.size() != 1 || dims[0] < 1) {
    throw Error(ErrorKind::BadParam, std::string(name) + " takes one dimension >= 1");
  }
  return dims[0];
}

}  // namespace detail

/// Catalog of standard channels.
///
///   identity          params {}      dims {d}          {I}
///   depolarizing      params {p}     dims {d}          p = 1 is completely depolarizing;
///                                                      qubit Kraus {√(1−3p/4) I, √(p/4) X, Y, Z},
///                                                      d > 2 uses the Weyl operators X^a Z^b
///   dephasing         params {p}     dims {d}          {√(1−p) I, √p Z} (Z the clock operator)
///   amplitude_damping params {γ}     dims {2}          {diag(1, √(1−γ)), √γ |0><1|}
///   isometry_embed    params {}      dims {d_in,d_out} single Kraus [I; 0], d_out ≥ d_in
///
/// Empty dims default to a qubit (and to 2→3 for isometry_embed).
template <typename Real = double>
KrausChannel<Real> named_channel(ChannelName name, const std::vector<Real>& params = {},
                                 const std::vector<Index>& dims = {}) {
  using M = ComplexMatrix<Real>;
  switch (name) {
    case ChannelName::Identity: {
      detail::require_param_count(params, 0, "identity");
      const Index d = detail::single_dim(dims, "identity");
      return KrausChannel<Real>({M::Identity(d, d)});
    }
    case ChannelName::Depolarizing: {
      detail::require_param_count(params, 1, "depolarizing");
      const Real p = detail::require_probability(params[0], "depolarizing");
      const Index d = detail::single_dim(dims, "depolarizing");
      const Real d2 = Real(d * d);
      std::vector<M> ops;
      ops.push_back(std::sqrt(std::max(Real(0), Real(1) - p * (d2 - 1) / d2)) * M::Identity(d, d));
      const Real w = std::sqrt(p / d2);
      if (d == 2) {
        M x(2, 2), y(2, 2), z(2, 2);
        x << 0, 1, 1, 0;
        y << 0, std::complex<Real>(0, -1), std::complex<Real>(0, 1), 0;
        z << 1, 0, 0, -1;
        for (const M& pauli : {x, y, z}) ops.push_back(w * pauli);
      } else {
        const M shift = detail::shift_operator<Real>(d);
        const M clock = detail::clock_operator<Real>(d);
        M xa = M::Identity(d, d);
        for (Index a = 0; a < d; ++a) {
          M zb = M::Identity(d, d);
          for (Index b = 0; b < d; ++b) {
            if (a != 0 || b != 0) ops.push_back(w * xa * zb);
            zb = zb * clock;
          }
          xa = xa * shift;
        }
      }
      return KrausChannel<Real>(std::move(ops));
    }
    case ChannelName::Dephasing: {
      detail::require_param_count(params, 1, "dephasing");
      const Real p = detail::require_probability(params[0], "dephasing");
      const Index d = detail::single_dim(dims, "dephasing");
      if (d < 2) throw Error(ErrorKind::BadParam, "dephasing needs dimension >= 2");
      return KrausChannel<Real>({std::sqrt(Real(1) - p) * M::Identity(d, d),
                                 std::sqrt(p) * detail::clock_operator<Real>(d)});
    }
    case ChannelName::AmplitudeDamping: {
      detail::require_param_count(params, 1, "amplitude_damping");
      const Real gamma = detail::require_probability(params[0], "amplitude_damping");
      if (detail::single_dim(dims, "amplitude_damping") != 2) {
        throw Error(ErrorKind::BadParam, "amplitude_damping is a qubit channel");
      }
      M a0 = M::Zero(2, 2), a1 = M::Zero(2, 2);
      a0(0, 0) = 1;
      a0(1, 1) = std::sqrt(Real(1) - gamma);
      a1(0, 1) = std::sqrt(gamma);
      return KrausChannel<Real>({a0, a1});
    }
    case ChannelName::IsometryEmbed: {
      detail::require_param_count(params, 0, "isometry_embed");
      Index din = 2, dout = 3;
      if (!dims.empty()) {
        if (dims.size() != 2) throw Error(ErrorKind::BadParam, "isometry_embed takes dims {d_in, d_out}");
        din = dims[0];
        dout = dims[1];
      }
      if (din < 1 || dout < din) throw Error(ErrorKind::BadParam, "isometry_embed needs 1 <= d_in <= d_out");
      return KrausChannel<Real>({M::Identity(dout, din)});
    }
  }
  throw Error(ErrorKind::BadParam, "unknown channel");
}

/// Random channel from a Haar-like isometry V : C^dim_in → C^(n_kraus·dim_out),
/// obtained by orthonormalizing the columns of a gaussian matrix and slicing
/// it into n_kraus blocks of dim_out rows.
template <typename Real = double>
KrausChannel<Real> random_channel(Index dim_in, Index dim_out, Index n_kraus, Rng& rng) {
  if (dim_in < 1 || dim_out < 1 || n_kraus < 1 || n_kraus * dim_out < dim_in) {
    throw Error(ErrorKind::InfeasibleShape,
                "no isometry from dimension " + std::to_string(dim_in) + " into " +
                    std::to_string(n_kraus) + " x " + std::to_string(dim_out));
  }
  const Index rows = n_kraus * dim_out;
  const ComplexMatrix<Real> g = random_gaussian<Real>(rows, dim_in, rng);
  Eigen::HouseholderQR<ComplexMatrix<Real>> qr(g);
  const ComplexMatrix<Real> v = qr.householderQ() * ComplexMatrix<Real>::Identity(rows, dim_in);
  std::vector<ComplexMatrix<Real>> ops;
  ops.reserve(static_cast<std::size_t>(n_kraus));
  for (Index alpha = 0; alpha < n_kraus; ++alpha) {
    ops.push_back(v.middleRows(alpha * dim_out, dim_out));
  }
  return KrausChannel<Real>(std::move(ops));
}

template <typename Real = double>
KrausChannel<Real> random_channel(Index dim_in, Index dim_out, Index n_kraus, std::uint64_t seed) {
  Rng rng(seed);
  return random_channel<Real>(dim_in, dim_out, n_kraus, rng);
}

}  // namespace qpair

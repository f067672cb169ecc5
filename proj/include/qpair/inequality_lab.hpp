#pragma once

// Numerical checks of the data processing inequality, subadditivity of the
// channel mutual information and the marginal identities behind them, plus
// seeded randomized campaigns over all of these.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qpair/channel.hpp"
#include "qpair/matrix_core.hpp"
#include "qpair/state.hpp"

namespace qpair::lab {

using Matrix = ComplexMatrix<double>;
using State = DensityMatrix<double>;
using Channel = KrausChannel<double>;

enum class CheckKind {
  Inequality,  // passes when margin >= -tolerance
  Identity,    // passes when margin <= tolerance
};

/// Auxiliary deviation measured alongside a check (route agreement, entrywise
/// marginal equality). Passes when value <= tolerance.
struct SubCheck {
  std::string name;
  double value = 0;
  double tolerance = 0;
  bool passed = false;
};

struct CheckResult {
  std::string name;
  CheckKind kind = CheckKind::Inequality;
  bool passed = false;  // primary condition and every sub-check
  double lhs = 0;
  double rhs = 0;
  double margin = 0;  // rhs − lhs for inequalities, max deviation for identities
  double tolerance = 0;
  std::optional<std::uint64_t> seed;
  std::vector<SubCheck> sub_checks;
};

/// I_c(ρ, Φ₂∘Φ₁) ≤ I_c(ρ, Φ₁). Both sides are also recomputed from the
/// marginals of the composed and single purifications; the deviation between
/// the two routes is reported as sub-checks.
CheckResult check_dpi(const State& rho, const Channel& phi1, const Channel& phi2,
                      double tol = tolerance::kInequality,
                      double route_tol = tolerance::kRouteAgreement);

/// I(ρ₁₂, Φ₁⊗Φ₂) ≤ I(ρ₁, Φ₁) + I(ρ₂, Φ₂) with ρ₁, ρ₂ the marginals of ρ₁₂.
/// Sub-checks: Ω¹²_{Q₁E₁} = Ω¹_{Q₁E₁} and Ω¹²_{Q₂E₂} = Ω²_{Q₂E₂}, each
/// across the generic marginals and the closed-form block expressions.
CheckResult check_subadditivity(const State& rho12, const Channel& phi1, const Channel& phi2,
                                double tol = tolerance::kInequality,
                                double identity_tol = tolerance::kIdentity);

/// Ω¹_{RE₁} = Ω¹²_{RE₁}; margin is the largest entrywise deviation among the
/// two generic marginals and the two closed forms. Accepts unchecked channels
/// so that non-trace-preserving controls can be fed through it.
CheckResult check_marginal_consistency(const State& rho, const Channel& phi1, const Channel& phi2,
                                       double tol = tolerance::kIdentity);

/// H(Ω_E) = H(Ω_RQ) = H((Id⊗Φ)[|ψ_ρ><ψ_ρ|]), plus entrywise equality of Ω_RQ
/// with (Id⊗Φ)[|ψ_ρ><ψ_ρ|] as a sub-check.
CheckResult check_exchange_identity(const State& rho, const Channel& phi,
                                    double tol = tolerance::kInequality,
                                    double identity_tol = tolerance::kIdentity);

/// H(AB) + H(BC) ≥ H(ABC) + H(B) for a three-factor state.
CheckResult check_strong_subadditivity(const State& rho_abc, const FactorShape& shape,
                                       double tol = tolerance::kInequality);

enum class CheckName { Dpi, Subadd, Marginal, Exchange, Ssa };

std::string_view to_string(CheckName name);
std::optional<CheckName> check_name_from_string(std::string_view s);

struct CampaignConfig {
  std::size_t trials = 100;
  Index din_min = 2, din_max = 4;
  Index dout_min = 2, dout_max = 4;
  Index kraus_min = 1, kraus_max = 5;
  std::uint64_t seed = 0;
  double tolerance = tolerance::kInequality;
  double identity_tolerance = tolerance::kIdentity;
  unsigned threads = 1;
};

/// Throws InfeasibleShape or BadParam when the config cannot produce trials.
void validate(const CampaignConfig& config);

/// Seed of trial `index` of check `name`; every random object of that trial is
/// drawn from Rng(trial_seed(...)).
std::uint64_t trial_seed(std::uint64_t campaign_seed, CheckName name, std::size_t index);

/// One randomly drawn trial of `name`, fully determined by `seed`.
CheckResult run_trial(const CampaignConfig& config, CheckName name, std::uint64_t seed);

struct CheckSummary {
  CheckName name = CheckName::Dpi;
  std::size_t trials = 0;
  std::size_t passed = 0;
  double worst_margin = 0;  // min for inequalities, max for identities
  std::uint64_t worst_seed = 0;
  std::map<std::string, double> worst_sub_checks;  // max value per sub-check
  std::vector<std::uint64_t> failing_seeds;
  std::vector<std::string> errors;  // "seed: message" for trials that threw
};

struct CampaignReport {
  CampaignConfig config;
  std::vector<CheckSummary> checks;

  bool all_passed() const;
};

/// Runs `config.trials` trials of every listed check. Results do not depend on
/// `config.threads`.
CampaignReport run_campaign(const CampaignConfig& config, const std::vector<CheckName>& which);

}  // namespace qpair::lab

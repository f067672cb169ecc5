#include "qpair/inequality_lab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>
#include <variant>

#include "qpair/information.hpp"
#include "qpair/purification.hpp"

namespace qpair::lab {

namespace {

SubCheck deviation(std::string name, double value, double tol) {
  return SubCheck{std::move(name), value, tol, value <= tol};
}

void finalize(CheckResult& r) {
  const bool primary =
      r.kind == CheckKind::Inequality ? r.margin >= -r.tolerance : r.margin <= r.tolerance;
  r.passed = primary && std::all_of(r.sub_checks.begin(), r.sub_checks.end(),
                                    [](const SubCheck& s) { return s.passed; });
}

void require_chain(const State& rho, const Channel& phi1, const Channel& phi2) {
  if (rho.dim() != phi1.dim_in()) {
    throw Error(ErrorKind::DimMismatch, "state dimension " + std::to_string(rho.dim()) +
                                            " vs first channel input " +
                                            std::to_string(phi1.dim_in()));
  }
  if (phi1.dim_out() != phi2.dim_in()) {
    throw Error(ErrorKind::DimMismatch, "first channel outputs dimension " +
                                            std::to_string(phi1.dim_out()) +
                                            ", second expects " + std::to_string(phi2.dim_in()));
  }
}

double max_pairwise(std::initializer_list<std::pair<const Matrix*, const Matrix*>> pairs) {
  double worst = 0;
  for (const auto& [a, b] : pairs) worst = std::max(worst, max_abs_diff(*a, *b));
  return worst;
}

}  // namespace

CheckResult check_dpi(const State& rho, const Channel& phi1, const Channel& phi2, double tol,
                      double route_tol) {
  require_chain(rho, phi1, phi2);
  CheckResult r;
  r.name = "dpi";
  r.kind = CheckKind::Inequality;
  r.tolerance = tol;
  r.lhs = info_report(rho, compose(phi2, phi1)).coherent;
  r.rhs = info_report(rho, phi1).coherent;
  r.margin = r.rhs - r.lhs;

  const auto omega12 = purify_pair_composed(rho, phi1, phi2);
  const double lhs_route = matrix_entropy(reduced_matrix(omega12, {"R", "E1", "E2"})) -
                           matrix_entropy(reduced_matrix(omega12, {"E1", "E2"}));
  const auto omega1 = purify_pair(rho, phi1);
  const double rhs_route = matrix_entropy(reduced_matrix(omega1, {"R", "E"})) -
                           matrix_entropy(reduced_matrix(omega1, {"E"}));
  r.sub_checks.push_back(deviation("route-lhs", std::abs(r.lhs - lhs_route), route_tol));
  r.sub_checks.push_back(deviation("route-rhs", std::abs(r.rhs - rhs_route), route_tol));
  finalize(r);
  return r;
}

CheckResult check_subadditivity(const State& rho12, const Channel& phi1, const Channel& phi2,
                                double tol, double identity_tol) {
  const Index d1 = phi1.dim_in(), d2 = phi2.dim_in();
  if (rho12.dim() != d1 * d2) {
    throw Error(ErrorKind::DimMismatch, "state dimension " + std::to_string(rho12.dim()) +
                                            " vs product input " + std::to_string(d1 * d2));
  }
  const FactorShape in_shape{d1, d2};
  const auto rho1 = density_from_matrix<double>(partial_trace<double>(rho12.matrix(), in_shape, {0}));
  const auto rho2 = density_from_matrix<double>(partial_trace<double>(rho12.matrix(), in_shape, {1}));

  CheckResult r;
  r.name = "subadd";
  r.kind = CheckKind::Inequality;
  r.tolerance = tol;
  r.lhs = info_report(rho12, tensor(phi1, phi2)).mutual;
  r.rhs = info_report(rho1, phi1).mutual + info_report(rho2, phi2).mutual;
  r.margin = r.rhs - r.lhs;

  const auto omega12 = purify_pair_product(rho12, phi1, phi2);
  const auto omega1 = purify_pair(rho1, phi1);
  const auto omega2 = purify_pair(rho2, phi2);
  {
    const Matrix joint = reduced_matrix(omega12, {"Q1", "E1"});
    const Matrix single = reduced_matrix(omega1, {"Q", "E"});
    const Matrix joint_cf = closed_form::product_output_environment(rho12.matrix(), phi1, phi2, true);
    const Matrix single_cf = closed_form::output_environment(rho1.matrix(), phi1);
    r.sub_checks.push_back(deviation(
        "marginal-Q1E1",
        max_pairwise({{&joint, &single}, {&joint, &joint_cf}, {&single, &single_cf}, {&joint_cf, &single_cf}}),
        identity_tol));
  }
  {
    const Matrix joint = reduced_matrix(omega12, {"Q2", "E2"});
    const Matrix single = reduced_matrix(omega2, {"Q", "E"});
    const Matrix joint_cf = closed_form::product_output_environment(rho12.matrix(), phi1, phi2, false);
    const Matrix single_cf = closed_form::output_environment(rho2.matrix(), phi2);
    r.sub_checks.push_back(deviation(
        "marginal-Q2E2",
        max_pairwise({{&joint, &single}, {&joint, &joint_cf}, {&single, &single_cf}, {&joint_cf, &single_cf}}),
        identity_tol));
  }
  finalize(r);
  return r;
}

CheckResult check_marginal_consistency(const State& rho, const Channel& phi1, const Channel& phi2,
                                       double tol) {
  require_chain(rho, phi1, phi2);
  const Matrix single = reduced_matrix(purify_pair(rho, phi1), {"R", "E"});
  const Matrix composed = reduced_matrix(purify_pair_composed(rho, phi1, phi2), {"R", "E1"});
  const Matrix single_cf = closed_form::reference_environment(rho, phi1);
  const Matrix composed_cf = closed_form::reference_environment_composed(rho, phi1, phi2);

  CheckResult r;
  r.name = "marginal";
  r.kind = CheckKind::Identity;
  r.tolerance = tol;
  r.lhs = matrix_entropy(single);
  r.rhs = matrix_entropy(composed);
  r.margin = max_pairwise({{&single, &composed},
                           {&single, &single_cf},
                           {&composed, &composed_cf},
                           {&single_cf, &composed_cf}});
  finalize(r);
  return r;
}

CheckResult check_exchange_identity(const State& rho, const Channel& phi, double tol,
                                    double identity_tol) {
  const auto omega = purify_pair(rho, phi);
  const Matrix rq = reduced_matrix(omega, {"R", "Q"});
  const Matrix via_channel = channel_on_purification(rho, phi);
  const double h_e = matrix_entropy(reduced_matrix(omega, {"E"}));
  const double h_rq = matrix_entropy(rq);
  const double h_via = matrix_entropy(via_channel);

  CheckResult r;
  r.name = "exchange";
  r.kind = CheckKind::Identity;
  r.tolerance = tol;
  r.lhs = h_e;
  r.rhs = h_rq;
  r.margin = std::max(std::abs(h_e - h_rq), std::abs(h_e - h_via));
  r.sub_checks.push_back(deviation("rq-entrywise", max_abs_diff(rq, via_channel), identity_tol));
  finalize(r);
  return r;
}

CheckResult check_strong_subadditivity(const State& rho_abc, const FactorShape& shape, double tol) {
  if (shape.size() != 3 || shape.total() != rho_abc.dim()) {
    throw Error(ErrorKind::ShapeMismatch, "strong subadditivity needs three factors spanning the state");
  }
  const Matrix& m = rho_abc.matrix();
  const double h_abc = von_neumann_entropy(rho_abc);
  const double h_ab = matrix_entropy(partial_trace<double>(m, shape, {0, 1}));
  const double h_bc = matrix_entropy(partial_trace<double>(m, shape, {1, 2}));
  const double h_b = matrix_entropy(partial_trace<double>(m, shape, {1}));

  CheckResult r;
  r.name = "ssa";
  r.kind = CheckKind::Inequality;
  r.tolerance = tol;
  r.lhs = h_abc + h_b;
  r.rhs = h_ab + h_bc;
  r.margin = r.rhs - r.lhs;
  finalize(r);
  return r;
}

std::string_view to_string(CheckName name) {
  switch (name) {
    case CheckName::Dpi: return "dpi";
    case CheckName::Subadd: return "subadd";
    case CheckName::Marginal: return "marginal";
    case CheckName::Exchange: return "exchange";
    case CheckName::Ssa: return "ssa";
  }
  return "unknown";
}

std::optional<CheckName> check_name_from_string(std::string_view s) {
  for (auto n : {CheckName::Dpi, CheckName::Subadd, CheckName::Marginal, CheckName::Exchange,
                 CheckName::Ssa}) {
    if (to_string(n) == s) return n;
  }
  return std::nullopt;
}

namespace {

Index ceil_div(Index a, Index b) { return (a + b - 1) / b; }

}  // namespace

void validate(const CampaignConfig& c) {
  if (c.trials < 1) throw Error(ErrorKind::BadParam, "trials must be >= 1");
  if (c.din_min < 1 || c.dout_min < 1 || c.kraus_min < 1) {
    throw Error(ErrorKind::BadParam, "dimension and Kraus ranges must start at >= 1");
  }
  if (c.din_min > c.din_max || c.dout_min > c.dout_max || c.kraus_min > c.kraus_max) {
    throw Error(ErrorKind::BadParam, "empty dimension or Kraus range");
  }
  // Worst cases: widest input into narrowest output, for the first channel of
  // a chain (d_in → d_mid) and the second (d_mid → d_out).
  const Index needed = std::max(ceil_div(c.din_max, c.dout_min), ceil_div(c.dout_max, c.dout_min));
  if (needed > c.kraus_max) {
    throw Error(ErrorKind::InfeasibleShape,
                "kraus-max " + std::to_string(c.kraus_max) + " cannot realize a channel from dimension " +
                    std::to_string(std::max(c.din_max, c.dout_max)) + " into dimension " +
                    std::to_string(c.dout_min) + " (needs " + std::to_string(needed) + ")");
  }
}

std::uint64_t trial_seed(std::uint64_t campaign_seed, CheckName name, std::size_t index) {
  // splitmix64 finalizer applied to a running state.
  auto mix = [](std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  };
  std::uint64_t s = mix(campaign_seed);
  s = mix(s ^ static_cast<std::uint64_t>(name));
  return mix(s ^ static_cast<std::uint64_t>(index));
}

namespace {

Index draw(Rng& rng, Index lo, Index hi) {
  return std::uniform_int_distribution<Index>(lo, std::max(lo, hi))(rng);
}

// Full rank three times out of four, otherwise a random rank.
State draw_state(Rng& rng, Index dim) {
  const bool full = std::bernoulli_distribution(0.75)(rng);
  const Index rank = full ? dim : draw(rng, 1, dim);
  return random_state<double>(dim, rng, rank);
}

Channel draw_channel(Rng& rng, const CampaignConfig& c, Index din, Index dout) {
  const Index n = draw(rng, std::max(c.kraus_min, ceil_div(din, dout)), c.kraus_max);
  return random_channel<double>(din, dout, n, rng);
}

}  // namespace

CheckResult run_trial(const CampaignConfig& c, CheckName name, std::uint64_t seed) {
  Rng rng(seed);
  CheckResult r;
  switch (name) {
    case CheckName::Dpi:
    case CheckName::Marginal: {
      const Index din = draw(rng, c.din_min, c.din_max);
      const Index dmid = draw(rng, c.dout_min, c.dout_max);
      const Index dout = draw(rng, c.dout_min, c.dout_max);
      const auto rho = draw_state(rng, din);
      const auto phi1 = draw_channel(rng, c, din, dmid);
      const auto phi2 = draw_channel(rng, c, dmid, dout);
      r = name == CheckName::Dpi ? check_dpi(rho, phi1, phi2, c.tolerance)
                                 : check_marginal_consistency(rho, phi1, phi2, c.identity_tolerance);
      break;
    }
    case CheckName::Subadd: {
      const Index d1 = draw(rng, c.din_min, c.din_max);
      const Index d2 = draw(rng, c.din_min, c.din_max);
      const Index o1 = draw(rng, c.dout_min, c.dout_max);
      const Index o2 = draw(rng, c.dout_min, c.dout_max);
      const auto rho12 = draw_state(rng, d1 * d2);
      const auto phi1 = draw_channel(rng, c, d1, o1);
      const auto phi2 = draw_channel(rng, c, d2, o2);
      r = check_subadditivity(rho12, phi1, phi2, c.tolerance, c.identity_tolerance);
      break;
    }
    case CheckName::Exchange: {
      const Index din = draw(rng, c.din_min, c.din_max);
      const Index dout = draw(rng, c.dout_min, c.dout_max);
      const auto rho = draw_state(rng, din);
      const auto phi = draw_channel(rng, c, din, dout);
      r = check_exchange_identity(rho, phi, c.tolerance, c.identity_tolerance);
      break;
    }
    case CheckName::Ssa: {
      const FactorShape shape{draw(rng, c.din_min, c.din_max), draw(rng, c.din_min, c.din_max),
                              draw(rng, c.din_min, c.din_max)};
      r = check_strong_subadditivity(draw_state(rng, shape.total()), shape, c.tolerance);
      break;
    }
  }
  r.seed = seed;
  return r;
}

bool CampaignReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckSummary& s) { return s.passed == s.trials; });
}

namespace {

using TrialOutcome = std::variant<CheckResult, std::string>;

std::vector<TrialOutcome> run_trials(const CampaignConfig& c, CheckName name) {
  std::vector<TrialOutcome> out(c.trials);
  auto one = [&](std::size_t i) {
    const std::uint64_t seed = trial_seed(c.seed, name, i);
    try {
      out[i] = run_trial(c, name, seed);
    } catch (const std::exception& e) {
      out[i] = std::string(e.what());
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(c.threads, static_cast<unsigned>(c.trials)));
  if (workers == 1) {
    for (std::size_t i = 0; i < c.trials; ++i) one(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < c.trials; i = next++) one(i);
    });
  }
  pool.clear();
  return out;
}

CheckSummary summarize(const CampaignConfig& c, CheckName name, const std::vector<TrialOutcome>& outcomes) {
  CheckSummary s;
  s.name = name;
  s.trials = outcomes.size();
  bool first = true;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const std::uint64_t seed = trial_seed(c.seed, name, i);
    if (const auto* err = std::get_if<std::string>(&outcomes[i])) {
      s.failing_seeds.push_back(seed);
      s.errors.push_back(std::to_string(seed) + ": " + *err);
      continue;
    }
    const auto& r = std::get<CheckResult>(outcomes[i]);
    if (r.passed) {
      ++s.passed;
    } else {
      s.failing_seeds.push_back(seed);
    }
    const bool worse = r.kind == CheckKind::Inequality ? r.margin < s.worst_margin
                                                       : r.margin > s.worst_margin;
    if (first || worse) {
      s.worst_margin = r.margin;
      s.worst_seed = seed;
      first = false;
    }
    for (const auto& sub : r.sub_checks) {
      auto [it, inserted] = s.worst_sub_checks.try_emplace(sub.name, sub.value);
      if (!inserted) it->second = std::max(it->second, sub.value);
    }
  }
  return s;
}

}  // namespace

CampaignReport run_campaign(const CampaignConfig& config, const std::vector<CheckName>& which) {
  validate(config);
  CampaignReport report;
  report.config = config;
  for (CheckName name : which) {
    report.checks.push_back(summarize(config, name, run_trials(config, name)));
  }
  return report;
}

}  // namespace qpair::lab

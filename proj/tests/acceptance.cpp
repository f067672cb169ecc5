// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Every check runs at its stated tolerance; runtime limits are
// part of the criterion.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cli_runner.hpp"
#include "oracles.hpp"
#include "qpair/inequality_lab.hpp"
#include "qpair/io.hpp"
#include "support.hpp"

using namespace qpair;
using lab::Channel;
using lab::Matrix;
using lab::State;

namespace {

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok && passed) detail << "first failure: " << what << "; ";
    passed = passed && ok;
  }
};

int failures = 0;

void criterion(int id, const char* title, double time_limit_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (time_limit_s > 0) {
    o.require(secs < time_limit_s, "runtime " + std::to_string(secs) + " s over limit");
  }
  if (!o.passed) ++failures;
  std::printf("[%s] %d %s (%.2f s) %s\n", o.passed ? "PASS" : "FAIL", id, title, secs, o.detail.str().c_str());
  std::fflush(stdout);
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

Channel named(ChannelName n, std::vector<double> p = {}, std::vector<Index> d = {}) {
  return named_channel<double>(n, std::move(p), std::move(d));
}

State mixed(Index d) { return density_from_matrix<double>(Matrix::Identity(d, d) / double(d)); }

Index draw(Rng& rng, Index lo, Index hi) { return std::uniform_int_distribution<Index>(lo, hi)(rng); }

State draw_state(Rng& rng, Index d) {
  const Index rank = draw(rng, 0, 3) == 0 ? draw(rng, 1, d) : 0;
  return random_state<double>(d, rng, rank);
}

Channel draw_channel(Rng& rng, Index din, Index dout, Index kmax = 5) {
  return random_channel<double>(din, dout, draw(rng, (din + dout - 1) / dout, kmax), rng);
}

struct Pair {
  State rho;
  Channel phi;
};

// The 200 pairs shared by criteria 2 and 3.
std::vector<Pair> pairs_200() {
  std::vector<Pair> out;
  for (std::uint64_t i = 0; i < 200; ++i) {
    Rng rng(1000 + i);
    const Index din = draw(rng, 2, 4), dout = draw(rng, 2, 4);
    State rho = draw_state(rng, din);
    out.push_back({std::move(rho), draw_channel(rng, din, dout)});
  }
  return out;
}

struct Triple {
  State rho;
  Channel phi1, phi2;
};

// The 500 triples shared by criteria 4 and 5: a third are 2→3→2 chains, a third
// 3→2→4, the rest random dimensions up to 4.
Triple triple(std::uint64_t i) {
  Rng rng(5000 + i);
  Index d0, d1, d2;
  switch (i % 3) {
    case 0: d0 = 2, d1 = 3, d2 = 2; break;
    case 1: d0 = 3, d1 = 2, d2 = 4; break;
    default: d0 = draw(rng, 1, 4), d1 = draw(rng, 1, 4), d2 = draw(rng, 1, 4); break;
  }
  State rho = draw_state(rng, d0);
  Channel phi1 = draw_channel(rng, d0, d1);
  Channel phi2 = draw_channel(rng, d1, d2);
  return {std::move(rho), std::move(phi1), std::move(phi2)};
}

double report_deviation(const InfoReport<double>& a, const InfoReport<double>& b) {
  return std::max({std::abs(a.h_in - b.h_in), std::abs(a.h_out - b.h_out), std::abs(a.h_exchange - b.h_exchange),
                   std::abs(a.mutual - b.mutual), std::abs(a.coherent - b.coherent)});
}

void fixture_check(Outcome& o, const InfoReport<double>& r, const std::array<double, 5>& want, const char* tag) {
  const std::array<double, 5> got{r.h_in, r.h_out, r.h_exchange, r.mutual, r.coherent};
  for (std::size_t k = 0; k < 5; ++k) {
    o.require(std::abs(got[k] - want[k]) <= 1e-9, std::string(tag) + " scalar " + std::to_string(k));
  }
}

}  // namespace

int main() {
  criterion(1, "fixture exactness", 1.0, [](Outcome& o) {
    fixture_check(o, info_report(mixed(2), named(ChannelName::Identity)), {1, 1, 0, 2, 1}, "identity");
    const auto dep = named(ChannelName::Depolarizing, {1.0});
    fixture_check(o, info_report(mixed(2), dep), {1, 1, 2, 0, -1}, "depolarizing");
    // Ω_E = I₄/4 from the Pauli Kraus operators written out by hand.
    const std::vector<Matrix> pauli{oracle::pauli('I') / 2.0, oracle::pauli('X') / 2.0, oracle::pauli('Y') / 2.0,
                                    oracle::pauli('Z') / 2.0};
    Matrix env(4, 4);
    for (Index a = 0; a < 4; ++a)
      for (Index b = 0; b < 4; ++b)
        env(a, b) = oracle::multiply(oracle::multiply(pauli[a], Matrix::Identity(2, 2) / 2.0), pauli[b].adjoint()).trace();
    o.require(max_abs_diff(env, Matrix(Matrix::Identity(4, 4) / 4.0)) <= 1e-12, "hand-built Ω_E");
    o.require(max_abs_diff(reduced_matrix(purify_pair(mixed(2), dep), {"E"}), env) <= 1e-9, "library Ω_E");
  });

  const auto pairs = pairs_200();

  criterion(2, "closed-form marginal agreement, 200 pairs", 10.0, [&](Outcome& o) {
    double worst = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto& [rho, phi] = pairs[i];
      const auto omega = purify_pair(rho, phi);
      const Matrix full = omega.projector();
      const Matrix r = partial_trace<double>(full, omega.shape(), {0});
      const Matrix q = partial_trace<double>(full, omega.shape(), {1});
      const Matrix e = partial_trace<double>(full, omega.shape(), {2});
      const double dev = std::max({max_abs_diff(r, closed_form::reference(rho)),
                                   max_abs_diff(q, closed_form::output(rho, phi)),
                                   max_abs_diff(e, closed_form::environment(rho, phi))});
      worst = std::max(worst, dev);
      o.require(dev <= 1e-10, "pair " + std::to_string(i) + " deviation " + sci(dev));
    }
    o.detail << "max deviation " << sci(worst);
  });

  criterion(3, "exchange identity, 200 pairs", 0, [&](Outcome& o) {
    double worst_h = 0, worst_m = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto& [rho, phi] = pairs[i];
      const auto omega = purify_pair(rho, phi);
      const Matrix rq = reduced_matrix(omega, {"R", "Q"});
      const double dh = std::abs(matrix_entropy<double>(reduced_matrix(omega, {"E"})) - matrix_entropy<double>(rq));
      const double dm = max_abs_diff(rq, channel_on_purification(rho, phi));
      worst_h = std::max(worst_h, dh);
      worst_m = std::max(worst_m, dm);
      o.require(dh <= 1e-9, "pair " + std::to_string(i) + " entropy gap " + sci(dh));
      o.require(dm <= 1e-10, "pair " + std::to_string(i) + " Ω_RQ deviation " + sci(dm));
    }
    o.detail << "max |H(E)-H(RQ)| " << sci(worst_h) << ", max Ω_RQ deviation " << sci(worst_m);
  });

  criterion(4, "data processing inequality, 500 triples", 60.0, [](Outcome& o) {
    double worst_margin = 1e300, worst_route = 0;
    for (std::uint64_t i = 0; i < 500; ++i) {
      const auto t = triple(i);
      const auto r = lab::check_dpi(t.rho, t.phi1, t.phi2, 1e-9, 1e-8);
      worst_margin = std::min(worst_margin, r.margin);
      o.require(r.margin >= -1e-9, "triple " + std::to_string(i) + " margin " + sci(r.margin));
      for (const auto& s : r.sub_checks) {
        worst_route = std::max(worst_route, s.value);
        o.require(s.value <= 1e-8, "triple " + std::to_string(i) + " " + s.name + " " + sci(s.value));
      }
    }
    o.detail << "min margin " << sci(worst_margin) << ", max route gap " << sci(worst_route);
  });

  criterion(5, "marginal identity on the same triples + negative control", 0, [](Outcome& o) {
    double worst = 0;
    for (std::uint64_t i = 0; i < 500; ++i) {
      const auto t = triple(i);
      const auto r = lab::check_marginal_consistency(t.rho, t.phi1, t.phi2, 1e-10);
      worst = std::max(worst, r.margin);
      o.require(r.margin < 1e-10, "triple " + std::to_string(i) + " deviation " + sci(r.margin));
    }
    const auto rho = random_state<double>(2, 17);
    const auto phi1 = random_channel<double>(2, 2, 2, 17);
    const auto control = lab::check_marginal_consistency(rho, phi1, Channel::unchecked({0.9 * Matrix::Identity(2, 2)}));
    o.require(!control.passed, "corrupted channel was accepted");
    o.detail << "max deviation " << sci(worst) << ", control margin " << sci(control.margin);
  });

  criterion(6, "subadditivity, 300 triples", 0, [](Outcome& o) {
    double worst = 1e300, worst_product = 0, worst_identity = 0;
    for (std::uint64_t i = 0; i < 300; ++i) {
      Rng rng(9000 + i);
      const Index d1 = draw(rng, 2, 3), d2 = draw(rng, 2, 3);
      const bool product = i % 3 == 0;
      const State r12 = product ? density_from_matrix<double>(oracle::kron(draw_state(rng, d1).matrix(),
                                                                           draw_state(rng, d2).matrix()))
                                : draw_state(rng, d1 * d2);
      const auto phi1 = draw_channel(rng, d1, draw(rng, 2, 3));
      const auto phi2 = draw_channel(rng, d2, draw(rng, 2, 3));
      const auto r = lab::check_subadditivity(r12, phi1, phi2, 1e-9, 1e-10);
      const std::string tag = "trial " + std::to_string(i);
      worst = std::min(worst, r.margin);
      o.require(r.margin >= -1e-9, tag + " margin " + sci(r.margin));
      if (product) {
        worst_product = std::max(worst_product, std::abs(r.margin));
        o.require(std::abs(r.margin) < 1e-9, tag + " product margin " + sci(r.margin));
      }
      for (const auto& s : r.sub_checks) {
        worst_identity = std::max(worst_identity, s.value);
        o.require(s.value <= 1e-10, tag + " " + s.name + " " + sci(s.value));
      }
    }
    o.detail << "min margin " << sci(worst) << ", max product |margin| " << sci(worst_product)
             << ", max identity deviation " << sci(worst_identity);
  });

  criterion(7, "invariance suite, 100 trials", 0, [](Outcome& o) {
    double remix = 0, pad = 0, basis = 0;
    for (std::uint64_t i = 0; i < 100; ++i) {
      Rng rng(13000 + i);
      const Index din = draw(rng, 2, 4), dout = draw(rng, 2, 4);
      // Degenerate spectra on odd trials so that the eigenbasis really is ambiguous.
      const State rho = i % 2 ? support::degenerate_state(din, rng) : draw_state(rng, din);
      const auto phi = draw_channel(rng, din, dout);
      const auto base = info_report(rho, phi);
      remix = std::max(remix, report_deviation(base, info_report(rho, support::remix(phi, random_unitary<double>(phi.n_kraus(), rng)))));
      pad = std::max(pad, report_deviation(base, info_report(rho, support::pad_zero(phi, 1 + int(i % 2)))));
      basis = std::max(basis, report_deviation(base, info_report(support::rebasis(rho, rng), phi)));
    }
    o.require(remix <= 1e-9, "Kraus remix " + sci(remix));
    o.require(pad <= 1e-9, "zero padding " + sci(pad));
    o.require(basis <= 1e-9, "eigenbasis " + sci(basis));
    o.detail << "max change: remix " << sci(remix) << ", padding " << sci(pad) << ", eigenbasis " << sci(basis);
  });

  criterion(8, "strong subadditivity, 300 states", 0, [](Outcome& o) {
    double worst = 1e300, worst_product = 0;
    for (std::uint64_t i = 0; i < 300; ++i) {
      Rng rng(17000 + i);
      const FactorShape shape = i % 2 ? FactorShape{2, 3, 2} : FactorShape{2, 2, 2};
      const bool product = i % 5 == 0;
      const State rho = product ? density_from_matrix<double>(oracle::kron(
                                      oracle::kron(draw_state(rng, shape[0]).matrix(), draw_state(rng, shape[1]).matrix()),
                                      draw_state(rng, shape[2]).matrix()))
                                : draw_state(rng, shape.total());
      const auto r = lab::check_strong_subadditivity(rho, shape, 1e-9);
      worst = std::min(worst, r.margin);
      o.require(r.margin >= -1e-9, "state " + std::to_string(i) + " margin " + sci(r.margin));
      if (product) {
        worst_product = std::max(worst_product, std::abs(r.margin));
        o.require(std::abs(r.margin) < 1e-9, "product state " + std::to_string(i) + " margin " + sci(r.margin));
      }
    }
    o.detail << "min margin " << sci(worst) << ", max product |margin| " << sci(worst_product);
  });

  criterion(9, "command-line contract", 0, [](Outcome& o) {
    using nlohmann::json;
    cli_test::Workspace ws("acceptance");
    const auto state = ws.write("mixed.json", io::state_document(Matrix::Identity(2, 2) / 2.0));
    const auto id = ws.write("id.json", io::channel_document(named(ChannelName::Identity)));
    const auto dep = ws.write("dep.json", io::channel_document(named(ChannelName::Depolarizing, {1.0})));

    // Criterion 1 through files.
    for (const auto& [chan, want] : {std::pair{id, std::array<double, 5>{1, 1, 0, 2, 1}},
                                     std::pair{dep, std::array<double, 5>{1, 1, 2, 0, -1}}}) {
      const auto r = ws.run("compute --format json --state " + state + " --channel " + chan);
      o.require(r.code == 0, "compute exit " + std::to_string(r.code));
      if (r.code != 0) continue;
      const auto doc = json::parse(r.out);
      const std::array<const char*, 5> keys{"h_in", "h_out", "h_exchange", "mutual", "coherent"};
      for (std::size_t k = 0; k < 5; ++k) {
        o.require(std::abs(doc[keys[k]].get<double>() - want[k]) <= 1e-9, std::string("compute ") + keys[k]);
      }
    }

    // Criterion 4 through files: both named chains plus a random one, each
    // checked against the in-process result.
    for (std::uint64_t i = 0; i < 6; ++i) {
      const auto t = triple(i);
      const auto s = ws.write("rho.json", io::state_document(t.rho.matrix()));
      const auto c1 = ws.write("phi1.json", io::channel_document(t.phi1));
      const auto c2 = ws.write("phi2.json", io::channel_document(t.phi2));
      const auto r = ws.run("verify dpi --format json --state " + s + " --channel1 " + c1 + " --channel2 " + c2);
      o.require(r.code == 0, "verify dpi exit " + std::to_string(r.code) + " " + r.err);
      if (r.code != 0) continue;
      const auto doc = json::parse(r.out);
      const auto direct = lab::check_dpi(t.rho, t.phi1, t.phi2);
      o.require(doc["passed"].get<bool>(), "verify dpi reported failure");
      o.require(std::abs(doc["margin"].get<double>() - direct.margin) <= 1e-9, "verify dpi margin differs");
    }
    const std::string campaign = "sample --trials 500 --seed 42 --checks dpi --din-max 4 --dout-max 4 --kraus-max 5";
    const auto a = ws.run(campaign), b = ws.run(campaign), c = ws.run(campaign + " --threads 4");
    o.require(a.code == 0, "sample dpi exit " + std::to_string(a.code));
    o.require(a.out.rfind("dpi trials=500 passed=500 ", 0) == 0, "sample dpi report: " + a.out);
    o.require(a.out == b.out && a.out == c.out, "sample reports differ between runs");
    const auto ja = ws.run("compute --format json --state " + state + " --channel " + dep);
    const auto jb = ws.run("compute --format json --state " + state + " --channel " + dep);
    o.require(ja.out == jb.out, "compute reports differ between runs");

    // Exit code table.
    const auto broken = ws.write("broken.json", "{\"rho\": [[[1, 0]]");
    const auto bad_trace = ws.write("trace.json", R"({"rho": [[[0.5, 0], [0, 0]], [[0, 0], [0.6, 0]]]})");
    const auto doubled = ws.write("ii.json", io::channel_document(Channel::unchecked({Matrix::Identity(2, 2), Matrix::Identity(2, 2)})));
    const std::vector<std::pair<std::string, int>> table{
        {"verify dpi --state " + state + " --channel1 " + id + " --channel2 " + id, 0},
        {"verify dpi --state " + state + " --channel1 " + id + " --channel2 " + dep + " --tol -3", 1},
        {"compute --state " + broken + " --channel " + id, 2},
        {"compute --state " + bad_trace + " --channel " + id, 3},
        {"compute --state " + state + " --channel " + doubled, 3},
        {"verify dpi --state " + state + " --channel1 " + id + " --channel2 identity@3", 3},
        {"sample --trials 3 --din-max 9 --dout-min 2 --dout-max 2 --kraus-max 2", 4},
    };
    for (const auto& [args, want] : table) {
      const int got = ws.run(args).code;
      o.require(got == want, "'" + args + "' exited " + std::to_string(got) + ", expected " + std::to_string(want));
    }
    o.detail << "sample: " << a.out.substr(0, a.out.find(" worst_seed"));
  });

  std::printf("%s: %d criterion(s) failed\n", failures ? "FAILED" : "OK", failures);
  return failures ? 1 : 0;
}

// qpair: information quantities of (state, channel) pairs and numerical checks
// of the data processing inequality and related identities.
//
// Exit codes: 0 success / check passed, 1 check failed, 2 unparsable input
// file, 3 input fails validation, 4 bad flags or infeasible configuration.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "qpair/information.hpp"
#include "qpair/inequality_lab.hpp"
#include "qpair/io.hpp"

namespace {

using namespace qpair;

enum Exit : int { kPass = 0, kCheckFailed = 1, kParse = 2, kValidation = 3, kConfig = 4 };

void emit(const std::string& text, const std::string& output) {
  if (output == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(output, std::ios::binary);
  if (!out) throw io::ParseError(output, "open", "cannot write file");
  out << text;
}

io::Format parse_format(const std::string& s) { return s == "json" ? io::Format::Json : io::Format::Text; }

std::vector<Index> parse_dims(const std::string& text) {
  std::vector<Index> dims;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string part = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != part.size() || part.empty() || v < 1) {
      throw Error(ErrorKind::BadParam, "bad dimension list '" + text + "'");
    }
    dims.push_back(static_cast<Index>(v));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return dims;
}

struct Options {
  std::string format = "text";
  std::string output = "-";

  // compute / verify
  std::string state;
  std::string channel;
  std::string channel1;
  std::string channel2;
  std::string dims;
  std::optional<double> tol;

  // sample
  lab::CampaignConfig campaign;
  std::vector<std::string> checks{"dpi"};

  // generate
  Index dim = 2;
  Index rank = 0;
  Index din = 2, dout = 2, kraus = 2;
  std::uint64_t seed = 0;
  std::string spec;
};

int run_compute(const Options& o) {
  const auto rho = io::read_state(o.state);
  const auto phi = io::load_channel(o.channel);
  emit(io::render_info(info_report(rho, phi), parse_format(o.format)), o.output);
  return kPass;
}

int run_verify(const std::string& which, const Options& o) {
  lab::CheckResult r;
  const auto rho = io::read_state(o.state);
  if (which == "dpi") {
    r = lab::check_dpi(rho, io::load_channel(o.channel1), io::load_channel(o.channel2),
                       o.tol.value_or(tolerance::kInequality));
  } else if (which == "marginal") {
    r = lab::check_marginal_consistency(rho, io::load_channel(o.channel1), io::load_channel(o.channel2),
                                        o.tol.value_or(tolerance::kIdentity));
  } else if (which == "subadd") {
    r = lab::check_subadditivity(rho, io::load_channel(o.channel1), io::load_channel(o.channel2),
                                 o.tol.value_or(tolerance::kInequality));
  } else if (which == "exchange") {
    r = lab::check_exchange_identity(rho, io::load_channel(o.channel), o.tol.value_or(tolerance::kInequality));
  } else {
    const auto d = parse_dims(o.dims);
    r = lab::check_strong_subadditivity(rho, FactorShape(d), o.tol.value_or(tolerance::kInequality));
  }
  emit(io::render_check(r, parse_format(o.format)), o.output);
  return r.passed ? kPass : kCheckFailed;
}

int run_sample(Options o) {
  std::vector<lab::CheckName> which;
  for (const auto& c : o.checks) {
    const auto name = lab::check_name_from_string(c);
    if (!name) {
      std::cerr << "config error: unknown check '" << c << "'\n";
      return kConfig;
    }
    which.push_back(*name);
  }
  if (o.tol) o.campaign.tolerance = *o.tol;
  try {
    lab::validate(o.campaign);
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  }
  const auto report = lab::run_campaign(o.campaign, which);
  emit(io::render_campaign(report, parse_format(o.format)), o.output);
  return report.all_passed() ? kPass : kCheckFailed;
}

int run_generate(const std::string& what, const Options& o) {
  if (what == "state") {
    const auto rho = random_state<double>(o.dim, o.seed, o.rank);
    emit(io::state_document(rho.matrix()), o.output);
  } else if (!o.spec.empty()) {
    emit(io::channel_document(io::parse_channel_spec(o.spec)), o.output);
  } else {
    emit(io::channel_document(random_channel<double>(o.din, o.dout, o.kraus, o.seed)), o.output);
  }
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Information quantities of quantum (state, channel) pairs via their joint purification"};
  app.require_subcommand(1);
  Options o;

  auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    cmd->add_option("-o,--output", o.output, "Output path, '-' for standard output");
  };

  auto* compute = app.add_subcommand("compute", "Entropies and informations of a (state, channel) pair");
  compute->add_option("--state", o.state, "State file")->required();
  compute->add_option("--channel", o.channel, "Channel file or shorthand like depolarizing:0.5")->required();
  add_output(compute);

  auto* verify = app.add_subcommand("verify", "Check one identity or inequality on given inputs");
  verify->require_subcommand(1);
  std::string verify_which;
  for (const char* name : {"dpi", "marginal", "subadd"}) {
    auto* cmd = verify->add_subcommand(name);
    cmd->add_option("--state", o.state, "State file")->required();
    cmd->add_option("--channel1", o.channel1, "First channel (file or shorthand)")->required();
    cmd->add_option("--channel2", o.channel2, "Second channel (file or shorthand)")->required();
    cmd->add_option("--tol", o.tol, "Tolerance");
    add_output(cmd);
    cmd->callback([&verify_which, name] { verify_which = name; });
  }
  {
    auto* cmd = verify->add_subcommand("exchange");
    cmd->add_option("--state", o.state, "State file")->required();
    cmd->add_option("--channel", o.channel, "Channel (file or shorthand)")->required();
    cmd->add_option("--tol", o.tol, "Tolerance");
    add_output(cmd);
    cmd->callback([&verify_which] { verify_which = "exchange"; });
  }
  {
    auto* cmd = verify->add_subcommand("ssa");
    cmd->add_option("--state", o.state, "Tripartite state file")->required();
    cmd->add_option("--dims", o.dims, "Factor dimensions a,b,c")->required();
    cmd->add_option("--tol", o.tol, "Tolerance");
    add_output(cmd);
    cmd->callback([&verify_which] { verify_which = "ssa"; });
  }

  auto* sample = app.add_subcommand("sample", "Seeded randomized campaign");
  sample->add_option("--trials", o.campaign.trials, "Trials per check")->check(CLI::PositiveNumber);
  sample->add_option("--seed", o.campaign.seed, "Campaign seed");
  sample->add_option("--din-min", o.campaign.din_min, "Smallest input dimension");
  sample->add_option("--din-max", o.campaign.din_max, "Largest input dimension");
  sample->add_option("--dout-min", o.campaign.dout_min, "Smallest output dimension");
  sample->add_option("--dout-max", o.campaign.dout_max, "Largest output dimension");
  sample->add_option("--kraus-min", o.campaign.kraus_min, "Smallest Kraus rank");
  sample->add_option("--kraus-max", o.campaign.kraus_max, "Largest Kraus rank");
  sample->add_option("--checks", o.checks, "Checks to run: dpi,subadd,marginal,exchange,ssa")->delimiter(',');
  sample->add_option("--tol", o.tol, "Inequality tolerance");
  sample->add_option("--threads", o.campaign.threads, "Worker threads (report is independent of this)");
  add_output(sample);

  auto* generate = app.add_subcommand("generate", "Write random or named inputs as JSON documents");
  generate->require_subcommand(1);
  std::string generate_what;
  {
    auto* cmd = generate->add_subcommand("state", "Random density matrix");
    cmd->add_option("--dim", o.dim, "Dimension")->required();
    cmd->add_option("--rank", o.rank, "Rank (default: full)");
    cmd->add_option("--seed", o.seed, "Seed");
    cmd->add_option("-o,--output", o.output, "Output path, '-' for standard output");
    cmd->callback([&generate_what] { generate_what = "state"; });
  }
  {
    auto* cmd = generate->add_subcommand("channel", "Random or named channel");
    cmd->add_option("--din", o.din, "Input dimension");
    cmd->add_option("--dout", o.dout, "Output dimension");
    cmd->add_option("--kraus", o.kraus, "Number of Kraus operators");
    cmd->add_option("--seed", o.seed, "Seed");
    cmd->add_option("--spec", o.spec, "Named channel shorthand instead of a random one");
    cmd->add_option("-o,--output", o.output, "Output path, '-' for standard output");
    cmd->callback([&generate_what] { generate_what = "channel"; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfig;
  }

  try {
    if (compute->parsed()) return run_compute(o);
    if (verify->parsed()) return run_verify(verify_which, o);
    if (sample->parsed()) return run_sample(o);
    if (generate->parsed()) return run_generate(generate_what, o);
  } catch (const io::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const Error& e) {
    std::cerr << (e.kind() == ErrorKind::InfeasibleShape ? "config error: " : "validation error: ")
              << e.what() << "\n";
    return e.kind() == ErrorKind::InfeasibleShape ? kConfig : kValidation;
  }
  return kConfig;
}

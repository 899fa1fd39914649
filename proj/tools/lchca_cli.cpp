// Command-line front end: generate, classify and run automata, solve
// distance problems, and drive the proof-of-work workflow.
//
// Exit codes: 0 success, 1 no solution / unreachable / rejected,
// 2 usage or parse error, 3 capacity error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lchca/pow.hpp"
#include "lchca/reductions.hpp"

using json = nlohmann::ordered_json;

namespace {

enum ExitCode : int {
  kOk = 0,
  kNoSolution = 1,
  kUsage = 2,
  kCapacity = 3,
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw lchca::ParseError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw lchca::ParseError("cannot open " + path + " for writing");
  out << body;
}

std::vector<std::uint32_t> parse_coords(const std::string& text) {
  std::vector<std::uint32_t> coords;
  std::istringstream is(text);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) {
      throw lchca::ParseError("bad coordinate \"" + tok + "\"");
    }
    coords.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
  }
  return coords;
}

std::string fixed6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

struct CommonOpts {
  std::string spec_path;
  std::string format = "text";
  unsigned jobs = 1;
  std::uint64_t seed = 0;
};

int cmd_gen(std::uint32_t p_raw, std::uint32_t n, bool primitive, std::uint64_t seed,
            const std::string& out_path) {
  lchca::Prime p(p_raw);
  lchca::Polynomial f = lchca::find_irreducible(p, n, primitive, seed);
  lchca::Lchca ca = lchca::Lchca::from_matrix(lchca::companion_matrix(f));
  std::ostringstream os;
  ca.save(os);
  if (!out_path.empty()) write_file(out_path, os.str());
  std::cout << os.str();
  return kOk;
}

int cmd_classify(const CommonOpts& opts) {
  lchca::Lchca ca = lchca::Lchca::load_file(opts.spec_path);
  if (opts.format == "structured") {
    json doc;
    doc["p"] = ca.modulus().value();
    doc["n"] = ca.cells();
    doc["charpoly"] = ca.characteristic_poly().to_string();
    doc["class"] = std::string(to_string(ca.classification()));
    std::cout << doc.dump(2) << '\n';
  } else {
    std::cout << "p " << ca.modulus().value() << '\n';
    std::cout << "n " << ca.cells() << '\n';
    std::cout << "charpoly " << ca.characteristic_poly().to_string() << '\n';
    std::cout << to_string(ca.classification()) << '\n';
  }
  return kOk;
}

int cmd_run(const CommonOpts& opts, const std::string& state, std::uint64_t tau) {
  lchca::Lchca ca = lchca::Lchca::load_file(opts.spec_path);
  lchca::Configuration s =
      lchca::parse_configuration(ca.modulus(), state, ca.cells());
  std::cout << lchca::config_to_string(ca.modulus(), ca.run(s, tau)) << '\n';
  return kOk;
}

int cmd_cycles(const CommonOpts& opts) {
  lchca::Lchca ca = lchca::Lchca::load_file(opts.spec_path);
  auto cycles = ca.enumerate_cycles();
  if (opts.format == "structured") {
    json doc;
    doc["count"] = cycles.size();
    doc["cycles"] = json::array();
    for (const auto& c : cycles) {
      doc["cycles"].push_back(
          {{"representative", lchca::config_to_string(ca.modulus(), c.representative)},
           {"length", c.length}});
    }
    std::cout << doc.dump(2) << '\n';
  } else {
    for (const auto& c : cycles) {
      std::cout << "cycle " << lchca::config_to_string(ca.modulus(), c.representative)
                << " length " << c.length << '\n';
    }
    std::cout << cycles.size() << '\n';
  }
  return kOk;
}

int cmd_stats(const CommonOpts& opts, std::uint64_t samples) {
  lchca::Lchca ca = lchca::Lchca::load_file(opts.spec_path);
  lchca::UniformityReport report =
      lchca::uniformity_report(ca, samples, opts.seed, opts.jobs);
  if (opts.format == "structured") {
    json doc;
    doc["samples"] = report.samples;
    doc["cells"] = report.cells;
    doc["p"] = report.p;
    doc["start"] = lchca::config_to_string(ca.modulus(), report.start);
    doc["frequencies"] = json::array();
    doc["chi_square"] = json::array();
    for (std::uint32_t i = 0; i < report.cells; ++i) {
      json row = json::array();
      for (std::uint32_t d = 0; d < report.p; ++d) {
        row.push_back(fixed6(report.cell_frequency(i, d)));
      }
      doc["frequencies"].push_back(row);
      doc["chi_square"].push_back(fixed6(report.chi_square(i)));
    }
    doc["max_pair_deviation"] = fixed6(report.max_pair_deviation());
    std::cout << doc.dump(2) << '\n';
  } else {
    std::cout << "samples " << report.samples << '\n';
    std::cout << "start " << lchca::config_to_string(ca.modulus(), report.start) << '\n';
    for (std::uint32_t i = 0; i < report.cells; ++i) {
      std::cout << "cell " << i << " freq";
      for (std::uint32_t d = 0; d < report.p; ++d) {
        std::cout << ' ' << fixed6(report.cell_frequency(i, d));
      }
      std::cout << " chi2 " << fixed6(report.chi_square(i)) << '\n';
    }
    std::cout << fixed6(report.max_pair_deviation()) << '\n';
  }
  return kOk;
}

int cmd_ddp(const CommonOpts& opts, const std::string& instance_path,
            const std::string& s_text, const std::string& t_text,
            const std::string& path_name) {
  std::optional<lchca::DdpInstance> inst_opt;
  if (!instance_path.empty()) {
    lchca::ResolvedProblem problem = lchca::load_problem_file(instance_path);
    if (problem.kind != lchca::ProblemStatement::Kind::ddp) {
      throw lchca::ParseError("ddp: instance file is of kind " +
                              std::string(to_string(problem.kind)));
    }
    inst_opt.emplace(std::move(problem.ca), std::move(problem.start),
                     std::move(problem.target));
  } else {
    lchca::Lchca ca = lchca::Lchca::load_file(opts.spec_path);
    inst_opt.emplace(ca, lchca::parse_configuration(ca.modulus(), s_text, ca.cells()),
                     lchca::parse_configuration(ca.modulus(), t_text, ca.cells()));
  }
  const lchca::DdpInstance& inst = *inst_opt;
  const auto path = path_name == "full" ? lchca::DlpReductionPath::full_system
                                        : lchca::DlpReductionPath::coordinate_ratio;
  lchca::DdpSolution sol = lchca::solve_ddp(inst, path);
  if (opts.format == "structured") {
    json doc;
    doc["reachable"] = !sol.is_unreachable();
    if (!sol.is_unreachable()) doc["tau"] = sol.tau();
    std::cout << doc.dump(2) << '\n';
  } else {
    std::cout << sol.to_string() << '\n';
  }
  return sol.is_unreachable() ? kNoSolution : kOk;
}

int cmd_fdp(const CommonOpts& opts, const std::string& instance_path,
            const std::string& s_text, const std::string& x_text,
            const std::string& coords_text, std::optional<std::uint64_t> delta,
            bool is_sddp) {
  lchca::Configuration s;
  std::vector<std::uint32_t> x, coords;
  std::optional<lchca::Lchca> ca;
  if (!instance_path.empty()) {
    lchca::ResolvedProblem problem = lchca::load_problem_file(instance_path);
    const auto expected = is_sddp ? lchca::ProblemStatement::Kind::sddp
                                  : lchca::ProblemStatement::Kind::fdp;
    if (problem.kind != expected) {
      throw lchca::ParseError(std::string(to_string(expected)) +
                              ": instance file is of kind " +
                              std::string(to_string(problem.kind)));
    }
    ca.emplace(std::move(problem.ca));
    s = std::move(problem.start);
    x = std::move(problem.x);
    coords = std::move(problem.coords);
    if (is_sddp) delta = problem.delta;
  } else {
    ca.emplace(lchca::Lchca::load_file(opts.spec_path));
    s = lchca::parse_configuration(ca->modulus(), s_text, ca->cells());
    if (!x_text.empty()) {
      x = lchca::parse_configuration(ca->modulus(), x_text, std::nullopt);
    }
    if (!coords_text.empty()) {
      coords = parse_coords(coords_text);
    } else {
      coords.resize(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) {
        coords[i] = static_cast<std::uint32_t>(i);
      }
    }
  }

  std::optional<std::uint64_t> tau;
  if (delta) {
    lchca::SddpInstance inst(*ca, s, x, *delta, coords);
    tau = opts.jobs > 1 ? lchca::solve_sddp_parallel(inst, opts.jobs)
                        : lchca::solve_sddp(inst);
  } else {
    tau = lchca::solve_fdp(*ca, s, x, coords);
  }
  if (opts.format == "structured") {
    json doc;
    doc["found"] = tau.has_value();
    if (tau) doc["tau"] = *tau;
    std::cout << doc.dump(2) << '\n';
  } else {
    if (tau) {
      std::cout << *tau << '\n';
    } else {
      std::cout << "none" << '\n';
    }
  }
  return tau ? kOk : kNoSolution;
}

int cmd_pow_challenge(std::uint32_t p_raw, std::uint32_t n, std::uint32_t k,
                      std::optional<std::uint64_t> delta, const std::string& f_text,
                      std::uint64_t seed, const std::string& message,
                      const std::string& message_file, const std::string& out_path) {
  lchca::Prime p(p_raw);
  lchca::PowParams params{p, n, lchca::Polynomial(p), k, 0};
  if (!f_text.empty()) {
    params.f = lchca::Polynomial::parse(f_text);
  } else {
    params.f = lchca::find_irreducible(p, n, /*want_primitive=*/true, seed);
  }
  params.delta = delta ? *delta : lchca::PowParams::recommended_delta(p, n, k);
  params.validate();

  std::string body = message;
  if (!message_file.empty()) body = read_file(message_file);
  lchca::PowChallenge challenge = lchca::make_challenge(std::string_view(body), params);
  const std::string text = challenge.to_text();
  if (!out_path.empty()) write_file(out_path, text);
  std::cout << text;
  return kOk;
}

int cmd_pow_prove(const std::string& challenge_path, unsigned jobs,
                  const std::string& out_path) {
  lchca::PowChallenge challenge = lchca::PowChallenge::parse(read_file(challenge_path));
  auto solution = lchca::prove(challenge, jobs);
  if (!solution) {
    std::cout << "none" << '\n';
    return kNoSolution;
  }
  if (!out_path.empty()) write_file(out_path, std::to_string(solution->tau) + "\n");
  std::cout << solution->tau << '\n';
  return kOk;
}

int cmd_pow_verify(const std::string& challenge_path, std::optional<std::uint64_t> tau,
                   const std::string& solution_path) {
  lchca::PowChallenge challenge = lchca::PowChallenge::parse(read_file(challenge_path));
  if (!tau && solution_path.empty()) {
    throw lchca::ParseError("pow-verify: give --tau or --solution");
  }
  if (!tau) {
    std::istringstream is(read_file(solution_path));
    std::string line;
    if (!std::getline(is, line)) throw lchca::ParseError("pow-verify: empty solution file");
    if (line.empty() || line.find_first_not_of("0123456789") != std::string::npos) {
      throw lchca::ParseError("pow-verify: bad tau \"" + line + "\"");
    }
    tau = std::stoull(line);
  }
  lchca::VerifyResult result = lchca::verify(challenge, lchca::PowSolution{*tau});
  if (result.ok()) {
    std::cout << "accept" << '\n';
    return kOk;
  }
  std::cerr << "reject " << to_string(result.status)
            << (result.detail.empty() ? "" : ": " + result.detail) << '\n';
  std::cout << "reject" << '\n';
  return kNoSolution;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"linear cyclic hybrid cellular automata toolkit"};
  app.require_subcommand(1);

  CommonOpts opts;

  // gen
  std::uint32_t gen_p = 2, gen_n = 0;
  bool gen_primitive = false;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "generate a CA spec from a fresh polynomial");
  gen->add_option("--p", gen_p, "prime field size")->required();
  gen->add_option("--n", gen_n, "cell count (>= 2)")->required();
  gen->add_flag("--primitive", gen_primitive, "require a maximum-length CA");
  gen->add_option("--seed", opts.seed, "search seed");
  gen->add_option("-o,--output", gen_out, "also write the spec to this file");

  auto add_spec = [&](CLI::App* cmd) {
    cmd->add_option("--spec", opts.spec_path, "CA spec file")->required();
  };
  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", opts.format, "text|structured")
        ->check(CLI::IsMember({"text", "structured"}));
  };

  // classify
  auto* classify = app.add_subcommand("classify", "report the CA classification");
  add_spec(classify);
  add_format(classify);

  // run
  std::string run_state;
  std::uint64_t run_tau = 0;
  auto* run = app.add_subcommand("run", "apply tau transitions to a configuration");
  add_spec(run);
  run->add_option("--state", run_state, "start configuration")->required();
  run->add_option("--tau", run_tau, "number of transitions")->required();

  // cycles
  auto* cycles = app.add_subcommand("cycles", "enumerate the cycle partition");
  add_spec(cycles);
  add_format(cycles);

  // stats
  std::uint64_t stats_samples = 10000;
  auto* stats = app.add_subcommand("stats", "uniformity / independence tallies");
  add_spec(stats);
  add_format(stats);
  stats->add_option("--samples", stats_samples, "number of sampled exponents");
  stats->add_option("--seed", opts.seed, "sampling seed");
  stats->add_option("--jobs", opts.jobs, "worker threads");

  // ddp
  std::string ddp_s, ddp_t, ddp_path = "ratio", ddp_instance;
  auto* ddp = app.add_subcommand("ddp", "solve a discrete-distance instance");
  add_format(ddp);
  auto* ddp_spec = ddp->add_option("--spec", opts.spec_path, "CA spec file");
  auto* ddp_s_opt = ddp->add_option("--s", ddp_s, "start configuration")->needs(ddp_spec);
  auto* ddp_t_opt = ddp->add_option("--t", ddp_t, "target configuration")->needs(ddp_spec);
  ddp->add_option("--instance", ddp_instance, "problem statement file")
      ->excludes(ddp_spec)
      ->excludes(ddp_s_opt)
      ->excludes(ddp_t_opt);
  ddp->add_option("--path", ddp_path, "ratio|full")
      ->check(CLI::IsMember({"ratio", "full"}));

  // fdp
  std::string fdp_s, fdp_x, fdp_coords, fdp_instance;
  auto* fdp = app.add_subcommand("fdp", "least tau matching fixed coordinates");
  add_format(fdp);
  auto* fdp_spec = fdp->add_option("--spec", opts.spec_path, "CA spec file");
  auto* fdp_s_opt = fdp->add_option("--s", fdp_s, "start configuration")->needs(fdp_spec);
  auto* fdp_x_opt = fdp->add_option("--x", fdp_x, "fixed digits")->needs(fdp_spec);
  auto* fdp_coords_opt =
      fdp->add_option("--coords", fdp_coords, "comma-separated coordinates (default first k)");
  fdp->add_option("--instance", fdp_instance, "problem statement file")
      ->excludes(fdp_spec)
      ->excludes(fdp_s_opt)
      ->excludes(fdp_x_opt)
      ->excludes(fdp_coords_opt);

  // sddp
  std::string sddp_s, sddp_x, sddp_coords, sddp_instance;
  std::uint64_t sddp_delta = 0;
  auto* sddp = app.add_subcommand("sddp", "bounded fixed-coordinate search");
  add_format(sddp);
  auto* sddp_spec = sddp->add_option("--spec", opts.spec_path, "CA spec file");
  auto* sddp_s_opt = sddp->add_option("--s", sddp_s, "start configuration")->needs(sddp_spec);
  auto* sddp_x_opt = sddp->add_option("--x", sddp_x, "fixed digits")->needs(sddp_spec);
  auto* sddp_delta_opt = sddp->add_option("--delta", sddp_delta, "scan bound");
  auto* sddp_coords_opt =
      sddp->add_option("--coords", sddp_coords, "comma-separated coordinates");
  sddp->add_option("--instance", sddp_instance, "problem statement file")
      ->excludes(sddp_spec)
      ->excludes(sddp_s_opt)
      ->excludes(sddp_x_opt)
      ->excludes(sddp_delta_opt)
      ->excludes(sddp_coords_opt);
  sddp->add_option("--jobs", opts.jobs, "worker threads");

  // pow-challenge
  std::uint32_t pow_p = 2, pow_n = 16, pow_k = 8;
  std::optional<std::uint64_t> pow_delta;
  std::string pow_f, pow_message, pow_message_file, pow_out;
  auto* powc = app.add_subcommand("pow-challenge", "derive a puzzle from a message");
  powc->add_option("--p", pow_p, "prime field size");
  powc->add_option("--n", pow_n, "cell count");
  powc->add_option("--k", pow_k, "difficulty (fixed-prefix length)");
  powc->add_option("--delta", pow_delta, "scan bound (default 8 p^k)");
  powc->add_option("--f", pow_f, "primitive polynomial (default: seeded search)");
  powc->add_option("--seed", opts.seed, "polynomial search seed");
  auto* msg_opt = powc->add_option("--message", pow_message, "message text");
  powc->add_option("--message-file", pow_message_file, "read the message from a file")
      ->excludes(msg_opt);
  powc->add_option("-o,--output", pow_out, "also write the challenge to this file");

  // pow-prove
  std::string prove_challenge, prove_out;
  auto* powp = app.add_subcommand("pow-prove", "scan for a witness");
  powp->add_option("--challenge", prove_challenge, "challenge file")->required();
  powp->add_option("--jobs", opts.jobs, "worker threads");
  powp->add_option("-o,--output", prove_out, "write the witness to this file");

  // pow-verify
  std::string verify_challenge, verify_solution;
  std::optional<std::uint64_t> verify_tau;
  auto* powv = app.add_subcommand("pow-verify", "check a claimed witness");
  powv->add_option("--challenge", verify_challenge, "challenge file")->required();
  powv->add_option("--tau", verify_tau, "claimed witness");
  powv->add_option("--solution", verify_solution, "witness file (decimal tau)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen(gen_p, gen_n, gen_primitive, opts.seed, gen_out);
    if (classify->parsed()) return cmd_classify(opts);
    if (run->parsed()) return cmd_run(opts, run_state, run_tau);
    if (cycles->parsed()) return cmd_cycles(opts);
    if (stats->parsed()) return cmd_stats(opts, stats_samples);
    if (ddp->parsed()) {
      if (ddp_instance.empty() && (ddp_s.empty() || ddp_t.empty())) {
        throw lchca::ParseError("ddp: give --spec with --s/--t, or --instance");
      }
      return cmd_ddp(opts, ddp_instance, ddp_s, ddp_t, ddp_path);
    }
    if (fdp->parsed()) {
      if (fdp_instance.empty() && (fdp_s.empty() || fdp_x.empty())) {
        throw lchca::ParseError("fdp: give --spec with --s/--x, or --instance");
      }
      return cmd_fdp(opts, fdp_instance, fdp_s, fdp_x, fdp_coords, std::nullopt, false);
    }
    if (sddp->parsed()) {
      if (sddp_instance.empty() && (sddp_s.empty() || sddp_x.empty())) {
        throw lchca::ParseError("sddp: give --spec with --s/--x/--delta, or --instance");
      }
      if (sddp_instance.empty() && sddp_delta_opt->count() == 0) {
        throw lchca::ParseError("sddp: --delta is required with --spec");
      }
      return cmd_fdp(opts, sddp_instance, sddp_s, sddp_x, sddp_coords, sddp_delta, true);
    }
    if (powc->parsed()) {
      return cmd_pow_challenge(pow_p, pow_n, pow_k, pow_delta, pow_f, opts.seed,
                               pow_message, pow_message_file, pow_out);
    }
    if (powp->parsed()) return cmd_pow_prove(prove_challenge, opts.jobs, prove_out);
    if (powv->parsed()) return cmd_pow_verify(verify_challenge, verify_tau, verify_solution);
  } catch (const lchca::CapacityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCapacity;
  } catch (const lchca::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

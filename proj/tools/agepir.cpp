#include <cstdint>
#include <exception>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "agepir/avg_solver.hpp"
#include "agepir/capacity.hpp"
#include "agepir/config_io.hpp"
#include "agepir/errors.hpp"
#include "agepir/model.hpp"
#include "agepir/oracle.hpp"
#include "agepir/peak_solver.hpp"
#include "agepir/sim.hpp"

namespace {

using namespace agepir;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitVerify = 4;

Rat rat_arg(const std::string& text, const char* what) {
  try {
    return parse_rational(text);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

std::vector<Rat> rat_list_arg(const std::string& text, const char* what) {
  std::vector<Rat> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) {
      out.push_back(rat_arg(cur, what));
      cur.clear();
    }
  };
  for (char ch : text) {
    if (ch == ',' || ch == ' ') {
      flush();
    } else {
      cur.push_back(ch);
    }
  }
  flush();
  if (out.empty()) throw ConfigError(std::string(what) + ": empty list");
  return out;
}

Metric metric_arg(const std::string& name) {
  return name == "avg" ? Metric::average : Metric::peak;
}

std::string alloc_text(const DownloadAllocation& d) {
  std::string out = "(";
  for (std::size_t n = 0; n < d.d.size(); ++n) {
    if (n) out += ", ";
    out += format_rational(d.d[n]);
  }
  out += ")";
  return out;
}

std::string rat_both(const Rat& x) {
  return format_rational(x) + " (" + format_double(to_double(x)) + ")";
}

// Default oracle resolution: L/32, exact on every L=8 corner coordinate.
Rat default_resolution(const SystemConfig& cfg) { return Rat(cfg.message_length, 32); }

struct CommonArgs {
  std::string config_path;
  std::string format = "text";
  std::string metric = "peak";
  std::string rmin;        // override, optional
  std::string resolution;  // optional
};

SystemConfig load_with_overrides(const CommonArgs& args) {
  SystemConfig cfg = load_config(args.config_path);
  if (!args.rmin.empty()) {
    cfg.r_min = rat_arg(args.rmin, "--rmin");
    cfg.validate();
  }
  return cfg;
}

Solution dispatch_solve(const SystemConfig& cfg, Metric metric) {
  return metric == Metric::peak ? solve_peak(cfg) : solve_average(cfg);
}

void print_solution_text(std::ostream& out, const Solution& sol) {
  out << "metric: " << to_string(sol.metric) << '\n';
  out << "allocation: d = " << alloc_text(sol.allocation)
      << ", D = " << format_rational(sol.allocation.total()) << '\n';
  out << "achieved rate: " << rat_both(sol.achieved_rate) << '\n';
  out << "objective (mixture-exact): " << rat_both(sol.objective_exact) << '\n';
  out << "objective (idealized): " << rat_both(sol.objective_idealized_exact) << '\n';
  out << "mixture (" << sol.mixture.components.size() << " component"
      << (sol.mixture.components.size() == 1 ? "" : "s") << "):" << '\n';
  for (const auto& comp : sol.mixture.components) {
    out << "  p = " << rat_both(comp.prob) << "  d = " << alloc_text(comp.alloc) << '\n';
  }
}

int cmd_capacity(const CommonArgs& args, const std::string& tau_text) {
  const SystemConfig cfg = load_config(args.config_path);
  if (cfg.num_messages != 2 && cfg.num_messages != 3) {
    throw ConfigError("capacity analysis covers M in {2, 3}, got M = " +
                      std::to_string(cfg.num_messages));
  }
  const Rat c_pir = pir_capacity(cfg.num_servers, cfg.num_messages);

  std::vector<Rat> tau_entries;
  if (!tau_text.empty()) {
    tau_entries = rat_list_arg(tau_text, "--tau");
  } else {
    tau_entries.assign(static_cast<std::size_t>(cfg.num_servers),
                       Rat(1, cfg.num_servers));
  }
  Rat c_tau;
  try {
    c_tau = capacity_asym_any_order(TrafficRatio(tau_entries), cfg.num_messages);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("--tau: ") + e.what());
  }

  const auto corners = corner_points(cfg.num_servers, cfg.num_messages, cfg.message_length);

  std::ostream& out = std::cout;
  if (args.format == "structured") {
    out << "format=capacity/1\n";
    out << "num_servers=" << cfg.num_servers << '\n';
    out << "num_messages=" << cfg.num_messages << '\n';
    out << "message_length=" << cfg.message_length << '\n';
    out << "c_pir=" << format_rational(c_pir) << '\n';
    out << "tau=";
    for (std::size_t i = 0; i < tau_entries.size(); ++i) {
      out << (i ? " " : "") << format_rational(tau_entries[i]);
    }
    out << '\n';
    out << "c_tau=" << format_rational(c_tau) << '\n';
    out << "corners=" << corners.size() << '\n';
    for (std::size_t i = 0; i < corners.size(); ++i) {
      out << "corner_" << (i + 1) << "_alloc=";
      for (std::size_t n = 0; n < corners[i].allocation.d.size(); ++n) {
        out << (n ? " " : "") << format_rational(corners[i].allocation.d[n]);
      }
      out << '\n';
      out << "corner_" << (i + 1) << "_rate=" << format_rational(corners[i].rate) << '\n';
    }
  } else {
    out << "servers: " << cfg.num_servers << ", messages: " << cfg.num_messages
        << ", message length: " << cfg.message_length << " bits\n";
    out << "C_PIR = " << rat_both(c_pir) << '\n';
    out << "tau = " << alloc_text(DownloadAllocation(tau_entries)) << '\n';
    out << "C(tau) = " << rat_both(c_tau) << '\n';
    out << "corner points (d non-increasing, total download descending):\n";
    for (const auto& c : corners) {
      out << "  d = " << alloc_text(c.allocation)
          << "  D = " << format_rational(c.allocation.total())
          << "  rate = " << rat_both(c.rate) << '\n';
    }
  }
  return kExitOk;
}

int cmd_solve(const CommonArgs& args) {
  const SystemConfig cfg = load_with_overrides(args);
  const Metric metric = metric_arg(args.metric);
  const Solution sol = dispatch_solve(cfg, metric);
  const Rat resolution = args.resolution.empty() ? default_resolution(cfg)
                                                 : rat_arg(args.resolution, "--resolution");

  bool verified = true;
  std::string verify_note;
  VerifyReport report;
  try {
    report = verify(sol, cfg, resolution);
    verified = report.pass;
  } catch (const SizeLimitError& e) {
    verify_note = std::string("oracle check skipped: ") + e.what();
  }

  std::ostream& out = std::cout;
  if (args.format == "structured") {
    write_solution(out, sol);
    out << "verify_resolution=" << format_rational(resolution) << '\n';
    if (verify_note.empty()) {
      out << "verify_pass=" << (report.pass ? 1 : 0) << '\n';
      out << "verify_oracle=" << format_rational(report.oracle_objective) << '\n';
      out << "verify_slack=" << format_rational(report.slack) << '\n';
    } else {
      out << "verify_pass=skipped\n";
    }
  } else {
    print_solution_text(out, sol);
    if (verify_note.empty()) {
      out << "oracle check (resolution " << format_rational(resolution)
          << "): " << (report.pass ? "PASS" : "FAIL") << " -- " << report.detail << '\n';
    } else {
      out << verify_note << '\n';
    }
  }
  return verified ? kExitOk : kExitVerify;
}

int cmd_tradeoff(const CommonArgs& args, const std::string& grid_text) {
  SystemConfig cfg = load_with_overrides(args);

  std::vector<Rat> grid;
  if (grid_text.empty()) {
    grid.push_back(cfg.r_min);
  } else {
    const auto colon1 = grid_text.find(':');
    const auto colon2 = colon1 == std::string::npos ? std::string::npos
                                                    : grid_text.find(':', colon1 + 1);
    if (colon2 == std::string::npos) {
      throw ConfigError("--rmin-grid expects start:stop:step");
    }
    const Rat start = rat_arg(grid_text.substr(0, colon1), "--rmin-grid start");
    const Rat stop = rat_arg(grid_text.substr(colon1 + 1, colon2 - colon1 - 1),
                             "--rmin-grid stop");
    const Rat step = rat_arg(grid_text.substr(colon2 + 1), "--rmin-grid step");
    if (!(step > 0) || start > stop) {
      throw ConfigError("--rmin-grid needs start <= stop and step > 0");
    }
    for (Rat r = start; r <= stop; r += step) grid.push_back(r);
  }

  // The whole grid must clear validation before any row is printed.
  for (const Rat& r : grid) {
    cfg.r_min = r;
    cfg.validate();
  }

  const bool exact = args.format == "structured";
  std::ostream& out = std::cout;
  out << "r_min,peak_aoi,peak_rate,avg_aoi_ideal,avg_aoi_mixture,avg_rate\n";
  for (const Rat& r : grid) {
    cfg.r_min = r;
    const Solution peak = solve_peak(cfg);
    const Solution avg = solve_average(cfg);
    auto aoi = [&](const Rat& x) {
      return exact ? format_rational(x) : format_double(to_double(x));
    };
    out << format_rational(r) << ',' << aoi(peak.objective_exact) << ','
        << format_rational(peak.achieved_rate) << ',' << aoi(avg.objective_idealized_exact)
        << ',' << aoi(avg.objective_exact) << ',' << format_rational(avg.achieved_rate)
        << '\n';
  }
  return kExitOk;
}

int cmd_simulate(const CommonArgs& args, const std::string& policy_path,
                 const std::string& alloc_text_arg, std::size_t epochs,
                 std::uint64_t seed) {
  const SystemConfig cfg = load_with_overrides(args);

  MixturePolicy policy;
  Metric metric = metric_arg(args.metric);
  std::string source;
  if (!policy_path.empty()) {
    const Solution prior = load_solution(policy_path);
    policy = prior.mixture;
    metric = prior.metric;
    source = "solution " + policy_path;
  } else if (!alloc_text_arg.empty()) {
    const auto entries = rat_list_arg(alloc_text_arg, "--alloc");
    policy = MixturePolicy::degenerate(DownloadAllocation(entries));
    source = "explicit allocation";
  } else {
    policy = dispatch_solve(cfg, metric).mixture;
    source = "fresh " + to_string(metric) + " solve";
  }

  const auto mu = cfg.mus();
  const auto sigma2 = cfg.sigma2s();
  const Rat analytic_peak = mixture_peak_aoi(mu, policy);
  const Rat analytic_avg = mixture_avg_aoi(mu, sigma2, policy);

  const SimResult res = run(cfg, policy, epochs, seed);
  auto z_of = [](double emp, double target, double se) {
    const double diff = emp - target;
    if (se > 0) return diff / se;
    return diff == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  };
  const double z_peak = z_of(res.empirical_peak, to_double(analytic_peak), res.se_peak);
  const double z_avg = z_of(res.empirical_avg, to_double(analytic_avg), res.se_avg);

  std::ostream& out = std::cout;
  if (args.format == "structured") {
    out << "format=simresult/1\n";
    out << "policy_source=" << source << '\n';
    out << "seed=" << res.seed << '\n';
    out << "epochs=" << res.epochs_measured << '\n';
    out << "rng=" << res.rng_algorithm << '\n';
    out << "empirical_peak=" << format_double(res.empirical_peak) << '\n';
    out << "se_peak=" << format_double(res.se_peak) << '\n';
    out << "analytic_peak=" << format_rational(analytic_peak) << '\n';
    out << "z_peak=" << format_double(z_peak) << '\n';
    out << "empirical_avg=" << format_double(res.empirical_avg) << '\n';
    out << "se_avg=" << format_double(res.se_avg) << '\n';
    out << "analytic_avg=" << format_rational(analytic_avg) << '\n';
    out << "z_avg=" << format_double(z_avg) << '\n';
  } else {
    out << "policy: " << source << " (" << policy.components.size() << " component"
        << (policy.components.size() == 1 ? "" : "s") << ")\n";
    out << "epochs: " << res.epochs_measured << ", seed: " << res.seed
        << ", rng: " << res.rng_algorithm << '\n';
    out << "peak AoI: empirical " << format_double(res.empirical_peak) << " +- "
        << format_double(res.se_peak) << ", analytic " << rat_both(analytic_peak)
        << ", z = " << format_double(z_peak) << '\n';
    out << "avg AoI:  empirical " << format_double(res.empirical_avg) << " +- "
        << format_double(res.se_avg) << ", analytic " << rat_both(analytic_avg)
        << ", z = " << format_double(z_avg) << '\n';
  }
  return kExitOk;
}

int cmd_verify(const CommonArgs& args, bool test_corrupt) {
  const SystemConfig cfg = load_with_overrides(args);
  const Metric metric = metric_arg(args.metric);
  Solution sol = dispatch_solve(cfg, metric);
  const Rat resolution = args.resolution.empty() ? default_resolution(cfg)
                                                 : rat_arg(args.resolution, "--resolution");

  if (test_corrupt) {
    // Push the allocation outside the feasible set while keeping the stored
    // objectives self-consistent, so only feasibility trips.
    sol.allocation.d[0] -= cfg.message_length;
    sol.mixture = MixturePolicy::degenerate(sol.allocation);
    sol.achieved_rate = sol.allocation.total() > 0
                            ? Rat(Rat(cfg.message_length) / sol.allocation.total())
                            : Rat(0);
    const auto mu = cfg.mus();
    const auto sigma2 = cfg.sigma2s();
    if (sol.allocation.total() > 0) {
      sol.objective_exact = metric == Metric::peak ? peak_aoi(mu, sol.allocation)
                                                   : avg_aoi(mu, sigma2, sol.allocation);
    }
    sol.objective_idealized_exact = sol.objective_exact;
  }

  const VerifyReport report = verify(sol, cfg, resolution);
  std::ostream& out = std::cout;
  if (args.format == "structured") {
    out << "format=verify/1\n";
    out << "metric=" << to_string(metric) << '\n';
    out << "resolution=" << format_rational(resolution) << '\n';
    out << "pass=" << (report.pass ? 1 : 0) << '\n';
    out << "allocation_feasible=" << (report.allocation_feasible ? 1 : 0) << '\n';
    out << "objective_consistent=" << (report.objective_consistent ? 1 : 0) << '\n';
    out << "within_oracle_band=" << (report.within_oracle_band ? 1 : 0) << '\n';
    if (!report.violated_constraint.empty()) {
      out << "violated_constraint=" << report.violated_constraint << '\n';
    }
    if (report.allocation_feasible && report.objective_consistent) {
      out << "oracle_objective=" << format_rational(report.oracle_objective) << '\n';
      out << "slack=" << format_rational(report.slack) << '\n';
    }
    out << "detail=" << report.detail << '\n';
  } else {
    out << "verify " << to_string(metric) << " at resolution " << format_rational(resolution)
        << ": " << (report.pass ? "PASS" : "FAIL") << '\n';
    out << "  " << report.detail << '\n';
  }
  return report.pass ? kExitOk : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rate/age trade-off toolkit for replicated private information retrieval"};
  app.require_subcommand(1);

  CommonArgs cap_args, solve_args, trade_args, sim_args, ver_args;
  std::string tau_text, grid_text, policy_path, alloc_list;
  bool test_corrupt = false;
  std::size_t epochs = 100000;
  std::uint64_t seed = 1;

  auto add_common = [](CLI::App* cmd, CommonArgs& args, bool with_metric,
                       bool with_rmin, bool with_resolution) {
    cmd->add_option("config", args.config_path, "system config file")->required();
    cmd->add_option("--format", args.format, "output format")
        ->check(CLI::IsMember({"text", "structured"}))
        ->capture_default_str();
    if (with_metric) {
      cmd->add_option("--metric", args.metric, "objective metric")
          ->check(CLI::IsMember({"peak", "avg"}))
          ->capture_default_str();
    }
    if (with_rmin) {
      cmd->add_option("--rmin", args.rmin, "override the config's r_min (rational)");
    }
    if (with_resolution) {
      cmd->add_option("--resolution", args.resolution,
                      "oracle grid step in bits (default L/32)");
    }
  };

  CLI::App* cap = app.add_subcommand("capacity", "capacity surface and corner points");
  add_common(cap, cap_args, false, false, false);
  cap->add_option("--tau", tau_text, "traffic ratio per server (rationals)");

  CLI::App* solve = app.add_subcommand("solve", "optimal allocation for one r_min");
  add_common(solve, solve_args, true, true, true);

  CLI::App* trade = app.add_subcommand("tradeoff", "rate/age curve over an r_min grid");
  add_common(trade, trade_args, false, true, false);
  trade->add_option("--rmin-grid", grid_text, "grid start:stop:step (rationals)");

  CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo renewal simulation");
  add_common(sim, sim_args, true, true, false);
  auto* pol_opt = sim->add_option("--policy", policy_path, "solution file to simulate");
  sim->add_option("--alloc", alloc_list, "explicit allocation to simulate")
      ->excludes(pol_opt);
  sim->add_option("--epochs", epochs, "measured epochs")->capture_default_str();
  sim->add_option("--seed", seed, "rng seed")->capture_default_str();

  CLI::App* ver = app.add_subcommand("verify", "solve and cross-check against the oracle");
  add_common(ver, ver_args, true, true, true);
  ver->add_flag("--test-corrupt", test_corrupt)->group("");  // test hook, hidden

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (cap->parsed()) return cmd_capacity(cap_args, tau_text);
    if (solve->parsed()) return cmd_solve(solve_args);
    if (trade->parsed()) return cmd_tradeoff(trade_args, grid_text);
    if (sim->parsed()) return cmd_simulate(sim_args, policy_path, alloc_list, epochs, seed);
    if (ver->parsed()) return cmd_verify(ver_args, test_corrupt);
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const SimError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const SizeLimitError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}

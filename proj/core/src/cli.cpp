#include "feplab/cli.hpp"

#include <cmath>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "feplab/configuration.hpp"
#include "feplab/coupling.hpp"
#include "feplab/dynamics.hpp"
#include "feplab/exact.hpp"
#include "feplab/experiment.hpp"
#include "feplab/height.hpp"
#include "feplab/io.hpp"
#include "feplab/mapping.hpp"
#include "feplab/spectral.hpp"
#include "feplab/statistic.hpp"

namespace feplab {

namespace {

using nlohmann::json;

void emit(const json& summary, const std::string& out_path) {
  const std::string line = summary.dump();
  std::cout << line << "\n";
  if (!out_path.empty()) atomic_write_text(out_path, line + "\n");
}

// Shared experiment options; a JSON --config file supplies defaults and
// explicit flags override it.
struct ExperimentArgs {
  ExperimentConfig config;
  std::string config_path;

  void attach(CLI::App* cmd, bool with_times) {
    cmd->add_option("--config", config_path, "JSON config file");
    cmd->add_option("--n", config.n, "circle size N");
    cmd->add_option("--k", config.k, "particle count K");
    if (with_times)
      cmd->add_option("--times", config.times, "sample times (space separated)");
    cmd->add_option("--epsilon", config.epsilon, "epsilon parameter");
    cmd->add_option("--s", config.s, "deviation scale s (0 = calibrate)");
    cmd->add_option("--s-prime", config.s_prime, "separation scale s'");
    cmd->add_option("--replicates", config.replicates, "Monte Carlo replicates");
    cmd->add_option("--seed", config.seed, "base RNG seed");
    cmd->add_option("--out", config.output_path, "output file (CSV/JSON)");
    cmd->add_option("--threads", config.threads,
                    "worker threads (0 = FEPLAB_THREADS or hardware)");
    cmd->add_option("--budget-c", config.budget_c, "merge budget constant C");
    cmd->add_option("--calibration-samples", config.calibration_samples,
                    "stationary samples used to calibrate s");
    cmd->add_option("--pi-tail", config.pi_tail,
                    "target invariant mass of the deviation event");
  }

  void load_config_file() {
    if (config_path.empty()) return;
    const json j = json::parse(read_text(config_path));
    if (j.contains("n")) config.n = j["n"].get<int>();
    if (j.contains("k")) config.k = j["k"].get<int>();
    if (j.contains("times")) config.times = j["times"].get<std::vector<double>>();
    if (j.contains("epsilon")) config.epsilon = j["epsilon"].get<double>();
    if (j.contains("s")) config.s = j["s"].get<double>();
    if (j.contains("s_prime")) config.s_prime = j["s_prime"].get<double>();
    if (j.contains("replicates")) config.replicates = j["replicates"].get<int>();
    if (j.contains("seed")) config.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("out")) config.output_path = j["out"].get<std::string>();
    if (j.contains("threads")) config.threads = j["threads"].get<int>();
    if (j.contains("budget_c")) config.budget_c = j["budget_c"].get<double>();
    if (j.contains("calibration_samples"))
      config.calibration_samples = j["calibration_samples"].get<int>();
    if (j.contains("pi_tail")) config.pi_tail = j["pi_tail"].get<double>();
  }
};

json rows_to_json_summary(const char* mode, const ExperimentConfig& cfg,
                          std::size_t rows) {
  return json{{"mode", mode},       {"n", cfg.n},
              {"k", cfg.k},         {"replicates", cfg.replicates},
              {"seed", cfg.seed},   {"rows", rows},
              {"out", cfg.output_path}};
}

int cmd_enumerate(int n, int k, bool ergodic, const std::string& out) {
  const auto configs = enumerate_configurations(n, k, ergodic);
  std::string body;
  body.reserve(configs.size() * (static_cast<std::size_t>(n) + 1));
  for (const auto& c : configs) body += c.to_string() + "\n";
  if (out.empty())
    std::cout << body;
  else
    atomic_write_text(out, "configuration\n" + body);
  emit(json{{"mode", "enumerate"},
            {"n", n},
            {"k", k},
            {"ergodic", ergodic},
            {"count", configs.size()}},
       "");
  return 0;
}

int cmd_map(int n, int rank, const std::string& eta_bits, bool invert, int x,
            const std::string& sigma_bits) {
  if (!invert) {
    const auto eta = FepConfiguration::from_bits(eta_bits);
    if (n != 0 && eta.sites() != n)
      throw std::invalid_argument("--eta length does not match --n");
    const MappedPair pair = phi(rank, eta);
    std::cout << "X=" << pair.position << " sigma=" << pair.ssep.to_string()
              << "\n";
  } else {
    const auto sigma = SsepConfiguration::from_bits(sigma_bits);
    const auto [k_rank, eta] = phi_inverse(x, sigma);
    std::cout << "k=" << k_rank << " eta=" << eta.to_string() << "\n";
  }
  return 0;
}

int cmd_simulate(const std::string& model, const std::string& eta_bits,
                 const std::string& sigma_bits, long long anchor, int tag,
                 double t_end, std::uint64_t seed,
                 const std::string& events_out, const std::string& out) {
  Rng rng = make_rng(seed);
  json summary{{"mode", "simulate"}, {"model", model}, {"t_end", t_end},
               {"seed", seed}};
  if (model == "fep" || model == "fep-tagged") {
    const auto eta = FepConfiguration::from_bits(eta_bits);
    if (model == "fep") {
      std::vector<JumpEvent> events;
      const auto final_state =
          run_fep(eta, t_end, rng, events_out.empty() ? nullptr : &events);
      if (!events_out.empty()) {
        std::string lines;
        for (const auto& ev : events) {
          json rec{{"t", ev.time}, {"site", ev.site}, {"dir", ev.direction}};
          lines += rec.dump() + "\n";
        }
        atomic_write_text(events_out, lines);
        summary["events"] = events.size();
      }
      summary["final"] = final_state.to_string();
    } else {
      const int tag_site = tag > 0 ? tag : particle_position(eta, 1);
      const auto trace =
          run_fep_tagged_traced(TaggedFepState{tag_site, eta}, t_end, rng);
      summary["final"] = trace.state.config.to_string();
      summary["tag"] = trace.state.position;
      summary["rank"] = trace.rank;
      summary["edge_current"] = trace.edge_current;
      summary["jumps"] = trace.jumps;
    }
  } else if (model == "ssep") {
    const auto sigma = SsepConfiguration::from_bits(sigma_bits);
    const auto final_state =
        run_ssep_with_current(TaggedSsepState{anchor, sigma}, t_end, rng);
    summary["final"] = final_state.config.to_string();
    summary["y"] = final_state.anchor;
  } else if (model == "corner-flip") {
    const auto sigma = SsepConfiguration::from_bits(sigma_bits);
    const auto final_profile = run_corner_flip(psi(anchor, sigma), t_end, rng);
    const auto [y, word] = psi_inverse(final_profile);
    summary["final"] = word.to_string();
    summary["y"] = y;
    summary["heights"] = final_profile.scaled_heights();
  } else {
    throw std::invalid_argument("unknown model: " + model);
  }
  emit(summary, out);
  return 0;
}

int cmd_exact(const ExperimentConfig& cfg, const std::string& states_out,
              const std::string& curve_out, const std::string& start_bits) {
  const auto model = build_fep_generator(cfg.n, cfg.k);
  json summary{{"mode", "exact"}, {"n", cfg.n}, {"k", cfg.k},
               {"epsilon", cfg.epsilon}};
  summary["states"] = model.states.size();
  summary["stationary_flow_balanced"] = uniform_ergodic_stationary(model);
  summary["mixing_time"] = mixing_time(model, cfg.epsilon);
  summary["ergodic_mixing_time"] = ergodic_mixing_time(model, cfg.epsilon);
  if (cfg.k < cfg.n) summary["transience_time"] = transience_time(model, cfg.epsilon);

  if (!states_out.empty()) {
    std::string body = "index,configuration,is_ergodic\n";
    for (std::size_t i = 0; i < model.states.size(); ++i)
      body += std::to_string(i) + "," + model.states[i].to_string() + "," +
              (is_ergodic(model.states[i]) ? "1" : "0") + "\n";
    atomic_write_text(states_out, body);
  }
  if (!curve_out.empty()) {
    if (cfg.times.empty())
      throw std::invalid_argument("--curve-out needs --times");
    auto times = cfg.times;
    std::sort(times.begin(), times.end());
    const auto start = start_bits.empty()
                           ? clustered_configuration(cfg.n, cfg.k)
                           : FepConfiguration::from_bits(start_bits);
    const auto tv = tv_curve_exact(model, start, times);
    std::string body = "t,tv\n";
    for (std::size_t i = 0; i < times.size(); ++i)
      body += format_double(times[i]) + "," + format_double(tv[i]) + "\n";
    atomic_write_text(curve_out, body);
  }
  emit(summary, cfg.output_path);
  return 0;
}

int cmd_tv_curve(const ExperimentConfig& cfg, const std::string& estimator) {
  if (estimator == "exact" && !exact_fep_feasible(cfg.n, cfg.k))
    throw std::invalid_argument("exact estimator infeasible at this size");
  const auto rows =
      estimator == "mc" ? mc_bracket_profile(cfg) : cutoff_profile(cfg);
  const std::string csv = tv_reports_to_csv(rows);
  if (cfg.output_path.empty())
    std::cout << csv;
  else
    atomic_write_text(cfg.output_path, csv);
  emit(rows_to_json_summary("tv-curve", cfg, rows.size()), "");
  return 0;
}

int cmd_bound(const ExperimentConfig& cfg, bool upper) {
  const auto rows = upper ? estimate_tv_upper(cfg) : estimate_tv_lower(cfg);
  const std::string csv = tv_reports_to_csv(rows);
  if (cfg.output_path.empty())
    std::cout << csv;
  else
    atomic_write_text(cfg.output_path, csv);
  emit(rows_to_json_summary(upper ? "merge-ub" : "statistic-lb", cfg,
                            rows.size()),
       "");
  return 0;
}

int cmd_transience(const ExperimentConfig& cfg, const std::string& eta_bits) {
  const auto start = eta_bits.empty() ? block_configuration(cfg.n, cfg.k)
                                      : FepConfiguration::from_bits(eta_bits);
  const auto rows = estimate_transient_mass(cfg, start);
  std::string body = "t,transient_mass,se\n";
  for (const auto& r : rows)
    body += format_double(r.time) + "," + format_double(r.transient_mass) +
            "," + format_double(r.se) + "\n";
  if (cfg.output_path.empty())
    std::cout << body;
  else
    atomic_write_text(cfg.output_path, body);
  emit(rows_to_json_summary("transience", cfg, rows.size()), "");
  return 0;
}

// Smallest s' > s satisfying (s'-s)^2 > (eps+eps')/(1-eps-eps') (1+s').
double minimal_s_prime(double eps, double s) {
  const double eps_prime = std::min(eps, (1.0 - eps) / 2.0);
  const double c = (eps + eps_prime) / (1.0 - eps - eps_prime);
  // (s'-s)^2 = c (1+s') at equality; take the larger root and a margin.
  const double b = 2.0 * s + c;
  const double disc = b * b - 4.0 * (s * s - c);
  return 0.5 * (b + std::sqrt(std::max(disc, 0.0))) + 1e-9;
}

int cmd_spectral_lb(ExperimentConfig cfg) {
  const int peff = effective_particles(cfg.n, cfg.k);
  if (cfg.s <= 0.0) {
    Rng rng = replicate_rng(cfg.seed, 0x5ca1ab1e00000001ULL);
    cfg.s = calibrate_s_fep(cfg.n, cfg.k, cfg.pi_tail, cfg.calibration_samples,
                            rng);
  }
  if (cfg.s_prime <= 0.0) cfg.s_prime = minimal_s_prime(cfg.epsilon, cfg.s);

  json summary{{"mode", "spectral-lb"}, {"n", cfg.n},      {"k", cfg.k},
               {"peff", peff},          {"epsilon", cfg.epsilon},
               {"s", cfg.s},            {"s_prime", cfg.s_prime}};
  const auto sol = heat_solution(cfg.k, [&] {
    std::vector<double> u0(static_cast<std::size_t>(cfg.k), 0.0);
    for (int i = 0; i < peff; ++i) u0[static_cast<std::size_t>(i)] = 1.0;
    return u0;
  }());
  const double lambda1 = sol.basis().eigenvalues[1];
  const double c1 = sol.coefficients()[1];
  summary["lambda1"] = lambda1;
  summary["c1"] = c1;
  summary["lb_time"] =
      lb_time_estimate(cfg.n, cfg.k, cfg.epsilon, cfg.s, cfg.s_prime);
  try {
    const double t_star = solve_t_star(cfg.k, peff, cfg.s_prime);
    summary["t_star"] = t_star;
    const double mean = static_cast<double>(peff) * peff / cfg.k +
                        cfg.s_prime * std::sqrt(static_cast<double>(peff));
    const double lambda = -(cfg.s_prime - cfg.s) * std::sqrt(static_cast<double>(peff));
    summary["cantelli_bound"] = cantelli_lower_bound(lambda, mean);
    summary["t_star_bracket_low"] =
        std::log(cfg.k * c1 * c1 /
                 (cfg.s_prime * std::sqrt(static_cast<double>(peff)))) /
        lambda1;
    summary["t_star_bracket_high"] =
        std::log(std::sqrt(static_cast<double>(peff)) / cfg.s_prime) / lambda1;
  } catch (const std::invalid_argument& e) {
    summary["t_star"] = nullptr;
    summary["t_star_error"] = e.what();
  }
  emit(summary, cfg.output_path);
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Facilitated exclusion process laboratory"};
  app.require_subcommand(1);

  // enumerate
  auto* enumerate_cmd =
      app.add_subcommand("enumerate", "List configurations of a layer");
  int en_n = 0, en_k = 0;
  bool en_ergodic = false;
  std::string en_out;
  enumerate_cmd->add_option("--n", en_n, "circle size")->required();
  enumerate_cmd->add_option("--k", en_k, "particle count")->required();
  enumerate_cmd->add_flag("--ergodic", en_ergodic, "restrict to the ergodic component");
  enumerate_cmd->add_option("--out", en_out, "CSV output path");

  // map
  auto* map_cmd = app.add_subcommand("map", "Apply the FEP<->SSEP bijection");
  int map_n = 0, map_rank = 1, map_x = 1;
  std::string map_eta, map_sigma;
  bool map_invert = false;
  map_cmd->add_option("--n", map_n, "circle size (checked against --eta)");
  map_cmd->add_option("--k-rank", map_rank, "tagged rank k");
  map_cmd->add_option("--eta", map_eta, "FEP occupancy word");
  map_cmd->add_flag("--invert", map_invert, "apply the inverse mapping");
  map_cmd->add_option("--x", map_x, "tag position (inverse direction)");
  map_cmd->add_option("--sigma", map_sigma, "SSEP occupancy word (inverse)");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Run one trajectory");
  std::string sim_model = "fep", sim_eta, sim_sigma, sim_events, sim_out;
  long long sim_anchor = 0;
  int sim_tag = 0;
  double sim_t_end = 1.0;
  std::uint64_t sim_seed = 1;
  sim_cmd->add_option("--model", sim_model,
                      "fep | fep-tagged | ssep | corner-flip");
  sim_cmd->add_option("--eta", sim_eta, "FEP occupancy word");
  sim_cmd->add_option("--sigma", sim_sigma, "SSEP occupancy word");
  sim_cmd->add_option("--y", sim_anchor, "current anchor Y");
  sim_cmd->add_option("--tag", sim_tag, "tagged site (default: first particle)");
  sim_cmd->add_option("--t-end", sim_t_end, "horizon")->required();
  sim_cmd->add_option("--seed", sim_seed, "RNG seed");
  sim_cmd->add_option("--events-out", sim_events, "JSON-lines event log (fep)");
  sim_cmd->add_option("--out", sim_out, "JSON output path");

  // exact
  auto* exact_cmd = app.add_subcommand("exact", "Exact finite-state analysis");
  ExperimentArgs exact_args;
  exact_args.attach(exact_cmd, true);
  std::string exact_states_out, exact_curve_out, exact_start;
  exact_cmd->add_option("--states-out", exact_states_out,
                        "state table CSV output");
  exact_cmd->add_option("--curve-out", exact_curve_out, "TV curve CSV output");
  exact_cmd->add_option("--start", exact_start,
                        "initial configuration for the TV curve");

  // tv-curve
  auto* curve_cmd = app.add_subcommand("tv-curve", "Cutoff profile");
  ExperimentArgs curve_args;
  curve_args.attach(curve_cmd, true);
  std::string curve_estimator = "auto";
  curve_cmd->add_option("--estimator", curve_estimator, "auto | exact | mc");

  // merge-ub
  auto* ub_cmd = app.add_subcommand("merge-ub", "Coupling upper bound");
  ExperimentArgs ub_args;
  ub_args.attach(ub_cmd, true);

  // statistic-lb
  auto* lb_cmd = app.add_subcommand("statistic-lb", "Statistic lower bound");
  ExperimentArgs lb_args;
  lb_args.attach(lb_cmd, true);

  // transience
  auto* tr_cmd = app.add_subcommand("transience", "Transient-mass decay");
  ExperimentArgs tr_args;
  tr_args.attach(tr_cmd, true);
  std::string tr_eta;
  tr_cmd->add_option("--eta", tr_eta, "transient start (default: block)");

  // spectral-lb
  auto* sp_cmd = app.add_subcommand("spectral-lb", "Spectral lower-bound times");
  ExperimentArgs sp_args;
  sp_args.attach(sp_cmd, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (enumerate_cmd->parsed())
      return cmd_enumerate(en_n, en_k, en_ergodic, en_out);
    if (map_cmd->parsed())
      return cmd_map(map_n, map_rank, map_eta, map_invert, map_x, map_sigma);
    if (sim_cmd->parsed())
      return cmd_simulate(sim_model, sim_eta, sim_sigma, sim_anchor, sim_tag,
                          sim_t_end, sim_seed, sim_events, sim_out);
    if (exact_cmd->parsed()) {
      exact_args.load_config_file();
      return cmd_exact(exact_args.config, exact_states_out, exact_curve_out,
                       exact_start);
    }
    if (curve_cmd->parsed()) {
      curve_args.load_config_file();
      return cmd_tv_curve(curve_args.config, curve_estimator);
    }
    if (ub_cmd->parsed()) {
      ub_args.load_config_file();
      return cmd_bound(ub_args.config, true);
    }
    if (lb_cmd->parsed()) {
      lb_args.load_config_file();
      return cmd_bound(lb_args.config, false);
    }
    if (tr_cmd->parsed()) {
      tr_args.load_config_file();
      return cmd_transience(tr_args.config, tr_eta);
    }
    if (sp_cmd->parsed()) {
      sp_args.load_config_file();
      return cmd_spectral_lb(sp_args.config);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::cerr << "error: no subcommand\n";
  return 2;
}

}  // namespace feplab

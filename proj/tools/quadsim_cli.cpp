#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "quadsim/config.hpp"
#include "quadsim/eval.hpp"
#include "quadsim/trainer.hpp"

namespace fs = std::filesystem;
using namespace quadsim;

namespace {

struct TrainArgs {
  std::string config;
  std::string out = "run";
  std::uint64_t seed = 1;
  int iterations = -1;
  int checkpoint_every = 0;
  bool desk = false;
};

// Options shared by the evaluation commands.
struct EvalArgs {
  std::string policy;
  std::string preset = "cf";
  std::uint64_t seed = 0;
  bool no_noise = false;
  std::string log;
};

Platform platform_by_name(const std::string& name) {
  if (name == "crazyflie") return Platform{name, nominal_crazyflie(), 1.0};
  return platform_preset(name);
}

EvalOptions eval_options(const EvalArgs& a) {
  EvalOptions opt;
  opt.noise = !a.no_noise;
  opt.seed = a.seed;
  return opt;
}

void maybe_write_log(const std::string& path, const FlightLog& log) {
  if (path.empty()) return;
  write_csv(path, log);
  std::printf("log: %s (%zu rows)\n", path.c_str(), log.size());
}

std::string format_hz(const std::optional<double>& f) {
  if (!f) return "none";
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << *f << " Hz";
  return s.str();
}

int run_train(const TrainArgs& a, bool seed_set) {
  TrainConfig cfg = a.config.empty() ? (a.desk ? desk_scale_config() : TrainConfig{})
                                     : load_train_config(a.config);
  if (seed_set) cfg.seed = a.seed;
  if (a.iterations >= 0) cfg.iterations = a.iterations;
  fs::create_directories(a.out);
  {
    std::ofstream(fs::path(a.out) / "config.json") << to_json(cfg).dump(2) << '\n';
  }
  const auto t0 = std::chrono::steady_clock::now();
  const TrainResult result = train(cfg, [&](const IterationStats& s, const PolicyNet& policy) {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("iter %5d  pos_cost %8.4f  cost %8.4f  vloss %9.5f  clip %.3f  std %.3f  "
                "aborted %2d  %.0fs\n",
                s.iteration, s.mean_position_cost, s.mean_episode_cost, s.value_loss,
                s.clip_fraction, s.mean_std, s.aborted, secs);
    std::fflush(stdout);
    if (a.checkpoint_every > 0 && s.iteration % a.checkpoint_every == 0) {
      save_snapshot((fs::path(a.out) / ("policy_" + std::to_string(s.iteration) + ".qpol"))
                        .string(),
                    policy);
    }
  });
  save_snapshot((fs::path(a.out) / "final.qpol").string(), result.policy);
  save_snapshot((fs::path(a.out) / "best.qpol").string(), result.best);
  write_learning_curve((fs::path(a.out) / "learning_curve.csv").string(), result.curve);
  std::printf("best iteration %d, final position cost %.4f\n", result.best_iteration,
              final_position_cost(result.curve));
  return 0;
}

int run_simulate(const EvalArgs& a, const std::string& scenario, double duration) {
  const Platform platform = platform_by_name(a.preset);
  EpisodeConfig cfg;
  cfg.noise = !a.no_noise;
  cfg.thrust_command_limit = platform.thrust_command_limit;
  cfg.duration = duration;
  cfg.abort_radius = 0.0;
  if (scenario == "figure8") {
    cfg.scenario = Scenario::kFigureEight;
  } else if (scenario != "hover") {
    throw std::invalid_argument("unknown scenario '" + scenario + "'");
  }
  QuadEnv env(cfg, a.seed);
  env.set_logging(true);
  double total = 0.0;
  if (a.policy.empty()) {
    // Open loop at the hover command.
    env.reset(platform.params);
    const Action hover = Action::Constant(2.0 / platform.params.thrust_to_weight - 1.0);
    while (!env.done()) total += env.step(hover).cost;
  } else {
    const PolicyNet policy = load_snapshot(a.policy);
    Observation obs = env.reset(platform.params);
    while (!env.done()) {
      const StepResult r = env.step(forward(policy, obs));
      obs = r.observation;
      total += r.cost;
    }
  }
  const FlightRecord& last = env.log().back();
  std::printf("ticks %d  total cost %.4f  final position error %.4f m  final tilt %.2f deg\n",
              env.tick(), total, (last.state.position - last.goal.position).norm(),
              angular_error_deg(last.state.rotation));
  maybe_write_log(a.log, env.log());
  return 0;
}

int run_eval_hover(const EvalArgs& a, double duration) {
  EvalOptions opt = eval_options(a);
  opt.hover_duration = duration;
  FlightLog log;
  const HoverReport r = evaluate_hover(load_snapshot(a.policy), platform_by_name(a.preset), opt,
                                       &log);
  std::printf("e_h %.4f m  e_theta %.3f deg  f_o %s  (%d samples)\n", r.position_error,
              r.angular_error_deg, format_hz(r.oscillation_hz).c_str(), r.samples);
  maybe_write_log(a.log, log);
  return 0;
}

int run_eval_track(const EvalArgs& a) {
  FlightLog log;
  const TrackReport r = evaluate_track(load_snapshot(a.policy), platform_by_name(a.preset),
                                       eval_options(a), &log);
  std::printf("e_t %.4f m  std %.4f m\n", r.mean_error, r.error_std);
  maybe_write_log(a.log, log);
  return 0;
}

int run_eval_recovery(const EvalArgs& a, int attempts, double max_tilt, bool haar) {
  ThrowConfig throws;
  if (!haar) {
    throws.attitude = AttitudeSampling::kTiltUniform;
    throws.max_tilt_deg = max_tilt;
  }
  const RecoveryReport r = recovery_battery(load_snapshot(a.policy), attempts, throws,
                                            RecoveryCriteria{}, platform_by_name(a.preset),
                                            eval_options(a));
  auto pct = [](const std::optional<double>& v) {
    return v ? std::to_string(100.0 * *v).substr(0, 5) + "%" : std::string("n/a");
  };
  std::printf("recovered %d/%d (%s)  moderate %d/%d (%s)  severe %d/%d (%s)\n", r.recoveries,
              r.attempts, pct(r.rate()).c_str(), r.moderate_recoveries, r.moderate_attempts,
              pct(r.moderate_rate()).c_str(), r.severe_recoveries, r.severe_attempts,
              pct(r.severe_rate()).c_str());
  return 0;
}

int run_grid(const EvalArgs& a, const std::vector<std::string>& specs,
             const std::vector<std::string>& platforms, const std::string& out, double duration) {
  std::vector<std::pair<std::string, PolicyNet>> policies;
  for (const std::string& s : specs) {
    const auto eq = s.find('=');
    const std::string name = eq == std::string::npos ? fs::path(s).stem().string() : s.substr(0, eq);
    const std::string path = eq == std::string::npos ? s : s.substr(eq + 1);
    policies.emplace_back(name, load_snapshot(path));
  }
  std::vector<Platform> plats;
  for (const std::string& p : platforms) plats.push_back(platform_by_name(p));
  EvalOptions opt = eval_options(a);
  opt.hover_duration = duration;
  const std::vector<GridRow> rows = grid_eval(policies, plats, opt);
  for (const GridRow& r : rows) {
    std::printf("%-12s %-8s e_theta %6.2f deg  f_o %-9s  e_t %.3f m\n", r.policy.c_str(),
                r.platform.c_str(), r.hover.angular_error_deg,
                format_hz(r.hover.oscillation_hz).c_str(), r.track.mean_error);
  }
  if (out.empty()) {
    write_grid_csv(std::cout, rows);
  } else {
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write " + out);
    write_grid_csv(f, rows);
  }
  return 0;
}

int run_export(const std::string& policy, const std::string& out, const std::string& name) {
  const std::string source = export_embedded(load_snapshot(policy), name);
  if (out.empty()) {
    std::cout << source;
    return 0;
  }
  std::ofstream f(out);
  if (!f) throw std::runtime_error("cannot write " + out);
  f << source;
  return 0;
}

void add_eval_options(CLI::App* cmd, EvalArgs& a, bool needs_policy) {
  auto* p = cmd->add_option("-p,--policy", a.policy, "Policy snapshot (.qpol)");
  if (needs_policy) p->required();
  cmd->add_option("--preset", a.preset, "Platform: crazyflie, cf, small or medium");
  cmd->add_option("-s,--seed", a.seed, "Random seed");
  cmd->add_flag("--no-noise", a.no_noise, "Disable sensor and motor noise");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadrotor simulator, trainer and evaluation harness"};
  app.require_subcommand(1);

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "Train a policy with PPO");
  train_cmd->add_option("-c,--config", train_args.config, "JSON run configuration");
  auto* seed_opt = train_cmd->add_option("-s,--seed", train_args.seed, "Random seed");
  train_cmd->add_option("-o,--out", train_args.out, "Output directory");
  train_cmd->add_option("-n,--iterations", train_args.iterations, "Override iteration count");
  train_cmd->add_option("--checkpoint-every", train_args.checkpoint_every,
                        "Snapshot period (iterations)");
  train_cmd->add_flag("--desk", train_args.desk,
                      "Use the desk-scale profile when no config is given");

  EvalArgs sim_args;
  std::string scenario = "hover";
  double sim_duration = 7.0;
  auto* sim_cmd = app.add_subcommand("simulate", "Fly one episode and log it");
  add_eval_options(sim_cmd, sim_args, false);
  sim_cmd->add_option("--scenario", scenario, "hover or figure8");
  sim_cmd->add_option("--duration", sim_duration, "Episode length (s)");
  sim_cmd->add_option("-o,--log", sim_args.log, "Flight log CSV");

  EvalArgs hover_args;
  double hover_duration = 10.0;
  auto* hover_cmd = app.add_subcommand("eval-hover", "Hover metrics from rest at the goal");
  add_eval_options(hover_cmd, hover_args, true);
  hover_cmd->add_option("--duration", hover_duration, "Flight length (s)");
  hover_cmd->add_option("-o,--log", hover_args.log, "Flight log CSV");

  EvalArgs track_args;
  auto* track_cmd = app.add_subcommand("eval-track", "Figure-eight tracking error");
  add_eval_options(track_cmd, track_args, true);
  track_cmd->add_option("-o,--log", track_args.log, "Flight log CSV");

  EvalArgs rec_args;
  int attempts = 200;
  double max_tilt = 35.0;
  bool haar = false;
  auto* rec_cmd = app.add_subcommand("eval-recovery", "Recovery rate over random throws");
  add_eval_options(rec_cmd, rec_args, true);
  rec_cmd->add_option("-n,--attempts", attempts, "Number of throws");
  rec_cmd->add_option("--max-tilt", max_tilt, "Largest initial tilt (deg)");
  rec_cmd->add_flag("--haar", haar, "Uniformly random attitude instead of bounded tilt");

  EvalArgs grid_args;
  std::vector<std::string> grid_policies;
  std::vector<std::string> grid_platforms = {"cf", "small", "medium"};
  std::string grid_out;
  double grid_duration = 10.0;
  auto* grid_cmd = app.add_subcommand("grid", "Hover and tracking for policies x platforms");
  grid_cmd->add_option("-p,--policy", grid_policies, "name=path.qpol, repeatable")->required();
  grid_cmd->add_option("--platforms", grid_platforms, "Platform names");
  grid_cmd->add_option("-s,--seed", grid_args.seed, "Random seed");
  grid_cmd->add_flag("--no-noise", grid_args.no_noise, "Disable sensor and motor noise");
  grid_cmd->add_option("--duration", grid_duration, "Hover flight length (s)");
  grid_cmd->add_option("-o,--out", grid_out, "CSV output (stdout if omitted)");

  std::string export_policy, export_out, export_name = "quad_policy";
  auto* export_cmd = app.add_subcommand("export", "Emit a C99 source file for the policy");
  export_cmd->add_option("-p,--policy", export_policy, "Policy snapshot (.qpol)")->required();
  export_cmd->add_option("-o,--out", export_out, "Output .c file (stdout if omitted)");
  export_cmd->add_option("--name", export_name, "Function name");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*train_cmd) return run_train(train_args, seed_opt->count() > 0);
    if (*sim_cmd) return run_simulate(sim_args, scenario, sim_duration);
    if (*hover_cmd) return run_eval_hover(hover_args, hover_duration);
    if (*track_cmd) return run_eval_track(track_args);
    if (*rec_cmd) return run_eval_recovery(rec_args, attempts, max_tilt, haar);
    if (*grid_cmd) return run_grid(grid_args, grid_policies, grid_platforms, grid_out, grid_duration);
    if (*export_cmd) return run_export(export_policy, export_out, export_name);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
